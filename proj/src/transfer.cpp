#include "bowenlab/transfer.hpp"

#include <cmath>
#include <limits>

namespace bowenlab {

EigenPair leading_eigenpair(const Eigen::MatrixXd& M, double tol, int max_iter) {
  const int n = static_cast<int>(M.rows());
  EigenPair out;
  if (n == 1) {
    out.lambda = M(0, 0);
    out.v = Eigen::VectorXd::Ones(1);
    return out;
  }
  // Shifted iteration on M + cI so the Perron root dominates in modulus even
  // for periodic incidence patterns.  The shift tracks the current Rayleigh
  // estimate: c ~ lambda gives rate (|l2|+lambda)/(2 lambda) < 1, while a
  // fixed norm-sized shift can be arbitrarily slow for lopsided matrices.
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n) / std::sqrt(double(n));
  double mu = v.dot(M * v);
  double c = std::fabs(mu) + 1e-3 * std::max(1.0, std::fabs(mu));
  double best_res = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_v;
  double best_mu = 0.0;
  int since_improve = 0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd w = M * v + c * v;
    double norm = w.norm();
    if (norm == 0.0)
      throw Error(ErrorCode::PowerIterationStalled, "zero iterate");
    w /= norm;
    Eigen::VectorXd Mw = M * w;
    mu = w.dot(Mw);
    double res = (Mw - mu * w).lpNorm<Eigen::Infinity>();
    v = w;
    c = std::fabs(mu) + 1e-3 * std::max(1.0, std::fabs(mu));
    if (res < best_res * 0.999) {
      best_res = res;
      best_v = w;
      best_mu = mu;
      since_improve = 0;
    } else {
      ++since_improve;
    }
    const double scale = std::max(1.0, std::fabs(mu));
    if (res <= tol * scale || (since_improve > 50 && best_res <= 1e-9 * scale)) {
      out.lambda = best_mu;
      out.iterations = it + 1;
      // fix sign so the dominant component is positive
      if (best_v.sum() < 0) best_v = -best_v;
      out.v = best_v;
      return out;
    }
  }
  throw Error(ErrorCode::PowerIterationStalled,
              "no convergence after " + std::to_string(max_iter) + " iterations");
}

double second_eigenvalue_estimate(const Eigen::MatrixXd& M, double lambda,
                                  const Eigen::VectorXd& h,
                                  const Eigen::VectorXd& nu) {
  const int n = static_cast<int>(M.rows());
  if (n == 1) return 0.0;
  Eigen::MatrixXd D = M - lambda * h * nu.transpose() / nu.dot(h);
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(n, 1.0, 2.0).normalized();
  // geometric-mean growth rate over a window; robust to negative/complex
  // subdominant pairs where plain power iteration oscillates
  const int burn = 60, window = 40;
  double log_acc = 0.0;
  for (int it = 0; it < burn + window; ++it) {
    Eigen::VectorXd w = D * v;
    double norm = w.norm();
    if (norm < 1e-300) return 0.0;
    if (it >= burn) log_acc += std::log(norm);
    v = w / norm;
  }
  return std::exp(log_acc / window);
}

TransferOperatorRealization assemble_edge_matrix(
    const DirectedMultigraph& g, const PerturbedWeightFamily& fam,
    const PsiFamily& psi, double s, double eps, int N) {
  TransferOperatorRealization op;
  const bool countable = g.num_edges() == 0;  // parametric full shift rows 1..N
  const int n = countable ? N : g.num_edges();
  op.matrix = Eigen::MatrixXd::Zero(n, n);
  op.labels.resize(n);
  op.truncation = n;
  for (int e = 0; e < n; ++e) {
    op.labels[e] = countable ? std::to_string(e + 1) : g.edges[e].id;
    double w = std::pow(std::fabs(eval_weight(fam, e + 1, eps)), s) *
               psi.eval(e + 1, eps);
    for (int cyl = 0; cyl < n; ++cyl) {
      bool adm = countable || g.incident(e, cyl);
      if (adm) op.matrix(cyl, e) = w;
    }
  }
  if (countable) {
    // recorded tail estimate from the decay ratio of the last terms
    double t1 = std::pow(std::fabs(eval_weight(fam, n + 1, eps)), s) *
                psi.eval(n + 1, eps);
    double t2 = std::pow(std::fabs(eval_weight(fam, n + 2, eps)), s) *
                psi.eval(n + 2, eps);
    if (t1 > 0 && t2 < t1) op.tail_bound = t1 / (1.0 - t2 / t1);
    if (op.tail_bound > 1e-8)
      throw Error(ErrorCode::TailBoundExceeded,
                  "tail bound " + std::to_string(op.tail_bound) + " at N=" +
                      std::to_string(n));
  }
  return op;
}

double pressure(const TransferOperatorRealization& op) {
  EigenPair p = leading_eigenpair(op.matrix);
  if (p.lambda <= 0.0)
    throw Error(ErrorCode::DegenerateLeadingEigenvalue, "nonpositive leading eigenvalue");
  return std::log(p.lambda);
}

RpfTriplet rpf_triplet(const TransferOperatorRealization& op) {
  RpfTriplet t;
  EigenPair right = leading_eigenpair(op.matrix);
  EigenPair left = leading_eigenpair(op.matrix.transpose());
  t.lambda = right.lambda;
  // Plain (unshifted) power steps after convergence: the shifted iteration
  // controls the absolute residual only, so exponentially small eigenvector
  // components can carry O(tol) garbage.  Each plain multiply rebuilds every
  // component with relative rounding error, which Gibbs-ratio checks need.
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXd w = op.matrix * right.v;
    if (w.norm() > 0) right.v = w / w.norm();
    Eigen::VectorXd u = op.matrix.transpose() * left.v;
    if (u.norm() > 0) left.v = u / u.norm();
  }
  Eigen::VectorXd nu = left.v;
  if (nu.minCoeff() < -1e-10 * nu.cwiseAbs().maxCoeff())
    throw Error(ErrorCode::DegenerateLeadingEigenvalue,
                "left eigenvector not nonnegative");
  nu = nu.cwiseMax(0.0);
  nu /= nu.sum();  // probability normalization nu(1)=1
  Eigen::VectorXd h = right.v;
  double mass = nu.dot(h);
  if (std::fabs(mass) < 1e-300)
    throw Error(ErrorCode::ZeroMassNormalization, "nu(h)=0");
  h /= mass;  // nu(h)=1
  t.h = h;
  t.nu = nu;
  t.res_right = (op.matrix * h - t.lambda * h).lpNorm<Eigen::Infinity>() /
                std::max(1.0, std::fabs(t.lambda));
  t.res_left = (nu.transpose() * op.matrix - t.lambda * nu.transpose())
                   .lpNorm<1>() / std::max(1.0, std::fabs(t.lambda));
  double l2 = second_eigenvalue_estimate(op.matrix, t.lambda, h, nu);
  t.gap = l2 / std::fabs(t.lambda);
  if (1.0 - t.gap < 1e-10)
    throw Error(ErrorCode::DegenerateLeadingEigenvalue,
                "spectral gap collapsed");
  return t;
}

std::pair<double, double> gibbs_check(const RpfTriplet& t,
                                      const DirectedMultigraph& g,
                                      const Eigen::VectorXd& log_weights,
                                      int depth) {
  // mu([e_1..e_m]) = h_{e_1} * lambda^{-(m-1)} prod_{i<m} w(e_i) * nu_{e_m};
  // comparison exp(-mP) prod_i w(e_i) = lambda^{-m} prod_i w(e_i), so the
  // ratio is lambda * h_{e_1} * nu_{e_m} / w(e_m).  Enumerate anyway: this
  // doubles as a check that words are admissible and masses positive.
  double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
  for (int m = 1; m <= depth; ++m) {
    for (const Word& w : enumerate_cylinders(g, m)) {
      int e1 = w.symbols.front(), em = w.symbols.back();
      double ratio =
          t.lambda * t.h(e1) * t.nu(em) / std::exp(log_weights(em));
      cmin = std::min(cmin, ratio);
      cmax = std::max(cmax, ratio);
    }
  }
  return {cmin, cmax};
}

double pressure_s_derivative(const RpfTriplet& t,
                             const Eigen::VectorXd& log_weights) {
  double d = 0.0;
  for (int e = 0; e < t.nu.size(); ++e)
    d += t.nu(e) * t.h(e) * log_weights(e);
  if (d >= 0.0)
    throw Error(ErrorCode::NonNegativeDerivative,
                "nu(h log|g|) = " + std::to_string(d));
  return d;
}

}  // namespace bowenlab
