#include "bowenlab/collocation.hpp"

#include <cmath>

namespace bowenlab {

ChebBasis::ChebBasis(int degree) : m(degree) {
  nodes.resize(m + 1);
  weights.resize(m + 1);
  for (int i = 0; i <= m; ++i) {
    nodes(i) = 0.5 * (1.0 - std::cos(M_PI * i / m));
    double w = (i % 2 == 0) ? 1.0 : -1.0;
    if (i == 0 || i == m) w *= 0.5;
    weights(i) = w;
  }
}

Eigen::RowVectorXd ChebBasis::interp_row(double y) const {
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(m + 1);
  for (int i = 0; i <= m; ++i) {
    if (std::fabs(y - nodes(i)) < 1e-14) {
      row(i) = 1.0;
      return row;
    }
  }
  double denom = 0.0;
  for (int j = 0; j <= m; ++j) {
    double t = weights(j) / (y - nodes(j));
    row(j) = t;
    denom += t;
  }
  return row / denom;
}

Eigen::RowVectorXd ChebBasis::deriv_row(double y) const {
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(m + 1);
  for (int i = 0; i <= m; ++i) {
    if (std::fabs(y - nodes(i)) < 1e-14) {
      // differentiation-matrix row at node i
      double diag = 0.0;
      for (int j = 0; j <= m; ++j) {
        if (j == i) continue;
        double d = (weights(j) / weights(i)) / (nodes(i) - nodes(j));
        row(j) = d;
        diag -= d;
      }
      row(i) = diag;
      return row;
    }
  }
  // p = N/D with N = sum w_j f_j/(y-x_j), D = sum w_j/(y-x_j)
  double D = 0.0, Dp = 0.0;
  Eigen::RowVectorXd n0 = Eigen::RowVectorXd::Zero(m + 1);
  Eigen::RowVectorXd n1 = Eigen::RowVectorXd::Zero(m + 1);
  for (int j = 0; j <= m; ++j) {
    double d = y - nodes(j);
    double t = weights(j) / d;
    n0(j) = t;
    n1(j) = -t / d;
    D += t;
    Dp += -t / d;
  }
  // p'(y) = (N' D - N D')/D^2
  return (n1 * D - n0 * Dp) / (D * D);
}

double hurwitz_zeta(double s, double q) {
  if (s <= 1.0)
    throw Error(ErrorCode::SeriesDivergent,
                "hurwitz zeta needs s>1, got " + std::to_string(s));
  const int M = 12;
  double sum = 0.0;
  for (int k = 0; k < M; ++k) sum += std::pow(q + k, -s);
  const double Q = q + M;
  sum += std::pow(Q, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(Q, -s);
  // Euler-Maclaurin corrections with B_2, B_4, B_6
  const double b[] = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0};
  double rising = s;  // (s)(s+1)...(s+2j-2)
  double fact = 2.0;  // (2j)!
  for (int j = 1; j <= 3; ++j) {
    sum += b[j - 1] / fact * rising * std::pow(Q, -s - 2 * j + 1);
    rising *= (s + 2 * j - 1) * (s + 2 * j);
    fact *= (2 * j + 1) * (2 * j + 2);
  }
  return sum;
}

TransferOperatorRealization assemble_gauss_collocation(const ContFracSystem& sys,
                                                       double s, double eps,
                                                       int m) {
  if (sys.full_alphabet && s <= 0.5)
    throw Error(ErrorCode::SeriesDivergent,
                "full-alphabet edge sum diverges for s<=1/2");
  ChebBasis cheb(m);
  TransferOperatorRealization op;
  op.form = TransferOperatorRealization::Form::Collocation;
  op.matrix = Eigen::MatrixXd::Zero(m + 1, m + 1);
  op.truncation = sys.full_alphabet ? sys.trunc : static_cast<int>(sys.edges.size());
  std::vector<int> edges = sys.edges;
  if (sys.full_alphabet) {
    edges.resize(sys.trunc);
    for (int e = 1; e <= sys.trunc; ++e) edges[e - 1] = e;
  }
  for (int i = 0; i <= m; ++i) {
    const double x = cheb.nodes(i);
    for (int e : edges) {
      double q = e + x + sys.a * eps;
      op.matrix.row(i) += std::pow(q, -2.0 * s) * cheb.interp_row(1.0 / q);
    }
    if (sys.full_alphabet) {
      // tail through f(0): images 1/(e+x) -> 0 as e grows; node 0 is x=0
      double tail = hurwitz_zeta(2.0 * s, sys.trunc + 1 + x + sys.a * eps);
      op.matrix(i, 0) += tail;
      op.tail_bound = std::max(op.tail_bound, tail);
    }
  }
  for (int i = 0; i <= m; ++i)
    op.labels.push_back("x=" + std::to_string(cheb.nodes(i)));
  return op;
}

double contfrac_pressure(const ContFracSystem& sys, double s, double eps, int m) {
  auto op = assemble_gauss_collocation(sys, s, eps, m);
  return std::log(leading_eigenpair(op.matrix).lambda);
}

namespace {
double root_at_m(const ContFracSystem& sys, double eps, int m) {
  double lo = sys.full_alphabet ? 0.51 : 0.05, hi = 1.5;
  auto P = [&](double s) { return contfrac_pressure(sys, s, eps, m); };
  double plo = P(lo), phi = P(hi);
  int guard = 0;
  while (plo < 0.0) {
    hi = lo;
    phi = plo;
    lo = 0.5 * (lo + (sys.full_alphabet ? 0.5 : 0.0));
    plo = P(lo);
    if (++guard > 40)
      throw Error(ErrorCode::BracketNotFound, "no positive pressure end");
  }
  guard = 0;
  while (phi > 0.0) {
    lo = hi;
    plo = phi;
    hi *= 1.5;
    phi = P(hi);
    if (++guard > 40)
      throw Error(ErrorCode::BracketNotFound, "no negative pressure end");
  }
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    double pm = P(mid);
    if (pm > 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-13) break;
  }
  return 0.5 * (lo + hi);
}
}  // namespace

ContFracRoot contfrac_bowen_root(const ContFracSystem& sys, double eps, int m) {
  ContFracRoot out;
  out.m = m;
  out.s_star = root_at_m(sys, eps, m);
  out.residual = std::fabs(contfrac_pressure(sys, out.s_star, eps, m));
  out.m_refine_delta = std::fabs(out.s_star - root_at_m(sys, eps, m / 2));
  return out;
}

double contfrac_dimension_derivative(const ContFracSystem& sys, double s0, int m) {
  ChebBasis cheb(m);
  const int dim = m + 1;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd Ks = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd Ke = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<int> edges = sys.edges;
  if (sys.full_alphabet) {
    edges.resize(sys.trunc);
    for (int e = 1; e <= sys.trunc; ++e) edges[e - 1] = e;
  }
  for (int i = 0; i <= m; ++i) {
    const double x = cheb.nodes(i);
    for (int e : edges) {
      const double q = e + x;
      const double base = std::pow(q, -2.0 * s0);
      Eigen::RowVectorXd lrow = cheb.interp_row(1.0 / q);
      K.row(i) += base * lrow;
      Ks.row(i) += -2.0 * std::log(q) * base * lrow;
      Ke.row(i) += sys.a * (-2.0 * s0 * base / q * lrow -
                            base / (q * q) * cheb.deriv_row(1.0 / q));
    }
    if (sys.full_alphabet) {
      const double Q = sys.trunc + 1 + x;
      K(i, 0) += hurwitz_zeta(2.0 * s0, Q);
      const double ds = 1e-6;
      Ks(i, 0) += (hurwitz_zeta(2.0 * (s0 + ds), Q) -
                   hurwitz_zeta(2.0 * (s0 - ds), Q)) / (2.0 * ds);
      Ke(i, 0) += sys.a * (-2.0 * s0) * hurwitz_zeta(2.0 * s0 + 1.0, Q);
    }
  }
  EigenPair right = leading_eigenpair(K);
  EigenPair left = leading_eigenpair(K.transpose());
  Eigen::RowVectorXd nu = left.v.transpose();
  Eigen::VectorXd h = right.v / (left.v.transpose() * right.v);
  double lam_eps = nu * (Ke * h);
  double lam_s = nu * (Ks * h);
  if (lam_s >= 0.0)
    throw Error(ErrorCode::NonNegativeDerivative, "d lambda/ds >= 0");
  return -lam_eps / lam_s;
}

}  // namespace bowenlab
