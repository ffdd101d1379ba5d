#include "bowenlab/eigen_perturb.hpp"

#include <cmath>

#include "bowenlab/series.hpp"
#include "bowenlab/transfer.hpp"

namespace bowenlab {

Eigen::MatrixXd reduced_resolvent(const Eigen::MatrixXd& L, double lambda,
                                  const Eigen::VectorXd& h,
                                  const Eigen::RowVectorXd& nu) {
  const int n = static_cast<int>(L.rows());
  Eigen::MatrixXd P = h * nu;
  Eigen::MatrixXd A = L - lambda * P - lambda * Eigen::MatrixXd::Identity(n, n);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  Eigen::MatrixXd S = lu.solve(Eigen::MatrixXd::Identity(n, n) - P);
  double res = ((L - lambda * Eigen::MatrixXd::Identity(n, n)) * S -
                (Eigen::MatrixXd::Identity(n, n) - P))
                   .cwiseAbs()
                   .maxCoeff();
  if (!std::isfinite(res) || res > 1e-9)
    throw Error(ErrorCode::SingularShift,
                "resolvent identity residual " + std::to_string(res));
  return S;
}

EigenExpansion eigen_expansion(const OperatorFamily& fam, int n) {
  EigenExpansion out;
  const int dim = static_cast<int>(fam.base.rows());
  EigenPair right = leading_eigenpair(fam.base);
  EigenPair left = leading_eigenpair(fam.base.transpose());
  out.lambda0 = right.lambda;
  Eigen::RowVectorXd nu = left.v.transpose();
  Eigen::VectorXd h = right.v;
  double mass = nu * h;
  if (std::fabs(mass) < 1e-300)
    throw Error(ErrorCode::ZeroMassNormalization, "nu(h)=0 in base eigenpair");
  h /= mass;  // nu(h) = 1
  out.h = h;
  out.nu = nu;
  // The kappa recursion only ever applies S to row vectors, so keep the LU
  // factors of R - lambda I and solve per vector instead of forming S
  // (explicit S is O(dim^3) per stage and dominates large truncations).
  Eigen::MatrixXd A = fam.base - out.lambda0 * (h * nu) -
                      out.lambda0 * Eigen::MatrixXd::Identity(dim, dim);
  Eigen::PartialPivLU<Eigen::MatrixXd> luT(A.transpose());
  auto left_S = [&](const Eigen::RowVectorXd& u) {
    // u S = (A^{-T} u^T)^T (I - P), A = R - lambda I
    Eigen::RowVectorXd w = luT.solve(u.transpose()).transpose();
    return Eigen::RowVectorXd(w - (w * h) * nu);
  };
  double nuS = left_S(nu).cwiseAbs().maxCoeff();  // nu S = 0 identity
  if (!std::isfinite(nuS) || nuS > 1e-8 * nu.cwiseAbs().maxCoeff())
    throw Error(ErrorCode::SingularShift,
                "resolvent identity residual " + std::to_string(nuS));
  if (dim <= 600) out.S = reduced_resolvent(fam.base, out.lambda0, h, nu);

  auto Lk = [&](int k) -> const Eigen::MatrixXd* {
    if (k >= 1 && k <= static_cast<int>(fam.orders.size()))
      return &fam.orders[k - 1];
    return nullptr;
  };

  out.kappa.assign(1, nu);
  out.lambda_coeffs.clear();
  for (int k = 1; k <= n; ++k) {
    double lam_k = 0.0;
    for (int j = 1; j <= k; ++j)
      if (const auto* L = Lk(j)) lam_k += out.kappa[k - j] * (*L * h);
    out.lambda_coeffs.push_back(lam_k);
    Eigen::RowVectorXd u = Eigen::RowVectorXd::Zero(dim);
    for (int j = 1; j <= k; ++j) {
      u += out.lambda_coeffs[j - 1] * out.kappa[k - j];
      if (const auto* L = Lk(j)) u -= out.kappa[k - j] * *L;
    }
    out.kappa.push_back(left_S(u));
  }
  nu_expansion(out);
  return out;
}

void nu_expansion(EigenExpansion& exp) {
  const int n = static_cast<int>(exp.kappa.size()) - 1;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(exp.nu.size());
  SeriesCoefficients denom;
  denom.coeffs.resize(n + 1);
  for (int k = 0; k <= n; ++k) denom.coeffs[k] = exp.kappa[k] * ones;
  if (std::fabs(denom.coeffs[0]) < 1e-300)
    throw Error(ErrorCode::ZeroMassNormalization, "nu(1)=0");
  SeriesCoefficients b = series_reciprocal(denom, n);
  exp.b = b.coeffs;
  exp.nu_coeffs.clear();
  for (int k = 0; k <= n; ++k) {
    Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(exp.nu.size());
    for (int i = 0; i <= k; ++i) v += b.coeffs[k - i] * exp.kappa[i];
    exp.nu_coeffs.push_back(v);
  }
}

}  // namespace bowenlab
