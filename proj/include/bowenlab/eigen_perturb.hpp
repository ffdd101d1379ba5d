#ifndef BOWENLAB_EIGEN_PERTURB_HPP
#define BOWENLAB_EIGEN_PERTURB_HPP

#include <vector>

#include <Eigen/Dense>

#include "bowenlab/errors.hpp"

namespace bowenlab {

// Polynomial operator family L(eps) = L + L_1 eps + ... + L_n eps^n.
struct OperatorFamily {
  Eigen::MatrixXd base;
  std::vector<Eigen::MatrixXd> orders;  // L_1..L_n

  Eigen::MatrixXd at(double eps) const {
    Eigen::MatrixXd M = base;
    double ep = 1.0;
    for (const auto& Lk : orders) {
      ep *= eps;
      M += ep * Lk;
    }
    return M;
  }
};

struct EigenExpansion {
  double lambda0 = 0.0;
  Eigen::VectorXd h;                      // nu(h) = 1
  Eigen::RowVectorXd nu;                  // kappa_0
  Eigen::MatrixXd S;                      // reduced resolvent
  std::vector<double> lambda_coeffs;      // lambda_1..lambda_n
  std::vector<Eigen::RowVectorXd> kappa;  // kappa_0..kappa_n
  std::vector<Eigen::RowVectorXd> nu_coeffs;  // nu_0..nu_n (nu(eps,1)=1)
  std::vector<double> b;                  // b_0..b_n

  double lambda_at(double eps) const {
    double v = lambda0, ep = 1.0;
    for (double lk : lambda_coeffs) {
      ep *= eps;
      v += lk * ep;
    }
    return v;
  }
};

// S = (R - lambda I)^{-1} (I - P), R = L - lambda P, P = h nu.
Eigen::MatrixXd reduced_resolvent(const Eigen::MatrixXd& L, double lambda,
                                  const Eigen::VectorXd& h,
                                  const Eigen::RowVectorXd& nu);

// Joint recursion lambda_k = sum_j kappa_{k-j}(L_j h),
// kappa_k(f) = sum_j kappa_{k-j}((lambda_j I - L_j) S f), kappa_0 = nu.
// The base eigenpair is computed internally (simple positive leading
// eigenvalue assumed); nu_coeffs/b filled by nu_expansion.
EigenExpansion eigen_expansion(const OperatorFamily& fam, int n);

// Coefficients of the probability-normalized eigenfunctional
// nu(eps,f) = kappa(eps,f) / kappa(eps,1); also the b_j series.
void nu_expansion(EigenExpansion& exp);

}  // namespace bowenlab

#endif
