#ifndef BOWENLAB_SERIES_HPP
#define BOWENLAB_SERIES_HPP

#include <vector>

#include "bowenlab/errors.hpp"

namespace bowenlab {

// Generalized binomial coefficient s(s-1)...(s-l+1)/l!.
double binom_real(double s, int l);

// Coefficients a_{l,j,s} of binom(p,l) = sum_j a_{l,j,s} (p-s)^j.
double a_coeff(int l, int j, double s);

// Tuples (j_1..j_k) with sum j_i = l and sum i*j_i = k.
struct CompositionSet {
  int k = 0;
  int l = 0;
  std::vector<std::vector<int>> tuples;
};
CompositionSet compositions(int k, int l);

// G^p_{l,k} at a single point: |g|^p/g^l * sum over compositions of the
// multinomial-weighted coefficient products.  k=0 gives |g|^p.
// coeffs[i] holds g_{i+1}; entries beyond the stored order count as 0.
double G_plk(double p, int l, int k, double g, const std::vector<double>& coeffs);

// Log-magnitude/sign form of G_plk for deep truncations where g and g_k
// underflow individually; sign 0 marks a vanishing coefficient.
double G_plk_log(double p, int l, int k, double log_abs_g, double sign_g,
                 const std::vector<double>& log_abs_coeffs,
                 const std::vector<double>& coeff_signs);

// k-th Taylor coefficient of eps -> |g(eps)|^p:
// g_{k,p} = sum_{l=0}^k binom(p,l) G^p_{l,k}.
double g_kp(double p, int k, double g, const std::vector<double>& coeffs);

// zeta_{k,p} = sum_i g_{i,p} psi_{k-i}; psi[0] is the base value.
double zeta_kp(double p, int k, double g, const std::vector<double>& gcoeffs,
               const std::vector<double>& psi);

struct SeriesCoefficients {
  std::vector<double> coeffs;  // c_0..c_n
  int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

// k-th power of a centered series (c_0 = 0), truncated at eps^n.
// Authoritative: repeated truncated polynomial multiplication.
SeriesCoefficients series_power(const SeriesCoefficients& s, int k, int n);

// Reciprocal of a series with c_0 != 0, truncated at eps^n.
SeriesCoefficients series_reciprocal(const SeriesCoefficients& s, int n);

// Product of two series truncated at eps^n.
SeriesCoefficients series_product(const SeriesCoefficients& a,
                                  const SeriesCoefficients& b, int n);

// The displayed multinomial form for the coefficient of eps^i in
// (s(eps)-s(0))^k; kept as a cross-check only (see series_power).
// s_coeffs holds s_1..s_m.
double series_power_coeff_display(int k, int i, const std::vector<double>& s_coeffs);

// Gamma-hat: int_0^1 (1-u)^{i-1}/(i-1)! * |g|^{u(p-s)} (log|g|)^i du
// for 0 < |g| < 1, i >= 1.  Gauss-Legendre with interval doubling.
double gamma_hat(double s, double p, int i, double abs_g);

}  // namespace bowenlab

#endif
