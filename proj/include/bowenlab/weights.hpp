#ifndef BOWENLAB_WEIGHTS_HPP
#define BOWENLAB_WEIGHTS_HPP

#include <functional>
#include <string>
#include <vector>

#include "bowenlab/errors.hpp"

namespace bowenlab {

// Depth-1 perturbed weight family g(eps,e) = g(e) + sum_k g_k(e) eps^k
// [+ gtilde_n(eps,e) eps^n].  Edges are addressed by 1-based symbol index.
struct PerturbedWeightFamily {
  enum class Kind { Geometric, PowerLaw, Tabulated };
  Kind kind = Kind::Geometric;

  // Geometric: g(e) = base_scale * base_ratio^{-e},
  //            g_k(e) = coeff_scales[k-1] * coeff_ratios[k-1]^{-e}.
  double base_ratio = 5.0;
  double base_scale = 1.0;
  std::vector<double> coeff_ratios;
  std::vector<double> coeff_scales;  // defaults to 1 per coefficient

  // PowerLaw: g(e) = e^{-beta}, no coefficients unless tabulated separately.
  double beta = 2.0;

  // Tabulated: dense values, edge e reads row e-1.
  std::vector<double> tab_base;
  std::vector<std::vector<double>> tab_coeffs;  // tab_coeffs[k-1][e-1]

  // Optional remainder hook gtilde_n(eps, e).
  std::function<double(int, double)> remainder_hook;

  double eps_max = 0.25;

  int order() const;
  int tabulated_size() const { return static_cast<int>(tab_base.size()); }
  double base(int e) const;
  double coeff(int k, int e) const;  // k = 1..order()
  std::vector<double> coeffs_at(int e) const;

  // Exact log-magnitude/sign split; geometric ratios stay representable far
  // past the point where base(e) itself underflows.
  double log_abs_base(int e) const;
  double base_sign(int e) const;
  double log_abs_coeff(int k, int e) const;  // -inf when the coefficient is 0
  double coeff_sign(int k, int e) const;
};

double eval_weight(const PerturbedWeightFamily& fam, int e, double eps);

// Perturbed positive factor psi; default identically 1.
struct PsiFamily {
  std::function<double(int)> base;                  // null => 1
  std::vector<std::function<double(int)>> coeffs;   // psi_k; null slots => 0
  std::function<double(int, double)> remainder;

  bool is_one() const { return !base && coeffs.empty(); }
  double base_at(int e) const { return base ? base(e) : 1.0; }
  double coeff_at(int k, int e) const {
    if (k < 1 || k > static_cast<int>(coeffs.size()) || !coeffs[k - 1]) return 0.0;
    return coeffs[k - 1](e);
  }
  std::vector<double> coeffs_at(int e, int n) const;
  double eval(int e, double eps) const;
};

struct ExponentReport {
  std::vector<double> t;  // t_1..t_n
  double t_tilde = 1.0;
  bool stable = true;
};

// Largest t_k in (0,1] with sup_e |g_k(e)|/|g(e)|^{t_k} bounded.  Geometric
// families use the closed form; tabulated families a log-log regression
// across truncation levels N/2 and N.
ExponentReport estimate_exponents(const PerturbedWeightFamily& fam, int N);

// Convergence abscissa of p -> sum_e |g(e)|^p psi(e).
double abscissa_p(const PerturbedWeightFamily& fam, const PsiFamily& psi);

// Admissibility threshold p(n).
double threshold_p_n(int n, const std::vector<double>& t, double t_tilde,
                     double p_bar);

struct ConditionReport {
  bool g2_pass = false;
  double g_sup = 0.0;           // max |g(e)| over truncation
  bool g_nonzero = false;
  bool g3_vacuous = true;       // depth-1 families: Lipschitz clause vacuous
  std::vector<bool> g4_pass;    // per coefficient k
  std::vector<double> g4_constants;
  bool g5_present = false;
  std::vector<double> g5_rate_samples;  // measured sup |gtilde|/|g|^{t~} at sample eps
  bool psi2_pass = false;
  bool psi3_vacuous = true;
  bool all_pass() const;
};

ConditionReport check_conditions(const PerturbedWeightFamily& fam,
                                 const PsiFamily& psi, int N);

// Smallest truncation N with tail sum_{e>N} |g(eps,e)|^{s_min} psi(eps,e)
// below tol for all eps in [0, eps_max]; estimated from the term decay ratio.
int choose_truncation(const PerturbedWeightFamily& fam, const PsiFamily& psi,
                      double s_min, double eps_max, double tol = 1e-14);

}  // namespace bowenlab

#endif
