#ifndef BOWENLAB_BOWEN_HPP
#define BOWENLAB_BOWEN_HPP

#include <string>
#include <utility>
#include <vector>

#include "bowenlab/eigen_perturb.hpp"
#include "bowenlab/transfer.hpp"

namespace bowenlab {

// Depth-1 system: graph + perturbed weights + psi.  An empty edge set marks
// a countable full shift truncated on demand.
struct DepthOneSystem {
  DirectedMultigraph graph;
  PerturbedWeightFamily weights;
  PsiFamily psi;
  int fixed_trunc = 0;  // 0 = choose from tail rule
  std::string name = "custom";

  bool countable() const { return graph.num_edges() == 0; }
};

int system_truncation(const DepthOneSystem& sys, double s_min, double eps_max);

TransferOperatorRealization system_edge_matrix(const DepthOneSystem& sys,
                                               double s, double eps, int N = 0);

struct BowenSolution {
  double s_star = 0.0;
  double p0 = 0.0;
  double bracket_lo = 0.0, bracket_hi = 0.0;
  int iterations = 0;
  double residual = 0.0;
  int truncation = 0;
};

BowenSolution solve_bowen(const DepthOneSystem& sys, double eps, double p0 = 0.0,
                          std::pair<double, double> hint = {0.2, 1.2});

// Bowen root at pressure level 0 = Hausdorff dimension of the limit set.
double dimension(const DepthOneSystem& sys, double eps);

struct PerturbationOperatorSet {
  double s0 = 0.0;
  int order = 0;
  int truncation = 0;
  double tail_bound = 0.0;  // accepted residual tail when capped
  std::vector<std::vector<Eigen::MatrixXd>> Z;  // Z[v][q], 0 <= v,q <= n
  RpfTriplet triplet;                           // of Z[0][0]
};

PerturbationOperatorSet assemble_perturbation_operators(
    const DepthOneSystem& sys, double s0, int n, int N = 0);

struct ExpansionReport {
  int order = 0;
  double s0 = 0.0;
  std::vector<double> coeffs;  // s_1..s_n
  std::vector<double> uncertainty;
  std::string method;  // recursion | numeric-oracle | closed-form
  double threshold_pn = 0.0;
  bool admissible = true;
  std::vector<std::pair<double, double>> remainder_samples;
  double fitted_order = 0.0;
  std::string fitted_model;
};

ExpansionReport expansion_coeffs_recursion(const DepthOneSystem& sys, int n);
ExpansionReport expansion_coeffs_numeric(const DepthOneSystem& sys, int n,
                                         double eps_top = 0.08, int levels = 12);

// Displayed closed forms for the first linear IFS example family
// g(eps,e) = 5^{-e} + eps a^{-e}.
double closed_form_sk_ifs1(int k, double a);
double display_s1_ifs1(double a);
double display_s2_ifs1(double a);

struct OrderFit {
  double exponent = 0.0;
  std::string model;  // pure-power | power-log
  double goodness = 0.0;  // rms of log-residual misfit
  double uncertainty = 0.0;
};

OrderFit remainder_order_fit(const std::vector<double>& eps,
                             const std::vector<double>& residuals);

std::vector<double> log_grid(double lo, double hi, int count);

// s(eps) - partial sum through eps^n, sampled on a grid (sorted ascending).
std::vector<std::pair<double, double>> remainder_samples(
    const DepthOneSystem& sys, double s0, const std::vector<double>& coeffs,
    const std::vector<double>& eps_grid);

}  // namespace bowenlab

#endif
