#ifndef BOWENLAB_TRANSFER_HPP
#define BOWENLAB_TRANSFER_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bowenlab/graph.hpp"
#include "bowenlab/weights.hpp"

namespace bowenlab {

struct TransferOperatorRealization {
  Eigen::MatrixXd matrix;          // entry(c,e) = w(e) A(e,c) for edge form
  std::vector<std::string> labels; // edge ids or node labels
  int truncation = 0;
  double tail_bound = 0.0;
  enum class Form { EdgeMatrix, Collocation } form = Form::EdgeMatrix;
};

struct RpfTriplet {
  double lambda = 0.0;
  Eigen::VectorXd h;   // positive right eigenvector, nu(h) = 1
  Eigen::VectorXd nu;  // probability left eigenvector
  double gap = 0.0;    // |lambda_2|/lambda estimate
  double res_right = 0.0;
  double res_left = 0.0;
};

struct PressureCurve {
  std::vector<double> s;
  std::vector<double> P;
  int truncation = 0;
};

// Leading eigenpair by shifted power iteration (Perron root for
// essentially-nonnegative matrices; largest-real-part eigenvalue otherwise).
struct EigenPair {
  double lambda = 0.0;
  Eigen::VectorXd v;
  int iterations = 0;
};
EigenPair leading_eigenpair(const Eigen::MatrixXd& M, double tol = 1e-13,
                            int max_iter = 200000);

// Growth-rate estimate of |lambda_2| via iteration on the deflated matrix.
double second_eigenvalue_estimate(const Eigen::MatrixXd& M, double lambda,
                                  const Eigen::VectorXd& h,
                                  const Eigen::VectorXd& nu);

// Depth-1 transfer operator on the edge set of a finite graph:
// entry(c,e) = |g(eps,e)|^s psi(eps,e) A(e,c).  For countable families the
// graph rows are the first N symbols of the full shift.
TransferOperatorRealization assemble_edge_matrix(
    const DirectedMultigraph& g, const PerturbedWeightFamily& fam,
    const PsiFamily& psi, double s, double eps, int N);

double pressure(const TransferOperatorRealization& op);

RpfTriplet rpf_triplet(const TransferOperatorRealization& op);

// Extreme ratios of the Gibbs measure mu = h nu over cylinders of length <= d
// against the comparison exp(-nP) prod w(e_i).
std::pair<double, double> gibbs_check(const RpfTriplet& t,
                                      const DirectedMultigraph& g,
                                      const Eigen::VectorXd& log_weights,
                                      int depth);

// dP/ds = nu(h log|g|); strictly negative for contracting weights.
double pressure_s_derivative(const RpfTriplet& t,
                             const Eigen::VectorXd& log_weights);

}  // namespace bowenlab

#endif
