#ifndef BOWENLAB_COLLOCATION_HPP
#define BOWENLAB_COLLOCATION_HPP

#include <vector>

#include <Eigen/Dense>

#include "bowenlab/transfer.hpp"

namespace bowenlab {

// Chebyshev-Gauss-Lobatto grid on [0,1] with barycentric interpolation.
struct ChebBasis {
  int m = 0;                // polynomial degree; m+1 nodes
  Eigen::VectorXd nodes;    // x_i = (1 - cos(i pi / m))/2, x_0 = 0
  Eigen::VectorXd weights;  // barycentric weights

  explicit ChebBasis(int degree);
  // Row r with p(y) = r . f(nodes) for the degree-m interpolant.
  Eigen::RowVectorXd interp_row(double y) const;
  // Row for p'(y) at arbitrary y (not necessarily a node).
  Eigen::RowVectorXd deriv_row(double y) const;
};

// Continued-fraction system: maps T_e(eps,x) = 1/(e + x + a*eps) on [0,1].
struct ContFracSystem {
  std::vector<int> edges;   // explicit alphabet; empty means 1..trunc with tail
  int trunc = 10000;        // truncation of the full alphabet
  bool full_alphabet = false;
  double a = 1.0;
};

// Hurwitz zeta sum_{k>=0} (q+k)^{-s}, s > 1, via Euler-Maclaurin.
double hurwitz_zeta(double s, double q);

// Collocation matrix for (Lf)(x) = sum_e (e+x+a eps)^{-2s} f(1/(e+x+a eps));
// truncated full alphabets get a first-order tail correction through f(0).
TransferOperatorRealization assemble_gauss_collocation(const ContFracSystem& sys,
                                                       double s, double eps,
                                                       int m);

double contfrac_pressure(const ContFracSystem& sys, double s, double eps, int m);

struct ContFracRoot {
  double s_star = 0.0;
  double residual = 0.0;
  int m = 0;
  double m_refine_delta = 0.0;  // |root(m) - root(m/2)|
};
ContFracRoot contfrac_bowen_root(const ContFracSystem& sys, double eps, int m);

// ds/deps at eps=0 via first-order eigenvalue perturbation of the collocation
// matrix: s'(0) = -lambda_1 / (d lambda/d s), both factors Hellmann-Feynman.
double contfrac_dimension_derivative(const ContFracSystem& sys, double s0, int m);

}  // namespace bowenlab

#endif
