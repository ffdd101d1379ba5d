#ifndef BOWENLAB_BINOM_BOUND_HPP
#define BOWENLAB_BINOM_BOUND_HPP

#include "bowenlab/errors.hpp"

namespace bowenlab {

// Lower bound L(n,s) and threshold M(n,s) for the intermediate point of the
// order-n binomial Taylor remainder of (a+x)^s, s in (0,1).
double bound_L(int n, double s);
double threshold_M(int n, double s);

struct AlphaCertificate {
  int n = 1;
  double s = 0.5;
  double a = 0.0;
  double x = 0.0;
  double alpha = 0.0;
  double bound = 0.0;       // L(n,s) for n=1; (a/x)^{(n-1-s)/(n-s)} L(n,s) else
  bool threshold_ok = false;  // a/x <= M(n,s)
  double residual = 0.0;      // relative identity residual at alpha
};

// Solve (a+x)^s = a^s + sum_{k<n} binom(s,k) a^{s-k} x^k
//                 + binom(s,n) (a+x*alpha)^{s-n} x^n for alpha in [0,1].
AlphaCertificate solve_alpha(int n, double s, double a, double x);

}  // namespace bowenlab

#endif
