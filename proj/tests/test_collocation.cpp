#include <cmath>
#include <vector>

#include "bowenlab/collocation.hpp"
#include "bowenlab/transfer.hpp"
#include "doctest.h"

using namespace bowenlab;

TEST_CASE("ChebBasis: interpolation reproduces polynomials exactly") {
  ChebBasis basis(8);
  REQUIRE(basis.nodes.size() == 9);
  CHECK(basis.nodes(0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(basis.nodes(8) == doctest::Approx(1.0).epsilon(1e-15));
  // degree-5 polynomial is reproduced exactly by a degree-8 interpolant
  auto poly = [](double x) {
    return 1.0 - 2.0 * x + 0.5 * x * x * x - 3.0 * std::pow(x, 5);
  };
  Eigen::VectorXd vals(9);
  for (int i = 0; i < 9; ++i) vals(i) = poly(basis.nodes(i));
  for (double y : {0.03, 0.37, 0.62, 0.95}) {
    CHECK(basis.interp_row(y).dot(vals) ==
          doctest::Approx(poly(y)).epsilon(1e-13));
    double dp = -2.0 + 1.5 * y * y - 15.0 * std::pow(y, 4);
    CHECK(basis.deriv_row(y).dot(vals) == doctest::Approx(dp).epsilon(1e-11));
  }
  // interpolating at a node returns that node's value
  Eigen::RowVectorXd row = basis.interp_row(basis.nodes(3));
  CHECK(row(3) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("hurwitz_zeta: classical values") {
  double pi = std::acos(-1.0);
  CHECK(hurwitz_zeta(2.0, 1.0) == doctest::Approx(pi * pi / 6.0).epsilon(1e-11));
  CHECK(hurwitz_zeta(4.0, 1.0) ==
        doctest::Approx(std::pow(pi, 4) / 90.0).epsilon(1e-12));
  // zeta(s, q) - zeta(s, q+1) = q^{-s}
  CHECK(hurwitz_zeta(2.0, 3.0) - hurwitz_zeta(2.0, 4.0) ==
        doctest::Approx(1.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("Gauss fixed point: lambda = 1 and eigenfunction 1/(1+x)") {
  ContFracSystem sys;
  sys.full_alphabet = true;
  sys.trunc = 10000;
  auto op = assemble_gauss_collocation(sys, 1.0, 0.0, 32);
  RpfTriplet t = rpf_triplet(op);
  CHECK(t.lambda == doctest::Approx(1.0).epsilon(1e-8));
  ChebBasis basis(32);
  Eigen::VectorXd ref(33);
  for (int i = 0; i < 33; ++i) ref(i) = 1.0 / (1.0 + basis.nodes(i));
  ref *= t.h(0) / ref(0);
  CHECK((t.h - ref).lpNorm<Eigen::Infinity>() <= 1e-7 * t.h.maxCoeff());
}

TEST_CASE("contfrac Bowen root: E={1,2} pinned and stable under refinement") {
  ContFracSystem sys;
  sys.edges = {1, 2};
  ContFracRoot r16 = contfrac_bowen_root(sys, 0.0, 16);
  ContFracRoot r32 = contfrac_bowen_root(sys, 0.0, 32);
  CHECK(r32.s_star == doctest::Approx(0.5313).epsilon(2e-4));
  CHECK(std::fabs(r32.s_star - r16.s_star) <= 1e-6);
  CHECK(r32.residual <= 1e-10);
}

TEST_CASE("contfrac pressure: E={2..50} subcritical at s=1") {
  ContFracSystem sys;
  for (int e = 2; e <= 50; ++e) sys.edges.push_back(e);
  auto op = assemble_gauss_collocation(sys, 1.0, 0.0, 24);
  // collocation rows carry mixed signs, so use the plain leading eigenvalue
  CHECK(leading_eigenpair(op.matrix).lambda < 1.0);
  CHECK(contfrac_pressure(sys, 1.0, 0.0, 24) < 0.0);
}

TEST_CASE("contfrac Bowen root: E={2..20} m-refinement below 1e-8") {
  ContFracSystem sys;
  for (int e = 2; e <= 20; ++e) sys.edges.push_back(e);
  ContFracRoot a = contfrac_bowen_root(sys, 0.0, 16);
  ContFracRoot b = contfrac_bowen_root(sys, 0.0, 32);
  CHECK(std::fabs(a.s_star - b.s_star) <= 1e-8);
}

TEST_CASE("contfrac dimension derivative matches finite differences") {
  ContFracSystem sys;
  for (int e = 2; e <= 20; ++e) sys.edges.push_back(e);
  sys.a = 1.0;
  double s0 = contfrac_bowen_root(sys, 0.0, 24).s_star;
  double deriv = contfrac_dimension_derivative(sys, s0, 24);
  double h = 1e-4;
  double fd = (contfrac_bowen_root(sys, h, 24).s_star -
               contfrac_bowen_root(sys, 0.0, 24).s_star) /
              h;
  CHECK(deriv == doctest::Approx(fd).epsilon(1e-3));
  CHECK(deriv < 0.0);  // shrinking maps shrink the limit set
}

TEST_CASE("contfrac dimension decreases with eps (E={2..20}, a=1)") {
  ContFracSystem sys;
  for (int e = 2; e <= 20; ++e) sys.edges.push_back(e);
  CHECK(contfrac_bowen_root(sys, 0.01, 24).s_star <
        contfrac_bowen_root(sys, 0.0, 24).s_star);
}
