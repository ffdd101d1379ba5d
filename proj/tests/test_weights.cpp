#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "bowenlab/weights.hpp"
#include "doctest.h"

using namespace bowenlab;

static PerturbedWeightFamily ifs1(double a) {
  PerturbedWeightFamily fam;
  fam.kind = PerturbedWeightFamily::Kind::Geometric;
  fam.base_ratio = 5.0;
  fam.coeff_ratios = {a};
  return fam;
}

static PerturbedWeightFamily ifs2() {
  PerturbedWeightFamily fam;
  fam.kind = PerturbedWeightFamily::Kind::Geometric;
  fam.base_ratio = 5.0;
  fam.coeff_ratios = {4.0, 3.0};
  return fam;
}

TEST_CASE("eval_weight: pinned evaluations") {
  PerturbedWeightFamily fam = ifs1(10.0);
  for (int e = 1; e <= 4; ++e) {
    CHECK(eval_weight(fam, e, 0.0) ==
          doctest::Approx(std::pow(5.0, -e)).epsilon(1e-14));
    CHECK(eval_weight(fam, e, 0.05) ==
          doctest::Approx(std::pow(5.0, -e) + 0.05 * std::pow(10.0, -e))
              .epsilon(1e-14));
  }
  // linear IFS(2), e=1, eps=0.1 -> 1/5 + 0.1/4 + 0.01/3
  CHECK(eval_weight(ifs2(), 1, 0.1) ==
        doctest::Approx(0.2 + 0.1 / 4.0 + 0.01 / 3.0).epsilon(1e-14));
}

TEST_CASE("eval_weight: out-of-range epsilon") {
  PerturbedWeightFamily fam = ifs1(10.0);
  fam.eps_max = 0.25;
  CHECK_THROWS_AS(eval_weight(fam, 1, 0.5), Error);
  CHECK_THROWS_AS(eval_weight(fam, 1, -0.01), Error);
}

TEST_CASE("eval_weight: remainder hook enters at eps^order") {
  PerturbedWeightFamily fam;
  fam.kind = PerturbedWeightFamily::Kind::Tabulated;
  fam.tab_base = {0.3, 0.2};
  fam.tab_coeffs = {{0.1, 0.05}};
  fam.remainder_hook = [](int, double eps) { return eps; };  // gtilde_1
  // g + g_1 eps + gtilde_1(eps) eps^1
  CHECK(eval_weight(fam, 1, 0.1) ==
        doctest::Approx(0.3 + 0.1 * 0.1 + 0.1 * 0.1).epsilon(1e-14));
}

TEST_CASE("estimate_exponents: geometric closed forms") {
  for (double a : {3.0, 10.0}) {
    ExponentReport rep = estimate_exponents(ifs1(a), 64);
    REQUIRE(rep.t.size() == 1);
    CHECK(rep.t[0] ==
          doctest::Approx(std::min(std::log(a) / std::log(5.0), 1.0))
              .epsilon(1e-13));
  }
  ExponentReport rep2 = estimate_exponents(ifs2(), 64);
  REQUIRE(rep2.t.size() == 2);
  CHECK(rep2.t[0] == doctest::Approx(std::log(4.0) / std::log(5.0)).epsilon(1e-13));
  CHECK(rep2.t[1] == doctest::Approx(std::log(3.0) / std::log(5.0)).epsilon(1e-13));
}

TEST_CASE("estimate_exponents: constant-coefficient tabulated family t=1") {
  PerturbedWeightFamily fam;
  fam.kind = PerturbedWeightFamily::Kind::Tabulated;
  for (int e = 1; e <= 32; ++e) {
    fam.tab_base.push_back(std::pow(2.0, -e));
  }
  fam.tab_coeffs.resize(1);
  for (int e = 1; e <= 32; ++e) fam.tab_coeffs[0].push_back(fam.tab_base[e - 1]);
  ExponentReport rep = estimate_exponents(fam, 32);
  CHECK(rep.t[0] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("estimate_exponents: independent of truncation for geometric") {
  for (int N : {3, 8, 64, 512}) {
    ExponentReport rep = estimate_exponents(ifs1(3.0), N);
    CHECK(rep.t[0] ==
          doctest::Approx(std::log(3.0) / std::log(5.0)).epsilon(1e-13));
  }
}

TEST_CASE("abscissa_p: registry families") {
  PsiFamily psi;
  CHECK(abscissa_p(ifs1(10.0), psi) == 0.0);
  PerturbedWeightFamily pw;
  pw.kind = PerturbedWeightFamily::Kind::PowerLaw;
  pw.beta = 2.0;  // weights 1/e^2: sum e^{-2p} converges iff p > 1/2
  CHECK(abscissa_p(pw, psi) == doctest::Approx(0.5).epsilon(1e-3));
  PerturbedWeightFamily fin;
  fin.kind = PerturbedWeightFamily::Kind::Tabulated;
  fin.tab_base = {0.5, 0.25};
  CHECK(abscissa_p(fin, psi) == 0.0);
}

TEST_CASE("threshold_p_n: pinned values") {
  // IFS(2): for n >= 2 the k=2 term dominates, p(n) = n (1 - log3/log5)/2;
  // at n=1 the displayed max only reaches k=1, giving 1 - log4/log5
  std::vector<double> t2 = {std::log(4.0) / std::log(5.0),
                            std::log(3.0) / std::log(5.0)};
  for (int n = 2; n <= 3; ++n)
    CHECK(threshold_p_n(n, t2, 1.0, 0.0) ==
          doctest::Approx(n * (1.0 - std::log(3.0) / std::log(5.0)) / 2.0)
              .epsilon(1e-13));
  CHECK(threshold_p_n(1, t2, 1.0, 0.0) ==
        doctest::Approx(1.0 - std::log(4.0) / std::log(5.0)).epsilon(1e-13));
  // IFS(1) with a >= 5: t1 = 1 so p(n) = 0
  for (double a : {5.0, 10.0, 50.0})
    CHECK(threshold_p_n(2, {std::min(std::log(a) / std::log(5.0), 1.0)}, 1.0,
                        0.0) == doctest::Approx(0.0));
  // n=0 case p_bar / t_tilde
  CHECK(threshold_p_n(0, {}, 0.6, 0.3) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("threshold_p_n: monotone in n for nonincreasing exponents") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> d(0.05, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> t = {d(rng), d(rng), d(rng)};
    std::sort(t.rbegin(), t.rend());  // nonincreasing t_k
    double tt = d(rng), pb = 0.5 * d(rng);
    double prev = threshold_p_n(0, t, tt, pb);
    for (int n = 1; n <= 3; ++n) {
      double cur = threshold_p_n(n, t, tt, pb);
      CHECK(cur >= prev - 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("check_conditions: IFS(1) passes with vacuous Lipschitz clause") {
  PsiFamily psi;
  ConditionReport rep = check_conditions(ifs1(10.0), psi, 64);
  CHECK(rep.all_pass());
  CHECK(rep.g2_pass);
  CHECK(rep.g3_vacuous);
  CHECK(rep.psi2_pass);
  CHECK(rep.g_sup == doctest::Approx(0.2).epsilon(1e-13));
}

TEST_CASE("check_conditions: constant coefficient over shrinking base fails (g.4)") {
  PerturbedWeightFamily fam;
  fam.kind = PerturbedWeightFamily::Kind::Tabulated;
  for (int e = 1; e <= 64; ++e) fam.tab_base.push_back(std::pow(2.0, -e));
  fam.tab_coeffs.resize(1);
  for (int e = 1; e <= 64; ++e) fam.tab_coeffs[0].push_back(1.0);
  PsiFamily psi;
  ConditionReport rep = check_conditions(fam, psi, 64);
  REQUIRE(rep.g4_pass.size() == 1);
  CHECK(!rep.g4_pass[0]);
  CHECK(!rep.all_pass());
}

TEST_CASE("check_conditions: IFS(2) passes with estimated exponents") {
  PsiFamily psi;
  CHECK(check_conditions(ifs2(), psi, 64).all_pass());
}

TEST_CASE("log-magnitude accessors agree with direct evaluation") {
  PerturbedWeightFamily fam = ifs2();
  for (int e = 1; e <= 20; ++e) {
    CHECK(fam.log_abs_base(e) ==
          doctest::Approx(std::log(std::fabs(fam.base(e)))).epsilon(1e-12));
    CHECK(fam.base_sign(e) == 1.0);
    for (int k = 1; k <= 2; ++k) {
      CHECK(fam.log_abs_coeff(k, e) ==
            doctest::Approx(std::log(std::fabs(fam.coeff(k, e)))).epsilon(1e-12));
      CHECK(fam.coeff_sign(k, e) == 1.0);
    }
  }
  // exact far beyond the underflow point of base(e) itself
  CHECK(fam.log_abs_base(1000) ==
        doctest::Approx(-1000.0 * std::log(5.0)).epsilon(1e-12));
  CHECK(std::isfinite(fam.log_abs_base(1000)));
  CHECK(fam.base(1000) == 0.0);  // the plain evaluation underflows
}

TEST_CASE("choose_truncation: tail below tolerance at the returned level") {
  PsiFamily psi;
  PerturbedWeightFamily fam = ifs1(10.0);
  int N = choose_truncation(fam, psi, 0.4, 0.1, 1e-14);
  // geometric tail sum_{e>N} (5^{-e} + 0.1 * 10^{-e})^{0.4}
  double tail = 0.0;
  for (int e = N + 1; e <= N + 400; ++e)
    tail += std::pow(eval_weight(fam, e, 0.1), 0.4);
  CHECK(tail <= 1e-13);  // slack for the estimate's geometric-ratio model
}
