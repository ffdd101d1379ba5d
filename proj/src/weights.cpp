#include "bowenlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bowenlab {

int PerturbedWeightFamily::order() const {
  switch (kind) {
    case Kind::Geometric: return static_cast<int>(coeff_ratios.size());
    case Kind::PowerLaw: return 0;
    case Kind::Tabulated: return static_cast<int>(tab_coeffs.size());
  }
  return 0;
}

double PerturbedWeightFamily::base(int e) const {
  switch (kind) {
    case Kind::Geometric: return base_scale * std::pow(base_ratio, -e);
    case Kind::PowerLaw: return std::pow(static_cast<double>(e), -beta);
    case Kind::Tabulated: return tab_base.at(e - 1);
  }
  return 0.0;
}

double PerturbedWeightFamily::coeff(int k, int e) const {
  if (k < 1 || k > order()) return 0.0;
  switch (kind) {
    case Kind::Geometric: {
      double scale = k <= static_cast<int>(coeff_scales.size()) ? coeff_scales[k - 1] : 1.0;
      return scale * std::pow(coeff_ratios[k - 1], -e);
    }
    case Kind::PowerLaw: return 0.0;
    case Kind::Tabulated: return tab_coeffs[k - 1].at(e - 1);
  }
  return 0.0;
}

double PerturbedWeightFamily::log_abs_base(int e) const {
  switch (kind) {
    case Kind::Geometric:
      return std::log(std::fabs(base_scale)) - e * std::log(base_ratio);
    case Kind::PowerLaw: return -beta * std::log(static_cast<double>(e));
    case Kind::Tabulated: return std::log(std::fabs(tab_base.at(e - 1)));
  }
  return -std::numeric_limits<double>::infinity();
}

double PerturbedWeightFamily::base_sign(int e) const {
  switch (kind) {
    case Kind::Geometric: return base_scale > 0 ? 1.0 : (base_scale < 0 ? -1.0 : 0.0);
    case Kind::PowerLaw: return 1.0;
    case Kind::Tabulated: {
      double v = tab_base.at(e - 1);
      return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0);
    }
  }
  return 0.0;
}

double PerturbedWeightFamily::log_abs_coeff(int k, int e) const {
  if (k < 1 || k > order() || coeff_sign(k, e) == 0.0)
    return -std::numeric_limits<double>::infinity();
  if (kind == Kind::Geometric) {
    double scale = k <= static_cast<int>(coeff_scales.size()) ? coeff_scales[k - 1] : 1.0;
    return std::log(std::fabs(scale)) - e * std::log(coeff_ratios[k - 1]);
  }
  return std::log(std::fabs(coeff(k, e)));
}

double PerturbedWeightFamily::coeff_sign(int k, int e) const {
  if (k < 1 || k > order()) return 0.0;
  if (kind == Kind::Geometric) {
    double scale = k <= static_cast<int>(coeff_scales.size()) ? coeff_scales[k - 1] : 1.0;
    return scale > 0 ? 1.0 : (scale < 0 ? -1.0 : 0.0);
  }
  double v = coeff(k, e);
  return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0);
}

std::vector<double> PerturbedWeightFamily::coeffs_at(int e) const {
  std::vector<double> out(order());
  for (int k = 1; k <= order(); ++k) out[k - 1] = coeff(k, e);
  return out;
}

double eval_weight(const PerturbedWeightFamily& fam, int e, double eps) {
  if (eps < 0.0 || eps > fam.eps_max)
    throw Error(ErrorCode::OutOfRangeEpsilon,
                "eps=" + std::to_string(eps) + " outside [0," +
                    std::to_string(fam.eps_max) + "]");
  double v = fam.base(e);
  double ep = 1.0;
  for (int k = 1; k <= fam.order(); ++k) {
    ep *= eps;
    v += fam.coeff(k, e) * ep;
  }
  if (fam.remainder_hook) v += fam.remainder_hook(e, eps) * ep;
  return v;
}

std::vector<double> PsiFamily::coeffs_at(int e, int n) const {
  std::vector<double> out(n + 1, 0.0);
  out[0] = base_at(e);
  for (int k = 1; k <= n; ++k) out[k] = coeff_at(k, e);
  return out;
}

double PsiFamily::eval(int e, double eps) const {
  double v = base_at(e);
  double ep = 1.0;
  for (int k = 1; k <= static_cast<int>(coeffs.size()); ++k) {
    ep *= eps;
    v += coeff_at(k, e) * ep;
  }
  if (remainder) v += remainder(e, eps) * ep;
  return v;
}

ExponentReport estimate_exponents(const PerturbedWeightFamily& fam, int N) {
  ExponentReport rep;
  const int n = fam.order();
  rep.t.resize(n);
  if (fam.kind == PerturbedWeightFamily::Kind::Geometric) {
    // sup_e |g_k|/|g|^t = sup_e (base_ratio^t / coeff_ratio_k)^e < inf
    // iff t <= log(coeff_ratio_k)/log(base_ratio).
    for (int k = 1; k <= n; ++k)
      rep.t[k - 1] = std::min(
          std::log(fam.coeff_ratios[k - 1]) / std::log(fam.base_ratio), 1.0);
  } else {
    // fit slope of log|g_k| against log|g| on two truncation levels
    for (int k = 1; k <= n; ++k) {
      auto slope = [&](int lim) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (int e = 1; e <= lim; ++e) {
          double gk = std::fabs(fam.coeff(k, e));
          double g = std::fabs(fam.base(e));
          if (gk == 0.0 || g == 0.0) continue;
          double x = std::log(g), y = std::log(gk);
          sx += x; sy += y; sxx += x * x; sxy += x * y;
          ++cnt;
        }
        if (cnt < 2) return 1.0;  // constant data: ratio bounded at t=1
        double denom = cnt * sxx - sx * sx;
        if (std::fabs(denom) < 1e-12) return 1.0;
        return (cnt * sxy - sx * sy) / denom;
      };
      double sN = slope(N), sH = slope(std::max(2, N / 2));
      if (std::fabs(sN - sH) > 0.05)
        throw Error(ErrorCode::ExponentUnstable,
                    "slope drift for coefficient " + std::to_string(k));
      rep.t[k - 1] = std::min(sN, 1.0);
    }
  }
  rep.t_tilde = 1.0;  // remainder hooks are exact closed forms when present
  return rep;
}

double abscissa_p(const PerturbedWeightFamily& fam, const PsiFamily& psi) {
  if (fam.kind == PerturbedWeightFamily::Kind::Geometric) return 0.0;
  if (fam.kind == PerturbedWeightFamily::Kind::Tabulated) return 0.0;  // finite
  // numeric bracketing of the divergence onset: the partial sums of
  // sum_e |g(e)|^p psi(e) diverge iff the term decay slope in log e is >= -1
  auto diverges = [&](double p) {
    auto term = [&](int e) {
      return std::pow(std::fabs(fam.base(e)), p) * psi.base_at(e);
    };
    const int N = 1 << 14;
    double t1 = term(N), t2 = term(2 * N);
    if (t1 <= 0.0 || t2 <= 0.0) return false;
    double slope = std::log(t2 / t1) / std::log(2.0);
    return slope >= -1.0;
  };
  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (diverges(hi)) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 20)
      throw Error(ErrorCode::AbscissaUndetermined, "no convergent exponent found");
  }
  for (int it = 0; it < 40; ++it) {
    double mid = 0.5 * (lo + hi);
    (diverges(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double threshold_p_n(int n, const std::vector<double>& t, double t_tilde,
                     double p_bar) {
  if (n == 0) return p_bar / t_tilde;
  double m = p_bar + 1.0 - t_tilde;
  m = std::max(m, p_bar / t_tilde);
  for (int k = 1; k <= n; ++k) {
    double tk = k <= static_cast<int>(t.size()) ? t[k - 1] : 1.0;
    m = std::max(m, p_bar + n * (1.0 - tk) / k);
    m = std::max(m, p_bar / tk);
  }
  return m;
}

bool ConditionReport::all_pass() const {
  if (!g2_pass || !g_nonzero || !psi2_pass) return false;
  for (bool b : g4_pass)
    if (!b) return false;
  return true;
}

ConditionReport check_conditions(const PerturbedWeightFamily& fam,
                                 const PsiFamily& psi, int N) {
  ConditionReport rep;
  rep.g_nonzero = true;
  rep.g_sup = 0.0;
  for (int e = 1; e <= N; ++e) {
    double g = fam.base(e);
    rep.g_sup = std::max(rep.g_sup, std::fabs(g));
    if (g == 0.0) rep.g_nonzero = false;
  }
  rep.g2_pass = rep.g_sup < 1.0 && rep.g_nonzero;

  const int n = fam.order();
  rep.g4_pass.resize(n);
  rep.g4_constants.resize(n);
  std::vector<double> t;
  bool t_ok = true;
  try {
    t = estimate_exponents(fam, N).t;
  } catch (const Error&) {
    t_ok = false;
  }
  for (int k = 1; k <= n; ++k) {
    if (!t_ok || t[k - 1] <= 0.0) {
      rep.g4_pass[k - 1] = false;
      rep.g4_constants[k - 1] = std::numeric_limits<double>::infinity();
      continue;
    }
    // bounded running supremum: sup over e<=N vs e<=N/2
    auto running_sup = [&](int lim) {
      double m = 0.0;
      for (int e = 1; e <= lim; ++e)
        m = std::max(m, std::fabs(fam.coeff(k, e)) /
                            std::pow(std::fabs(fam.base(e)), t[k - 1]));
      return m;
    };
    double half = running_sup(std::max(2, N / 2)), full = running_sup(N);
    rep.g4_constants[k - 1] = full;
    rep.g4_pass[k - 1] = full <= half * 1.05 + 1e-12;
  }

  if (fam.remainder_hook) {
    rep.g5_present = true;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      double m = 0.0;
      for (int e = 1; e <= N; ++e)
        m = std::max(m, std::fabs(fam.remainder_hook(e, eps)) /
                            std::fabs(fam.base(e)));
      rep.g5_rate_samples.push_back(m);
    }
  }

  rep.psi2_pass = true;
  for (int e = 1; e <= N; ++e)
    if (psi.base_at(e) <= 0.0) rep.psi2_pass = false;
  return rep;
}

int choose_truncation(const PerturbedWeightFamily& fam, const PsiFamily& psi,
                      double s_min, double eps_max, double tol) {
  auto term = [&](int e) {
    double g = std::fabs(fam.base(e));
    double gp = 0.0;
    double ep = 1.0;
    for (int k = 1; k <= fam.order(); ++k) {
      ep *= eps_max;
      gp += std::fabs(fam.coeff(k, e)) * ep;
    }
    return std::pow(g + gp, s_min) * std::fabs(psi.eval(e, 0.0));
  };
  if (fam.kind == PerturbedWeightFamily::Kind::Tabulated)
    return fam.tabulated_size();
  int N = 32;
  while (N <= 1 << 16) {
    double tN1 = term(N + 1), tN2 = term(N + 2);
    if (tN1 <= 0.0) return N;
    double rho = tN2 / tN1;
    if (rho < 0.999) {
      double tail = tN1 / (1.0 - rho);
      if (tail < tol) return N;
    }
    N *= 2;
  }
  throw Error(ErrorCode::TailBoundExceeded,
              "no truncation achieves tail tolerance at s=" + std::to_string(s_min));
}

}  // namespace bowenlab
