#include "bowenlab/series.hpp"

#include <array>
#include <cmath>
#include <cstdint>

namespace bowenlab {

double binom_real(double s, int l) {
  if (l < 0) return 0.0;
  double v = 1.0;
  for (int i = 0; i < l; ++i) v *= (s - i) / (i + 1);
  return v;
}

namespace {
double factorial(int n) {
  double v = 1.0;
  for (int i = 2; i <= n; ++i) v *= i;
  return v;
}
}  // namespace

double a_coeff(int l, int j, double s) {
  if (l < j || j < 0) return 0.0;
  if (l == 0) return 1.0;  // j == 0 here
  if (j == l) return 1.0 / factorial(l);
  // binom(p,l) = prod_{i=0}^{l-1} ((p-s)+(s-i)) / l!; the coefficient of
  // (p-s)^j is e_{l-j}(s, s-1, ..., s-l+1)/l!.  Expand the product.
  std::vector<double> poly(l + 1, 0.0);  // poly[m] = coeff of x^m
  poly[0] = 1.0;
  for (int i = 0; i < l; ++i) {
    for (int m = i + 1; m >= 1; --m) poly[m] = poly[m - 1] + poly[m] * (s - i);
    poly[0] *= (s - i);
  }
  return poly[j] / factorial(l);
}

CompositionSet compositions(int k, int l) {
  CompositionSet cs;
  cs.k = k;
  cs.l = l;
  if (k == 0) {
    if (l == 0) cs.tuples.push_back({});
    return cs;
  }
  std::vector<int> tup(k, 0);
  auto rec = [&](auto&& self, int pos, int count_left, int weight_left) -> void {
    if (pos == k) {
      if (count_left == 0 && weight_left == 0) cs.tuples.push_back(tup);
      return;
    }
    const int i = pos + 1;
    int jmax = std::min(count_left, weight_left / i);
    for (int j = 0; j <= jmax; ++j) {
      tup[pos] = j;
      self(self, pos + 1, count_left - j, weight_left - i * j);
    }
    tup[pos] = 0;
  };
  rec(rec, 0, l, k);
  return cs;
}

double G_plk_log(double p, int l, int k, double lg, double sg,
                 const std::vector<double>& lgc,
                 const std::vector<double>& sgc) {
  if (k == 0) return std::exp(p * lg);
  CompositionSet cs = compositions(k, l);
  double sum = 0.0;
  const double lfact = factorial(l);
  // factors |g|^{p-l} and g_i^{j_i} can individually over/underflow for deep
  // truncations even when their product is moderate: combine exponents first
  const double base_log = (p - l) * lg;
  const double base_sign = (sg < 0.0 && (l % 2)) ? -1.0 : 1.0;
  for (const auto& tup : cs.tuples) {
    double mag = lfact, tlog = base_log, sign = base_sign;
    bool zero = false;
    for (int i = 0; i < k; ++i) {
      int j = tup[i];
      if (j == 0) continue;
      double si = i < static_cast<int>(sgc.size()) ? sgc[i] : 0.0;
      if (si == 0.0) {
        zero = true;
        break;
      }
      mag /= factorial(j);
      tlog += j * lgc[i];
      if (si < 0.0 && (j % 2)) sign = -sign;
    }
    if (!zero) sum += sign * mag * std::exp(tlog);
  }
  return sum;
}

double G_plk(double p, int l, int k, double g, const std::vector<double>& coeffs) {
  std::vector<double> lgc(coeffs.size()), sgc(coeffs.size());
  for (size_t i = 0; i < coeffs.size(); ++i) {
    sgc[i] = coeffs[i] > 0 ? 1.0 : (coeffs[i] < 0 ? -1.0 : 0.0);
    lgc[i] = std::log(std::fabs(coeffs[i]));
  }
  return G_plk_log(p, l, k, std::log(std::fabs(g)),
                   g > 0 ? 1.0 : (g < 0 ? -1.0 : 0.0), lgc, sgc);
}

double g_kp(double p, int k, double g, const std::vector<double>& coeffs) {
  double sum = 0.0;
  for (int l = 0; l <= k; ++l) sum += binom_real(p, l) * G_plk(p, l, k, g, coeffs);
  return sum;
}

double zeta_kp(double p, int k, double g, const std::vector<double>& gcoeffs,
               const std::vector<double>& psi) {
  double sum = 0.0;
  for (int i = 0; i <= k; ++i) {
    int m = k - i;
    double psim = m < static_cast<int>(psi.size()) ? psi[m] : 0.0;
    if (psim == 0.0) continue;
    sum += g_kp(p, i, g, gcoeffs) * psim;
  }
  return sum;
}

SeriesCoefficients series_product(const SeriesCoefficients& a,
                                  const SeriesCoefficients& b, int n) {
  SeriesCoefficients out;
  out.coeffs.assign(n + 1, 0.0);
  for (int i = 0; i <= std::min(n, a.order()); ++i)
    for (int j = 0; j <= std::min(n - i, b.order()); ++j)
      out.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  return out;
}

SeriesCoefficients series_power(const SeriesCoefficients& s, int k, int n) {
  SeriesCoefficients out;
  out.coeffs.assign(n + 1, 0.0);
  out.coeffs[0] = 1.0;
  for (int i = 0; i < k; ++i) out = series_product(out, s, n);
  return out;
}

SeriesCoefficients series_reciprocal(const SeriesCoefficients& s, int n) {
  if (s.coeffs.empty() || s.coeffs[0] == 0.0)
    throw Error(ErrorCode::ZeroMassNormalization,
                "series reciprocal needs nonzero constant term");
  SeriesCoefficients out;
  out.coeffs.assign(n + 1, 0.0);
  out.coeffs[0] = 1.0 / s.coeffs[0];
  for (int m = 1; m <= n; ++m) {
    double acc = 0.0;
    for (int j = 1; j <= std::min(m, s.order()); ++j)
      acc += s.coeffs[j] * out.coeffs[m - j];
    out.coeffs[m] = -acc / s.coeffs[0];
  }
  return out;
}

double series_power_coeff_display(int k, int i, const std::vector<double>& s_coeffs) {
  if (k == 0) return i == 0 ? 1.0 : 0.0;
  if (i <= k - 1) return 0.0;
  if (k == 1) return i <= static_cast<int>(s_coeffs.size()) ? s_coeffs[i - 1] : 0.0;
  // k >= 2, i >= k: sum over (j_1..j_{i-1}) with sum j = k, weighted sum = i
  // of s_1^{j_1}...s_{i-1}^{j_{i-1}} / (j_1!...j_{i-1}!), exactly as displayed
  // (no extra multinomial normalization -- see series_power for the
  // authoritative value).
  CompositionSet cs = compositions(i, k);  // tuples length i; entry i must be 0
  double sum = 0.0;
  for (const auto& tup : cs.tuples) {
    if (tup[i - 1] != 0) continue;  // display runs indices only up to i-1
    double term = 1.0;
    bool zero = false;
    for (int m = 0; m < i - 1; ++m) {
      int j = tup[m];
      if (j == 0) continue;
      double sm = m < static_cast<int>(s_coeffs.size()) ? s_coeffs[m] : 0.0;
      if (sm == 0.0) {
        zero = true;
        break;
      }
      term *= std::pow(sm, j) / factorial(j);
    }
    if (!zero) sum += term;
  }
  return sum;
}

namespace {
// 16-point Gauss-Legendre nodes/weights on [-1,1] (positive half; symmetric).
const std::array<double, 8> kGlNodes = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
const std::array<double, 8> kGlWeights = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

double gl16(double a, double b, const auto& f) {
  const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 8; ++i) {
    sum += kGlWeights[i] * (f(c + hw * kGlNodes[i]) + f(c - hw * kGlNodes[i]));
  }
  return hw * sum;
}
}  // namespace

double gamma_hat(double s, double p, int i, double abs_g) {
  const double lg = std::log(abs_g);
  const double c = (p - s) * lg;
  const double pref = std::pow(lg, i) / factorial(i - 1);
  auto f = [&](double u) { return std::pow(1.0 - u, i - 1) * std::exp(c * u); };
  double prev = 0.0;
  int panels = 1;
  for (int round = 0; round < 12; ++round) {
    double sum = 0.0;
    for (int j = 0; j < panels; ++j)
      sum += gl16(static_cast<double>(j) / panels,
                  static_cast<double>(j + 1) / panels, f);
    if (round > 0 && std::fabs(sum - prev) <= 1e-13 * std::fabs(sum))
      return pref * sum;
    prev = sum;
    panels *= 2;
  }
  return pref * prev;
}

}  // namespace bowenlab
