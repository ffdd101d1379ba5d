#include "bowenlab/bowen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "bowenlab/series.hpp"

namespace bowenlab {

int system_truncation(const DepthOneSystem& sys, double s_min, double eps_max) {
  if (sys.fixed_trunc > 0) return sys.fixed_trunc;
  if (!sys.countable()) return sys.graph.num_edges();
  return choose_truncation(sys.weights, sys.psi, s_min, eps_max);
}

TransferOperatorRealization system_edge_matrix(const DepthOneSystem& sys,
                                               double s, double eps, int N) {
  if (N == 0) N = system_truncation(sys, s, eps);
  return assemble_edge_matrix(sys.graph, sys.weights, sys.psi, s, eps, N);
}

BowenSolution solve_bowen(const DepthOneSystem& sys, double eps, double p0,
                          std::pair<double, double> hint) {
  BowenSolution sol;
  sol.p0 = p0;
  double lo = hint.first, hi = hint.second;
  int N = 0;
  auto trunc_for = [&](double s) {
    try {
      return system_truncation(sys, s, eps);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::TailBoundExceeded)
        throw Error(ErrorCode::PressureInfinite,
                    "pressure diverges near s=" + std::to_string(s));
      throw;
    }
  };
  N = trunc_for(lo);
  auto P = [&](double s) {
    return pressure(system_edge_matrix(sys, s, eps, N));
  };
  double plo = P(lo), phi = P(hi);
  int guard = 0;
  while (plo <= p0) {  // pressure too small on the left: move bracket down
    hi = lo;
    phi = plo;
    lo *= 0.5;
    N = trunc_for(lo);
    plo = P(lo);
    if (++guard > 60)
      throw Error(ErrorCode::BracketNotFound, "no s with pressure above p0");
  }
  guard = 0;
  while (phi >= p0) {
    lo = hi;
    plo = phi;
    hi *= 1.5;
    phi = P(hi);
    if (++guard > 60)
      throw Error(ErrorCode::BracketNotFound, "no s with pressure below p0");
  }
  sol.bracket_lo = lo;
  sol.bracket_hi = hi;
  int it = 0;
  while (it < 200) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at machine resolution
    double pm = P(mid);
    if (pm > p0)
      lo = mid;
    else
      hi = mid;
    ++it;
  }
  sol.iterations = it;
  sol.s_star = 0.5 * (lo + hi);
  sol.residual = std::fabs(P(sol.s_star) - p0);
  sol.truncation = N;
  if (sol.residual > 1e-11)
    throw Error(ErrorCode::NoRoot,
                "root residual " + std::to_string(sol.residual));
  return sol;
}

double dimension(const DepthOneSystem& sys, double eps) {
  try {
    return solve_bowen(sys, eps, 0.0).s_star;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BracketNotFound ||
        e.code() == ErrorCode::PressureInfinite)
      throw Error(ErrorCode::NotStronglyRegular, e.what());
    throw;
  }
}

namespace {

double factorial_d(int n) {
  double v = 1.0;
  for (int i = 2; i <= n; ++i) v *= i;
  return v;
}

// Per-edge expansion data in log-magnitude/sign form (exact for geometric
// families far past the underflow point of the raw weights).
struct EdgeLogData {
  double lg = 0.0, sg = 1.0;
  std::vector<double> lgc, sgc;
  std::vector<double> psi;
};

EdgeLogData edge_log_data(const DepthOneSystem& sys, int e, int n) {
  EdgeLogData d;
  d.lg = sys.weights.log_abs_base(e);
  d.sg = sys.weights.base_sign(e);
  const int ord = sys.weights.order();
  d.lgc.resize(ord);
  d.sgc.resize(ord);
  for (int k = 1; k <= ord; ++k) {
    d.lgc[k - 1] = sys.weights.log_abs_coeff(k, e);
    d.sgc[k - 1] = sys.weights.coeff_sign(k, e);
  }
  d.psi = sys.psi.coeffs_at(e, n);
  return d;
}

// h_{v,q,s} at one edge.
double h_vqs(int v, int q, double s0, const EdgeLogData& d) {
  double sum = 0.0;
  for (int k = 0; k <= v; ++k) {
    double psim = (v - k) < static_cast<int>(d.psi.size()) ? d.psi[v - k] : 0.0;
    if (psim == 0.0) continue;
    for (int l = 0; l <= k; ++l) {
      double G = G_plk_log(s0, l, k, d.lg, d.sg, d.lgc, d.sgc);
      if (G == 0.0) continue;
      for (int j = 0; j <= std::min(l, q); ++j) {
        sum += a_coeff(l, j, s0) / factorial_d(q - j) *
               std::pow(d.lg, q - j) * G * psim;
      }
    }
  }
  return sum;
}

}  // namespace

PerturbationOperatorSet assemble_perturbation_operators(
    const DepthOneSystem& sys, double s0, int n, int N) {
  PerturbationOperatorSet set;
  set.s0 = s0;
  set.order = n;
  auto hmax = [&](int e) {
    EdgeLogData d = edge_log_data(sys, e, n);
    double m = 0.0;
    for (int v = 0; v <= n; ++v)
      for (int q = 0; q <= n; ++q)
        m = std::max(m, std::fabs(h_vqs(v, q, s0, d)));
    return m;
  };
  if (N == 0) {
    if (!sys.countable()) {
      N = sys.graph.num_edges();
    } else if (sys.fixed_trunc > 0) {
      N = sys.fixed_trunc;
    } else {
      N = system_truncation(sys, s0, 0.0);
      // widen until the perturbation-operator entries have a negligible tail;
      // at the cap accept a still-small tail and record it as an uncertainty
      const int cap = 2048;
      while (true) {
        double t1 = hmax(N + 1), t2 = hmax(N + 2);
        if (t1 <= 0.0) break;
        double rho = t2 / t1;
        double tail = rho < 0.999 ? t1 / (1.0 - rho) : t1 * 1e3;
        if (tail < 1e-12) break;
        if (N >= cap) {
          if (tail < 1e-6) {
            set.tail_bound = tail;
            break;
          }
          throw Error(ErrorCode::TailBoundExceeded,
                      "perturbation operators need truncation beyond cap");
        }
        N = std::min(cap, N * 2);
      }
    }
  }
  set.truncation = N;

  const bool countable = sys.countable();
  const int m = std::max(n, 1);  // Z[0][1] is always needed downstream
  set.Z.assign(m + 1, std::vector<Eigen::MatrixXd>(m + 1));
  std::vector<double> hv((m + 1) * (m + 1));
  for (int v = 0; v <= m; ++v)
    for (int q = 0; q <= m; ++q)
      set.Z[v][q] = Eigen::MatrixXd::Zero(N, N);
  for (int e = 0; e < N; ++e) {
    EdgeLogData d = edge_log_data(sys, e + 1, m);
    for (int v = 0; v <= m; ++v)
      for (int q = 0; q <= m; ++q)
        hv[v * (m + 1) + q] = h_vqs(v, q, s0, d);
    for (int cyl = 0; cyl < N; ++cyl) {
      if (!countable && !sys.graph.incident(e, cyl)) continue;
      for (int v = 0; v <= m; ++v)
        for (int q = 0; q <= m; ++q)
          set.Z[v][q](cyl, e) = hv[v * (m + 1) + q];
    }
  }
  TransferOperatorRealization base;
  base.matrix = set.Z[0][0];
  base.truncation = N;
  set.triplet = rpf_triplet(base);
  return set;
}

ExpansionReport expansion_coeffs_recursion(const DepthOneSystem& sys, int n) {
  ExpansionReport rep;
  rep.order = n;
  rep.method = "recursion";

  const int probe = sys.countable() ? 256 : sys.graph.num_edges();
  ExponentReport ex = estimate_exponents(sys.weights, probe);
  double pbar = abscissa_p(sys.weights, sys.psi);
  rep.threshold_pn = threshold_p_n(n, ex.t, ex.t_tilde, pbar);

  BowenSolution sol = solve_bowen(sys, 0.0);
  rep.s0 = sol.s_star;
  rep.admissible = rep.s0 > rep.threshold_pn;
  if (!rep.admissible)
    throw Error(ErrorCode::AdmissibilityViolated,
                "s0=" + std::to_string(rep.s0) + " <= p(n)=" +
                    std::to_string(rep.threshold_pn));

  PerturbationOperatorSet ops =
      assemble_perturbation_operators(sys, rep.s0, n);
  const Eigen::VectorXd& h = ops.triplet.h;
  Eigen::RowVectorXd nu = ops.triplet.nu.transpose();
  const Eigen::VectorXd z01h = ops.Z[0][1] * h;
  const double denom = nu * z01h;
  if (std::fabs(denom) < 1e-10)
    throw Error(ErrorCode::DenominatorNearZero,
                "nu(Z_{0,1}h)=" + std::to_string(denom));

  std::vector<double> s;                     // s_1..s_k
  std::vector<Eigen::MatrixXd> Nu_ops;       // N_1..N_k
  for (int k = 1; k <= n; ++k) {
    // coefficients of (s(eps)-s0)^q through eps^k from the known s_1..s_{k-1}
    SeriesCoefficients partial;
    partial.coeffs.assign(k + 1, 0.0);
    for (int m = 1; m < k; ++m) partial.coeffs[m] = s[m - 1];
    std::vector<SeriesCoefficients> powers(k + 1);
    for (int q = 0; q <= k; ++q) powers[q] = series_power(partial, q, k);

    Eigen::MatrixXd Nk =
        Eigen::MatrixXd::Zero(ops.truncation, ops.truncation);
    for (int v = 0; v <= k; ++v) {
      for (int q = 0; q <= k - v; ++q) {
        if (v == 0 && q == 1) continue;
        double sq = powers[q].coeffs[k - v];
        if (sq != 0.0) Nk += sq * ops.Z[v][q];
      }
    }
    Nu_ops.push_back(Nk);

    std::vector<Eigen::RowVectorXd> nu_i = {nu};
    if (k >= 2) {
      OperatorFamily fam;
      fam.base = ops.Z[0][0];
      for (int u = 1; u <= k - 1; ++u)
        fam.orders.push_back(s[u - 1] * ops.Z[0][1] + Nu_ops[u - 1]);
      EigenExpansion exp = eigen_expansion(fam, k - 1);
      nu_i = exp.nu_coeffs;
    }

    double acc = 0.0;
    for (int i = 1; i <= k - 1; ++i)
      acc += nu_i[i].dot(z01h) * s[k - i - 1];  // s_{k-i}
    for (int i = 0; i <= k - 1; ++i) acc += nu_i[i].dot(Nu_ops[k - i - 1] * h);
    s.push_back(-acc / denom);
  }
  rep.coeffs = s;
  rep.uncertainty.assign(n, ops.tail_bound);
  return rep;
}

ExpansionReport expansion_coeffs_numeric(const DepthOneSystem& sys, int n,
                                         double eps_top, int levels) {
  ExpansionReport rep;
  rep.order = n;
  rep.method = "numeric-oracle";
  rep.s0 = solve_bowen(sys, 0.0).s_star;

  std::vector<double> eps(levels), sv(levels);
  for (int j = 0; j < levels; ++j) {
    eps[j] = eps_top / std::pow(2.0, j);
    sv[j] = solve_bowen(sys, eps[j]).s_star;
  }

  // Wynn epsilon on the ratio-2 grid: the even columns act like Pade
  // approximants in the level index and eliminate several geometric error
  // transients at once, so both the integer tail (ratio 1/2 per order) and
  // any fractional remainder order (ratio 2^-rho) are removed without
  // knowing rho in advance.
  auto wynn_tails = [](const std::vector<double>& f) {
    std::vector<double> prev2(f.size() + 1, 0.0), prev1 = f;
    std::vector<double> tails{prev1.back()};
    for (int col = 1; prev1.size() > 1; ++col) {
      std::vector<double> cur(prev1.size() - 1);
      for (std::size_t j = 0; j < cur.size(); ++j) {
        double diff = prev1[j + 1] - prev1[j];
        cur[j] = prev2[j + 1] + (diff != 0.0 ? 1.0 / diff : 1e300);
      }
      prev2.swap(prev1);
      prev1.swap(cur);
      if (col % 2 == 0 && std::isfinite(prev1.back()))
        tails.push_back(prev1.back());
    }
    return tails;
  };
  auto estimate = [&](const std::vector<double>& f, double noise) {
    std::vector<double> tails = wynn_tails(f);
    double best = tails.back(), best_d =
        std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < tails.size(); ++i) {
      double d = std::fabs(tails[i] - tails[i - 1]);
      if (d < best_d) {
        best_d = d;
        best = tails[i];
      }
    }
    // spread of the deepest even columns flags a remainder the table could
    // not resolve (nearly degenerate exponents)
    double lo = best, hi = best;
    for (std::size_t i = tails.size() >= 3 ? tails.size() - 3 : 0;
         i < tails.size(); ++i) {
      lo = std::min(lo, tails[i]);
      hi = std::max(hi, tails[i]);
    }
    return std::pair<double, double>(best, (hi - lo) + best_d + noise);
  };

  // Chained estimates: the order-k sequence divides out eps^k, so errors in
  // lower coefficients grow down the grid.  Re-polishing each coefficient
  // with the others subtracted removes that feedback.
  std::vector<double> coeffs(n, 0.0), unc(n, 0.0);
  for (int pass = 0; pass < 3; ++pass) {
    for (int k = 1; k <= n; ++k) {
      std::vector<double> f(levels);
      for (int j = 0; j < levels; ++j) {
        double partial = rep.s0;
        for (int m = 1; m <= n; ++m)
          if (m != k) partial += coeffs[m - 1] * std::pow(eps[j], m);
        f[j] = (sv[j] - partial) / std::pow(eps[j], k);
      }
      double noise = 1e-15 / std::pow(eps[levels - 1], k);
      std::tie(coeffs[k - 1], unc[k - 1]) = estimate(f, noise);
    }
  }
  for (int k = 1; k <= n; ++k) {
    if (unc[k - 1] > std::max(1e-2, 0.75 * std::fabs(coeffs[k - 1])))
      throw Error(ErrorCode::GridTooCoarse,
                  "extrapolation unstable at order " + std::to_string(k));
    rep.coeffs.push_back(coeffs[k - 1]);
    rep.uncertainty.push_back(unc[k - 1]);
  }
  return rep;
}

namespace {
// sum_{e>=1} e^m r^e
double polylog_sum(int m, double r) {
  if (r >= 1.0)
    throw Error(ErrorCode::SeriesDivergent,
                "inner sum ratio " + std::to_string(r) + " >= 1");
  double sum = 0.0, re = 1.0;
  for (int e = 1; e < 100000; ++e) {
    re *= r;
    double term = std::pow(static_cast<double>(e), m) * re;
    sum += term;
    if (term < 1e-17 * std::max(1.0, std::fabs(sum)) && e > m + 4) break;
  }
  return sum;
}
}  // namespace

double closed_form_sk_ifs1(int k, double a) {
  const double log5 = std::log(5.0);
  const double s0 = std::log(2.0) / log5;
  std::vector<double> s;  // s_1..s_{kk-1}
  for (int kk = 1; kk <= k; ++kk) {
    SeriesCoefficients partial;
    partial.coeffs.assign(kk + 1, 0.0);
    for (int m = 1; m < kk; ++m) partial.coeffs[m] = s[m - 1];
    double sum = 0.0;
    for (int v = 0; v <= kk; ++v) {
      for (int q = 0; q <= kk - v; ++q) {
        if (v == 0 && q == 1) continue;
        double sq = series_power(partial, q, kk).coeffs[kk - v];
        if (sq == 0.0) continue;
        double r = std::pow(5.0 / a, v) / 2.0;
        for (int j = 0; j <= std::min(v, q); ++j) {
          sum += sq * a_coeff(v, j, s0) / factorial_d(q - j) *
                 std::pow(-log5, q - j) * polylog_sum(q - j, r);
        }
      }
    }
    s.push_back(sum / (2.0 * log5));
  }
  return s.back();
}

double display_s1_ifs1(double a) {
  const double log5 = std::log(5.0);
  return std::log(2.0) / (log5 * log5) * 5.0 / (4.0 * a - 10.0);
}

double display_s2_ifs1(double a) {
  const double log2 = std::log(2.0), log5 = std::log(5.0);
  double t1 = 1.0 / (2.0 * (2.0 * a - 5.0) * (2.0 * a - 5.0));
  double t2 = a * log2 / ((2.0 * a - 5.0) * std::pow(4.0 * a * a - 5.0, 2));
  double t3 = std::log(2.0 / 5.0) / (8.0 * a * a - 100.0);
  return 25.0 * log2 / std::pow(log5, 3) * (t1 - t2 + t3);
}

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i)
    g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  return g;
}

std::vector<std::pair<double, double>> remainder_samples(
    const DepthOneSystem& sys, double s0, const std::vector<double>& coeffs,
    const std::vector<double>& eps_grid) {
  std::vector<std::pair<double, double>> out(eps_grid.size());
  int threads = 1;
  if (const char* env = std::getenv("BOWEN_LAB_THREADS"))
    threads = std::max(1, std::atoi(env));
  threads = std::min<int>(threads, static_cast<int>(eps_grid.size()));
  auto work = [&](int start, int step) {
    for (size_t i = start; i < eps_grid.size(); i += step) {
      double eps = eps_grid[i];
      double s_eps = solve_bowen(sys, eps).s_star;
      double partial = s0;
      for (size_t m = 1; m <= coeffs.size(); ++m)
        partial += coeffs[m - 1] * std::pow(eps, static_cast<double>(m));
      out[i] = {eps, s_eps - partial};
    }
  };
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }
  return out;
}

OrderFit remainder_order_fit(const std::vector<double>& eps,
                             const std::vector<double>& residuals) {
  std::vector<double> x, y, xlog;  // log eps, log|r|, log|log eps|
  for (size_t i = 0; i < eps.size(); ++i) {
    if (std::fabs(residuals[i]) < 1e-13) continue;
    x.push_back(std::log(eps[i]));
    y.push_back(std::log(std::fabs(residuals[i])));
    xlog.push_back(std::log(std::fabs(std::log(eps[i]))));
  }
  if (x.size() < 5)
    throw Error(ErrorCode::ResidualUnderflow,
                "only " + std::to_string(x.size()) + " usable residuals");

  auto fit = [&](bool with_log, size_t begin, size_t end, double* sse) {
    // least squares of y = c + p x (+ 1 * xlog)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (size_t i = begin; i < end; ++i) {
      double yi = y[i] - (with_log ? xlog[i] : 0.0);
      sx += x[i];
      sy += yi;
      sxx += x[i] * x[i];
      sxy += x[i] * yi;
      ++cnt;
    }
    double p = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    double c = (sy - p * sx) / cnt;
    if (sse) {
      *sse = 0.0;
      for (size_t i = begin; i < end; ++i) {
        double yi = y[i] - (with_log ? xlog[i] : 0.0);
        double d = yi - (c + p * x[i]);
        *sse += d * d;
      }
    }
    return p;
  };

  double sse_pow = 0, sse_log = 0;
  double p_pow = fit(false, 0, x.size(), &sse_pow);
  double p_log = fit(true, 0, x.size(), &sse_log);
  OrderFit out;
  if (sse_log < sse_pow) {
    out.model = "power-log";
    out.exponent = p_log;
    out.goodness = std::sqrt(sse_log / x.size());
  } else {
    out.model = "pure-power";
    out.exponent = p_pow;
    out.goodness = std::sqrt(sse_pow / x.size());
  }
  const bool with_log = out.model == "power-log";
  size_t half = x.size() / 2;
  double pa = fit(with_log, 0, half, nullptr);
  double pb = fit(with_log, half, x.size(), nullptr);
  out.uncertainty = 0.5 * std::fabs(pa - pb);
  return out;
}

}  // namespace bowenlab
