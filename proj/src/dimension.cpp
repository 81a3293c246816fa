#include "betarec/dimension.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "betarec/error.hpp"

namespace betarec {

namespace {

double log_mpz(const mpz_class& z) {
  mpfr_t v;
  mpfr_init2(v, 128);
  mpfr_set_z(v, z.get_mpz_t(), MPFR_RNDN);
  mpfr_log(v, v, MPFR_RNDN);
  const double out = mpfr_get_d(v, MPFR_RNDN);
  mpfr_clear(v);
  return out;
}

struct Fit {
  double slope = 0.0;
  double se = 0.0;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto k = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Fit f;
  f.slope = sxy / sxx;
  if (x.size() > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - my - f.slope * (x[i] - mx);
      rss += r * r;
    }
    f.se = std::sqrt(rss / (k - 2) / sxx);
  }
  return f;
}

void check_range(std::size_t n_lo, std::size_t n_hi) {
  if (n_lo == 0 || n_hi <= n_lo) throw Error(ErrorKind::InvalidArgument, "need 1 <= n_lo < n_hi");
}

// Cylinder counts at orders n_lo..n_hi from the minimum LCPs between
// consecutive selected points in sorted order.
std::vector<double> log_counts_from_gaps(const std::vector<std::size_t>& gaps, std::size_t n_lo,
                                         std::size_t n_hi) {
  std::vector<std::size_t> hist(n_hi + 2, 0);
  for (std::size_t g : gaps) ++hist[std::min(g, n_hi + 1)];
  std::vector<double> out;
  std::size_t below = 0;  // gaps with lcp < n
  std::size_t n = 0;
  for (; n < n_lo; ++n) below += hist[n];
  for (; n <= n_hi; ++n) {
    out.push_back(std::log(static_cast<double>(1 + below)));
    below += hist[n];
  }
  return out;
}

// Per-plan data for the canonical-branch cylinder count.
struct BranchCounter {
  const CantorPlan& plan;
  double log_m_set = 0.0;
  std::vector<double> log_prefixes;  // log of distinct j-prefixes of the M-set, j < M

  explicit BranchCounter(const CantorPlan& p) : plan(p) {
    const Word u = plan.blocks->unrank(1);
    MSet ms(plan.blocks, u);
    log_m_set = log_mpz(ms.count());
    for (std::size_t j = 0; j < plan.M; ++j) log_prefixes.push_back(log_mpz(ms.distinct_prefixes(j)));
  }

  double operator()(std::size_t n) const {
    const auto m_end = static_cast<std::size_t>(plan.m.back());
    if (n > m_end) throw Error(ErrorKind::InvalidArgument, "order exceeds m_K of the plan");
    double blocks = 0.0;  // full M-blocks chosen before n
    double partial = 0.0;
    for (std::size_t k = 0; k + 1 < plan.K(); ++k) {
      const auto mk = static_cast<std::size_t>(plan.m[k]);
      if (n <= mk) break;
      const auto t = static_cast<std::size_t>(plan.t[k]);
      const std::size_t into = n - mk;
      const std::size_t full = std::min(t, into / plan.M);
      blocks += static_cast<double>(full);
      if (full < t) partial = log_prefixes[into - full * plan.M];
    }
    return blocks * log_m_set + partial;
  }
};

}  // namespace

DimValue dim_R(double r_hat, double r) {
  if (r_hat < 0 || !(r >= 0)) throw Error(ErrorKind::Domain, "need r_hat >= 0 and r >= 0");
  if (std::isinf(r)) return dim_R(r_hat, Exponent::inf());
  // r = 0: the limit 1/(1+r) at r_hat = 0, countable otherwise.
  if (r == 0) return r_hat == 0 ? DimValue{1.0, false} : DimValue{0.0, true};
  if (r_hat > r / (1 + r)) return {0.0, true};
  const double v = (r - (1 + r) * r_hat) / ((1 + r) * (r - r_hat));
  return {std::max(0.0, v), false};
}

DimValue dim_R(double r_hat, const Exponent& r) {
  if (!r.infinite) return dim_R(r_hat, r.value);
  if (r_hat < 0) throw Error(ErrorKind::Domain, "need r_hat >= 0");
  return {0.0, r_hat > 1};
}

mpq_class dim_R_exact(const mpq_class& r_hat, const mpq_class& r) {
  if (r_hat < 0 || r < 0) throw Error(ErrorKind::Domain, "need r_hat >= 0 and r >= 0");
  if (r == 0 && r_hat == 0) return 1;
  if (r_hat > r / (1 + r)) {
    throw Error(ErrorKind::CountableRegime, "countable regime: r_hat exceeds r/(1+r)");
  }
  mpq_class v = (r - (1 + r) * r_hat) / ((1 + r) * (r - r_hat));
  v.canonicalize();
  return v;
}

DimValue dim_uniform(double r_hat) {
  if (r_hat < 0) throw Error(ErrorKind::Domain, "need r_hat >= 0");
  if (r_hat > 1) return {0.0, true};
  const double q = (1 - r_hat) / (1 + r_hat);
  return {q * q, false};
}

mpq_class dim_uniform_exact(const mpq_class& r_hat) {
  if (r_hat < 0) throw Error(ErrorKind::Domain, "need r_hat >= 0");
  if (r_hat > 1) throw Error(ErrorKind::CountableRegime, "countable regime: r_hat exceeds 1");
  mpq_class q = (1 - r_hat) / (1 + r_hat);
  q.canonicalize();
  return q * q;
}

Exponent maximizer(double r_hat) {
  if (r_hat < 0 || r_hat > 1) throw Error(ErrorKind::Domain, "need 0 <= r_hat <= 1");
  if (r_hat == 1) return Exponent::inf();
  return {false, 2 * r_hat / (1 - r_hat)};
}

std::vector<mpq_class> dimension_series(const std::vector<std::int64_t>& n,
                                        const std::vector<std::int64_t>& m, std::size_t k_max) {
  if (k_max == 0 || k_max > n.size() || k_max > m.size()) {
    throw Error(ErrorKind::InvalidArgument, "level out of range");
  }
  std::vector<mpq_class> out;
  mpz_class gaps = 0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    if (k >= 2) gaps += n[k - 1] - m[k - 2];
    mpq_class v(gaps, mpz_class(static_cast<long>(m[k - 1])));
    v.canonicalize();
    out.push_back(v);
  }
  return out;
}

DimReport local_dimension_series(const CantorPlan& plan, std::size_t k_max) {
  if (k_max == 0 || k_max > plan.K()) throw Error(ErrorKind::InvalidArgument, "level out of range");
  DimReport out;
  const DimValue f = dim_R(plan.r_hat.get_d(), plan.r.get_d());
  out.formula_value = f.value;
  out.countable = f.countable;
  out.delta = plan.delta.get_d();
  out.series = dimension_series(plan.n, plan.m, k_max);
  for (const auto& v : out.series) out.series_values.push_back(v.get_d());

  // log #G_k = log #D_1 + sum_{i < k} t_i log #M along the canonical branch.
  LevelCounts c = level_counts(plan, 1);
  const double log_d1 = log_mpz(c.D[0]);
  const double log_m = log_mpz(c.m_set);
  const double log_beta = std::log(plan.beta.approx());
  double log_g = log_d1;
  for (std::size_t k = 1; k <= k_max; ++k) {
    if (k >= 2) log_g += static_cast<double>(plan.t[k - 2]) * log_m;
    const auto mk = static_cast<double>(plan.m[k - 1]);
    out.mu_log_ratios.push_back(
        {log_g / ((mk + static_cast<double>(plan.N)) * log_beta), log_g / (mk * log_beta)});
    out.n_over_m.push_back(static_cast<double>(plan.n[k - 1]) / mk);
    if (k >= 2) out.m_growth.push_back(mk / static_cast<double>(plan.m[k - 2]));
  }
  return out;
}

BoxCount boxcount(const std::vector<OrbitView>& points, const BetaContext& ctx, std::size_t n_lo,
                  std::size_t n_hi, BoxCountOptions options) {
  check_range(n_lo, n_hi);
  if (points.empty()) throw Error(ErrorKind::InvalidArgument, "no points");
  std::vector<Word> words;
  words.reserve(points.size());
  for (const OrbitView& p : points) {
    if (p.ensure(n_hi) < n_hi) throw Error(ErrorKind::InsufficientDepth, "point shorter than n_hi");
    words.push_back(p.prefix(n_hi));
  }
  std::sort(words.begin(), words.end());
  std::vector<std::size_t> lcp(words.size(), 0);  // lcp[i] between words i-1 and i
  for (std::size_t i = 1; i < words.size(); ++i) {
    std::size_t l = 0;
    while (l < n_hi && words[i][l] == words[i - 1][l]) ++l;
    lcp[i] = l;
  }
  const double log_beta = std::log(ctx.approx());
  BoxCount out;
  std::vector<double> x;
  for (std::size_t n = n_lo; n <= n_hi; ++n) {
    out.n.push_back(n);
    x.push_back(static_cast<double>(n) * log_beta);
  }
  out.log_count = log_counts_from_gaps({lcp.begin() + 1, lcp.end()}, n_lo, n_hi);
  out.slope = least_squares(x, out.log_count).slope;

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::vector<double> slopes;
  std::vector<std::size_t> hits(words.size());
  std::vector<std::size_t> gaps;
  for (std::size_t b = 0; b < options.bootstrap; ++b) {
    std::fill(hits.begin(), hits.end(), 0);
    for (std::size_t i = 0; i < words.size(); ++i) ++hits[pick(rng)];
    gaps.clear();
    bool started = false;
    std::size_t run_min = n_hi;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (started) run_min = std::min(run_min, lcp[i]);
      if (hits[i] == 0) continue;
      if (started) gaps.push_back(run_min);
      started = true;
      run_min = n_hi;
    }
    slopes.push_back(least_squares(x, log_counts_from_gaps(gaps, n_lo, n_hi)).slope);
  }
  if (slopes.empty()) {
    out.ci_lower = out.ci_upper = out.slope;
  } else {
    std::sort(slopes.begin(), slopes.end());
    const double a = (1 - options.confidence) / 2;
    auto at = [&](double q) {
      const auto i = static_cast<std::size_t>(std::floor(q * static_cast<double>(slopes.size() - 1)));
      return slopes[i];
    };
    out.ci_lower = at(a);
    out.ci_upper = at(1 - a);
  }
  return out;
}

double construction_log_count(const CantorPlan& plan, std::size_t n) {
  return BranchCounter(plan)(n);
}

BoxCount construction_boxcount(const CantorPlan& plan, std::size_t n_lo, std::size_t n_hi) {
  check_range(n_lo, n_hi);
  BranchCounter count(plan);
  const double log_beta = std::log(plan.beta.approx());
  BoxCount out;
  std::vector<double> x;
  for (std::size_t n = n_lo; n <= n_hi; ++n) {
    out.n.push_back(n);
    x.push_back(static_cast<double>(n) * log_beta);
    out.log_count.push_back(count(n));
  }
  const Fit f = least_squares(x, out.log_count);
  out.slope = f.slope;
  out.ci_lower = f.slope - 1.96 * f.se;
  out.ci_upper = f.slope + 1.96 * f.se;
  return out;
}

}  // namespace betarec
