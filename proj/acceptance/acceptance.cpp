// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "betarec/cantor.hpp"
#include "betarec/dimension.hpp"
#include "betarec/error.hpp"
#include "betarec/expansion.hpp"
#include "betarec/language.hpp"
#include "betarec/recurrence.hpp"

using namespace betarec;

namespace {

// Pinned tolerances and sizes.
constexpr std::size_t kRandomWords = 10000;
constexpr std::size_t kGridPoints = 100000;
constexpr std::size_t kGridDigits = 20;
constexpr double kLanguageSeconds = 30.0;
constexpr std::size_t kFibonacciMax = 25;
constexpr std::size_t kRenyiMax = 20;
constexpr std::size_t kFullWindowMax = 12;
constexpr std::size_t kCylinderMax = 10;
constexpr double kLengthSumTolerance = 1e-12;
constexpr double kEqualityRelative = 1e-24;
constexpr std::size_t kCylinderRefine = 128;
constexpr std::size_t kBracketPoints = 50;
constexpr std::size_t kBracketLevels = 5;
constexpr std::size_t kRecoverySamples = 30;
constexpr double kRecoveryTolerance = 0.10;
constexpr double kRecoveryFraction = 0.90;
constexpr double kRecoverySeconds = 300.0;
constexpr std::size_t kRecoveryExtraDigits = 256;
constexpr double kSeriesTolerance = 1e-3;
constexpr std::size_t kSeriesLevels = 20;
constexpr std::size_t kMuLevels = 8;
constexpr double kMuBand = 0.05;
constexpr double kIdentityTolerance = 1e-12;
constexpr std::size_t kGrid = 100;
constexpr std::size_t kUniformTrials = 200;
constexpr std::size_t kUniformNmax = 2000;
constexpr double kUniformRhat = 0.05;
constexpr double kUniformFraction = 0.95;
constexpr std::size_t kBoxPoints = 10000;
constexpr double kBoxUniformTolerance = 0.05;
constexpr double kBoxLow = 0.25;
constexpr double kBoxHigh = 0.50;

// Base and delta for the Cantor construction criteria.
const char* const kConstructionBase = "2.5";
const mpq_class kDelta(1, 10);

const std::vector<const char*> kBases = {"golden", "1.8", "2", "2.5", "3.7"};

struct Result {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

int top_digit(const BetaContext& ctx) { return static_cast<int>(std::ceil(ctx.approx())) - 1; }

// Interval-certain a <= b, or a tie within kEqualityRelative of b > 0.
bool certainly_le(const BoundedReal& a, const BoundedReal& b) {
  const Ordering o = compare(a, b);
  if (o == Ordering::Less) return true;
  if (o == Ordering::Greater) return false;
  return (a - b).abs().upper_double() <= kEqualityRelative * b.lower_double();
}

Result language() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1);
  std::size_t random_mismatch = 0, grid_mismatch = 0, accepted = 0;
  for (const char* name : kBases) {
    auto ctx = BetaContext::parse(name);
    const int top = top_digit(ctx);
    std::uniform_int_distribution<int> digit(0, top);
    std::uniform_int_distribution<std::size_t> length(1, 30);
    for (std::size_t i = 0; i < kRandomWords; ++i) {
      Word w;
      const std::size_t len = length(rng);
      if (i % 2 == 0) {
        for (std::size_t j = 0; j < len; ++j) w.push_back(static_cast<Digit>(digit(rng)));
      } else {
        // Admissible word with one digit nudged, so both answers occur often.
        w = expand_rational(uniform_rational(rng, 64), ctx, len);
        const std::size_t j = rng() % len;
        w[j] = static_cast<Digit>(std::clamp(static_cast<int>(w[j]) + static_cast<int>(rng() % 3) - 1, 0, top));
      }
      const bool a = is_admissible(w, ctx);
      accepted += a;
      if (a != is_admissible_naive(w, ctx)) ++random_mismatch;
    }
    for (std::size_t i = 0; i < kGridPoints; ++i) {
      const Word w = expand_rational(mpq_class(static_cast<long>(i), static_cast<long>(kGridPoints)), ctx, kGridDigits);
      if (!is_admissible(w, ctx) || !is_admissible_naive(w, ctx)) ++grid_mismatch;
    }
  }
  const double t = seconds_since(t0);
  return {random_mismatch == 0 && grid_mismatch == 0 && t < kLanguageSeconds,
          "random mismatches " + std::to_string(random_mismatch) + " (" + std::to_string(accepted) +
              " admissible), grid mismatches " + std::to_string(grid_mismatch) + ", " + fmt(t) + " s"};
}

Result counting() {
  std::size_t bad = 0;
  auto golden = BetaContext::parse("golden");
  mpz_class a = 1, b = 2;  // F_2, F_3
  for (std::size_t n = 1; n <= kFibonacciMax; ++n) {
    if (count_admissible(golden, n) != b) ++bad;
    mpz_class c = a + b;
    a = b;
    b = c;
  }
  std::size_t renyi_bad = 0;
  for (const char* name : kBases) {
    auto ctx = BetaContext::parse(name);
    const BoundedReal beta = ctx.value(512);
    for (std::size_t n = 1; n <= kRenyiMax; ++n) {
      const mpz_class c = count_admissible(ctx, n);
      if (auto q = ctx.rational_value()) {
        mpq_class lo = 1;
        for (std::size_t i = 0; i < n; ++i) lo *= *q;
        const mpq_class hi = lo * *q / (*q - 1);
        if (!(lo <= c && c <= hi)) ++renyi_bad;
      } else {
        const BoundedReal cc = BoundedReal::from_integer(c, 512);
        const BoundedReal lo = beta.pow(static_cast<long>(n));
        const BoundedReal hi = beta.pow(static_cast<long>(n) + 1) / (beta - BoundedReal(1, 512));
        if (!certainly_le(lo, cc) || !certainly_le(cc, hi)) ++renyi_bad;
      }
    }
  }
  return {bad == 0 && renyi_bad == 0,
          "Fibonacci mismatches " + std::to_string(bad) + ", Renyi violations " + std::to_string(renyi_bad)};
}

Result full_windows() {
  std::size_t violations = 0, scans = 0;
  for (const char* name : kBases) {
    auto ctx = BetaContext::parse(name);
    for (std::size_t n = 1; n <= kFullWindowMax; ++n) {
      ++scans;
      if (!full_window_check(ctx, n).holds) ++violations;
    }
  }
  return {violations == 0, std::to_string(scans) + " scans, " + std::to_string(violations) + " violations"};
}

Result cylinder_geometry() {
  struct Pair {
    const char* beta;
    std::size_t N;
  };
  std::size_t checked = 0, violations = 0, sum_bad = 0;
  double worst_sum = 0;
  for (Pair p : {Pair{"2.5", 5}, Pair{"1.8", 4}}) {
    auto ctx = BetaContext::parse(p.beta);
    auto ctx_n = approximate_beta(ctx, p.N);
    const BoundedReal beta = ctx.value(256);
    for (std::size_t n = 1; n <= kCylinderMax; ++n) {
      const BoundedReal upper = beta.pow(-static_cast<long>(n));
      const BoundedReal lower = beta.pow(-static_cast<long>(n + p.N));
      AdmissibleEnumerator sub(ctx_n, n);
      Word w;
      while (sub.next(w)) {
        const Cylinder c = cylinder(w, ctx, kCylinderRefine);
        ++checked;
        if (!certainly_le(lower, c.length) || !certainly_le(c.length, upper)) ++violations;
      }
      BoundedReal total(0, 256);
      AdmissibleEnumerator all(ctx, n);
      while (all.next(w)) total += cylinder(w, ctx, kCylinderRefine).length;
      const double dev = std::max(std::fabs(total.lower_double() - 1), std::fabs(total.upper_double() - 1));
      worst_sum = std::max(worst_sum, dev);
      if (dev > kLengthSumTolerance) ++sum_bad;
    }
  }
  return {violations == 0 && sum_bad == 0, std::to_string(checked) + " cylinders, " + std::to_string(violations) +
                                               " bound violations, worst |sum - 1| " + fmt(worst_sum)};
}

Result bracketing() {
  auto ctx = BetaContext::parse(kConstructionBase);
  const CantorPlan plan = make_plan(ctx, mpq_class(1, 5), 1, kDelta, 6);
  // A point cut at m_K is an exact square and so periodic; stop one digit short.
  const auto depth = static_cast<std::size_t>(plan.m.back()) - 1;
  const BoundedReal beta = ctx.value(256);
  std::size_t entries = 0, bracket_bad = 0, form_bad = 0;
  std::string first;
  for (std::size_t s = 0; s < kBracketPoints; ++s) {
    OrbitView x = sample_point(plan, 1000 + s, depth);
    const ReturnProfile p = extract_returns(x, kBracketLevels, true);
    for (std::size_t k = 0; k < p.size() && k < kBracketLevels; ++k) {
      ++entries;
      const long g = static_cast<long>(p.m[k] - p.n[k]);
      if (compare(p.distance[k], beta.pow(-g)) != Ordering::Less ||
          compare(beta.pow(-g - 1), p.distance[k]) == Ordering::Greater) {
        ++bracket_bad;
      }
      try {
        (void)classify_prefix(x, k + 1, p);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::FormViolation) throw;
        if (form_bad++ == 0) first = " (first: seed " + std::to_string(1000 + s) + ", k=" + std::to_string(k + 1) + ")";
      }
    }
  }
  return {bracket_bad == 0 && form_bad == 0,
          std::to_string(entries) + " entries at beta=" + kConstructionBase + ", bracketing failures " +
              std::to_string(bracket_bad) + ", form violations " + std::to_string(form_bad) + first};
}

Result recovery() {
  auto ctx = BetaContext::parse(kConstructionBase);
  const std::vector<std::pair<mpq_class, mpq_class>> targets = {
      {mpq_class(1, 5), 1}, {mpq_class(1, 3), 1}, {0, mpq_class(1, 2)}};
  bool pass = true;
  std::string detail;
  for (const auto& [r_hat, r] : targets) {
    const auto t0 = std::chrono::steady_clock::now();
    const CantorPlan plan = make_plan(ctx, r_hat, r, kDelta, 7);
    const auto n_max = static_cast<std::size_t>(plan.n[5]);
    const auto depth = static_cast<std::size_t>(plan.m[5]) + kRecoveryExtraDigits;
    std::size_t ok_r = 0, ok_rh = 0;
    for (std::size_t s = 0; s < kRecoverySamples; ++s) {
      const ExponentEstimate e = estimate_exponents(sample_point(plan, s, depth), n_max);
      ok_r += std::fabs(e.r.ordered() - r.get_d()) <= kRecoveryTolerance;
      ok_rh += std::fabs(e.r_hat.ordered() - r_hat.get_d()) <= kRecoveryTolerance;
    }
    const double t = seconds_since(t0);
    const double need = kRecoveryFraction * kRecoverySamples;
    pass = pass && ok_r >= need && ok_rh >= need && t < kRecoverySeconds;
    if (!detail.empty()) detail += "; ";
    detail += "(" + fmt(r_hat.get_d()) + "," + fmt(r.get_d()) + ") r " + std::to_string(ok_r) + "/30 r_hat " +
              std::to_string(ok_rh) + "/30 in " + fmt(t) + " s";
  }
  return {pass, detail};
}

Result series() {
  const SequencePlan s = plan_sequences(mpq_class(1, 5), 1, kSeriesLevels);
  const mpq_class v = dimension_series(s.n, s.m, kSeriesLevels).back();
  const mpq_class target = dim_R_exact(mpq_class(1, 5), 1);
  const bool series_ok = abs(v - target) < mpq_class(kSeriesTolerance);

  auto ctx = BetaContext::parse(kConstructionBase);
  const CantorPlan plan = make_plan(ctx, mpq_class(1, 5), 1, kDelta, kMuLevels);
  const DimReport r = local_dimension_series(plan, kMuLevels);
  const double dim = target.get_d(), delta = kDelta.get_d();
  const RatioBounds mu = r.mu_log_ratios.back();
  const double lo = (1 - delta) * dim - kMuBand, hi = dim + kMuBand;
  const bool mu_ok = mu.lower >= lo && mu.upper <= hi;
  return {series_ok && mu_ok, "series at k=20 " + fmt(v.get_d()) + ", mu log-ratio at k=8 in [" + fmt(mu.lower) +
                                  ", " + fmt(mu.upper) + "] vs band [" + fmt(lo) + ", " + fmt(hi) + "] (N=" +
                                  std::to_string(plan.N) + ", M=" + std::to_string(plan.M) + ")"};
}

Result identities() {
  double worst_a = 0, worst_b = 0;
  for (std::size_t i = 0; i < kGrid; ++i) {
    const double r = 0.01 + 10.0 * static_cast<double>(i) / kGrid;
    worst_a = std::max(worst_a, std::fabs(dim_R(0.0, r).value - 1 / (1 + r)));
    const double rh = 0.99 * static_cast<double>(i) / kGrid;
    const double q = (1 - rh) / (1 + rh);
    worst_b = std::max(worst_b, std::fabs(dim_R(rh, maximizer(rh)).value - q * q));
  }
  return {worst_a <= kIdentityTolerance && worst_b <= kIdentityTolerance,
          "worst errors " + fmt(worst_a) + " and " + fmt(worst_b)};
}

Result full_measure() {
  bool pass = true;
  std::string detail;
  for (const char* name : {"golden", "2.5"}) {
    auto ctx = BetaContext::parse(name);
    std::mt19937_64 rng(9);
    std::size_t ok = 0;
    double worst = 0;
    for (std::size_t i = 0; i < kUniformTrials; ++i) {
      const mpq_class x0 = uniform_rational(rng, bits_for_digits(ctx, 2 * kUniformNmax + 256));
      const ExponentEstimate e = estimate_exponents(OrbitView::from_rational(ctx, x0), kUniformNmax);
      ok += e.r_hat.ordered() <= kUniformRhat;
      worst = std::max(worst, e.r_hat.ordered());
    }
    pass = pass && ok >= kUniformFraction * kUniformTrials;
    if (!detail.empty()) detail += "; ";
    detail += std::string(name) + " " + std::to_string(ok) + "/200 (max r_hat " + fmt(worst) + ")";
  }
  return {pass, detail};
}

Result box_counts() {
  auto two = BetaContext::parse("2");
  std::mt19937_64 rng(11);
  std::vector<OrbitView> pts;
  for (std::size_t i = 0; i < kBoxPoints; ++i) {
    pts.push_back(OrbitView::from_rational(two, uniform_rational(rng, 64)));
  }
  const BoxCount u = boxcount(pts, two, 2, 10, {200, 0.95, 11});
  auto ctx = BetaContext::parse(kConstructionBase);
  const CantorPlan plan = make_plan(ctx, mpq_class(1, 5), 1, kDelta, 6);
  const BoxCount c = construction_boxcount(plan, static_cast<std::size_t>(plan.m[0]), static_cast<std::size_t>(plan.m[4]));
  const bool pass = std::fabs(u.slope - 1) <= kBoxUniformTolerance && c.slope >= kBoxLow && c.slope <= kBoxHigh;
  return {pass, "uniform slope " + fmt(u.slope) + ", construction slope " + fmt(c.slope) + " over n in [" +
                    std::to_string(plan.m[0]) + ", " + std::to_string(plan.m[4]) + "]"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"language correctness", language},     {"counting", counting},
      {"full-cylinder windows", full_windows}, {"cylinder geometry", cylinder_geometry},
      {"recurrence bracketing", bracketing},  {"exponent recovery", recovery},
      {"exact dimension series", series},     {"formula identities", identities},
      {"full-measure statistics", full_measure}, {"box-count sanity", box_counts},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("error: ") + e.what()};
    }
    failures += !r.pass;
    std::printf("%s %zu %s: %s [%.1f s]\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                r.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failures;
}
