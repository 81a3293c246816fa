#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "betarec/dimension.hpp"
#include "betarec/error.hpp"

using namespace betarec;

namespace {

CantorPlan tiny_plan() {
  PlanOptions o;
  o.N = 2;
  o.M = 2;
  o.offset_tolerance = 10.0;
  return make_plan(BetaContext::parse("2.5"), mpq_class(2, 5), mpq_class(1), mpq_class(3, 10), 4, o);
}

mpq_class q(long a, long b) {
  mpq_class v(a, b);
  v.canonicalize();
  return v;
}

}  // namespace

TEST_CASE("dim_R examples") {
  CHECK(dim_R_exact(q(1, 3), q(2, 1)) == q(1, 5));
  CHECK(dim_R(1.0 / 3, 2.0).value == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(dim_R_exact(q(1, 5), q(1, 1)) == q(3, 8));
  CHECK(dim_R_exact(q(0, 1), q(3, 1)) == q(1, 4));
  CHECK(dim_R_exact(q(1, 2), q(1, 1)) == 0);
  const DimValue edge = dim_R(0.5, 1.0);
  CHECK(edge.value == 0.0);
  CHECK_FALSE(edge.countable);
  const DimValue above = dim_R(0.6, 1.0);
  CHECK(above.countable);
  CHECK(above.value == 0.0);
  CHECK_THROWS_AS(dim_R_exact(q(3, 5), q(1, 1)), Error);
  CHECK_THROWS_AS(dim_R(-0.1, 1.0), Error);
  CHECK_THROWS_AS(dim_R(0.1, -1.0), Error);
  CHECK(dim_R(0.0, 0.0).value == 1.0);
  CHECK(dim_R(0.1, 0.0).countable);
  CHECK(dim_R_exact(0, 0) == 1);
  CHECK(dim_R(0.0, maximizer(0.0)).value == dim_uniform(0.0).value);
}

TEST_CASE("dim_R at infinite r") {
  CHECK(dim_R(0.0, Exponent::inf()).value == 0.0);
  CHECK(dim_R(0.9, Exponent::inf()).value == 0.0);
  CHECK_FALSE(dim_R(0.9, Exponent::inf()).countable);
  CHECK(dim_R(1.5, Exponent::inf()).countable);
  CHECK(dim_R(0.2, Exponent{false, 1.0}).value == doctest::Approx(0.375));
  // Large finite r approaches the sentinel value.
  CHECK(dim_R(0.0, 1e12).value < 1e-11);
}

TEST_CASE("dim_R boundary consistency on a grid") {
  for (int i = 1; i <= 100; ++i) {
    const double r = 0.05 * i;
    CHECK(std::abs(dim_R(0.0, r).value - 1.0 / (1.0 + r)) <= 1e-12);
    const long num = i, den = 20;
    CHECK(dim_R_exact(0, q(num, den)) == 1 / (1 + q(num, den)));
  }
}

TEST_CASE("dim_R is non-increasing in r_hat") {
  for (double r : {0.3, 1.0, 2.5, 7.0}) {
    double prev = 2.0;
    const double top = r / (1 + r);
    for (int i = 0; i <= 200; ++i) {
      const double rh = top * i / 200.0;
      const double v = dim_R(rh, r).value;
      CHECK(v <= prev + 1e-15);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      prev = v;
    }
  }
}

TEST_CASE("dim_uniform examples") {
  CHECK(dim_uniform(0.0).value == 1.0);
  CHECK(dim_uniform(1.0).value == 0.0);
  CHECK(dim_uniform_exact(q(1, 3)) == q(1, 4));
  CHECK(dim_uniform(1.0 / 3).value == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(dim_uniform(1.5).countable);
  CHECK_THROWS_AS(dim_uniform(-0.5), Error);
  CHECK_THROWS_AS(dim_uniform_exact(q(3, 2)), Error);
}

TEST_CASE("maximizer examples") {
  const Exponent r = maximizer(1.0 / 3);
  CHECK_FALSE(r.infinite);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dim_R_exact(q(1, 3), q(1, 1)) == dim_uniform_exact(q(1, 3)));
  CHECK(maximizer(1.0).infinite);
  CHECK(maximizer(1e-9).value < 1e-8);
  CHECK(dim_R(1e-9, maximizer(1e-9)).value > 1 - 1e-8);
  CHECK_THROWS_AS(maximizer(1.5), Error);
  CHECK_THROWS_AS(maximizer(-0.1), Error);
}

TEST_CASE("maximizer identity on a grid") {
  for (int i = 1; i <= 100; ++i) {
    const double rh = i / 101.0;
    const Exponent r = maximizer(rh);
    CHECK(std::abs(dim_R(rh, r).value - dim_uniform(rh).value) <= 1e-12);
    const mpq_class rq = q(i, 101);
    CHECK(dim_R_exact(rq, 2 * rq / (1 - rq)) == dim_uniform_exact(rq));
  }
}

TEST_CASE("maximizer is the argmax of a grid scan") {
  for (double rh : {0.05, 0.2, 1.0 / 3, 0.5, 0.8}) {
    const double star = maximizer(rh).value;
    const double best = dim_R(rh, star).value;
    const double r_min = rh / (1 - rh);  // smallest r with r_hat <= r / (1 + r)
    double arg = 0, top = -1;
    for (int i = 0; i <= 20000; ++i) {
      const double r = r_min + (5 * star + 5 - r_min) * i / 20000.0;
      if (r <= 0) continue;
      const double v = dim_R(rh, r).value;
      CHECK(v <= best + 1e-12);
      if (v > top) {
        top = v;
        arg = r;
      }
    }
    CHECK(std::abs(arg - star) < 0.01 * (1 + star));
  }
}

TEST_CASE("geometric series for (0.2, 1) reaches 0.375") {
  SequencePlan s = plan_sequences(q(1, 5), q(1, 1), 20);
  const auto series = dimension_series(s.n, s.m, 20);
  REQUIRE(series.size() == 20);
  CHECK(series[0] == 0);
  for (std::size_t k = 1; k <= 20; ++k) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 5, k - 1);
    CHECK(series[k - 1] == q(3, 8) * (1 - mpq_class(1, p)));
  }
  CHECK(abs(series[19] - dim_R_exact(q(1, 5), q(1, 1))) < mpq_class(1, 1000));
}

TEST_CASE("series error decays like (r_hat / r)^k") {
  struct Case {
    mpq_class r_hat, r;
    double rate;
  };
  for (const Case& c : {Case{q(1, 5), q(1, 1), 5.0}, Case{q(1, 3), q(1, 1), 3.0}, Case{q(1, 4), q(2, 1), 8.0}}) {
    SequencePlan s = plan_sequences(c.r_hat, c.r, 14);
    const auto series = dimension_series(s.n, s.m, 14);
    const double limit = dim_R_exact(c.r_hat, c.r).get_d();
    // Fit C on the first half, check the envelope on the second.
    double C = 0;
    for (std::size_t k = 3; k <= 7; ++k) {
      C = std::max(C, std::abs(series[k - 1].get_d() - limit) * std::pow(c.rate, static_cast<double>(k)));
    }
    for (std::size_t k = 8; k <= 14; ++k) {
      CHECK(std::abs(series[k - 1].get_d() - limit) <= 1.5 * C * std::pow(c.rate, -static_cast<double>(k)));
    }
  }
}

TEST_CASE("dimension_series guards") {
  std::vector<std::int64_t> n{1, 3, 9}, m{2, 6, 18};
  CHECK_THROWS_AS(dimension_series(n, m, 0), Error);
  CHECK_THROWS_AS(dimension_series(n, m, 4), Error);
  CHECK(dimension_series(n, m, 3)[2] == q(1 + 3, 18));
}

TEST_CASE("local dimension report on a feasible plan") {
  const mpq_class delta(1, 10);
  CantorPlan plan = make_plan(BetaContext::parse("2.5"), q(1, 5), q(1, 1), delta, 8);
  DimReport r = local_dimension_series(plan, 8);
  CHECK(r.formula_value == doctest::Approx(0.375));
  CHECK_FALSE(r.countable);
  REQUIRE(r.series.size() == 8);
  REQUIRE(r.mu_log_ratios.size() == 8);
  REQUIRE(r.m_growth.size() == 7);
  CHECK(std::abs(r.series_values[7] - 0.375) < 0.01);
  const RatioBounds& mu = r.mu_log_ratios[7];
  CHECK(mu.lower <= mu.upper);
  CHECK(mu.lower >= (1 - 0.1) * 0.375 - 0.05);
  CHECK(mu.upper <= 0.375 + 0.05);
  CHECK(std::abs(r.n_over_m[7] - 0.5) < 0.01);
  CHECK(std::abs(r.m_growth[6] - 5.0) < 0.05);
  // The ratio never exceeds the exact series by more than the N slack.
  for (std::size_t k = 2; k <= 8; ++k) {
    CHECK(r.mu_log_ratios[k - 1].lower > 0.0);
  }
  CHECK_THROWS_AS(local_dimension_series(plan, 9), Error);
}

TEST_CASE("mu ratios use the exact measure of the branch") {
  CantorPlan plan = tiny_plan();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Branch b = sample_branch(plan, seed, 4);
    LevelCounts c = level_counts(plan, 4, b.u);
    for (std::size_t k = 1; k <= 4; ++k) {
      CHECK(measure(plan, b.levels[k - 1]) == mpq_class(mpz_class(1), c.G[k - 1]));
    }
  }
}

TEST_CASE("box count of uniform points in base 2") {
  std::mt19937_64 rng(1);
  auto ctx = BetaContext::parse("2");
  std::vector<OrbitView> pts;
  for (int i = 0; i < 10000; ++i) pts.push_back(OrbitView::from_rational(ctx, uniform_rational(rng, 128)));
  // Orders up to log_beta(#points) - 3.
  BoxCount bc = boxcount(pts, ctx, 2, 10);
  CHECK(std::abs(bc.slope - 1.0) <= 0.05);
  CHECK(bc.ci_lower <= bc.ci_upper);
  CHECK(bc.n.size() == 9);
  CHECK(bc.log_count[0] == doctest::Approx(std::log(4.0)));
  // Same seed, same interval.
  BoxCount again = boxcount(pts, ctx, 2, 10);
  CHECK(again.ci_lower == bc.ci_lower);
  CHECK(again.ci_upper == bc.ci_upper);
}

TEST_CASE("box count of a single point is flat") {
  auto ctx = BetaContext::parse("golden");
  std::vector<OrbitView> pts{OrbitView::from_rational(ctx, q(1, 7))};
  BoxCount bc = boxcount(pts, ctx, 1, 30);
  CHECK(std::abs(bc.slope) < 1e-12);
  CHECK(bc.ci_lower == doctest::Approx(0.0));
  CHECK(bc.ci_upper == doctest::Approx(0.0));
}

TEST_CASE("box count guards") {
  auto ctx = BetaContext::parse("2");
  std::vector<OrbitView> none;
  CHECK_THROWS_AS(boxcount(none, ctx, 1, 5), Error);
  std::vector<OrbitView> short_pts{OrbitView::from_digits(ctx, Word::parse("1,0,1"))};
  CHECK_THROWS_AS(boxcount(short_pts, ctx, 1, 5), Error);
  std::vector<OrbitView> ok{OrbitView::from_rational(ctx, q(1, 3))};
  CHECK_THROWS_AS(boxcount(ok, ctx, 5, 5), Error);
  CHECK_THROWS_AS(boxcount(ok, ctx, 0, 5), Error);
}

TEST_CASE("construction counts match exhaustive prefixes") {
  CantorPlan plan = tiny_plan();
  const auto levels = exhaustive_levels(plan, 4);
  const Word u = plan.blocks->unrank(1);
  for (std::size_t n = 1; n <= static_cast<std::size_t>(plan.m[3]); ++n) {
    std::set<Word> prefixes;
    for (const Word& w : levels[3]) {
      if (w.prefix(plan.M) == u) prefixes.insert(w.prefix(n));
    }
    REQUIRE(construction_log_count(plan, n) ==
            doctest::Approx(std::log(static_cast<double>(prefixes.size()))).epsilon(1e-12));
  }
}

TEST_CASE("construction box count for (0.2, 1) sits in the advisory band") {
  CantorPlan plan = make_plan(BetaContext::parse("2.5"), q(1, 5), q(1, 1), q(3, 10), 6);
  BoxCount bc = construction_boxcount(plan, static_cast<std::size_t>(plan.m[0]),
                                      static_cast<std::size_t>(plan.m[4]));
  CHECK(bc.slope >= 0.25);
  CHECK(bc.slope <= 0.50);
  CHECK(bc.ci_lower < bc.slope);
  MESSAGE("construction box-count slope " << bc.slope);
  CHECK_THROWS_AS(construction_log_count(plan, static_cast<std::size_t>(plan.m[5]) + 1), Error);
}

TEST_CASE("M-set distinct prefixes against enumeration") {
  auto beta = BetaContext::parse("2.5");
  NMChoice c = choose_N_M(beta, mpq_class(3, 10));
  auto F = std::make_shared<const FullBlockSet>(beta, c.beta_N, c.M);
  const auto all = F->enumerate();
  for (const Word& u : {all[1], all[all.size() / 2], all.back()}) {
    MSet ms(F, u);
    for (std::size_t j = 0; j <= c.M; ++j) {
      std::set<Word> pf, pm;
      for (const Word& w : all) {
        pf.insert(w.prefix(j));
        if (ms.contains(w)) pm.insert(w.prefix(j));
      }
      REQUIRE(F->distinct_prefixes(j) == static_cast<unsigned long>(pf.size()));
      REQUIRE(ms.distinct_prefixes(j) == static_cast<unsigned long>(pm.size()));
    }
  }
}
