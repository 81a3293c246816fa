#include <doctest.h>

#include <cmath>
#include <random>

#include "betarec/error.hpp"
#include "betarec/expansion.hpp"
#include "betarec/language.hpp"
#include "oracles.hpp"

using namespace betarec;

namespace {

mpq_class lower_q(const BoundedReal& v) {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), v.lower());
  return q;
}

mpq_class upper_q(const BoundedReal& v) {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), v.upper());
  return q;
}

}  // namespace

TEST_CASE("binary expansion of one half") {
  auto ctx = BetaContext::parse("2");
  CHECK(beta_expand(BoundedReal::from_double(0.5), ctx, 3) == Word{1, 0, 0});
}

TEST_CASE("2 - phi lands on a digit boundary") {
  auto ctx = BetaContext::parse("golden");
  BoundedReal x = BoundedReal(2L, 256) - ctx.value(256);
  try {
    (void)beta_expand(x, ctx, 4);
    FAIL("expected indeterminate digit");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IndeterminateDigit);
    CHECK(std::string(e.what()) == "digit indeterminate at step 2");
  }
  ExpandOptions snap;
  snap.snap_exact_hits = true;
  Word w = beta_expand(x, ctx, 4, snap);
  CHECK(w == Word{0, 1, 0, 0});
  // Round trip: phi^-2 lies in the evaluated interval.
  BoundedReal v = evaluate_word(w, ctx);
  CHECK(v.contains(x));
  CHECK(std::fabs(v.lower_double() - (2 - oracle::golden())) < 1e-15);
}

TEST_CASE("zero expands to zeros") {
  auto ctx = BetaContext::parse("2.5");
  CHECK(beta_expand(BoundedReal(0L), ctx, 5) == Word(5, 0));
}

TEST_CASE("expansion rejects points outside the unit interval") {
  auto ctx = BetaContext::parse("2");
  CHECK_THROWS_AS(beta_expand(BoundedReal(1L), ctx, 3), Error);
  CHECK_THROWS_AS(expand_rational(mpq_class(-1, 3), ctx, 3), Error);
}

TEST_CASE("evaluate_word") {
  auto two = BetaContext::parse("2");
  BoundedReal v = evaluate_word(Word{1, 0, 0}, two);
  CHECK(v.lower_double() == 0.5);
  CHECK(v.upper_double() == 0.625);

  auto phi = BetaContext::parse("golden");
  BoundedReal g = evaluate_word(Word{0, 1}, phi);
  CHECK(g.lower_double() == doctest::Approx(2 - oracle::golden()).epsilon(1e-15));
  CHECK(g.upper_double() == doctest::Approx(2 - oracle::golden() + std::pow(oracle::golden(), -2)));

  BoundedReal e = evaluate_word(Word{}, phi);
  CHECK(e.lower_double() == 0.0);
  CHECK(e.upper_double() == 1.0);
}

TEST_CASE("eps_star examples") {
  CHECK(BetaContext::parse("2").eps_star(4) == Word{1, 1, 1, 1});
  CHECK(BetaContext::parse("golden").eps_star(6) == Word{1, 0, 1, 0, 1, 0});
  auto b = BetaContext::parse("2.5");
  Word e = b.eps_star(8);
  // Independent oracle: exact rational iteration of T on 1.
  mpq_class t = 1;
  const mpq_class beta(5, 2);
  for (std::size_t i = 0; i < 8; ++i) {
    t *= beta;
    mpz_class d = t.get_num() / t.get_den();
    CHECK(e[i] == d.get_si());
    t -= d;
  }
  CHECK(e[0] == 2);
}

TEST_CASE("expansion of one sums to one within the tail bound") {
  for (const char* name : {"golden", "1.8", "2", "2.5", "3.3", "3.7"}) {
    auto ctx = BetaContext::parse(name);
    const std::size_t D = 120;
    Word e = ctx.eps_star(D);
    BoundedReal s = word_value(e, ctx);
    const BoundedReal beta = ctx.value(s.precision());
    BoundedReal tail = beta.pow(-static_cast<long>(D) + 1) / (beta - BoundedReal(1L));
    BoundedReal one(1L);
    CHECK(compare(s, one) != Ordering::Greater);
    CHECK(compare(s + tail, one) != Ordering::Less);
    for (Digit d : e) CHECK(d <= ctx.alphabet_max());
  }
}

TEST_CASE("simple Parry detection") {
  CHECK(BetaContext::parse("2").detect_simple_parry(10) == std::optional<std::size_t>(1));
  CHECK(BetaContext::parse("golden").detect_simple_parry(10) == std::optional<std::size_t>(2));
  CHECK(!BetaContext::parse("2.5").detect_simple_parry(50).has_value());
  CHECK(BetaContext::parse("tribonacci").detect_simple_parry(10) == std::optional<std::size_t>(3));
  CHECK(BetaContext::parse("3").alphabet_max() == 2);
  CHECK(BetaContext::parse("2.5").alphabet_max() == 2);
  CHECK(BetaContext::parse("golden").alphabet_max() == 1);
}

TEST_CASE("eps_star is self-admissible") {
  for (const char* name : {"golden", "1.8", "2", "2.5", "3.3", "3.7"}) {
    auto ctx = BetaContext::parse(name);
    const std::size_t L = 200;
    Word e = ctx.eps_star(2 * L);
    for (std::size_t j = 1; j < L; ++j) {
      CHECK(lex_compare(e.slice(j, L), e.prefix(L)) <= 0);
    }
  }
}

TEST_CASE("round trip of expansion and evaluation") {
  std::mt19937_64 rng(7);
  for (const char* name : {"golden", "1.8", "2", "2.5", "3.3"}) {
    auto ctx = BetaContext::parse(name);
    for (int trial = 0; trial < 1000; ++trial) {
      mpz_class num(static_cast<unsigned long>(rng() >> 11));
      mpq_class x(num, mpz_class(1) << 53);
      x.canonicalize();
      const std::size_t n = 1 + rng() % 40;
      Word w = expand_rational(x, ctx, n);
      BoundedReal v = evaluate_word(w, ctx, 512);
      REQUIRE(lower_q(v) <= x);
      REQUIRE(x <= upper_q(v));
    }
  }
}

TEST_CASE("expansion agrees with a floating point oracle away from boundaries") {
  auto ctx = BetaContext::parse("1.8");
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    mpq_class x(static_cast<long>(rng() % 1000000), 1000000);
    Word w = expand_rational(x, ctx, 12);
    auto d = oracle::greedy_digits(x.get_d(), 1.8L, 12);
    for (std::size_t i = 0; i < 12; ++i) REQUIRE(w[i] == d[i]);
  }
}

TEST_CASE("approximate_beta examples") {
  auto phi = BetaContext::parse("golden");
  auto b3 = approximate_beta(phi, 3);
  double newton = oracle::newton([](double t) { return t * t * t - t * t - 1; },
                                 [](double t) { return 3 * t * t - 2 * t; }, 1.5);
  CHECK(std::fabs(b3.approx() - newton) < 1e-14);
  CHECK(b3.eps_star(6) == Word{1, 0, 0, 1, 0, 0});
  CHECK(b3.simple_parry_length() == std::optional<std::size_t>(3));

  auto two = BetaContext::parse("2");
  try {
    (void)approximate_beta(two, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TruncationTooShort);
  }
  auto b2 = approximate_beta(two, 2);
  CHECK(std::fabs(b2.approx() - oracle::golden()) < 1e-15);

  CHECK_THROWS_AS(approximate_beta(phi, 2), Error);  // eps*_2 = 0
}

TEST_CASE("approximations increase towards the base") {
  auto ctx = BetaContext::parse("2.5");
  const double beta = 2.5;
  Word e = ctx.eps_star(60);
  double prev = 1.0;
  for (std::size_t target : {5, 10, 20, 40}) {
    std::size_t N = target;
    while (e[N - 1] == 0) ++N;
    auto bn = approximate_beta(ctx, N);
    BoundedReal v = bn.value(400);
    CHECK(compare(v, BoundedReal::from_double(prev)) == Ordering::Greater);
    CHECK(compare(v, BoundedReal::from_double(beta)) == Ordering::Less);
    BoundedReal gap = BoundedReal::from_double(beta, 0, 400) - v;
    CHECK(gap.upper_double() <= 10 * std::pow(beta, -static_cast<double>(N)));
    prev = v.lower_double();
    // eps*(beta_N) is lexicographically below eps*(beta).
    Word en = bn.eps_star(2 * N);
    Word eb = ctx.eps_star(2 * N);
    CHECK(lex_compare(en, eb) < 0);
    CHECK(en.prefix(N - 1) == eb.prefix(N - 1));
    CHECK(en[N - 1] + 1 == eb[N - 1]);
  }
}
