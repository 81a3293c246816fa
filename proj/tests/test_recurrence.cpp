#include <doctest.h>

#include <cmath>
#include <random>

#include "betarec/error.hpp"
#include "betarec/expansion.hpp"
#include "betarec/language.hpp"
#include "betarec/recurrence.hpp"
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

// Exact value of a finite base-b digit string, b rational.
mpq_class digits_value(const std::vector<Digit>& s, std::size_t begin, std::size_t end,
                       const mpq_class& b) {
  mpq_class v = 0;
  mpq_class scale = 1 / b;
  for (std::size_t i = begin; i < end; ++i) {
    v += s[i] * scale;
    scale /= b;
  }
  return v;
}

mpq_class qpow(const mpq_class& b, long e) {
  mpq_class r = 1;
  for (long i = 0; i < std::labs(e); ++i) r *= b;
  return e < 0 ? 1 / r : r;
}

// Digits 1 0^{g_1} 1 0^{g_2} 1 ... padded with zeros to length L.
Word gapped(const std::vector<std::size_t>& gaps, std::size_t L) {
  Word w;
  w.push_back(1);
  for (std::size_t g : gaps) {
    for (std::size_t i = 0; i < g && w.size() < L; ++i) w.push_back(0);
    if (w.size() < L) w.push_back(1);
  }
  while (w.size() < L) w.push_back(0);
  return w;
}

// Literal set definitions of the word indices, by brute force.
WordIndices brute_indices(const Word& w) {
  const std::size_t n = w.size();
  WordIndices out;
  auto s_min = [&](std::size_t from) {
    std::size_t best = n;
    for (std::size_t i = from; i < n; ++i) {
      if (w[i] == w[0]) {
        best = i;
        break;
      }
    }
    return best;
  };
  std::size_t s = s_min(1);
  out.s.push_back(s);
  while (s < n) {
    std::size_t t = 0;
    for (std::size_t i = s + 1; i <= n; ++i) {
      bool eq = true;
      for (std::size_t j = s; j < i; ++j) eq = eq && w[j] == w[j - s];
      if (eq) t = i;
    }
    out.t.push_back(t);
    s = s_min(s + 1);
    out.s.push_back(s);
  }
  out.k = out.t.size();
  return out;
}

}  // namespace

TEST_CASE("distance at the fixed point zero") {
  for (const char* name : {"golden", "2", "2.5"}) {
    auto ctx = BetaContext::parse(name);
    auto x = OrbitView::from_rational(ctx, 0);
    for (std::size_t n : {1, 2, 7, 100}) {
      BoundedReal d = recurrence_distance(x, n);
      CHECK(d.is_exact());
      CHECK(d.center() == 0.0);
    }
    CHECK(estimate_r(x, 50).infinite);
  }
}

TEST_CASE("distance for one third in base 2") {
  auto ctx = BetaContext::parse("2");
  auto x = OrbitView::from_rational(ctx, mpq_class(1, 3));
  CHECK(x.prefix(6) == Word{0, 1, 0, 1, 0, 1});
  BoundedReal d2 = recurrence_distance(x, 2);
  CHECK(d2.is_exact());
  CHECK(d2.center() == 0.0);
  BoundedReal d1 = recurrence_distance(x, 1);
  CHECK(lower_q(d1) <= mpq_class(1, 3));
  CHECK(mpq_class(1, 3) <= upper_q(d1));
  CHECK(d1.width() < 1e-35);
  CHECK(estimate_r(x, 100).infinite);
  CHECK(estimate_r_hat(x, 100).infinite);
  CHECK_THROWS_AS(extract_returns(x, 3, true), Error);
}

TEST_CASE("declared periodic streams give the sentinel") {
  auto ctx = BetaContext::parse("golden");
  auto x = OrbitView::from_periodic(ctx, Word{}, Word{1, 0, 0});
  CHECK(recurrence_distance(x, 3).center() == 0.0);
  CHECK(recurrence_distance(x, 1).is_positive());
  ExponentEstimate e = estimate_exponents(x, 30);
  CHECK(e.r.infinite);
  CHECK(e.r_hat.infinite);
  try {
    (void)extract_returns(x, 2, true);
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::PeriodicPoint);
    CHECK(std::string(err.what()) == "periodic point");
  }
}

TEST_CASE("digit path agrees with exact rational distances") {
  std::mt19937_64 rng(21);
  auto ctx = BetaContext::parse("2.5");
  const mpq_class beta(5, 2);
  for (int trial = 0; trial < 200; ++trial) {
    mpq_class x = uniform_rational(rng, 200);
    auto exact = OrbitView::from_rational(ctx, x);
    auto digits = OrbitView::from_digits(ctx, exact.prefix(600));
    const std::size_t n = 1 + rng() % 100;
    mpq_class t = x;
    for (std::size_t i = 0; i < n; ++i) {
      t *= beta;
      mpz_class d;
      mpz_fdiv_q(d.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
      t -= d;
    }
    const mpq_class want = abs(t - x);
    BoundedReal a = recurrence_distance(exact, n);
    BoundedReal b = recurrence_distance(digits, n);
    REQUIRE(lower_q(a) <= want);
    REQUIRE(want <= upper_q(a));
    REQUIRE(lower_q(b) <= want);
    REQUIRE(want <= upper_q(b));
    REQUIRE(b.width() <= 1e-15 * b.center());
  }
}

TEST_CASE("hand-built return at position 5") {
  auto ctx = BetaContext::parse("2");
  Word w = gapped({4, 24, 124, 624}, 1500);
  auto x = OrbitView::from_digits(ctx, w);
  ReturnProfile p = extract_returns(x, 1, true);
  REQUIRE(p.size() == 1);
  CHECK(p.n[0] == 5);
  CHECK(p.t[0] == 10);
  // Oracle: x and T^5 x from the digit string with the stream tail in [0, 2^-L).
  const mpq_class two = 2;
  const auto& s = w.digits();
  mpq_class d = digits_value(s, 0, s.size(), two) - digits_value(s, 5, s.size(), two);
  const long g = static_cast<long>(p.m[0] - p.n[0]);
  CHECK(g == 6);
  CHECK(qpow(two, -(g + 1)) <= abs(d));
  CHECK(abs(d) < qpow(two, -g));
}

TEST_CASE("increasing gaps give a vanishing exponent") {
  auto ctx = BetaContext::parse("2");
  std::vector<std::size_t> gaps;
  for (std::size_t g = 1; g < 400; ++g) gaps.push_back(g);
  Word w = gapped(gaps, 40000);
  auto x = OrbitView::from_digits(ctx, w);
  ExponentEstimate e = estimate_exponents(x, 10000);
  CHECK(!e.r.infinite);
  CHECK(e.r.value < 0.01);
  CHECK(e.r_hat.value <= e.r.value);
  ReturnProfile p = extract_returns(x, 50, true);
  for (std::size_t k = 0; k < p.size(); ++k) CHECK(p.m[k] - p.n[k] <= 4);
  // Spot distances against the rational oracle.
  const auto& s = w.digits();
  const mpq_class two = 2;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const std::size_t n = p.n[k];
    mpq_class d = abs(digits_value(s, n, n + 200, two) - digits_value(s, 0, 200, two));
    CHECK(std::fabs(d.get_d() - p.distance[k].center()) <= 1e-12 * d.get_d());
  }
}

TEST_CASE("return profiles satisfy bracketing and block invariants") {
  std::mt19937_64 rng(5);
  std::size_t short_borrows = 0;
  for (const char* name : {"2.5", "2", "3"}) {
    auto ctx = BetaContext::parse(name);
    const mpq_class beta = *ctx.rational_value();
    for (int trial = 0; trial < 20; ++trial) {
      mpq_class x0 = uniform_rational(rng, bits_for_digits(ctx, 3000));
      auto x = OrbitView::from_rational(ctx, x0);
      for (bool monotone : {false, true}) {
        ReturnProfile p = extract_returns(x, 12, monotone, 800);
        auto s = x.snapshot();
        for (std::size_t k = 0; k < p.size(); ++k) {
          const std::size_t n = p.n[k], m = p.m[k], t = p.t[k];
          // Exact distance from rational iteration.
          mpq_class tn = x0;
          for (std::size_t i = 0; i < n; ++i) {
            tn *= beta;
            mpz_class d;
            mpz_fdiv_q(d.get_mpz_t(), tn.get_num_mpz_t(), tn.get_den_mpz_t());
            tn -= d;
          }
          const mpq_class dist = abs(tn - x0);
          REQUIRE(qpow(beta, -static_cast<long>(m - n) - 1) <= dist);
          REQUIRE(dist < qpow(beta, -static_cast<long>(m - n)));
          REQUIRE(m >= n);
          REQUIRE(t > n);
          REQUIRE(t <= m + 1);
          for (std::size_t i = n; i < t; ++i) REQUIRE((*s)[i] == (*s)[i - n]);
          REQUIRE((*s)[t] != (*s)[t - n]);
          REQUIRE((*s)[n] == (*s)[0]);
          if (k > 0) REQUIRE(p.n[k] > p.n[k - 1]);
          if (monotone && k > 0) REQUIRE(m - n > p.m[k - 1] - p.n[k - 1]);
          // Integer bases: every entry takes one of the three forms. For 2.5
          // the borrow continuation may fall short of eps* in its last digit.
          try {
            (void)classify_prefix(x, k + 1, p);
          } catch (const Error& e) {
            REQUIRE(e.kind() == ErrorKind::FormViolation);
            REQUIRE(std::string(name) == "2.5");
            REQUIRE(t < m);
            REQUIRE((*s)[t] + 1 == (*s)[t - n]);
            const Word eps = ctx.eps_star(m - t);
            for (std::size_t i = t + 1; i + 1 < m; ++i) REQUIRE((*s)[i] == eps[i - t - 1]);
            ++short_borrows;
          }
        }
      }
    }
  }
  MESSAGE("borrow prefixes short by one digit: " << short_borrows);
}

TEST_CASE("monotone profile is the record subsequence of the full profile") {
  std::mt19937_64 rng(8);
  auto ctx = BetaContext::parse("golden");
  for (int trial = 0; trial < 10; ++trial) {
    auto x = OrbitView::from_rational(ctx, uniform_rational(rng, bits_for_digits(ctx, 2000)));
    ReturnProfile all = extract_returns(x, 100000, false, 600);
    ReturnProfile rec = extract_returns(x, 100000, true, 600);
    std::vector<std::size_t> want;
    long best = -1;
    for (std::size_t k = 0; k < all.size(); ++k) {
      const long g = static_cast<long>(all.m[k] - all.n[k]);
      if (g > best) {
        want.push_back(all.n[k]);
        best = g;
      }
    }
    CHECK(rec.n == want);
  }
}

TEST_CASE("carry form built by hand") {
  auto ctx = BetaContext::parse("2");
  // x = 0.00111111 01 000000 0^24 1 ...; T^8 x starts 0 1 0 0 ...
  Word w{0, 0, 1, 1, 1, 1, 1, 1, 0, 1};
  for (int i = 0; i < 30; ++i) w.push_back(0);
  w.push_back(1);
  std::mt19937_64 rng(2);
  while (w.size() < 400) w.push_back(static_cast<Digit>(rng() % 2));
  auto x = OrbitView::from_digits(ctx, w);
  ReturnProfile p = extract_returns(x, 100, false, 100);
  std::size_t k = 0;
  while (k < p.size() && p.n[k] != 8) ++k;
  REQUIRE(k < p.size());
  CHECK(p.t[k] == 9);
  CHECK(p.m[k] == 16);
  // Oracle: T^8 x - x = 3 * 2^-10 plus terms below 2^-40.
  const auto& s = w.digits();
  mpq_class d = digits_value(s, 8, s.size(), 2) - digits_value(s, 0, s.size(), 2);
  CHECK(d > 0);
  CHECK(qpow(2, -9) <= d);
  CHECK(d < qpow(2, -8));
  CHECK(classify_prefix(x, k + 1, p) == PrefixForm::CarryForm);
}

TEST_CASE("borrow form built by hand") {
  auto ctx = BetaContext::parse("2");
  Word w{0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1};
  for (int i = 0; i < 30; ++i) w.push_back(1);
  w.push_back(0);
  std::mt19937_64 rng(4);
  while (w.size() < 400) w.push_back(static_cast<Digit>(rng() % 2));
  auto x = OrbitView::from_digits(ctx, w);
  ReturnProfile p = extract_returns(x, 100, false, 100);
  std::size_t k = 0;
  while (k < p.size() && p.n[k] != 8) ++k;
  REQUIRE(k < p.size());
  CHECK(p.t[k] == 9);
  CHECK(p.m[k] > p.t[k]);
  CHECK(classify_prefix(x, k + 1, p) == PrefixForm::BorrowForm);
}

TEST_CASE("overlap form and violations") {
  auto ctx = BetaContext::parse("2");
  Word w = gapped({4, 24, 124}, 400);
  auto x = OrbitView::from_digits(ctx, w);
  ReturnProfile p = extract_returns(x, 1, true);
  REQUIRE(p.size() == 1);
  CHECK(p.t[0] < p.m[0]);
  // T^5 x reads 1 0^24 against 1 0^4 1: digit t+1 drops by one and m = t + 1.
  CHECK(classify_prefix(x, 1, p) == PrefixForm::BorrowForm);

  ReturnProfile fake = p;
  fake.t[0] = 7;
  fake.m[0] = 12;
  CHECK_THROWS_AS(classify_prefix(x, 1, fake), Error);
  ReturnProfile over = p;
  over.m[0] = 6;
  over.t[0] = 10;
  CHECK(classify_prefix(x, 1, over) == PrefixForm::Overlap);
}

TEST_CASE("exponent order on random points") {
  std::mt19937_64 rng(99);
  for (const char* name : {"golden", "1.8", "2.5", "3.7"}) {
    auto ctx = BetaContext::parse(name);
    for (int trial = 0; trial < 10; ++trial) {
      auto x = OrbitView::from_rational(ctx, uniform_rational(rng, bits_for_digits(ctx, 1200)));
      ExponentEstimate e = estimate_exponents(x, 500);
      REQUIRE(!e.r.infinite);
      CHECK(e.r_hat.value <= e.r.value);
      CHECK(e.r.value < 0.2);
      CHECK(e.series.v.size() == 500);
      for (double v : e.series.v) CHECK(v > 0);
    }
  }
}

TEST_CASE("recurrence levels against a floating point oracle") {
  std::mt19937_64 rng(31);
  auto ctx = BetaContext::parse("golden");
  const long double phi = (1 + std::sqrt(5.0L)) / 2;
  for (int trial = 0; trial < 20; ++trial) {
    mpq_class x0 = uniform_rational(rng, 300);
    auto x = OrbitView::from_rational(ctx, x0);
    RecurrenceSeries series = recurrence_series(x, 20);
    // Orbit from the digits: T^n x = sum_i d_{n+i} phi^-i.
    Word d = x.prefix(120);
    for (std::size_t n = 1; n <= 20; ++n) {
      long double a = 0, b = 0, scale = 1 / phi;
      for (std::size_t i = 0; i + n < 120 && i < 80; ++i) {
        a += d[n + i] * scale;
        b += d[i] * scale;
        scale /= phi;
      }
      const long double want = -std::log(std::fabs(a - b)) / std::log(phi);
      if (std::fabs(a - b) > 1e-12) CHECK(std::fabs(series.v[n - 1] - want) < 1e-6);
    }
  }
}

TEST_CASE("shift identity") {
  std::mt19937_64 rng(17);
  for (const char* name : {"golden", "2.5"}) {
    auto ctx = BetaContext::parse(name);
    for (int trial = 0; trial < 500; ++trial) {
      mpq_class x0 = uniform_rational(rng, 256);
      auto x = OrbitView::from_rational(ctx, x0);
      const std::size_t n = 1 + rng() % 40;
      Word stream = x.prefix(n + 20);
      // Iterate the map on an enclosure and expand the image directly.
      BoundedReal t = BoundedReal::from_rational(x0, 1024);
      const BoundedReal beta = ctx.value(1024);
      for (std::size_t i = 0; i < n; ++i) {
        BoundedReal y = beta * t;
        auto f = y.floor_if_determinate();
        REQUIRE(f.has_value());
        t = y - BoundedReal(*f, 1024);
      }
      Word shifted = beta_expand(t, ctx, 20);
      CHECK(shifted == stream.slice(n, 20));
    }
  }
}

TEST_CASE("no return raises") {
  auto ctx = BetaContext::parse("2");
  Word w{1};
  for (int i = 0; i < 50; ++i) w.push_back(0);
  auto x = OrbitView::from_digits(ctx, w);
  try {
    (void)extract_returns(x, 1, true);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoReturn);
  }
}

TEST_CASE("word_indices examples") {
  WordIndices a = word_indices(Word{1, 0, 0});
  CHECK(a.s == std::vector<std::size_t>{3});
  CHECK(a.k == 0);

  WordIndices b = word_indices(Word{1, 1, 0});
  REQUIRE(!b.s.empty());
  CHECK(b.s[0] == 1);
  REQUIRE(!b.t.empty());
  CHECK(b.t[0] == 2);
  CHECK(b.k >= 1);

  WordIndices c = word_indices(Word{0, 0, 0});
  CHECK(c.s[0] == 1);
  CHECK(c.t[0] == 3);
}

TEST_CASE("word_indices against the brute-force definition") {
  for (int n = 1; n <= 9; ++n) {
    for (const auto& v : oracle::all_words(2, n)) {
      Word w;
      for (int d : v) w.push_back(static_cast<Digit>(d));
      WordIndices got = word_indices(w);
      WordIndices want = brute_indices(w);
      REQUIRE(got.s == want.s);
      REQUIRE(got.t == want.t);
      REQUIRE(got.k == want.k);
      for (std::size_t k = 0; k < got.k; ++k) {
        REQUIRE(got.s[k] < got.t[k]);
        REQUIRE(got.t[k] <= static_cast<std::size_t>(n));
      }
    }
  }
}

TEST_CASE("D member examples") {
  auto two = BetaContext::parse("2");
  auto levels = generate_D_members(Word{1}, 1.0, 1, two);
  REQUIRE(levels.size() == 1);
  CHECK(levels[0].count(Word{1, 1, 0}) == 1);
  CHECK(levels[0].count(Word{1, 0}) == 1);
  CHECK(levels[0].count(Word{1}) == 1);
  // Digit 2 is not in the binary alphabet.
  CHECK(levels[0].count(Word{1, 2}) == 0);
}

TEST_CASE("D members are admissible and contain the first powers") {
  for (const char* name : {"golden", "2", "2.5"}) {
    auto ctx = BetaContext::parse(name);
    AdmissibleEnumerator en(ctx, 3);
    Word w;
    while (en.next(w)) {
      auto levels = generate_D_members(w, 1.0, 2, ctx);
      REQUIRE(levels.size() == 2);
      for (const auto& level : levels) {
        for (const Word& v : level) REQUIRE(is_admissible(v, ctx));
      }
      CHECK(levels[0].count(w) == 1);
      if (is_admissible(w.power(2), ctx)) CHECK(levels[1].count(w.power(2)) == 1);
    }
  }
}

TEST_CASE("D members brute force for a single step") {
  // M(w) by direct enumeration of the union for w = (1,0,1), beta = 2.5, r = 1.
  auto ctx = BetaContext::parse("2.5");
  const Word w{1, 0, 1};
  std::set<Word> got = d_step(w, 1.0, ctx);
  // k(w) = 1 with s_1 = 2, t_1 = 3 = n, so no block family exists.
  CHECK(word_indices(w).t == std::vector<std::size_t>{3});
  CHECK(got == std::set<Word>{w});

  // u = (1,1,0): s_1 = 1, t_1 = 2, digit u_3 = 0 < floor(beta) so only M'' contributes.
  const Word u{1, 1, 0};
  CHECK(word_indices(u).t == std::vector<std::size_t>{2});
  std::set<Word> want{u};
  for (std::size_t a = 1; a <= 2; ++a) {
    for (std::size_t j = 0; j <= 3; ++j) {
      Word hi = u.power(a);
      hi.append(Word{1, 1, 1});
      hi.append(Word(j, 0));
      want.insert(hi);
    }
  }
  CHECK(d_step(u, 1.0, ctx) == want);
}

TEST_CASE("uniform rationals") {
  std::mt19937_64 rng(1);
  double sum = 0;
  for (int i = 0; i < 2000; ++i) {
    mpq_class q = uniform_rational(rng, 100);
    REQUIRE(q >= 0);
    REQUIRE(q < 1);
    sum += q.get_d();
  }
  CHECK(std::fabs(sum / 2000 - 0.5) < 0.03);
}
