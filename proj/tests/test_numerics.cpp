#include <doctest.h>

#include <cmath>
#include <random>

#include "betarec/bounded_real.hpp"
#include "betarec/error.hpp"
#include "betarec/root_finding.hpp"
#include "oracles.hpp"

using namespace betarec;

namespace {

bool encloses(const BoundedReal& v, const mpq_class& exact) {
  mpq_class lo, hi;
  mpfr_get_q(lo.get_mpq_t(), v.lower());
  mpfr_get_q(hi.get_mpq_t(), v.upper());
  return lo <= exact && exact <= hi;
}

}  // namespace

TEST_CASE("exact operands add exactly") {
  BoundedReal s = BoundedReal(1L) + BoundedReal(1L);
  CHECK(s.is_exact());
  CHECK(s.center() == 2.0);
  CHECK(s.radius() == 0.0);
}

TEST_CASE("self subtraction yields a symmetric enclosure of zero") {
  BoundedReal x = BoundedReal::from_double(0.3, 1e-3);
  BoundedReal d = x - x;
  CHECK(d.contains_zero());
  CHECK(d.center() == doctest::Approx(0.0));
  CHECK(d.radius() >= 2e-3);
  CHECK(d.radius() <= 2e-3 * (1 + 1e-12));
}

TEST_CASE("product enclosure contains every corner product") {
  BoundedReal a = BoundedReal::from_double(2.0, 0.1);
  BoundedReal b = BoundedReal::from_double(3.0, 0.1);
  BoundedReal p = a * b;
  const mpq_class r(0.1);
  for (const mpq_class x : std::vector<mpq_class>{2 - r, 2 + r}) {
    for (const mpq_class y : std::vector<mpq_class>{3 - r, 3 + r}) {
      CHECK(encloses(p, x * y));
    }
  }
  CHECK(p.radius() <= 0.51 + 1e-12);
}

TEST_CASE("division by an interval containing zero is refused") {
  BoundedReal a(1L);
  BoundedReal z = BoundedReal::from_double(0.0, 0.5);
  try {
    (void)(a / z);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IndeterminateSign);
    CHECK(std::string(e.what()) == "indeterminate sign");
  }
}

TEST_CASE("compare") {
  CHECK(compare(BoundedReal(0L), BoundedReal(1L)) == Ordering::Less);
  CHECK(compare(BoundedReal::from_double(1.0, 0.5), BoundedReal::from_double(1.2, 0.5)) ==
        Ordering::Indeterminate);
  BoundedReal two(2L);
  CHECK(compare(two.pow(-5), two.pow(-4)) == Ordering::Less);
  CHECK(compare(two.pow(-4), two.pow(-5)) == Ordering::Greater);
}

TEST_CASE("enclosure against exact rational arithmetic") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 10000; ++trial) {
    mpq_class a = oracle::random_rational(rng);
    mpq_class b = oracle::random_rational(rng);
    const mpfr_prec_t prec = 24 + static_cast<mpfr_prec_t>(rng() % 80);
    BoundedReal x = BoundedReal::from_rational(a, prec);
    BoundedReal y = BoundedReal::from_rational(b, prec);
    REQUIRE(encloses(x + y, a + b));
    REQUIRE(encloses(x - y, a - b));
    REQUIRE(encloses(x * y, a * b));
    if (b != 0 && !y.contains_zero()) REQUIRE(encloses(x / y, a / b));
    const long e = static_cast<long>(rng() % 7);
    mpq_class pw = 1;
    for (long i = 0; i < e; ++i) pw *= a;
    REQUIRE(encloses(x.pow(e), pw));
  }
}

TEST_CASE("parse_rational is exact") {
  CHECK(parse_rational("1.8") == mpq_class(9, 5));
  CHECK(parse_rational("1/3") == mpq_class(1, 3));
  CHECK(parse_rational("-2.5e-1") == mpq_class(-1, 4));
  CHECK(parse_rational("7") == 7);
  CHECK_THROWS_AS(parse_rational("1.2.3"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK(rational_to_decimal(mpq_class(1, 3), 5) == "0.33333");
  CHECK(rational_to_decimal(mpq_class(3, 8), 10) == "0.375");
}

TEST_CASE("bisection on the golden quadratic") {
  const double tol = 1e-12;
  double x = bisect_root([](double t) { return t * t - t - 1; }, 1, 2, tol);
  CHECK(std::fabs(x - (1 + std::sqrt(5.0)) / 2) <= 2 * tol);
}

TEST_CASE("bisection on x^3 - x^2 - 1 against Newton") {
  const double tol = 1e-12;
  auto f = [](double t) { return t * t * t - t * t - 1; };
  double x = bisect_root(f, 1, 2, tol);
  double newton = oracle::newton([&](double t) { return f(t); },
                                 [](double t) { return 3 * t * t - 2 * t; }, 1.5);
  CHECK(std::fabs(x - newton) <= 2 * tol);
  CHECK(x == doctest::Approx(1.4655712318).epsilon(1e-10));
  // Residual bounded by slope at hi times the bracket width.
  CHECK(std::fabs(f(x)) <= (3 * 4 - 2 * 2) * 2 * tol);
}

TEST_CASE("bisection trivial and failure cases") {
  CHECK(bisect_root([](double t) { return t - 1; }, 0.5, 2, 1e-14) == doctest::Approx(1.0));
  CHECK_THROWS_AS(bisect_root([](double t) { return t * t + 1; }, 0, 1, 1e-9), Error);
}

TEST_CASE("interval bisection encloses the golden ratio") {
  std::vector<mpz_class> p = {1, -1, -1};
  BoundedReal enc = bisect_root_enclosure(
      [&](const BoundedReal& x) { return eval_polynomial(p, x); }, 1, 2, 200);
  BoundedReal sqrt5;
  {
    mpfr_t s;
    mpfr_init2(s, 400);
    mpfr_sqrt_ui(s, 5, MPFR_RNDN);
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), s);
    mpfr_clear(s);
    sqrt5 = BoundedReal::from_rational((1 + q) / 2, 400);
  }
  CHECK(enc.width() < 1e-55);
  CHECK(compare(enc, sqrt5 + BoundedReal::from_double(0, 1e-100)) == Ordering::Indeterminate);
  CHECK(std::fabs(enc.center() - (1 + std::sqrt(5.0)) / 2) < 1e-15);
}
