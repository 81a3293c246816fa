#include "betarec/root_finding.hpp"

#include <cmath>

#include "betarec/error.hpp"

namespace betarec {

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(lo < hi) || !(tol > 0)) {
    throw Error(ErrorKind::InvalidArgument, "bisection needs lo < hi and tol > 0");
  }
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) {
    throw Error(ErrorKind::NoRoot, "no bracketed root");
  }
  while (hi - lo > 2 * tol) {
    double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    double fm = f(mid);
    if (fm == 0) return mid;
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return lo + (hi - lo) / 2;
}

namespace {

int certain_sign(const BoundedReal& v) {
  if (v.is_positive()) return 1;
  if (v.is_negative()) return -1;
  return 0;
}

}  // namespace

BoundedReal bisect_root_enclosure(const std::function<BoundedReal(const BoundedReal&)>& f,
                                  const mpq_class& lo_q, const mpq_class& hi_q, mpfr_prec_t prec) {
  if (!(lo_q < hi_q)) throw Error(ErrorKind::InvalidArgument, "bisection needs lo < hi");
  const mpfr_prec_t wp = prec + 64;
  BoundedReal enclosure = BoundedReal::hull(BoundedReal::from_rational(lo_q, wp),
                                            BoundedReal::from_rational(hi_q, wp));
  mpfr_t a, b, mid, width;
  mpfr_inits2(wp, a, b, mid, width, static_cast<mpfr_ptr>(nullptr));
  mpfr_set(a, enclosure.lower(), MPFR_RNDD);
  mpfr_set(b, enclosure.upper(), MPFR_RNDU);

  auto eval_at = [&](mpfr_srcptr v) {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), v);
    return f(BoundedReal::from_rational(q, wp));
  };

  int sa = certain_sign(eval_at(a));
  int sb = certain_sign(eval_at(b));
  if (sa == 0 || sb == 0 || sa == sb) {
    mpfr_clears(a, b, mid, width, static_cast<mpfr_ptr>(nullptr));
    throw Error(ErrorKind::NoRoot, "no certified sign change on the bracket");
  }
  for (long iter = 0; iter < static_cast<long>(wp) + 64; ++iter) {
    mpfr_sub(width, b, a, MPFR_RNDU);
    long mag = std::max<long>(0, mpfr_get_exp(b));
    if (mpfr_cmp_ui_2exp(width, 1, mag - static_cast<long>(prec)) <= 0) break;
    mpfr_add(mid, a, b, MPFR_RNDN);
    mpfr_div_2ui(mid, mid, 1, MPFR_RNDN);
    if (!mpfr_less_p(a, mid) || !mpfr_less_p(mid, b)) break;
    int sm = certain_sign(eval_at(mid));
    if (sm == 0) break;
    if (sm == sa) {
      mpfr_set(a, mid, MPFR_RNDN);
    } else {
      mpfr_set(b, mid, MPFR_RNDN);
    }
  }
  mpq_class qa, qb;
  mpfr_get_q(qa.get_mpq_t(), a);
  mpfr_get_q(qb.get_mpq_t(), b);
  mpfr_clears(a, b, mid, width, static_cast<mpfr_ptr>(nullptr));
  return BoundedReal::hull(BoundedReal::from_rational(qa, wp), BoundedReal::from_rational(qb, wp));
}

BoundedReal eval_polynomial(const std::vector<mpz_class>& coefficients, const BoundedReal& x) {
  BoundedReal acc(0L, x.precision());
  for (const auto& c : coefficients) {
    acc *= x;
    acc += BoundedReal::from_integer(c, x.precision());
  }
  return acc;
}

}  // namespace betarec
