#include "betarec/expansion.hpp"

#include <algorithm>
#include <cmath>

#include "betarec/error.hpp"

namespace betarec {

Word beta_expand(const BoundedReal& x, const BetaContext& ctx, std::size_t n,
                 ExpandOptions options) {
  if (mpfr_sgn(x.lower()) < 0 || mpfr_cmp_ui(x.upper(), 1) >= 0) {
    throw Error(ErrorKind::Domain, "x must lie in [0, 1)");
  }
  const mpfr_prec_t prec = x.precision();
  const BoundedReal beta = ctx.value(prec);
  const long snap_bits = options.snap_bits > 0 ? options.snap_bits : static_cast<long>(prec / 2);
  Word out;
  out.digits().reserve(n);
  BoundedReal t = x;
  for (std::size_t i = 0; i < n; ++i) {
    BoundedReal y = beta * t;
    if (auto fl = y.floor_if_determinate()) {
      out.push_back(static_cast<Digit>(*fl));
      t = y - BoundedReal(*fl, prec);
      continue;
    }
    mpfr_t k;
    mpfr_init2(k, y.precision());
    mpfr_floor(k, y.upper());
    const long kv = mpfr_get_si(k, MPFR_RNDN);
    mpfr_clear(k);
    const bool tiny = y.width() < std::ldexp(1.0, -static_cast<int>(std::min<long>(snap_bits, 1000)));
    if (!options.snap_exact_hits || !tiny) {
      throw Error(ErrorKind::IndeterminateDigit,
                  "digit indeterminate at step " + std::to_string(i + 1));
    }
    out.push_back(static_cast<Digit>(kv));
    BoundedReal rest = y - BoundedReal(kv, prec);
    t = BoundedReal::span(BoundedReal(0L, prec), BoundedReal::hull(BoundedReal(0L, prec), rest));
  }
  return out;
}

Word expand_rational(const mpq_class& x, const BetaContext& ctx, std::size_t n) {
  if (x < 0 || x >= 1) throw Error(ErrorKind::Domain, "x must lie in [0, 1)");
  if (auto beta = ctx.rational_value()) {
    Word out;
    out.digits().reserve(n);
    mpq_class t = x;
    mpz_class d;
    for (std::size_t i = 0; i < n; ++i) {
      t *= *beta;
      mpz_fdiv_q(d.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
      out.push_back(static_cast<Digit>(d.get_ui()));
      t -= d;
    }
    return out;
  }
  mpfr_prec_t prec = std::max<mpfr_prec_t>(
      ctx.config().min_precision,
      static_cast<mpfr_prec_t>(static_cast<double>(n) * ctx.log2_beta() * 1.1) + 128);
  for (;;) {
    try {
      return beta_expand(BoundedReal::from_rational(x, prec), ctx, n);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::IndeterminateDigit) throw;
      if (prec >= ctx.config().max_precision) {
        throw Error(ErrorKind::PrecisionCap, std::string(e.what()) + " at the precision cap");
      }
      prec = std::min<mpfr_prec_t>(prec * 2, ctx.config().max_precision);
    }
  }
}

namespace {

mpfr_prec_t word_precision(const Word& w, const BetaContext& ctx, mpfr_prec_t prec) {
  if (prec > 0) return prec;
  return std::max<mpfr_prec_t>(
      ctx.config().min_precision,
      static_cast<mpfr_prec_t>(static_cast<double>(w.size()) * ctx.log2_beta()) + 64);
}

}  // namespace

BoundedReal word_value(const Word& w, const BetaContext& ctx, mpfr_prec_t prec) {
  prec = word_precision(w, ctx, prec);
  const BoundedReal beta = ctx.value(prec);
  BoundedReal v(0L, prec);
  for (std::size_t i = w.size(); i-- > 0;) {
    v += BoundedReal(static_cast<long>(w[i]), prec);
    v /= beta;
  }
  return v;
}

BoundedReal evaluate_word(const Word& w, const BetaContext& ctx, mpfr_prec_t prec) {
  prec = word_precision(w, ctx, prec);
  BoundedReal v = word_value(w, ctx, prec);
  BoundedReal tail = ctx.value(prec).pow(-static_cast<long>(w.size()));
  return BoundedReal::hull(v, v + tail);
}

BetaContext approximate_beta(const BetaContext& ctx, std::size_t N) {
  if (N == 0) throw Error(ErrorKind::InvalidTruncation, "truncation index must be positive");
  Word e = ctx.eps_star(N);
  if (e[N - 1] == 0) {
    throw Error(ErrorKind::InvalidTruncation,
                "invalid truncation index: digit " + std::to_string(N) + " is zero");
  }
  if (e.digit_sum() <= 1) {
    throw Error(ErrorKind::TruncationTooShort, "truncation too short: no root above 1");
  }
  if (N == 1) {
    // x - e_1 has the integer root e_1.
    BetaContext out = BetaContext::from_rational(mpq_class(e[0]), ctx.config());
    out.assume_finite_expansion(e);
    return out;
  }
  PolynomialRoot root;
  root.coefficients.reserve(N + 1);
  root.coefficients.emplace_back(1);
  for (std::size_t i = 0; i < N; ++i) root.coefficients.emplace_back(-static_cast<long>(e[i]));
  root.lo = 1;
  root.hi = e[0] + 1;
  BetaContext out = BetaContext::from_polynomial(std::move(root), ctx.config(),
                                                 ctx.label() + "_N" + std::to_string(N));
  out.assume_finite_expansion(e);
  return out;
}

}  // namespace betarec
