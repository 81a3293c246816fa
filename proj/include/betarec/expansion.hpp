#pragma once

#include <cstddef>

#include "betarec/beta_context.hpp"
#include "betarec/bounded_real.hpp"
#include "betarec/word.hpp"

namespace betarec {

struct ExpandOptions {
  /// Take an interval that straddles an integer k and is narrower than
  /// 2^-snap_bits as landing exactly on k. Off by default.
  bool snap_exact_hits = false;
  long snap_bits = 0;  // 0 means half the working precision
};

/// First n greedy digits of x in base beta.
/// Throws IndeterminateDigit when a floor cannot be decided at x's precision.
Word beta_expand(const BoundedReal& x, const BetaContext& ctx, std::size_t n,
                 ExpandOptions options = {});

/// First n digits of an exact rational x in [0, 1), raising precision as needed.
Word expand_rational(const mpq_class& x, const BetaContext& ctx, std::size_t n);

/// sum w_i beta^-i plus the tail [0, beta^-n]: the closed hull of the
/// points whose expansion starts with w.
BoundedReal evaluate_word(const Word& w, const BetaContext& ctx, mpfr_prec_t prec = 0);

/// sum w_i beta^-i without the tail.
BoundedReal word_value(const Word& w, const BetaContext& ctx, mpfr_prec_t prec = 0);

/// Base beta_N: the root above 1 of 1 = sum_{i<=N} e_i x^-i, where e is the
/// length-N prefix of the expansion of 1 for ctx.
BetaContext approximate_beta(const BetaContext& ctx, std::size_t N);

}  // namespace betarec
