#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "betarec/beta_context.hpp"
#include "betarec/bounded_real.hpp"
#include "betarec/orbit.hpp"
#include "betarec/word.hpp"

namespace betarec {

/// |T^n x - x|. Exact when x and beta are rational or the stream has period
/// dividing n. Otherwise computed from the two digit streams; the relative
/// error is at most beta^-(window - 1), window >= 64 digits past the first
/// disagreement.
BoundedReal recurrence_distance(const OrbitView& x, std::size_t n);

/// A finite exponent or the +infinity sentinel.
struct Exponent {
  bool infinite = false;
  double value = 0.0;

  static Exponent inf() { return {true, 0.0}; }
  /// value, or a very large number for the sentinel (for comparisons only).
  double ordered() const { return infinite ? 1e300 : value; }
};

/// Per-n recurrence levels v_n = -log_beta |T^n x - x| for n = 1..N.
struct RecurrenceSeries {
  std::vector<double> v;  // v[n - 1]
  /// Entries for which the stream ended first; those v are lower bounds.
  std::size_t lower_bounds = 0;
  /// Set when the available stream is purely periodic with this period.
  std::optional<std::size_t> period;
};

struct EstimateOptions {
  /// Tail window is [ceil(fraction * N), N].
  double window_fraction = 0.5;
};

struct ExponentEstimate {
  Exponent r;
  Exponent r_hat;
  std::size_t N = 0;
  std::size_t window_begin = 0;
  RecurrenceSeries series;
};

/// Smallest period p <= |s| / 2 such that s is p-periodic, if any.
std::optional<std::size_t> detect_period(const std::vector<Digit>& s,
                                         const std::vector<std::uint32_t>& z);

/// v_n for n = 1..N. Extends the stream as needed when it can.
RecurrenceSeries recurrence_series(const OrbitView& x, std::size_t N);

/// r: max over the tail window of M_n / n, where M_n = max_{j <= n} v_j.
/// r_hat: min over the tail window of M_n / n. So r_hat <= r always.
ExponentEstimate estimate_exponents(const OrbitView& x, std::size_t N_max,
                                    EstimateOptions options = {});
Exponent estimate_r(const OrbitView& x, std::size_t N_max, EstimateOptions options = {});
Exponent estimate_r_hat(const OrbitView& x, std::size_t N_max, EstimateOptions options = {});

/// Return times with gaps. Indices are 1-based digit positions.
struct ReturnProfile {
  std::vector<std::size_t> n;
  std::vector<std::size_t> m;
  std::vector<std::size_t> t;
  std::vector<BoundedReal> distance;
  bool monotone = false;
  /// Fewer than the requested number of terms fit in the depth budget.
  bool truncated = false;

  std::size_t size() const { return n.size(); }
};

/// First K return times n_k (digit n_k + 1 equals digit 1), with m_k the
/// largest m such that |T^{n_k} x - x| < beta^-(m - n_k) and t_k the end of
/// the maximal block after n_k that repeats the start of the stream. With
/// monotone, keeps only strict records of m_k - n_k. budget = 0 uses the
/// digits currently available (at least 4096 for extendable streams).
ReturnProfile extract_returns(const OrbitView& x, std::size_t K, bool monotone,
                              std::size_t budget = 0);

enum class PrefixForm { Overlap, BorrowForm, CarryForm };

const char* prefix_form_name(PrefixForm form);

/// Structural form of the first m_k digits for profile entry k (1-based).
/// Throws FormViolation when none of the three forms matches.
PrefixForm classify_prefix(const OrbitView& x, std::size_t k, const ReturnProfile& profile);

/// s_k, t_k and k(w) of a word; k(w) = s.size() - 1 when the last s equals |w|.
struct WordIndices {
  std::vector<std::size_t> s;  // s_1, s_2, ... ending with the first value equal to n
  std::vector<std::size_t> t;  // t_k for each s_k < n
  std::size_t k = 0;
};

WordIndices word_indices(const Word& w);

/// M_1(w), ..., M_levels(w), each filtered to admissible words. Throws Budget
/// when the total exceeds max_total words.
std::vector<std::set<Word>> generate_D_members(const Word& w, double r, std::size_t levels,
                                               const BetaContext& ctx,
                                               std::size_t max_total = 2000000);

/// M(w) = M'(w) union M''(w) union {w}, unfiltered.
std::set<Word> d_step(const Word& w, double r, const BetaContext& ctx);

/// Uniform random rational in [0, 1) with the given number of binary digits.
mpq_class uniform_rational(std::mt19937_64& rng, std::size_t bits);

/// Bits needed so that the first n digits of a uniform rational behave like
/// those of a uniform real.
std::size_t bits_for_digits(const BetaContext& ctx, std::size_t n);

}  // namespace betarec
