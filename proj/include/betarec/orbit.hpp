#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "betarec/beta_context.hpp"
#include "betarec/word.hpp"

namespace betarec {

/// Digit stream of a point x, extended on demand. The digit at index n + k
/// is digit k of T^n x.
///
/// Copies share the stream. Extension is synchronized and append-only:
/// snapshots handed out earlier stay valid and unchanged.
class OrbitView {
 public:
  using Digits = std::vector<Digit>;

  /// x in [0, 1) given exactly.
  static OrbitView from_rational(const BetaContext& ctx, const mpq_class& x);
  /// A finite stream; it cannot be extended.
  static OrbitView from_digits(const BetaContext& ctx, Word digits);
  /// preperiod followed by period repeated forever.
  static OrbitView from_periodic(const BetaContext& ctx, Word preperiod, Word period);

  const BetaContext& context() const;
  std::size_t depth() const;
  bool extendable() const;
  /// Tries to make at least n digits available; returns the available count.
  std::size_t ensure(std::size_t n) const;
  std::shared_ptr<const Digits> snapshot() const;
  Word prefix(std::size_t n) const;

  /// x itself when it was given as a rational.
  std::optional<mpq_class> exact_point() const;
  /// T^n x exactly, when x and beta are both rational.
  std::optional<mpq_class> exact_iterate(std::size_t n) const;
  /// Period p when the stream is known to be purely periodic.
  std::optional<std::size_t> known_period() const;

 private:
  struct Impl;
  explicit OrbitView(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<Impl> impl_;
};

/// Z-array of a digit sequence: z[i] = length of the longest common prefix of
/// s and s[i..]; z[0] = |s|.
std::vector<std::uint32_t> z_array(const std::vector<Digit>& s);

}  // namespace betarec
