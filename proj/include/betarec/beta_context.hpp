#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "betarec/bounded_real.hpp"
#include "betarec/word.hpp"

namespace betarec {

/// Unique root in (lo, hi) of c[0] x^d + ... + c[d].
struct PolynomialRoot {
  std::vector<mpz_class> coefficients;
  mpq_class lo;
  mpq_class hi;
};

using BetaSource = std::variant<mpq_class, PolynomialRoot>;

struct ContextConfig {
  mpfr_prec_t min_precision = 128;
  mpfr_prec_t max_precision = 1 << 16;
};

/// A base beta > 1 together with lazily computed, cached expansion data.
///
/// Copies share the cache. Issued digits never change; the cache only grows.
class BetaContext {
 public:
  static BetaContext from_rational(const mpq_class& beta, ContextConfig config = {});
  static BetaContext from_polynomial(PolynomialRoot root, ContextConfig config = {},
                                     std::string label = {});
  /// "golden", "tribonacci", an integer, a decimal or a fraction.
  static BetaContext parse(const std::string& text, ContextConfig config = {});

  const BetaSource& source() const;
  const std::string& label() const;
  const ContextConfig& config() const;
  bool is_rational() const;
  /// Exact value when the base is rational.
  std::optional<mpq_class> rational_value() const;

  /// Enclosure of beta with at least the given precision.
  BoundedReal value(mpfr_prec_t prec) const;
  BoundedReal value() const { return value(config().min_precision); }
  double approx() const;
  double log2_beta() const;
  /// Largest digit, ceil(beta) - 1.
  int alphabet_max() const;

  /// First n digits of the infinite expansion of 1.
  Word eps_star(std::size_t n) const;
  /// Length m of the finite expansion of 1, if found within the digits computed so far.
  std::optional<std::size_t> simple_parry_length() const;
  /// Forces computation up to depth digits and reports m if the expansion of 1 ends there.
  std::optional<std::size_t> detect_simple_parry(std::size_t depth) const;
  /// Finite expansion of 1 for a simple Parry base.
  std::optional<Word> finite_expansion_of_one() const;

  /// Marks the base as simple Parry with the given expansion of 1. Used for
  /// bases built from a truncation, where the expansion is known.
  void assume_finite_expansion(const Word& expansion_of_one) const;

  /// Identity of the shared cache, for use as a map key.
  const void* id() const { return state_.get(); }

 private:
  struct State;
  explicit BetaContext(std::shared_ptr<State> state) : state_(std::move(state)) {}
  std::shared_ptr<State> state_;
};

}  // namespace betarec
