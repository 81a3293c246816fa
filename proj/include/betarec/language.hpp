#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "betarec/beta_context.hpp"
#include "betarec/bounded_real.hpp"
#include "betarec/word.hpp"

namespace betarec {

/// -1, 0, 1 for a <lex b, equal, a >lex b. Words must have equal length.
int lex_compare(const Word& a, const Word& b);

/// Direct check: every suffix is <=lex the prefix of eps* of the same length.
bool is_admissible_naive(const Word& w, const BetaContext& ctx);

/// Automaton tracking how much of eps* the word read so far ends with.
///
/// State s means the read word ends with eps*_1..eps*_s. From s, a digit
/// below eps*_{s+1} returns to 0, eps*_{s+1} moves to s+1 and anything larger
/// is rejected. For a simple Parry base the states wrap modulo the period of
/// eps*, so state 0 is also reached after a whole period.
class FollowerAutomaton {
 public:
  static constexpr int kReject = -1;
  static constexpr int kOverflow = -2;

  /// Exact for simple Parry bases; otherwise valid for words of length <= depth.
  static FollowerAutomaton build(const BetaContext& ctx, std::size_t depth);

  int step(int state, int digit) const;
  /// Final state after w, or kReject.
  int run(const Word& w, int state = 0) const;
  bool accepts(const Word& w) const { return run(w) >= 0; }

  /// Largest digit allowed from a state (the next digit of eps*).
  int max_digit(int state) const { return pattern_[static_cast<std::size_t>(state)]; }
  std::size_t num_states() const { return periodic_ ? pattern_.size() : pattern_.size() + 1; }
  bool periodic() const { return periodic_; }
  std::size_t depth() const { return pattern_.size(); }

 private:
  std::vector<Digit> pattern_;
  bool periodic_ = false;
};

bool is_admissible(const Word& w, const BetaContext& ctx);

/// Number of admissible words of length n.
mpz_class count_admissible(const BetaContext& ctx, std::size_t n);

/// Lexicographic stream of all admissible words of length n.
class AdmissibleEnumerator {
 public:
  AdmissibleEnumerator(const BetaContext& ctx, std::size_t n);
  /// Writes the next word; false once exhausted.
  bool next(Word& out);
  const FollowerAutomaton& automaton() const { return automaton_; }
  /// State after the word last returned.
  int state() const { return states_.back(); }

 private:
  FollowerAutomaton automaton_;
  std::size_t n_;
  Word word_;
  std::vector<int> states_;
  bool started_ = false;
  bool done_ = false;
};

/// True when the order-n cylinder of w has length beta^-n. Throws on
/// inadmissible input.
bool is_full(const Word& w, const BetaContext& ctx);

struct Cylinder {
  Word word;
  BoundedReal left;
  BoundedReal length;
  bool full = false;
};

/// Left endpoint and length of the cylinder of w; the length is known to
/// within beta^-(n+refine).
Cylinder cylinder(const Word& w, const BetaContext& ctx, std::size_t refine = 64);

struct FullWindowReport {
  bool holds = true;
  std::size_t cylinders = 0;
  std::size_t full = 0;
  std::size_t longest_nonfull_run = 0;
  /// Lex index of the first cylinder of an offending run.
  std::optional<std::size_t> first_violation;
};

/// Scans order-n cylinders in positional order and checks that every n+1
/// consecutive ones include a full one.
FullWindowReport full_window_check(const BetaContext& ctx, std::size_t n);

}  // namespace betarec
