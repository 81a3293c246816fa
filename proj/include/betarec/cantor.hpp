#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "betarec/beta_context.hpp"
#include "betarec/language.hpp"
#include "betarec/orbit.hpp"
#include "betarec/word.hpp"

namespace betarec {

/// Return-time sequences n_k < m_k < n_{k+1}, index k - 1.
struct SequencePlan {
  std::vector<std::int64_t> n;
  std::vector<std::int64_t> m;
  /// The raw sequences start at index shift + 1.
  std::size_t shift = 0;
  /// Constant added to every term so that n_1 >= min_first.
  std::int64_t offset = 0;
};

struct SequenceOptions {
  /// Smallest allowed n_1 (2M + 1 once M is known).
  std::int64_t min_first = 0;
  /// Largest offset accepted, relative to n_K; otherwise the index is shifted.
  double offset_tolerance = 0.01;
};

/// Raw sequences floor(rho^k), floor((r + 1) rho^k) with rho = r / r_hat, or
/// k^k, floor((r + 1) k^k) when r_hat = 0; then +1 bumps for strict
/// interleaving and non-decreasing m_k - n_k, then shift and offset for n_1.
/// Throws CountableRegime when r_hat > r / (1 + r).
SequencePlan plan_sequences(const mpq_class& r_hat, const mpq_class& r, std::size_t K,
                            SequenceOptions options = {});

struct NMChoice {
  std::size_t N = 0;
  std::size_t M = 0;
  BetaContext beta_N;
  /// Number of beta_N-admissible words of length M.
  mpz_class count;
  /// count / M - M - 1 - beta^(M(1 - delta)), as a double.
  double margin = 0.0;
};

/// Smallest M, then smallest N <= M + 1 with eps*_N > 0, such that
/// #Sigma_{beta_N}^M / M - M - 1 >= beta^(M(1 - delta)), decided with exact
/// counts and interval powers.
NMChoice choose_N_M(const BetaContext& ctx, const mpq_class& delta, std::size_t max_M = 400);

/// beta_N-admissible words of length M that are full in Sigma_beta, with
/// exact ranking and uniform sampling.
class FullBlockSet {
 public:
  FullBlockSet(const BetaContext& beta, const BetaContext& beta_N, std::size_t M);

  std::size_t length() const { return M_; }
  const mpz_class& count() const { return count_; }
  bool contains(const Word& w) const;
  /// Members that start with the given prefix (|prefix| <= M).
  mpz_class count_with_prefix(const Word& prefix) const;
  /// Member of lexicographic rank idx.
  Word unrank(const mpz_class& idx) const;
  Word sample(std::mt19937_64& rng) const;
  /// Number of distinct length-j prefixes of members (j <= M).
  mpz_class distinct_prefixes(std::size_t j) const;
  /// All members in lexicographic order; throws Budget above the limit.
  std::vector<Word> enumerate(std::size_t limit = 1000000) const;

 private:
  struct Node {
    int a;  // state in the beta automaton
    int b;  // state in the beta_N automaton
  };
  // Completion count from layer i and state pair, or zero.
  const mpz_class& completions(std::size_t layer, int a, int b) const;

  std::size_t M_;
  int max_digit_;
  FollowerAutomaton beta_automaton_;
  FollowerAutomaton beta_N_automaton_;
  std::size_t b_states_;
  // completions_[i][a * b_states_ + b]
  std::vector<std::vector<mpz_class>> completions_;
  mpz_class count_;
  mpz_class zero_;
};

/// The block set M: full blocks other than the cyclic rotations of u.
class MSet {
 public:
  MSet(std::shared_ptr<const FullBlockSet> blocks, const Word& u);

  const mpz_class& count() const { return count_; }
  const std::set<Word>& excluded() const { return excluded_; }
  bool contains(const Word& w) const;
  mpz_class count_with_prefix(const Word& prefix) const;
  Word sample(std::mt19937_64& rng) const;
  mpz_class distinct_prefixes(std::size_t j) const;
  const FullBlockSet& blocks() const { return *blocks_; }

 private:
  std::shared_ptr<const FullBlockSet> blocks_;
  std::set<Word> excluded_;
  mpz_class count_;
};

/// Uniform integer in [0, bound).
mpz_class random_below(std::mt19937_64& rng, const mpz_class& bound);

/// a_p(w): 0^p when p <= N, else w|_{p-N} followed by 0^N.
Word pad(const Word& w, std::size_t p, std::size_t N);

struct PlanOptions {
  std::size_t max_M = 400;
  double offset_tolerance = 0.01;
  /// Use these instead of searching, when set.
  std::optional<std::size_t> N;
  std::optional<std::size_t> M;
};

struct CantorPlan {
  mpq_class r_hat;
  mpq_class r;
  mpq_class delta;
  BetaContext beta;
  BetaContext beta_N;
  std::size_t N = 0;
  std::size_t M = 0;
  /// Index k - 1 for k = 1..K.
  std::vector<std::int64_t> n, m, ell, p;
  /// n_{k+1} - m_k = t_k M + q_k, index k - 1 for k = 1..K-1.
  std::vector<std::int64_t> t, q;
  std::size_t shift = 0;
  std::int64_t offset = 0;
  /// Whether the (N, M) inequality holds; false only for forced (N, M).
  bool inequality_holds = true;
  std::shared_ptr<const FullBlockSet> blocks;

  std::size_t K() const { return n.size(); }
};

CantorPlan make_plan(const BetaContext& ctx, const mpq_class& r_hat, const mpq_class& r,
                     const mpq_class& delta, std::size_t K, PlanOptions options = {});

/// Exact level cardinalities for a branch with level-1 block u.
struct LevelCounts {
  Word u;
  mpz_class full_blocks;  // #F
  mpz_class m_set;        // #M for this u
  std::vector<mpz_class> D;  // index k - 1
  std::vector<mpz_class> G;
};

/// Counts up to level k_max. Without u, the canonical block is the
/// lexicographically smallest nonzero full block.
LevelCounts level_counts(const CantorPlan& plan, std::size_t k_max,
                         std::optional<Word> u = std::nullopt);

/// One branch u_1, ..., u_levels drawn from the construction measure.
struct Branch {
  Word u;                    // level-1 block
  std::vector<Word> levels;  // u_k, index k - 1
};

Branch sample_branch(const CantorPlan& plan, std::uint64_t seed, std::size_t levels);

/// All of G_1..G_levels; throws Budget when the total exceeds max_words.
std::vector<std::vector<Word>> exhaustive_levels(const CantorPlan& plan, std::size_t levels,
                                                 std::size_t max_words = 200000);

/// Point of E_N given by its first depth digits (depth <= m_K).
OrbitView sample_point(const CantorPlan& plan, std::uint64_t seed, std::size_t depth);

/// mu of the cylinder of w; 0 when w is not a prefix of any branch.
mpq_class measure(const CantorPlan& plan, const Word& w);

}  // namespace betarec
