#include "betarec/language.hpp"

#include <algorithm>

#include "betarec/error.hpp"
#include "betarec/expansion.hpp"

namespace betarec {

int lex_compare(const Word& a, const Word& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::LengthMismatch, "length mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

bool is_admissible_naive(const Word& w, const BetaContext& ctx) {
  const std::size_t n = w.size();
  if (n == 0) return true;
  const Word e = ctx.eps_star(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; j + i < n; ++i) {
      if (w[j + i] < e[i]) break;
      if (w[j + i] > e[i]) return false;
    }
  }
  return true;
}

FollowerAutomaton FollowerAutomaton::build(const BetaContext& ctx, std::size_t depth) {
  FollowerAutomaton a;
  Word e = ctx.eps_star(std::max<std::size_t>(depth, 1));
  if (auto m = ctx.simple_parry_length()) {
    a.pattern_ = ctx.eps_star(*m).digits();
    a.periodic_ = true;
  } else {
    a.pattern_ = std::move(e.digits());
  }
  return a;
}

int FollowerAutomaton::step(int state, int digit) const {
  if (state < 0) return state;
  const auto s = static_cast<std::size_t>(state);
  if (s >= pattern_.size()) return kOverflow;
  const int top = pattern_[s];
  if (digit < top) return 0;
  if (digit > top) return kReject;
  std::size_t next = s + 1;
  if (periodic_ && next == pattern_.size()) next = 0;
  return static_cast<int>(next);
}

int FollowerAutomaton::run(const Word& w, int state) const {
  for (Digit d : w) {
    state = step(state, d);
    if (state < 0) return state;
  }
  return state;
}

bool is_admissible(const Word& w, const BetaContext& ctx) {
  return FollowerAutomaton::build(ctx, w.size()).accepts(w);
}

mpz_class count_admissible(const BetaContext& ctx, std::size_t n) {
  const FollowerAutomaton a = FollowerAutomaton::build(ctx, n);
  const std::size_t states = a.num_states();
  std::vector<mpz_class> cur(states), next(states);
  cur[0] = 1;
  for (std::size_t step = 0; step < n; ++step) {
    for (auto& v : next) v = 0;
    for (std::size_t s = 0; s < a.depth(); ++s) {
      if (cur[s] == 0) continue;
      const int top = a.max_digit(static_cast<int>(s));
      if (top > 0) next[0] += cur[s] * top;
      next[static_cast<std::size_t>(a.step(static_cast<int>(s), top))] += cur[s];
    }
    std::swap(cur, next);
  }
  mpz_class total = 0;
  for (const auto& v : cur) total += v;
  return total;
}

AdmissibleEnumerator::AdmissibleEnumerator(const BetaContext& ctx, std::size_t n)
    : automaton_(FollowerAutomaton::build(ctx, n)), n_(n), word_(n, 0), states_(n + 1, 0) {}

bool AdmissibleEnumerator::next(Word& out) {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    for (std::size_t j = 0; j < n_; ++j) states_[j + 1] = automaton_.step(states_[j], 0);
    out = word_;
    return true;
  }
  for (std::size_t i = n_; i-- > 0;) {
    const int d = word_[i] + 1;
    if (d > automaton_.max_digit(states_[i])) continue;
    word_[i] = static_cast<Digit>(d);
    states_[i + 1] = automaton_.step(states_[i], d);
    for (std::size_t j = i + 1; j < n_; ++j) {
      word_[j] = 0;
      states_[j + 1] = automaton_.step(states_[j], 0);
    }
    out = word_;
    return true;
  }
  done_ = true;
  return false;
}

bool is_full(const Word& w, const BetaContext& ctx) {
  const int s = FollowerAutomaton::build(ctx, w.size()).run(w);
  if (s < 0) throw Error(ErrorKind::InadmissibleWord, "inadmissible word " + w.to_string());
  return s == 0;
}

Cylinder cylinder(const Word& w, const BetaContext& ctx, std::size_t refine) {
  const FollowerAutomaton a = FollowerAutomaton::build(ctx, w.size() + refine);
  int s = a.run(w);
  if (s < 0) throw Error(ErrorKind::InadmissibleWord, "inadmissible word " + w.to_string());
  const mpfr_prec_t prec = std::max<mpfr_prec_t>(
      ctx.config().min_precision,
      static_cast<mpfr_prec_t>(static_cast<double>(w.size() + refine) * ctx.log2_beta()) + 64);
  Cylinder c;
  c.word = w;
  c.full = s == 0;
  c.left = word_value(w, ctx, prec);
  Word greedy;
  for (std::size_t i = 0; i < refine; ++i) {
    const int d = a.max_digit(s);
    greedy.push_back(static_cast<Digit>(d));
    s = a.step(s, d);
  }
  const BoundedReal beta = ctx.value(prec);
  BoundedReal tau = word_value(greedy, ctx, prec);
  tau = BoundedReal::span(tau, tau + beta.pow(-static_cast<long>(refine)));
  c.length = tau * beta.pow(-static_cast<long>(w.size()));
  return c;
}

FullWindowReport full_window_check(const BetaContext& ctx, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "order must be positive");
  FullWindowReport r;
  AdmissibleEnumerator en(ctx, n);
  Word w;
  std::size_t run = 0;
  std::size_t run_start = 0;
  while (en.next(w)) {
    const bool full = en.state() == 0;
    if (full) {
      ++r.full;
      run = 0;
    } else {
      if (run == 0) run_start = r.cylinders;
      ++run;
      r.longest_nonfull_run = std::max(r.longest_nonfull_run, run);
      if (run > n && !r.first_violation) {
        r.holds = false;
        r.first_violation = run_start;
      }
    }
    ++r.cylinders;
  }
  return r;
}

}  // namespace betarec
