#include "betarec/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "betarec/error.hpp"
#include "betarec/expansion.hpp"

namespace betarec {

namespace {

constexpr std::int64_t kMaxTerm = std::int64_t{1} << 62;

std::int64_t to_int64(const mpz_class& z) {
  if (z < 0 || !mpz_fits_slong_p(z.get_mpz_t()) || z.get_si() >= kMaxTerm) {
    throw Error(ErrorKind::Budget, "sequence term exceeds the 64-bit range");
  }
  return z.get_si();
}

mpz_class floor_q(const mpq_class& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return f;
}

mpq_class qpow(const mpq_class& b, std::size_t e) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), b.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), b.get_den_mpz_t(), e);
  mpq_class out(num, den);
  out.canonicalize();
  return out;
}

// Raw (n'_k, m'_k) for k >= 1.
std::pair<mpz_class, mpz_class> raw_terms(const mpq_class& r_hat, const mpq_class& r,
                                          std::size_t k) {
  mpq_class base;
  if (r_hat == 0) {
    mpz_class kk;
    mpz_ui_pow_ui(kk.get_mpz_t(), k, k);
    base = kk;
  } else {
    base = qpow(r / r_hat, k);
  }
  return {floor_q(base), floor_q((r + 1) * base)};
}

// Sequences for raw indices shift+1..shift+K with +1 bumps.
SequencePlan bumped(const mpq_class& r_hat, const mpq_class& r, std::size_t K, std::size_t shift) {
  SequencePlan out;
  out.shift = shift;
  mpz_class prev_n = 0, prev_m = 0;
  for (std::size_t i = 0; i < K; ++i) {
    auto [n, m] = raw_terms(r_hat, r, shift + i + 1);
    if (i > 0) {
      n = std::max<mpz_class>(n, prev_m + 1);
      m = std::max<mpz_class>(m, n + (prev_m - prev_n));
    }
    n = std::max<mpz_class>(n, 1);
    m = std::max<mpz_class>(m, n + 1);
    out.n.push_back(to_int64(n));
    out.m.push_back(to_int64(m));
    prev_n = n;
    prev_m = m;
  }
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  if (a > kMaxTerm - b) throw Error(ErrorKind::Budget, "sequence term exceeds the 64-bit range");
  return a + b;
}

std::size_t to_size(std::int64_t v) { return static_cast<std::size_t>(v); }

bool all_zero(const Word& w) {
  return std::all_of(w.begin(), w.end(), [](Digit d) { return d == 0; });
}

bool starts_with(const Word& w, const Word& prefix) {
  if (prefix.size() > w.size()) return false;
  return std::equal(prefix.begin(), prefix.end(), w.begin());
}

// u_k from the base word (u_{k-1}, v_k) of length n_k.
Word repeat_and_pad(const Word& base, std::int64_t ell, std::int64_t p, std::size_t N) {
  Word out = base.power(to_size(ell));
  out.append(pad(base, to_size(p), N));
  return out;
}

Word first_level(const CantorPlan& plan, const Word& u) {
  const std::size_t n1 = to_size(plan.n[0]);
  Word v1 = u.power(n1 / plan.M);
  v1.append(Word(n1 % plan.M, 0));
  return repeat_and_pad(v1, plan.ell[0], plan.p[0], plan.N);
}

}  // namespace

SequencePlan plan_sequences(const mpq_class& r_hat, const mpq_class& r, std::size_t K,
                            SequenceOptions options) {
  if (K < 3) throw Error(ErrorKind::InvalidArgument, "K must be at least 3");
  if (r <= 0) throw Error(ErrorKind::Domain, "r must be positive");
  if (r_hat < 0) throw Error(ErrorKind::Domain, "r_hat must be non-negative");
  if (r_hat > r / (1 + r)) {
    throw Error(ErrorKind::CountableRegime,
                "countable regime: r_hat exceeds r/(1+r), the set is countable");
  }
  for (std::size_t shift = 0; shift < 64; ++shift) {
    SequencePlan s = bumped(r_hat, r, K, shift);
    const std::int64_t offset = std::max<std::int64_t>(0, options.min_first - s.n[0]);
    if (offset > 0 &&
        static_cast<double>(offset) > options.offset_tolerance * static_cast<double>(s.n.back())) {
      continue;
    }
    s.offset = offset;
    for (auto& v : s.n) v = checked_add(v, offset);
    for (auto& v : s.m) v = checked_add(v, offset);
    return s;
  }
  throw Error(ErrorKind::Infeasible, "no index shift meets the first-term requirement");
}

NMChoice choose_N_M(const BetaContext& ctx, const mpq_class& delta, std::size_t max_M) {
  if (delta <= 0 || delta >= 1) throw Error(ErrorKind::InvalidArgument, "delta must lie in (0, 1)");
  const mpfr_prec_t prec = 256;
  const BoundedReal log_beta = ctx.value(prec).log();
  const BoundedReal shrink = BoundedReal::from_rational(1 - delta, prec);
  const Word eps = ctx.eps_star(max_M + 2);

  std::vector<std::optional<BetaContext>> cache(max_M + 3);
  std::vector<bool> tried(max_M + 3, false);
  auto beta_N = [&](std::size_t N) -> const std::optional<BetaContext>& {
    if (!tried[N]) {
      tried[N] = true;
      if (eps[N - 1] > 0 && eps.prefix(N).digit_sum() > 1) cache[N] = approximate_beta(ctx, N);
    }
    return cache[N];
  };

  double best = -1e300;
  for (std::size_t M = 2; M <= max_M; ++M) {
    const BoundedReal power = (BoundedReal(static_cast<long>(M), prec) * shrink * log_beta).exp();
    const BoundedReal rhs = BoundedReal(static_cast<long>(M * (M + 1)), prec) +
                            BoundedReal(static_cast<long>(M), prec) * power;
    auto holds = [&](std::size_t N, mpz_class& count) {
      count = count_admissible(*beta_N(N), M);
      const BoundedReal lhs = BoundedReal::from_integer(count, prec);
      const double margin = ((lhs - rhs) / BoundedReal(static_cast<long>(M), prec)).center();
      best = std::max(best, margin);
      return compare(lhs, rhs) == Ordering::Greater ||
             (lhs.is_exact() && rhs.is_exact() && mpfr_equal_p(lhs.lower(), rhs.lower()));
    };
    // Languages are nested in N, so the largest candidate decides whether any N works.
    std::size_t top = 0;
    for (std::size_t N = M + 1; N >= 1; --N) {
      if (beta_N(N)) {
        top = N;
        break;
      }
    }
    if (top == 0) continue;
    mpz_class count;
    if (!holds(top, count)) continue;
    for (std::size_t N = 1; N <= top; ++N) {
      if (!beta_N(N)) continue;
      if (holds(N, count)) {
        NMChoice out{N, M, *beta_N(N), count, 0.0};
        const BoundedReal lhs = BoundedReal::from_integer(count, prec);
        out.margin = ((lhs - rhs) / BoundedReal(static_cast<long>(M), prec)).center();
        return out;
      }
    }
  }
  throw Error(ErrorKind::Infeasible, "no (N, M) found with M <= " + std::to_string(max_M) +
                                         "; best margin " + std::to_string(best));
}

FullBlockSet::FullBlockSet(const BetaContext& beta, const BetaContext& beta_N, std::size_t M)
    : M_(M),
      max_digit_(beta_N.alphabet_max()),
      beta_automaton_(FollowerAutomaton::build(beta, M + 1)),
      beta_N_automaton_(FollowerAutomaton::build(beta_N, M + 1)) {
  if (M == 0) throw Error(ErrorKind::InvalidArgument, "M must be positive");
  const std::size_t a_states = beta_automaton_.depth() + 1;
  b_states_ = beta_N_automaton_.depth() + 1;
  completions_.assign(M + 1, std::vector<mpz_class>(a_states * b_states_));
  for (std::size_t b = 0; b < b_states_; ++b) completions_[M][b] = 1;  // a = 0
  for (std::size_t i = M; i-- > 0;) {
    auto& layer = completions_[i];
    const auto& next = completions_[i + 1];
    for (std::size_t a = 0; a < a_states; ++a) {
      for (std::size_t b = 0; b < b_states_; ++b) {
        mpz_class& c = layer[a * b_states_ + b];
        for (int d = 0; d <= max_digit_; ++d) {
          const int a2 = beta_automaton_.step(static_cast<int>(a), d);
          const int b2 = beta_N_automaton_.step(static_cast<int>(b), d);
          if (a2 < 0 || b2 < 0) continue;
          c += next[static_cast<std::size_t>(a2) * b_states_ + static_cast<std::size_t>(b2)];
        }
      }
    }
  }
  count_ = completions_[0][0];
}

const mpz_class& FullBlockSet::completions(std::size_t layer, int a, int b) const {
  if (a < 0 || b < 0) return zero_;
  const std::size_t idx = static_cast<std::size_t>(a) * b_states_ + static_cast<std::size_t>(b);
  if (idx >= completions_[layer].size()) return zero_;
  return completions_[layer][idx];
}

bool FullBlockSet::contains(const Word& w) const {
  if (w.size() != M_) return false;
  return count_with_prefix(w) == 1;
}

mpz_class FullBlockSet::count_with_prefix(const Word& prefix) const {
  if (prefix.size() > M_) return 0;
  int a = 0, b = 0;
  for (Digit d : prefix) {
    a = beta_automaton_.step(a, d);
    b = beta_N_automaton_.step(b, d);
    if (a < 0 || b < 0) return 0;
  }
  return completions(prefix.size(), a, b);
}

Word FullBlockSet::unrank(const mpz_class& idx) const {
  if (idx < 0 || idx >= count_) throw Error(ErrorKind::InvalidArgument, "rank out of range");
  mpz_class rest = idx;
  Word out;
  int a = 0, b = 0;
  for (std::size_t i = 0; i < M_; ++i) {
    for (int d = 0;; ++d) {
      if (d > max_digit_) throw Error(ErrorKind::InvalidArgument, "rank out of range");
      const int a2 = beta_automaton_.step(a, d);
      const int b2 = beta_N_automaton_.step(b, d);
      const mpz_class& c = completions(i + 1, a2, b2);
      if (rest < c) {
        out.push_back(static_cast<Digit>(d));
        a = a2;
        b = b2;
        break;
      }
      rest -= c;
    }
  }
  return out;
}

Word FullBlockSet::sample(std::mt19937_64& rng) const { return unrank(random_below(rng, count_)); }

mpz_class FullBlockSet::distinct_prefixes(std::size_t j) const {
  if (j > M_) throw Error(ErrorKind::InvalidArgument, "prefix longer than the block");
  const std::size_t states = completions_[0].size();
  std::vector<mpz_class> reach(states);
  reach[0] = 1;
  for (std::size_t i = 0; i < j; ++i) {
    std::vector<mpz_class> next(states);
    for (std::size_t s = 0; s < states; ++s) {
      if (reach[s] == 0) continue;
      const int a = static_cast<int>(s / b_states_);
      const int b = static_cast<int>(s % b_states_);
      for (int d = 0; d <= max_digit_; ++d) {
        const int a2 = beta_automaton_.step(a, d);
        const int b2 = beta_N_automaton_.step(b, d);
        if (a2 < 0 || b2 < 0) continue;
        next[static_cast<std::size_t>(a2) * b_states_ + static_cast<std::size_t>(b2)] += reach[s];
      }
    }
    reach = std::move(next);
  }
  mpz_class out = 0;
  for (std::size_t s = 0; s < states; ++s) {
    if (reach[s] != 0 && completions_[j][s] != 0) out += reach[s];
  }
  return out;
}

std::vector<Word> FullBlockSet::enumerate(std::size_t limit) const {
  if (count_ > limit) throw Error(ErrorKind::Budget, "block set too large to enumerate");
  std::vector<Word> out;
  for (mpz_class i = 0; i < count_; ++i) out.push_back(unrank(i));
  return out;
}

MSet::MSet(std::shared_ptr<const FullBlockSet> blocks, const Word& u) : blocks_(std::move(blocks)) {
  for (std::size_t i = 1; i <= u.size(); ++i) {
    Word rot = u.rotate(i);
    if (blocks_->contains(rot)) excluded_.insert(std::move(rot));
  }
  count_ = blocks_->count() - static_cast<unsigned long>(excluded_.size());
  if (count_ <= 0) throw Error(ErrorKind::Infeasible, "construction infeasible at this (N, M)");
}

bool MSet::contains(const Word& w) const {
  return blocks_->contains(w) && excluded_.count(w) == 0;
}

mpz_class MSet::count_with_prefix(const Word& prefix) const {
  mpz_class c = blocks_->count_with_prefix(prefix);
  for (const Word& e : excluded_) {
    if (starts_with(e, prefix)) --c;
  }
  return c;
}

mpz_class MSet::distinct_prefixes(std::size_t j) const {
  mpz_class out = blocks_->distinct_prefixes(j);
  std::set<Word> lost;
  for (const Word& e : excluded_) {
    Word p = e.prefix(j);
    if (count_with_prefix(p) == 0) lost.insert(std::move(p));
  }
  out -= static_cast<unsigned long>(lost.size());
  return out;
}

Word MSet::sample(std::mt19937_64& rng) const {
  for (;;) {
    Word w = blocks_->sample(rng);
    if (excluded_.count(w) == 0) return w;
  }
}

mpz_class random_below(std::mt19937_64& rng, const mpz_class& bound) {
  if (bound <= 0) throw Error(ErrorKind::InvalidArgument, "bound must be positive");
  const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  const std::size_t chunks = (bits + 63) / 64;
  for (;;) {
    mpz_class z = 0;
    for (std::size_t i = 0; i < chunks; ++i) {
      const std::uint64_t r = rng();
      z <<= 64;
      z += mpz_class(static_cast<unsigned long>(r >> 32)) << 32;
      z += static_cast<unsigned long>(r & 0xffffffffu);
    }
    z >>= static_cast<mp_bitcnt_t>(chunks * 64 - bits);
    if (z < bound) return z;
  }
}

Word pad(const Word& w, std::size_t p, std::size_t N) {
  if (p <= N) return Word(p, 0);
  if (w.size() < p - N) throw Error(ErrorKind::InvalidArgument, "word shorter than p - N");
  Word out = w.prefix(p - N);
  out.append(Word(N, 0));
  return out;
}

CantorPlan make_plan(const BetaContext& ctx, const mpq_class& r_hat, const mpq_class& r,
                     const mpq_class& delta, std::size_t K, PlanOptions options) {
  if (delta <= 0 || delta >= 1) throw Error(ErrorKind::InvalidArgument, "delta must lie in (0, 1)");
  std::size_t N = 0, M = 0;
  bool holds = true;
  std::optional<BetaContext> beta_N;
  if (options.N && options.M) {
    N = *options.N;
    M = *options.M;
    const Word eps = ctx.eps_star(N);
    if (N == 0 || eps[N - 1] == 0) throw Error(ErrorKind::InvalidTruncation, "eps*_N must be positive");
    beta_N = approximate_beta(ctx, N);
    const mpfr_prec_t prec = 256;
    const mpz_class count = count_admissible(*beta_N, M);
    const BoundedReal power = (BoundedReal(static_cast<long>(M), prec) *
                               BoundedReal::from_rational(1 - delta, prec) * ctx.value(prec).log())
                                  .exp();
    const BoundedReal rhs = BoundedReal(static_cast<long>(M * (M + 1)), prec) +
                            BoundedReal(static_cast<long>(M), prec) * power;
    holds = compare(BoundedReal::from_integer(count, prec), rhs) == Ordering::Greater;
  } else {
    NMChoice c = choose_N_M(ctx, delta, options.max_M);
    N = c.N;
    M = c.M;
    beta_N = c.beta_N;
  }
  SequenceOptions so;
  so.min_first = static_cast<std::int64_t>(2 * M + 1);
  so.offset_tolerance = options.offset_tolerance;
  SequencePlan seq = plan_sequences(r_hat, r, K, so);

  CantorPlan plan{.r_hat = r_hat,
                  .r = r,
                  .delta = delta,
                  .beta = ctx,
                  .beta_N = *beta_N,
                  .N = N,
                  .M = M,
                  .n = seq.n,
                  .m = seq.m,
                  .ell = {},
                  .p = {},
                  .t = {},
                  .q = {},
                  .shift = seq.shift,
                  .offset = seq.offset,
                  .inequality_holds = holds,
                  .blocks = nullptr};
  const auto Mi = static_cast<std::int64_t>(M);
  for (std::size_t k = 0; k < K; ++k) {
    plan.ell.push_back(plan.m[k] / plan.n[k]);
    plan.p.push_back(plan.m[k] % plan.n[k]);
    if (k + 1 < K) {
      const std::int64_t gap = plan.n[k + 1] - plan.m[k];
      plan.t.push_back(gap / Mi);
      plan.q.push_back(gap % Mi);
    }
  }
  plan.blocks = std::make_shared<const FullBlockSet>(ctx, *beta_N, M);
  if (plan.blocks->count() <= 1) {
    throw Error(ErrorKind::Infeasible, "construction infeasible at this (N, M)");
  }
  return plan;
}

LevelCounts level_counts(const CantorPlan& plan, std::size_t k_max, std::optional<Word> u) {
  if (k_max == 0 || k_max > plan.K()) throw Error(ErrorKind::InvalidArgument, "level out of range");
  const FullBlockSet& F = *plan.blocks;
  LevelCounts out;
  out.u = u ? *u : F.unrank(1);
  if (!F.contains(out.u) || all_zero(out.u)) {
    throw Error(ErrorKind::InvalidArgument, "u must be a nonzero full block");
  }
  out.full_blocks = F.count();
  MSet ms(plan.blocks, out.u);
  out.m_set = ms.count();
  out.D.push_back(F.count() - 1);
  out.G.push_back(out.D.back());
  for (std::size_t k = 2; k <= k_max; ++k) {
    mpz_class d;
    mpz_pow_ui(d.get_mpz_t(), ms.count().get_mpz_t(), static_cast<unsigned long>(plan.t[k - 2]));
    out.D.push_back(d);
    out.G.push_back(out.G.back() * d);
  }
  return out;
}

namespace {

// Branch through the given level. The last level stops once it covers limit
// digits; draws happen in digit order, so a smaller limit yields a prefix.
Branch grow_branch(const CantorPlan& plan, std::uint64_t seed, std::size_t levels,
                   std::size_t limit) {
  if (levels == 0 || levels > plan.K()) throw Error(ErrorKind::InvalidArgument, "level out of range");
  std::mt19937_64 rng(seed);
  const FullBlockSet& F = *plan.blocks;
  Branch out;
  out.u = F.unrank(1 + random_below(rng, F.count() - 1));
  out.levels.push_back(first_level(plan, out.u));
  if (levels == 1) return out;
  MSet ms(plan.blocks, out.u);
  for (std::size_t k = 2; k <= levels; ++k) {
    const bool last = k == levels;
    Word base = out.levels.back();
    for (std::int64_t j = 0; j < plan.t[k - 2]; ++j) {
      if (last && base.size() >= limit) break;
      base.append(ms.sample(rng));
    }
    if (last && base.size() >= limit) {
      out.levels.push_back(std::move(base));
      break;
    }
    base.append(Word(to_size(plan.q[k - 2]), 0));
    out.levels.push_back(repeat_and_pad(base, plan.ell[k - 1], plan.p[k - 1], plan.N));
  }
  return out;
}

}  // namespace

Branch sample_branch(const CantorPlan& plan, std::uint64_t seed, std::size_t levels) {
  return grow_branch(plan, seed, levels, std::numeric_limits<std::size_t>::max());
}

std::vector<std::vector<Word>> exhaustive_levels(const CantorPlan& plan, std::size_t levels,
                                                 std::size_t max_words) {
  if (levels == 0 || levels > plan.K()) throw Error(ErrorKind::InvalidArgument, "level out of range");
  const FullBlockSet& F = *plan.blocks;
  const std::vector<Word> all = F.enumerate(max_words);
  std::size_t total = 0;
  auto charge = [&](std::size_t n) {
    total += n;
    if (total > max_words) throw Error(ErrorKind::Budget, "branch budget exceeded");
  };
  std::vector<std::vector<Word>> out(1);
  std::vector<Word> roots;  // level-1 block of each branch
  for (const Word& u : all) {
    if (all_zero(u)) continue;
    charge(1);
    out[0].push_back(first_level(plan, u));
    roots.push_back(u);
  }
  for (std::size_t k = 2; k <= levels; ++k) {
    std::vector<Word> next;
    std::vector<Word> next_roots;
    const auto t = to_size(plan.t[k - 2]);
    for (std::size_t b = 0; b < out.back().size(); ++b) {
      const Word& prev = out.back()[b];
      MSet ms(plan.blocks, roots[b]);
      std::vector<Word> members;
      for (const Word& w : all) {
        if (ms.contains(w)) members.push_back(w);
      }
      std::vector<std::size_t> digit(t, 0);
      for (;;) {
        charge(1);
        Word base = prev;
        for (std::size_t j = 0; j < t; ++j) base.append(members[digit[j]]);
        base.append(Word(to_size(plan.q[k - 2]), 0));
        next.push_back(repeat_and_pad(base, plan.ell[k - 1], plan.p[k - 1], plan.N));
        next_roots.push_back(roots[b]);
        std::size_t j = t;
        while (j > 0 && ++digit[j - 1] == members.size()) digit[--j] = 0;
        if (j == 0) break;
      }
    }
    out.push_back(std::move(next));
    roots = std::move(next_roots);
  }
  return out;
}

OrbitView sample_point(const CantorPlan& plan, std::uint64_t seed, std::size_t depth) {
  std::size_t level = 0;
  while (level < plan.K() && to_size(plan.m[level]) < depth) ++level;
  if (level == plan.K()) throw Error(ErrorKind::InvalidArgument, "depth exceeds m_K of the plan");
  Branch b = grow_branch(plan, seed, level + 1, depth);
  return OrbitView::from_digits(plan.beta, b.levels.back().prefix(depth));
}

namespace {

mpq_class measure_raw(const CantorPlan& plan, const Word& w) {
  const std::size_t L = w.size();
  if (L == 0) return 1;
  const FullBlockSet& F = *plan.blocks;
  const std::size_t M = plan.M;
  const mpz_class D1 = F.count() - 1;
  if (L < M) {
    mpz_class c = F.count_with_prefix(w);
    if (all_zero(w)) c -= 1;
    return mpq_class(c, D1);
  }
  const Word u = w.prefix(M);
  if (!F.contains(u) || all_zero(u)) return 0;
  Word cur = first_level(plan, u);
  auto agrees = [&](const Word& model, std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i) {
      if (w[i] != model[i]) return false;
    }
    return true;
  };
  if (!agrees(cur, 0, std::min(L, cur.size()))) return 0;
  mpq_class mu(mpz_class(1), D1);
  if (L <= cur.size()) return mu;

  MSet ms(plan.blocks, u);
  for (std::size_t k = 1;; ++k) {
    if (k >= plan.K()) throw Error(ErrorKind::InvalidArgument, "prefix longer than the plan");
    const std::size_t mk = to_size(plan.m[k - 1]);
    const std::size_t next_n = to_size(plan.n[k]);
    const auto t = to_size(plan.t[k - 1]);
    for (std::size_t j = 0; j < t; ++j) {
      const std::size_t begin = mk + j * M;
      if (begin >= L) break;
      const std::size_t len = std::min(M, L - begin);
      const Word block = w.slice(begin, len);
      const mpz_class c = len == M ? mpz_class(ms.contains(block) ? 1 : 0) : ms.count_with_prefix(block);
      if (c == 0) return 0;
      mu *= mpq_class(c, ms.count());
    }
    for (std::size_t i = mk + t * M; i < std::min(L, next_n); ++i) {
      if (w[i] != 0) return 0;
    }
    if (L <= next_n) return mu;
    Word base = w.prefix(next_n);
    cur = repeat_and_pad(base, plan.ell[k], plan.p[k], plan.N);
    if (!agrees(cur, next_n, std::min(L, cur.size()))) return 0;
    if (L <= cur.size()) return mu;
  }
}

}  // namespace

mpq_class measure(const CantorPlan& plan, const Word& w) {
  mpq_class mu = measure_raw(plan, w);
  mu.canonicalize();
  return mu;
}

}  // namespace betarec
