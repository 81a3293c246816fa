#include "betarec/recurrence.hpp"

#include <algorithm>
#include <cmath>

#include "betarec/error.hpp"
#include "betarec/expansion.hpp"
#include "betarec/language.hpp"

namespace betarec {

namespace {

constexpr std::size_t kMaxStream = std::size_t{1} << 26;

using Digits = OrbitView::Digits;

enum class LevelStatus { Ok, Ambiguous, Truncated };

struct Level {
  LevelStatus status;
  double v;
};

// v_n from doubles: z agreeing digits, then the signed mantissa of the
// difference until it dominates the remaining tail. Ambiguous on deep
// cancellation; Truncated when the stream ends first (v is then a lower bound).
Level fast_level(const Digits& s, std::size_t z, std::size_t n, double beta, double log_beta) {
  const std::size_t L = s.size();
  if (n + z >= L) return {LevelStatus::Truncated, static_cast<double>(z)};
  double sum = 0.0;
  double scale = 1.0 / beta;
  for (std::size_t i = 0; n + z + i < L; ++i) {
    sum += (static_cast<int>(s[n + z + i]) - static_cast<int>(s[z + i])) * scale;
    if (std::fabs(sum) > scale * 1073741824.0) {
      return {LevelStatus::Ok, static_cast<double>(z) - std::log(std::fabs(sum)) / log_beta};
    }
    if (scale < 1e-13) return {LevelStatus::Ambiguous, 0.0};
    scale /= beta;
  }
  return {LevelStatus::Truncated,
          static_cast<double>(z) - std::log(std::fabs(sum) + scale * beta) / log_beta};
}

// -log_beta of a positive enclosure, as a double midpoint.
double level_of(const BoundedReal& d, const BetaContext& ctx) {
  const BoundedReal lv = -(d.log() / ctx.value(d.precision()).log());
  return lv.center();
}

// g with beta^-(g+1) <= d < beta^-g, decided with certain comparisons.
std::optional<long> certify_gap(const BoundedReal& d, const BetaContext& ctx) {
  if (!d.is_positive()) return std::nullopt;
  const BoundedReal beta = ctx.value(d.precision());
  const long g0 = static_cast<long>(std::ceil(level_of(d, ctx))) - 1;
  for (long delta : {0L, -1L, 1L, -2L, 2L}) {
    const long g = g0 + delta;
    if (g < 0) continue;
    const BoundedReal hi = beta.pow(-g);
    const BoundedReal lo = beta.pow(-(g + 1));
    const bool below = compare(d, hi) == Ordering::Less;
    const bool above = compare(lo, d) == Ordering::Less ||
                       (lo.is_exact() && d.is_exact() && mpfr_equal_p(lo.lower(), d.lower()));
    if (below && above) return g;
  }
  return std::nullopt;
}

long floor_beta(const BetaContext& ctx) {
  if (auto q = ctx.rational_value()) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q->get_num_mpz_t(), q->get_den_mpz_t());
    return f.get_si();
  }
  for (mpfr_prec_t p = 128; p <= ctx.config().max_precision; p *= 2) {
    if (auto f = ctx.value(p).floor_if_determinate()) return *f;
  }
  throw Error(ErrorKind::Inconclusive, "floor of beta undecidable");
}

Word slice_of(const Digits& s, std::size_t begin, std::size_t len) {
  return Word(Digits(s.begin() + static_cast<std::ptrdiff_t>(begin),
                     s.begin() + static_cast<std::ptrdiff_t>(begin + len)));
}

bool grow(const OrbitView& x, std::size_t have) {
  if (!x.extendable() || have >= kMaxStream) return false;
  return x.ensure(std::min(2 * have, kMaxStream)) > have;
}

}  // namespace

BoundedReal recurrence_distance(const OrbitView& x, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "n must be at least 1");
  if (auto p = x.known_period(); p && n % *p == 0) return BoundedReal(0L);
  if (auto p = x.exact_point(); p && *p == 0) return BoundedReal(0L);
  const BetaContext& ctx = x.context();
  if (auto tn = x.exact_iterate(n)) {
    mpq_class d = abs(*tn - *x.exact_point());
    if (d == 0) return BoundedReal(0L);
    return BoundedReal::from_rational(d, 128);
  }

  x.ensure(n + 64);
  std::size_t z = 0;
  for (;;) {
    auto s = x.snapshot();
    const std::size_t L = s->size();
    while (n + z < L && (*s)[z] == (*s)[n + z]) ++z;
    if (n + z < L) break;
    if (!grow(x, L)) throw Error(ErrorKind::InsufficientDepth, "insufficient digit depth");
  }

  for (std::size_t W = 64;; W *= 2) {
    const std::size_t L = x.ensure(n + z + W);
    auto s = x.snapshot();
    const std::size_t w = std::min(W, L - n - z);
    const auto prec = static_cast<mpfr_prec_t>(128 + std::ceil(w * ctx.log2_beta()));
    const BoundedReal beta = ctx.value(prec);
    const BoundedReal a = word_value(slice_of(*s, n + z, w), ctx, prec);
    const BoundedReal b = word_value(slice_of(*s, z, w), ctx, prec);
    const BoundedReal tail = beta.pow(-static_cast<long>(w));
    const BoundedReal diff = a - b + BoundedReal::span(-tail, tail);
    if (!diff.contains_zero()) return diff.abs() * beta.pow(-static_cast<long>(z));
    if (w < W) throw Error(ErrorKind::InsufficientDepth, "insufficient digit depth");
    if (prec >= ctx.config().max_precision) {
      throw Error(ErrorKind::PrecisionCap, "precision cap reached");
    }
  }
}

std::optional<std::size_t> detect_period(const std::vector<Digit>& s,
                                         const std::vector<std::uint32_t>& z) {
  const std::size_t L = s.size();
  for (std::size_t p = 1; 2 * p <= L; ++p) {
    if (z[p] == L - p) return p;
  }
  return std::nullopt;
}

RecurrenceSeries recurrence_series(const OrbitView& x, std::size_t N) {
  RecurrenceSeries out;
  if (auto p = x.known_period()) {
    out.period = p;
    return out;
  }
  const BetaContext& ctx = x.context();
  const double beta = ctx.approx();
  const double log_beta = std::log(beta);
  x.ensure(2 * N + 256);
  for (;;) {
    auto snap = x.snapshot();
    const Digits& s = *snap;
    const std::size_t L = s.size();
    const auto z = z_array(s);
    if (auto p = detect_period(s, z)) {
      out.period = p;
      out.v.clear();
      return out;
    }
    out.v.assign(N, 0.0);
    out.lower_bounds = 0;
    bool restart = false;
    for (std::size_t n = 1; n <= N; ++n) {
      if (n >= L) {
        out.v[n - 1] = 0.0;
        ++out.lower_bounds;
        continue;
      }
      Level lv = fast_level(s, z[n], n, beta, log_beta);
      if (lv.status == LevelStatus::Truncated) {
        if (grow(x, L)) {
          restart = true;
          break;
        }
        out.v[n - 1] = lv.v;
        ++out.lower_bounds;
        continue;
      }
      if (lv.status == LevelStatus::Ambiguous) {
        try {
          lv.v = level_of(recurrence_distance(x, n), ctx);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::InsufficientDepth) throw;
          lv.v = static_cast<double>(z[n]);
          ++out.lower_bounds;
        }
      }
      out.v[n - 1] = lv.v;
    }
    if (!restart) return out;
  }
}

ExponentEstimate estimate_exponents(const OrbitView& x, std::size_t N_max,
                                    EstimateOptions options) {
  if (N_max < 10) throw Error(ErrorKind::InvalidArgument, "N_max must be at least 10");
  if (!(options.window_fraction > 0.0 && options.window_fraction <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "window fraction must lie in (0, 1]");
  }
  ExponentEstimate out;
  out.N = N_max;
  out.window_begin = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(options.window_fraction * N_max)));
  out.series = recurrence_series(x, N_max);
  if (out.series.period) {
    out.r = Exponent::inf();
    out.r_hat = Exponent::inf();
    return out;
  }
  double running = 0.0;
  double hi = -1.0;
  double lo = 1e300;
  for (std::size_t n = 1; n <= N_max; ++n) {
    running = std::max(running, out.series.v[n - 1]);
    if (n < out.window_begin) continue;
    const double ratio = running / static_cast<double>(n);
    hi = std::max(hi, ratio);
    lo = std::min(lo, ratio);
  }
  out.r = {false, hi};
  out.r_hat = {false, lo};
  return out;
}

Exponent estimate_r(const OrbitView& x, std::size_t N_max, EstimateOptions options) {
  return estimate_exponents(x, N_max, options).r;
}

Exponent estimate_r_hat(const OrbitView& x, std::size_t N_max, EstimateOptions options) {
  return estimate_exponents(x, N_max, options).r_hat;
}

ReturnProfile extract_returns(const OrbitView& x, std::size_t K, bool monotone,
                              std::size_t budget) {
  if (K == 0) throw Error(ErrorKind::InvalidArgument, "K must be at least 1");
  if (x.known_period()) throw Error(ErrorKind::PeriodicPoint, "periodic point");
  const BetaContext& ctx = x.context();
  const double beta = ctx.approx();
  const double log_beta = std::log(beta);
  if (budget == 0) budget = x.extendable() ? std::max<std::size_t>(x.depth(), 4096) : x.depth();
  x.ensure(2 * budget + 256);

  for (;;) {
    auto snap = x.snapshot();
    const Digits& s = *snap;
    const std::size_t L = s.size();
    const auto z = z_array(s);
    if (detect_period(s, z)) throw Error(ErrorKind::PeriodicPoint, "periodic point");

    ReturnProfile out;
    out.monotone = monotone;
    long last_gap = -1;
    bool candidate = false;
    bool restart = false;
    bool stream_end = false;
    for (std::size_t n = 1; n < budget && n < L && out.size() < K; ++n) {
      if (s[n] != s[0]) continue;
      candidate = true;
      Level lv = fast_level(s, z[n], n, beta, log_beta);
      if (lv.status == LevelStatus::Truncated) {
        if (grow(x, L)) {
          restart = true;
        } else {
          stream_end = true;
        }
        break;
      }
      if (monotone && lv.status == LevelStatus::Ok &&
          lv.v <= static_cast<double>(last_gap) + 1.0 - 1e-6) {
        continue;
      }
      BoundedReal d = recurrence_distance(x, n);
      auto g = certify_gap(d, ctx);
      if (!g) throw Error(ErrorKind::Inconclusive, "gap undecidable at available precision");
      if (monotone && *g <= last_gap) continue;
      out.n.push_back(n);
      out.m.push_back(n + static_cast<std::size_t>(*g));
      out.t.push_back(n + z[n]);
      out.distance.push_back(d);
      last_gap = *g;
    }
    if (restart) continue;
    if (!candidate) {
      throw Error(ErrorKind::NoReturn, "no return to the first digit within depth");
    }
    out.truncated = out.size() < K;
    (void)stream_end;
    return out;
  }
}

const char* prefix_form_name(PrefixForm form) {
  switch (form) {
    case PrefixForm::Overlap:
      return "overlap";
    case PrefixForm::BorrowForm:
      return "borrow";
    case PrefixForm::CarryForm:
      return "carry";
  }
  return "unknown";
}

PrefixForm classify_prefix(const OrbitView& x, std::size_t k, const ReturnProfile& profile) {
  if (k == 0 || k > profile.size()) throw Error(ErrorKind::InvalidArgument, "no such profile entry");
  const std::size_t n = profile.n[k - 1];
  const std::size_t m = profile.m[k - 1];
  const std::size_t t = profile.t[k - 1];
  if (x.ensure(m + 1) < m + 1) throw Error(ErrorKind::InsufficientDepth, "insufficient digit depth");
  auto snap = x.snapshot();
  const Digits& s = *snap;
  const std::string where = " at k=" + std::to_string(k);

  if (t >= m) {
    for (std::size_t i = n; i < m; ++i) {
      if (s[i] != s[i - n]) throw Error(ErrorKind::FormViolation, "form violation" + where);
    }
    return PrefixForm::Overlap;
  }
  for (std::size_t i = n; i < t; ++i) {
    if (s[i] != s[i - n]) throw Error(ErrorKind::FormViolation, "form violation" + where);
  }
  const int a = s[t];
  const int b = s[t - n];
  const std::size_t rest = m - t - 1;
  if (a + 1 == b) {
    const Word eps = x.context().eps_star(rest);
    bool ok = true;
    for (std::size_t j = 0; j < rest && ok; ++j) ok = s[t + 1 + j] == eps[j];
    if (ok) return PrefixForm::BorrowForm;
  } else if (a == b + 1) {
    bool ok = true;
    for (std::size_t j = 0; j < rest && ok; ++j) ok = s[t + 1 + j] == 0;
    if (ok) return PrefixForm::CarryForm;
  }
  throw Error(ErrorKind::FormViolation, "form violation" + where);
}

WordIndices word_indices(const Word& w) {
  const std::size_t n = w.size();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "word must be non-empty");
  WordIndices out;
  auto next_return = [&](std::size_t after) {
    for (std::size_t i = after + 1; i < n; ++i) {
      if (w[i] == w[0]) return i;
    }
    return n;
  };
  std::size_t s = next_return(0);
  out.s.push_back(s);
  while (s < n) {
    std::size_t len = 0;
    while (s + len < n && w[s + len] == w[len]) ++len;
    out.t.push_back(s + len);
    s = next_return(s);
    out.s.push_back(s);
  }
  out.k = out.t.size();
  return out;
}

std::set<Word> d_step(const Word& w, double r, const BetaContext& ctx) {
  const std::size_t n = w.size();
  const auto R = static_cast<std::size_t>(std::floor(r));
  const long fb = floor_beta(ctx);
  const Word eps = ctx.eps_star(std::max<std::size_t>(R * n, 1));
  const WordIndices wi = word_indices(w);
  std::set<Word> out;
  out.insert(w);

  auto add_family = [&](const Word& head, int c) {
    for (std::size_t j = 0; j <= R * n; ++j) {
      if (c > 0) {
        Word v = head;
        v.push_back(static_cast<Digit>(c - 1));
        v.append(eps.prefix(j));
        out.insert(std::move(v));
      }
      if (c < fb) {
        Word v = head;
        v.push_back(static_cast<Digit>(c + 1));
        v.append(Word(j, 0));
        out.insert(std::move(v));
      }
    }
  };

  for (std::size_t a = 1; a <= R + 1; ++a) {
    const Word base = w.power(a);
    if (wi.k == 0) {
      add_family(base, w[0]);
      continue;
    }
    for (std::size_t kk = 0; kk < wi.k; ++kk) {
      const std::size_t tk = wi.t[kk];
      if (tk >= n) continue;  // the digit after the block does not exist
      add_family(concat(base, w.prefix(tk)), w[tk]);
    }
  }
  return out;
}

std::vector<std::set<Word>> generate_D_members(const Word& w, double r, std::size_t levels,
                                               const BetaContext& ctx, std::size_t max_total) {
  if (w.empty()) throw Error(ErrorKind::InvalidArgument, "word must be non-empty");
  if (!(r > 0.0)) throw Error(ErrorKind::InvalidArgument, "r must be positive");
  if (!is_admissible(w, ctx)) throw Error(ErrorKind::InadmissibleWord, "inadmissible word");
  std::vector<std::set<Word>> out;
  std::size_t total = 0;
  auto keep = [&](std::set<Word> raw) {
    std::set<Word> kept;
    for (const Word& v : raw) {
      if (is_admissible(v, ctx)) kept.insert(v);
    }
    total += kept.size();
    if (total > max_total) throw Error(ErrorKind::Budget, "member budget exceeded");
    return kept;
  };
  // Descendants of an inadmissible word keep it as a prefix, so recursing
  // over the filtered level loses nothing.
  std::set<Word> first = d_step(w, r, ctx);
  first.insert(w.power(2));
  out.push_back(keep(std::move(first)));
  for (std::size_t k = 1; k < levels; ++k) {
    std::set<Word> next;
    for (const Word& v : out.back()) {
      std::set<Word> step = d_step(v, r, ctx);
      next.insert(step.begin(), step.end());
      if (next.size() > max_total) throw Error(ErrorKind::Budget, "member budget exceeded");
    }
    next.insert(w.power(k));
    out.push_back(keep(std::move(next)));
  }
  return out;
}

mpq_class uniform_rational(std::mt19937_64& rng, std::size_t bits) {
  if (bits == 0) return 0;
  const std::size_t chunks = (bits + 63) / 64;
  mpz_class z = 0;
  for (std::size_t i = 0; i < chunks; ++i) {
    z <<= 64;
    const std::uint64_t r = rng();
    z += mpz_class(static_cast<unsigned long>(r >> 32)) << 32;
    z += static_cast<unsigned long>(r & 0xffffffffu);
  }
  z >>= static_cast<mp_bitcnt_t>(chunks * 64 - bits);
  mpq_class q(z, mpz_class(1) << static_cast<mp_bitcnt_t>(bits));
  q.canonicalize();
  return q;
}

std::size_t bits_for_digits(const BetaContext& ctx, std::size_t n) {
  return static_cast<std::size_t>(std::ceil(static_cast<double>(n) * ctx.log2_beta())) + 64;
}

}  // namespace betarec
