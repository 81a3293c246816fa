#include "betarec/beta_context.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "betarec/error.hpp"
#include "betarec/root_finding.hpp"

namespace betarec {

struct BetaContext::State {
  BetaSource source;
  std::string label;
  ContextConfig config;

  mutable std::mutex mu;
  mutable std::map<mpfr_prec_t, BoundedReal> enclosures;
  mutable std::vector<Digit> expansion;  // digits of the expansion of 1 computed so far
  mutable std::optional<Word> finite;    // complete finite expansion of 1
  mutable double log2_cached = 0;

  BoundedReal value_locked(mpfr_prec_t prec) const {
    prec = std::max(prec, config.min_precision);
    if (const auto* q = std::get_if<mpq_class>(&source)) {
      return BoundedReal::from_rational(*q, prec);
    }
    auto it = enclosures.lower_bound(prec);
    if (it != enclosures.end()) return it->second.with_precision(prec);
    const auto& root = std::get<PolynomialRoot>(source);
    BoundedReal enc = bisect_root_enclosure(
        [&](const BoundedReal& x) { return eval_polynomial(root.coefficients, x); }, root.lo,
        root.hi, prec);
    enclosures.emplace(prec, enc);
    return enc.with_precision(prec);
  }

  // Extends the expansion of 1 to at least n digits unless it is finite.
  void compute_expansion_locked(std::size_t n) const {
    if (finite || expansion.size() >= n) return;
    const std::size_t target = std::max<std::size_t>(n, 2 * expansion.size());
    const double lb = log2_cached;
    mpfr_prec_t prec = std::max<mpfr_prec_t>(
        config.min_precision,
        static_cast<mpfr_prec_t>(std::ceil(2.0 * static_cast<double>(target) * lb)) + 128);
    for (;;) {
      if (prec > config.max_precision) {
        throw Error(ErrorKind::PrecisionCap,
                    "digit of the expansion of 1 indeterminate at the precision cap");
      }
      BoundedReal beta = value_locked(prec);
      BoundedReal t(1L, prec);
      std::vector<Digit> digits;
      digits.reserve(target);
      bool escalate = false;
      bool ended = false;
      for (std::size_t i = 0; i < target; ++i) {
        BoundedReal y = beta * t;
        if (auto fl = y.floor_if_determinate()) {
          digits.push_back(static_cast<Digit>(*fl));
          t = y - BoundedReal(*fl, prec);
          if (t.is_exact() && mpfr_zero_p(t.lower())) {
            ended = true;
            break;
          }
          continue;
        }
        // The interval contains an integer k. A very narrow interval is taken
        // as an exact landing on k.
        mpfr_t k;
        mpfr_init2(k, prec);
        mpfr_floor(k, y.upper());
        long kv = mpfr_get_si(k, MPFR_RNDN);
        mpfr_clear(k);
        if (std::ldexp(1.0, -static_cast<int>(std::min<mpfr_prec_t>(prec / 2, 1000))) > y.width()) {
          digits.push_back(static_cast<Digit>(kv));
          ended = true;
          break;
        }
        escalate = true;
        break;
      }
      if (escalate) {
        prec *= 2;
        continue;
      }
      expansion = std::move(digits);
      if (ended) finite = Word(expansion);
      return;
    }
  }
};

BetaContext BetaContext::from_rational(const mpq_class& beta, ContextConfig config) {
  if (beta <= 1) throw Error(ErrorKind::Domain, "base must exceed 1");
  auto s = std::make_shared<State>();
  mpq_class q = beta;
  q.canonicalize();
  s->source = q;
  s->label = q.get_den() == 1 ? q.get_str() : rational_to_decimal(q, 30);
  s->config = config;
  s->log2_cached = std::log2(q.get_d());
  return BetaContext(std::move(s));
}

BetaContext BetaContext::from_polynomial(PolynomialRoot root, ContextConfig config,
                                         std::string label) {
  if (root.coefficients.size() < 2 || root.lo < 1 || !(root.lo < root.hi)) {
    throw Error(ErrorKind::InvalidArgument, "bad polynomial root description");
  }
  auto s = std::make_shared<State>();
  s->source = std::move(root);
  s->config = config;
  BetaContext ctx(s);
  BoundedReal v = s->value_locked(config.min_precision);
  if (!(mpfr_cmp_ui(v.lower(), 1) > 0)) throw Error(ErrorKind::Domain, "base must exceed 1");
  s->log2_cached = std::log2(v.center());
  s->label = label.empty() ? v.to_string(30) : std::move(label);
  return ctx;
}

BetaContext BetaContext::parse(const std::string& text, ContextConfig config) {
  if (text == "golden" || text == "phi") {
    return from_polynomial({{1, -1, -1}, 1, 2}, config, "golden");
  }
  if (text == "tribonacci") {
    return from_polynomial({{1, -1, -1, -1}, 1, 2}, config, "tribonacci");
  }
  mpq_class q = parse_rational(text);
  BetaContext ctx = from_rational(q, config);
  ctx.state_->label = text;
  return ctx;
}

const BetaSource& BetaContext::source() const { return state_->source; }
const std::string& BetaContext::label() const { return state_->label; }
const ContextConfig& BetaContext::config() const { return state_->config; }

bool BetaContext::is_rational() const {
  return std::holds_alternative<mpq_class>(state_->source);
}

std::optional<mpq_class> BetaContext::rational_value() const {
  if (const auto* q = std::get_if<mpq_class>(&state_->source)) return *q;
  return std::nullopt;
}

BoundedReal BetaContext::value(mpfr_prec_t prec) const {
  std::lock_guard lock(state_->mu);
  return state_->value_locked(prec);
}

double BetaContext::approx() const { return value(64).center(); }
double BetaContext::log2_beta() const { return state_->log2_cached; }

int BetaContext::alphabet_max() const {
  if (auto q = rational_value()) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), q->get_num_mpz_t(), q->get_den_mpz_t());
    return static_cast<int>(q->get_den() == 1 ? fl.get_si() - 1 : fl.get_si());
  }
  for (mpfr_prec_t p = config().min_precision; p <= config().max_precision; p *= 2) {
    if (auto fl = value(p).floor_if_determinate()) return static_cast<int>(*fl);
  }
  BoundedReal v = value(config().max_precision);
  return static_cast<int>(std::ceil(v.lower_double())) - 1;
}

Word BetaContext::eps_star(std::size_t n) const {
  std::lock_guard lock(state_->mu);
  state_->compute_expansion_locked(n);
  Word out;
  out.digits().reserve(n);
  if (state_->finite) {
    Word period = *state_->finite;
    period[period.size() - 1] -= 1;
    for (std::size_t i = 0; i < n; ++i) out.push_back(period[i % period.size()]);
  } else {
    out.digits().assign(state_->expansion.begin(), state_->expansion.begin() + n);
  }
  return out;
}

std::optional<std::size_t> BetaContext::simple_parry_length() const {
  std::lock_guard lock(state_->mu);
  if (state_->finite) return state_->finite->size();
  return std::nullopt;
}

std::optional<std::size_t> BetaContext::detect_simple_parry(std::size_t depth) const {
  std::lock_guard lock(state_->mu);
  try {
    state_->compute_expansion_locked(depth);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::PrecisionCap) {
      throw Error(ErrorKind::Inconclusive, "inconclusive at available precision");
    }
    throw;
  }
  if (state_->finite && state_->finite->size() <= depth) return state_->finite->size();
  return std::nullopt;
}

std::optional<Word> BetaContext::finite_expansion_of_one() const {
  std::lock_guard lock(state_->mu);
  return state_->finite;
}

void BetaContext::assume_finite_expansion(const Word& expansion_of_one) const {
  std::lock_guard lock(state_->mu);
  state_->finite = expansion_of_one;
  state_->expansion = expansion_of_one.digits();
}

}  // namespace betarec
