#include "betarec/orbit.hpp"

#include <algorithm>
#include <mutex>

#include "betarec/error.hpp"
#include "betarec/expansion.hpp"

namespace betarec {

struct OrbitView::Impl {
  enum class Kind { Rational, Finite, Periodic };

  Impl(BetaContext c, Kind k) : ctx(std::move(c)), kind(k) {}

  BetaContext ctx;
  Kind kind;
  mpq_class x;
  Word preperiod;
  Word period;
  // Remainder T^depth x for the exact rational path.
  mpq_class remainder;

  mutable std::mutex mutex;
  std::shared_ptr<const Digits> digits = std::make_shared<const Digits>();

  void extend_locked(std::size_t n) {
    const std::size_t have = digits->size();
    if (have >= n) return;
    const std::size_t target = std::max({n, 2 * have, std::size_t{64}});
    auto next = std::make_shared<Digits>(*digits);
    next->reserve(target);
    switch (kind) {
      case Kind::Finite:
        return;
      case Kind::Periodic:
        for (std::size_t i = have; i < target; ++i) {
          next->push_back(i < preperiod.size()
                              ? preperiod[i]
                              : period[(i - preperiod.size()) % period.size()]);
        }
        break;
      case Kind::Rational:
        if (auto beta = ctx.rational_value()) {
          mpz_class d;
          for (std::size_t i = have; i < target; ++i) {
            remainder *= *beta;
            mpz_fdiv_q(d.get_mpz_t(), remainder.get_num_mpz_t(), remainder.get_den_mpz_t());
            next->push_back(static_cast<Digit>(d.get_ui()));
            remainder -= d;
          }
        } else {
          // Re-expansion from scratch keeps issued digits: the greedy
          // expansion of an exact point is unique.
          Word w = expand_rational(x, ctx, target);
          next->assign(w.begin(), w.end());
        }
        break;
    }
    digits = std::move(next);
  }
};

OrbitView OrbitView::from_rational(const BetaContext& ctx, const mpq_class& x) {
  if (x < 0 || x >= 1) throw Error(ErrorKind::Domain, "x must lie in [0, 1)");
  auto impl = std::make_shared<Impl>(ctx, Impl::Kind::Rational);
  impl->x = x;
  impl->remainder = x;
  return OrbitView(std::move(impl));
}

OrbitView OrbitView::from_digits(const BetaContext& ctx, Word digits) {
  auto impl = std::make_shared<Impl>(ctx, Impl::Kind::Finite);
  impl->digits = std::make_shared<const Digits>(std::move(digits.digits()));
  return OrbitView(std::move(impl));
}

OrbitView OrbitView::from_periodic(const BetaContext& ctx, Word preperiod, Word period) {
  if (period.empty()) throw Error(ErrorKind::InvalidArgument, "empty period");
  auto impl = std::make_shared<Impl>(ctx, Impl::Kind::Periodic);
  impl->preperiod = std::move(preperiod);
  impl->period = std::move(period);
  return OrbitView(std::move(impl));
}

const BetaContext& OrbitView::context() const { return impl_->ctx; }

std::size_t OrbitView::depth() const { return snapshot()->size(); }

bool OrbitView::extendable() const { return impl_->kind != Impl::Kind::Finite; }

std::size_t OrbitView::ensure(std::size_t n) const {
  std::lock_guard<std::mutex> lock(impl_->mutex);
  impl_->extend_locked(n);
  return impl_->digits->size();
}

std::shared_ptr<const OrbitView::Digits> OrbitView::snapshot() const {
  std::lock_guard<std::mutex> lock(impl_->mutex);
  return impl_->digits;
}

Word OrbitView::prefix(std::size_t n) const {
  if (ensure(n) < n) throw Error(ErrorKind::InsufficientDepth, "insufficient digit depth");
  auto s = snapshot();
  return Word(Digits(s->begin(), s->begin() + static_cast<std::ptrdiff_t>(n)));
}

std::optional<mpq_class> OrbitView::exact_point() const {
  if (impl_->kind != Impl::Kind::Rational) return std::nullopt;
  return impl_->x;
}

std::optional<mpq_class> OrbitView::exact_iterate(std::size_t n) const {
  auto beta = impl_->ctx.rational_value();
  if (impl_->kind != Impl::Kind::Rational || !beta) return std::nullopt;
  mpq_class t = impl_->x;
  mpz_class d;
  for (std::size_t i = 0; i < n; ++i) {
    t *= *beta;
    mpz_fdiv_q(d.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
    t -= d;
  }
  return t;
}

std::optional<std::size_t> OrbitView::known_period() const {
  if (impl_->kind == Impl::Kind::Periodic && impl_->preperiod.empty()) return impl_->period.size();
  return std::nullopt;
}

std::vector<std::uint32_t> z_array(const std::vector<Digit>& s) {
  const std::size_t n = s.size();
  std::vector<std::uint32_t> z(n, 0);
  if (n == 0) return z;
  z[0] = static_cast<std::uint32_t>(n);
  std::size_t l = 0, r = 0;
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t k = 0;
    if (i < r) k = std::min<std::size_t>(r - i, z[i - l]);
    while (i + k < n && s[k] == s[i + k]) ++k;
    z[i] = static_cast<std::uint32_t>(k);
    if (i + k > r) {
      l = i;
      r = i + k;
    }
  }
  return z;
}

}  // namespace betarec
