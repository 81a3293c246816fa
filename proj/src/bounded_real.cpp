#include "betarec/bounded_real.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <utility>
#include <vector>

#include "betarec/error.hpp"

namespace betarec {

namespace {

// RAII scratch value.
struct Scratch {
  mpfr_t v;
  explicit Scratch(mpfr_prec_t prec) { mpfr_init2(v, prec); }
  ~Scratch() { mpfr_clear(v); }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
};

}  // namespace

BoundedReal::BoundedReal() : BoundedReal(0L) {}

BoundedReal::BoundedReal(mpfr_prec_t prec, Raw) : prec_(prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
}

BoundedReal::BoundedReal(long value, mpfr_prec_t prec) : BoundedReal(prec, Raw{}) {
  mpfr_set_si(lo_, value, MPFR_RNDD);
  mpfr_set_si(hi_, value, MPFR_RNDU);
}

BoundedReal::BoundedReal(const BoundedReal& other) : BoundedReal(other.prec_, Raw{}) {
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

BoundedReal::BoundedReal(BoundedReal&& other) noexcept : BoundedReal(other.prec_, Raw{}) {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

BoundedReal& BoundedReal::operator=(const BoundedReal& other) {
  if (this != &other) {
    prec_ = other.prec_;
    mpfr_set_prec(lo_, prec_);
    mpfr_set_prec(hi_, prec_);
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

BoundedReal& BoundedReal::operator=(BoundedReal&& other) noexcept {
  if (this != &other) {
    std::swap(prec_, other.prec_);
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
  }
  return *this;
}

BoundedReal::~BoundedReal() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

BoundedReal BoundedReal::from_double(double center, double radius, mpfr_prec_t prec) {
  if (!std::isfinite(center) || !std::isfinite(radius) || radius < 0) {
    throw Error(ErrorKind::InvalidArgument, "non-finite or negative interval data");
  }
  BoundedReal out(std::max<mpfr_prec_t>(prec, 64), Raw{});
  mpfr_set_d(out.lo_, center, MPFR_RNDD);
  mpfr_set_d(out.hi_, center, MPFR_RNDU);
  mpfr_sub_d(out.lo_, out.lo_, radius, MPFR_RNDD);
  mpfr_add_d(out.hi_, out.hi_, radius, MPFR_RNDU);
  return out;
}

BoundedReal BoundedReal::from_integer(const mpz_class& z, mpfr_prec_t prec) {
  BoundedReal out(prec, Raw{});
  mpfr_set_z(out.lo_, z.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(out.hi_, z.get_mpz_t(), MPFR_RNDU);
  return out;
}

BoundedReal BoundedReal::from_rational(const mpq_class& q, mpfr_prec_t prec) {
  BoundedReal out(prec, Raw{});
  mpfr_set_q(out.lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(out.hi_, q.get_mpq_t(), MPFR_RNDU);
  return out;
}

BoundedReal BoundedReal::hull(const BoundedReal& a, const BoundedReal& b) {
  BoundedReal out(std::max(a.prec_, b.prec_), Raw{});
  mpfr_min(out.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(out.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return out;
}

BoundedReal BoundedReal::span(const BoundedReal& a, const BoundedReal& b) {
  if (mpfr_greater_p(a.lo_, b.hi_)) throw Error(ErrorKind::InvalidArgument, "empty span");
  BoundedReal out(std::max(a.prec_, b.prec_), Raw{});
  mpfr_set(out.lo_, a.lo_, MPFR_RNDD);
  mpfr_set(out.hi_, b.hi_, MPFR_RNDU);
  return out;
}

BoundedReal BoundedReal::with_precision(mpfr_prec_t prec) const {
  BoundedReal out(prec, Raw{});
  mpfr_set(out.lo_, lo_, MPFR_RNDD);
  mpfr_set(out.hi_, hi_, MPFR_RNDU);
  return out;
}

void BoundedReal::set_precision_keep(mpfr_prec_t prec) {
  if (prec <= prec_) return;
  *this = with_precision(prec);
}

double BoundedReal::lower_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double BoundedReal::upper_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double BoundedReal::center() const {
  Scratch mid(prec_ + 1);
  mpfr_add(mid.v, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(mid.v, mid.v, 1, MPFR_RNDN);
  return mpfr_get_d(mid.v, MPFR_RNDN);
}

double BoundedReal::radius() const {
  const double c = center();
  Scratch a(prec_ + 64), b(prec_ + 64);
  mpfr_sub_d(a.v, hi_, c, MPFR_RNDU);
  mpfr_d_sub(b.v, c, lo_, MPFR_RNDU);
  mpfr_max(a.v, a.v, b.v, MPFR_RNDU);
  return mpfr_get_d(a.v, MPFR_RNDU);
}

double BoundedReal::width() const {
  Scratch a(prec_ + 1);
  mpfr_sub(a.v, hi_, lo_, MPFR_RNDU);
  return mpfr_get_d(a.v, MPFR_RNDU);
}

bool BoundedReal::is_exact() const { return mpfr_equal_p(lo_, hi_) != 0; }

bool BoundedReal::contains_zero() const {
  return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}

bool BoundedReal::contains(const BoundedReal& other) const {
  return mpfr_lessequal_p(lo_, other.lo_) && mpfr_greaterequal_p(hi_, other.hi_);
}

bool BoundedReal::is_positive() const { return mpfr_sgn(lo_) > 0; }
bool BoundedReal::is_negative() const { return mpfr_sgn(hi_) < 0; }

std::optional<long> BoundedReal::floor_if_determinate() const {
  Scratch a(prec_), b(prec_);
  mpfr_floor(a.v, lo_);
  mpfr_floor(b.v, hi_);
  if (!mpfr_equal_p(a.v, b.v)) return std::nullopt;
  if (!mpfr_fits_slong_p(a.v, MPFR_RNDN)) return std::nullopt;
  return mpfr_get_si(a.v, MPFR_RNDN);
}

BoundedReal BoundedReal::operator-() const {
  BoundedReal out(prec_, Raw{});
  mpfr_neg(out.lo_, hi_, MPFR_RNDD);
  mpfr_neg(out.hi_, lo_, MPFR_RNDU);
  return out;
}

BoundedReal& BoundedReal::operator+=(const BoundedReal& other) {
  set_precision_keep(other.prec_);
  mpfr_add(lo_, lo_, other.lo_, MPFR_RNDD);
  mpfr_add(hi_, hi_, other.hi_, MPFR_RNDU);
  return *this;
}

BoundedReal& BoundedReal::operator-=(const BoundedReal& other) {
  set_precision_keep(other.prec_);
  Scratch lo(prec_);
  mpfr_sub(lo.v, lo_, other.hi_, MPFR_RNDD);
  mpfr_sub(hi_, hi_, other.lo_, MPFR_RNDU);
  mpfr_swap(lo_, lo.v);
  return *this;
}

BoundedReal& BoundedReal::operator*=(const BoundedReal& other) {
  const mpfr_prec_t prec = std::max(prec_, other.prec_);
  Scratch lo(prec), hi(prec), t(prec);
  mpfr_srcptr a[2] = {lo_, hi_};
  mpfr_srcptr b[2] = {other.lo_, other.hi_};
  mpfr_set_inf(lo.v, 1);
  mpfr_set_inf(hi.v, -1);
  for (auto* x : a) {
    for (auto* y : b) {
      mpfr_mul(t.v, x, y, MPFR_RNDD);
      mpfr_min(lo.v, lo.v, t.v, MPFR_RNDD);
      mpfr_mul(t.v, x, y, MPFR_RNDU);
      mpfr_max(hi.v, hi.v, t.v, MPFR_RNDU);
    }
  }
  prec_ = prec;
  mpfr_set_prec(lo_, prec);
  mpfr_set_prec(hi_, prec);
  mpfr_set(lo_, lo.v, MPFR_RNDD);
  mpfr_set(hi_, hi.v, MPFR_RNDU);
  return *this;
}

BoundedReal& BoundedReal::operator/=(const BoundedReal& other) {
  if (other.contains_zero()) {
    throw Error(ErrorKind::IndeterminateSign, "indeterminate sign");
  }
  const mpfr_prec_t prec = std::max(prec_, other.prec_);
  BoundedReal inv(prec, Raw{});
  mpfr_ui_div(inv.lo_, 1, other.hi_, MPFR_RNDD);
  mpfr_ui_div(inv.hi_, 1, other.lo_, MPFR_RNDU);
  return *this *= inv;
}

BoundedReal BoundedReal::abs() const {
  if (mpfr_sgn(lo_) >= 0) return *this;
  if (mpfr_sgn(hi_) <= 0) return -*this;
  BoundedReal out(prec_, Raw{});
  mpfr_set_zero(out.lo_, 1);
  mpfr_neg(out.hi_, lo_, MPFR_RNDU);
  mpfr_max(out.hi_, out.hi_, hi_, MPFR_RNDU);
  return out;
}

BoundedReal BoundedReal::pow(long exponent) const {
  if (exponent < 0) {
    return BoundedReal(1L, prec_) / pow(-exponent);
  }
  if (exponent == 0) return BoundedReal(1L, prec_);
  const unsigned long e = static_cast<unsigned long>(exponent);
  BoundedReal out(prec_, Raw{});
  if (mpfr_sgn(lo_) >= 0) {
    mpfr_pow_ui(out.lo_, lo_, e, MPFR_RNDD);
    mpfr_pow_ui(out.hi_, hi_, e, MPFR_RNDU);
    return out;
  }
  if (mpfr_sgn(hi_) <= 0) {
    BoundedReal p = (-*this).pow(exponent);
    return (e % 2 == 0) ? p : -p;
  }
  // Interval straddles zero.
  BoundedReal m = abs();
  BoundedReal p = m.pow(exponent);
  if (e % 2 == 0) {
    mpfr_set_zero(p.lo_, 1);
    return p;
  }
  mpfr_pow_ui(out.lo_, lo_, e, MPFR_RNDD);
  mpfr_pow_ui(out.hi_, hi_, e, MPFR_RNDU);
  return out;
}

BoundedReal BoundedReal::log() const {
  if (!is_positive()) {
    throw Error(ErrorKind::Domain, "logarithm of a non-positive interval");
  }
  BoundedReal out(prec_, Raw{});
  mpfr_log(out.lo_, lo_, MPFR_RNDD);
  mpfr_log(out.hi_, hi_, MPFR_RNDU);
  return out;
}

BoundedReal BoundedReal::exp() const {
  BoundedReal out(prec_, Raw{});
  mpfr_exp(out.lo_, lo_, MPFR_RNDD);
  mpfr_exp(out.hi_, hi_, MPFR_RNDU);
  return out;
}

std::string BoundedReal::to_string(int digits) const {
  Scratch mid(prec_ + 1);
  mpfr_add(mid.v, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(mid.v, mid.v, 1, MPFR_RNDN);
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits, mid.v);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

Ordering compare(const BoundedReal& a, const BoundedReal& b) {
  if (mpfr_less_p(a.upper(), b.lower())) return Ordering::Less;
  if (mpfr_greater_p(a.lower(), b.upper())) return Ordering::Greater;
  return Ordering::Indeterminate;
}

mpq_class parse_rational(const std::string& raw) {
  std::string text;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  }
  auto fail = [&]() -> Error {
    return Error(ErrorKind::Parse, "cannot parse number '" + raw + "'");
  };
  if (text.empty()) throw fail();

  if (auto slash = text.find('/'); slash != std::string::npos) {
    mpq_class num = parse_rational(text.substr(0, slash));
    mpq_class den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorKind::Parse, "zero denominator in '" + raw + "'");
    mpq_class q = num / den;
    q.canonicalize();
    return q;
  }

  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') negative = text[i++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) ++scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw fail();
  long exponent = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') throw fail();
    ++i;
    std::size_t used = 0;
    try {
      exponent = std::stol(text.substr(i), &used);
    } catch (...) {
      throw fail();
    }
    if (used != text.size() - i || std::labs(exponent) > 100000) throw fail();
  }
  mpz_class num(digits, 10);
  if (negative) num = -num;
  long shift = exponent - scale;
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
  mpq_class q = shift >= 0 ? mpq_class(num * p) : mpq_class(num, p);
  q.canonicalize();
  return q;
}

std::string rational_to_decimal(const mpq_class& q, int digits) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  mpz_class num = q.get_num() * scale;
  mpz_class den = q.get_den();
  bool negative = num < 0;
  if (negative) num = -num;
  mpz_class scaled = (2 * num + den) / (2 * den);
  std::string s = scaled.get_str();
  if (static_cast<int>(s.size()) <= digits) s.insert(0, digits + 1 - s.size(), '0');
  std::string out = s.substr(0, s.size() - digits);
  if (digits > 0) {
    std::string frac = s.substr(s.size() - digits);
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    if (!frac.empty()) out += "." + frac;
  }
  return (negative && out != "0") ? "-" + out : out;
}

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::IndeterminateSign: return "indeterminate_sign";
    case ErrorKind::IndeterminateDigit: return "indeterminate_digit";
    case ErrorKind::PrecisionCap: return "precision_cap";
    case ErrorKind::NoRoot: return "no_root";
    case ErrorKind::TruncationTooShort: return "truncation_too_short";
    case ErrorKind::InvalidTruncation: return "invalid_truncation";
    case ErrorKind::LengthMismatch: return "length_mismatch";
    case ErrorKind::InadmissibleWord: return "inadmissible_word";
    case ErrorKind::InsufficientDepth: return "insufficient_depth";
    case ErrorKind::PeriodicPoint: return "periodic_point";
    case ErrorKind::NoReturn: return "no_return";
    case ErrorKind::FormViolation: return "form_violation";
    case ErrorKind::CountableRegime: return "countable_regime";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::Budget: return "budget";
    case ErrorKind::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

}  // namespace betarec
