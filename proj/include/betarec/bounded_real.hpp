#pragma once

#include <mpfr.h>
#include <gmpxx.h>

#include <optional>
#include <string>

namespace betarec {

enum class Ordering { Less, Greater, Indeterminate };

/// Closed interval [lower, upper] with MPFR endpoints and outward rounding.
///
/// Every operation returns an interval that contains all results of the
/// operation applied to points of the operands. Precision of a result is the
/// larger of the operand precisions.
class BoundedReal {
 public:
  static constexpr mpfr_prec_t kDefaultPrecision = 128;

  BoundedReal();
  explicit BoundedReal(long value, mpfr_prec_t prec = kDefaultPrecision);
  BoundedReal(const BoundedReal& other);
  BoundedReal(BoundedReal&& other) noexcept;
  BoundedReal& operator=(const BoundedReal& other);
  BoundedReal& operator=(BoundedReal&& other) noexcept;
  ~BoundedReal();

  static BoundedReal from_double(double center, double radius = 0.0,
                                 mpfr_prec_t prec = kDefaultPrecision);
  static BoundedReal from_integer(const mpz_class& z, mpfr_prec_t prec = kDefaultPrecision);
  static BoundedReal from_rational(const mpq_class& q, mpfr_prec_t prec = kDefaultPrecision);
  /// Smallest interval containing both operands.
  static BoundedReal hull(const BoundedReal& a, const BoundedReal& b);
  /// [a.lower, b.upper]; requires a.lower <= b.upper.
  static BoundedReal span(const BoundedReal& a, const BoundedReal& b);

  mpfr_prec_t precision() const { return prec_; }
  BoundedReal with_precision(mpfr_prec_t prec) const;

  mpfr_srcptr lower() const { return lo_; }
  mpfr_srcptr upper() const { return hi_; }
  double lower_double() const;
  double upper_double() const;
  /// Nearest double to the midpoint.
  double center() const;
  /// Radius such that [center() - radius(), center() + radius()] covers the interval.
  double radius() const;
  double width() const;

  bool is_exact() const;
  bool contains_zero() const;
  bool contains(const BoundedReal& other) const;
  bool is_positive() const;
  bool is_negative() const;

  /// floor of every point in the interval, when they all agree.
  std::optional<long> floor_if_determinate() const;

  BoundedReal operator-() const;
  BoundedReal& operator+=(const BoundedReal& other);
  BoundedReal& operator-=(const BoundedReal& other);
  BoundedReal& operator*=(const BoundedReal& other);
  BoundedReal& operator/=(const BoundedReal& other);

  BoundedReal abs() const;
  /// Integer power; negative exponents need an interval that excludes zero.
  BoundedReal pow(long exponent) const;
  BoundedReal log() const;
  BoundedReal exp() const;

  /// Decimal rendering of the midpoint with the given significant digits.
  std::string to_string(int digits = 20) const;

  friend BoundedReal operator+(BoundedReal a, const BoundedReal& b) { return a += b; }
  friend BoundedReal operator-(BoundedReal a, const BoundedReal& b) { return a -= b; }
  friend BoundedReal operator*(BoundedReal a, const BoundedReal& b) { return a *= b; }
  friend BoundedReal operator/(BoundedReal a, const BoundedReal& b) { return a /= b; }

 private:
  struct Raw {};
  BoundedReal(mpfr_prec_t prec, Raw);
  void set_precision_keep(mpfr_prec_t prec);

  mpfr_prec_t prec_;
  mpfr_t lo_;
  mpfr_t hi_;
};

/// Less or Greater only when the intervals are disjoint.
Ordering compare(const BoundedReal& a, const BoundedReal& b);

/// Exact parse of decimal ("1.8", "-2.5e-3"), fraction ("1/3") or integer text.
mpq_class parse_rational(const std::string& text);

/// Decimal text for an exact rational, rounded to the given fractional digits.
std::string rational_to_decimal(const mpq_class& q, int digits = 20);

}  // namespace betarec
