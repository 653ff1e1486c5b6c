#pragma once

#include <mpfr.h>

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "fibcert/bigint.hpp"
#include "fibcert/precision.hpp"

namespace fibcert {

namespace detail {

// Owning wrapper around an mpfr_t.
class Float {
 public:
  explicit Float(mpfr_prec_t prec = 64);
  Float(const Float& other);
  Float(Float&& other) noexcept;
  Float& operator=(const Float& other);
  Float& operator=(Float&& other) noexcept;
  ~Float();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }

 private:
  mpfr_t value_;
};

}  // namespace detail

/// Closed interval with exact rational endpoints, lo <= hi.
struct Interval {
  Rational lo;
  Rational hi;
};

/// Midpoint-radius real number.
///
/// Every operation returns a ball whose radius dominates the propagated input
/// error plus the rounding error of the midpoint, so the true value x always
/// satisfies |x - mid| <= rad. Midpoints are MPFR floats at the working
/// precision; radii are 64-bit MPFR floats rounded upward.
class BallReal {
 public:
  /// Exact zero at the default precision.
  BallReal();

  static BallReal exact(const BigInt& value, const Precision& prec = kDefaultPrecision);
  static BallReal from_rational(const Rational& value, const Precision& prec = kDefaultPrecision);
  /// Ball covering [iv.lo, iv.hi].
  static BallReal from_interval(const Interval& iv, const Precision& prec = kDefaultPrecision);
  /// Ball with the given midpoint (rounded) and at least the given radius.
  static BallReal from_mid_rad(const Rational& mid, const Rational& rad,
                               const Precision& prec = kDefaultPrecision);

  [[nodiscard]] const Precision& precision() const { return prec_; }
  [[nodiscard]] bool is_exact() const;

  /// Exact values of the stored midpoint and radius.
  [[nodiscard]] Rational mid() const;
  [[nodiscard]] Rational rad() const;
  /// Exact endpoints mid - rad and mid + rad.
  [[nodiscard]] Rational lower() const;
  [[nodiscard]] Rational upper() const;
  [[nodiscard]] Interval interval() const { return {lower(), upper()}; }

  [[nodiscard]] double mid_double() const;
  [[nodiscard]] double rad_double() const;

  [[nodiscard]] bool contains(const Rational& value) const;
  [[nodiscard]] bool contains(const BigInt& value) const { return contains(Rational(value)); }
  [[nodiscard]] bool contains_zero() const;
  [[nodiscard]] bool overlaps(const BallReal& other) const;
  [[nodiscard]] bool certainly_positive() const;
  [[nodiscard]] bool certainly_negative() const;

  /// floor(x) when every point of the ball has the same floor.
  [[nodiscard]] std::optional<BigInt> certified_floor() const;

  /// Copy re-rounded to a different working precision (radius grows if needed).
  [[nodiscard]] BallReal with_precision(const Precision& prec) const;

  BallReal operator-() const;
  friend BallReal operator+(const BallReal& a, const BallReal& b);
  friend BallReal operator-(const BallReal& a, const BallReal& b);
  friend BallReal operator*(const BallReal& a, const BallReal& b);
  friend BallReal operator/(const BallReal& a, const BallReal& b);

  friend BallReal sqrt(const BallReal& x);
  friend BallReal log(const BallReal& x);
  friend BallReal exp(const BallReal& x);

  friend std::ostream& operator<<(std::ostream& os, const BallReal& x);

 private:
  explicit BallReal(const Precision& prec);
  void add_rounding_error(int ternary);

  Precision prec_;
  detail::Float mid_;
  detail::Float rad_;
};

BallReal operator+(const BallReal& a, const BigInt& b);
BallReal operator-(const BallReal& a, const BigInt& b);
BallReal operator*(const BallReal& a, const BigInt& b);
BallReal operator*(const BigInt& a, const BallReal& b);
BallReal operator/(const BallReal& a, const BigInt& b);
BallReal operator*(const BallReal& a, const Rational& b);

BallReal sqrt(const BallReal& x);
BallReal log(const BallReal& x);
BallReal exp(const BallReal& x);

/// x^e for a signed integer exponent; x^0 is exactly 1.
BallReal pow(const BallReal& x, long exponent);

/// Enclosure of the distance from x to the nearest integer, clamped to [0, 1/2].
/// Throws AmbiguousPrecision when the ball covers both an integer and a
/// half-integer, since the enclosure would carry no information.
Interval nearest_int_distance(const BallReal& x);

bool certainly_less(const BallReal& a, const BallReal& b);
bool certainly_less(const BallReal& a, const Rational& b);
bool certainly_less(const Rational& a, const BallReal& b);

/// Re-evaluates a quantity at any requested precision.
using BallSource = std::function<BallReal(const Precision&)>;

/// Evaluates `source` at `prec`. With a radius target, doubles the digits until
/// the radius is at most the target, throwing PrecisionExhausted at the ceiling.
BallReal refine(const BallSource& source, Precision prec,
                const std::optional<Rational>& target_radius = std::nullopt);

/// Decimal serialization {mid, rad, digits}. The serialized ball encloses the
/// original one.
struct SerializedBall {
  std::string mid;
  std::string rad;
  std::uint32_t digits = 0;
};

SerializedBall serialize(const BallReal& x);
BallReal deserialize(const SerializedBall& s);

enum class Rounding { Down, Up, Nearest };

/// Scientific decimal rendering "d.ddde±x" of an exact rational with `sig`
/// significant digits. Zero renders as "0".
std::string to_scientific(const Rational& value, unsigned sig, Rounding mode);

}  // namespace fibcert
