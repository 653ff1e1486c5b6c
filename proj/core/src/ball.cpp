#include "fibcert/ball.hpp"

#include <algorithm>
#include <ostream>

#include "fibcert/errors.hpp"

namespace fibcert {

namespace detail {

Float::Float(mpfr_prec_t prec) {
  mpfr_init2(value_, prec);
  mpfr_set_zero(value_, 1);
}

Float::Float(const Float& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Float::Float(Float&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Float& Float::operator=(const Float& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Float& Float::operator=(Float&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Float::~Float() { mpfr_clear(value_); }

}  // namespace detail

namespace {

constexpr mpfr_prec_t kRadBits = 64;

using detail::Float;

Rational exact_value(mpfr_srcptr x) {
  Rational out;
  mpfr_get_q(out.get_mpq_t(), x);
  return out;
}

Precision merged(const Precision& a, const Precision& b) {
  return {std::max(a.digits, b.digits), std::max(a.max_digits, b.max_digits)};
}

// |x| rounded up to radius precision.
Float abs_up(mpfr_srcptr x) {
  Float out(kRadBits);
  mpfr_abs(out.get(), x, MPFR_RNDU);
  return out;
}

// |x| - r rounded down; callers guarantee it is positive.
Float abs_minus_down(mpfr_srcptr x, mpfr_srcptr r) {
  Float out(kRadBits);
  mpfr_abs(out.get(), x, MPFR_RNDD);
  mpfr_sub(out.get(), out.get(), r, MPFR_RNDD);
  return out;
}

Rational pow10_rational(long e) {
  if (e >= 0) return Rational(pow10(static_cast<std::uint64_t>(e)));
  return make_rational(1, pow10(static_cast<std::uint64_t>(-e)));
}

}  // namespace

BallReal::BallReal() : BallReal(kDefaultPrecision) {}

BallReal::BallReal(const Precision& prec) : prec_(prec), mid_(prec.bits()), rad_(kRadBits) {}

void BallReal::add_rounding_error(int ternary) {
  if (ternary == 0 || mpfr_zero_p(mid_.get())) return;
  // One full ulp of the midpoint; round-to-nearest only needs half.
  Float ulp(kRadBits);
  mpfr_set_ui_2exp(ulp.get(), 1, mpfr_get_exp(mid_.get()) - mpfr_get_prec(mid_.get()), MPFR_RNDU);
  mpfr_add(rad_.get(), rad_.get(), ulp.get(), MPFR_RNDU);
}

BallReal BallReal::exact(const BigInt& value, const Precision& prec) {
  BallReal out(prec);
  out.add_rounding_error(mpfr_set_z(out.mid_.get(), value.get_mpz_t(), MPFR_RNDN));
  return out;
}

BallReal BallReal::from_rational(const Rational& value, const Precision& prec) {
  BallReal out(prec);
  out.add_rounding_error(mpfr_set_q(out.mid_.get(), value.get_mpq_t(), MPFR_RNDN));
  return out;
}

BallReal BallReal::from_mid_rad(const Rational& mid, const Rational& rad, const Precision& prec) {
  BallReal out = from_rational(mid, prec);
  Float r(kRadBits);
  Rational mag = abs(rad);
  mpfr_set_q(r.get(), mag.get_mpq_t(), MPFR_RNDU);
  mpfr_add(out.rad_.get(), out.rad_.get(), r.get(), MPFR_RNDU);
  return out;
}

BallReal BallReal::from_interval(const Interval& iv, const Precision& prec) {
  const Rational mid = (iv.lo + iv.hi) / 2;
  const Rational rad = (iv.hi - iv.lo) / 2;
  return from_mid_rad(mid, rad, prec);
}

bool BallReal::is_exact() const { return mpfr_zero_p(rad_.get()) != 0; }

Rational BallReal::mid() const { return exact_value(mid_.get()); }
Rational BallReal::rad() const { return exact_value(rad_.get()); }
Rational BallReal::lower() const { return mid() - rad(); }
Rational BallReal::upper() const { return mid() + rad(); }

double BallReal::mid_double() const { return mpfr_get_d(mid_.get(), MPFR_RNDN); }
double BallReal::rad_double() const { return mpfr_get_d(rad_.get(), MPFR_RNDU); }

bool BallReal::contains(const Rational& value) const {
  const Rational m = mid();
  const Rational r = rad();
  return m - r <= value && value <= m + r;
}

bool BallReal::contains_zero() const { return contains(Rational(0)); }

bool BallReal::overlaps(const BallReal& other) const {
  return lower() <= other.upper() && other.lower() <= upper();
}

bool BallReal::certainly_positive() const { return lower() > 0; }
bool BallReal::certainly_negative() const { return upper() < 0; }

std::optional<BigInt> BallReal::certified_floor() const {
  BigInt lo = floor(lower());
  BigInt hi = floor(upper());
  if (lo != hi) return std::nullopt;
  return lo;
}

BallReal BallReal::with_precision(const Precision& prec) const {
  BallReal out(prec);
  mpfr_set(out.rad_.get(), rad_.get(), MPFR_RNDU);
  out.add_rounding_error(mpfr_set(out.mid_.get(), mid_.get(), MPFR_RNDN));
  return out;
}

BallReal BallReal::operator-() const {
  BallReal out = *this;
  mpfr_neg(out.mid_.get(), mid_.get(), MPFR_RNDN);
  return out;
}

BallReal operator+(const BallReal& a, const BallReal& b) {
  BallReal out(merged(a.prec_, b.prec_));
  mpfr_add(out.rad_.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
  out.add_rounding_error(mpfr_add(out.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN));
  return out;
}

BallReal operator-(const BallReal& a, const BallReal& b) {
  BallReal out(merged(a.prec_, b.prec_));
  mpfr_add(out.rad_.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
  out.add_rounding_error(mpfr_sub(out.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN));
  return out;
}

BallReal operator*(const BallReal& a, const BallReal& b) {
  BallReal out(merged(a.prec_, b.prec_));
  // |a.mid| b.rad + |b.mid| a.rad + a.rad b.rad
  Float t(kRadBits);
  Float am = abs_up(a.mid_.get());
  Float bm = abs_up(b.mid_.get());
  mpfr_mul(out.rad_.get(), am.get(), b.rad_.get(), MPFR_RNDU);
  mpfr_mul(t.get(), bm.get(), a.rad_.get(), MPFR_RNDU);
  mpfr_add(out.rad_.get(), out.rad_.get(), t.get(), MPFR_RNDU);
  mpfr_mul(t.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
  mpfr_add(out.rad_.get(), out.rad_.get(), t.get(), MPFR_RNDU);
  out.add_rounding_error(mpfr_mul(out.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN));
  return out;
}

BallReal operator/(const BallReal& a, const BallReal& b) {
  if (b.is_exact() && mpfr_zero_p(b.mid_.get())) throw std::domain_error("division by exact zero");
  if (b.contains_zero()) throw AmbiguousPrecision("division by a ball containing zero");
  BallReal out(merged(a.prec_, b.prec_));
  if (!a.is_exact() || !b.is_exact()) {
    // (|a.mid| b.rad + |b.mid| a.rad) / (|b.mid| (|b.mid| - b.rad))
    Float num(kRadBits);
    Float t(kRadBits);
    Float am = abs_up(a.mid_.get());
    Float bm = abs_up(b.mid_.get());
    mpfr_mul(num.get(), am.get(), b.rad_.get(), MPFR_RNDU);
    mpfr_mul(t.get(), bm.get(), a.rad_.get(), MPFR_RNDU);
    mpfr_add(num.get(), num.get(), t.get(), MPFR_RNDU);
    Float den = abs_minus_down(b.mid_.get(), b.rad_.get());
    Float bm_down(kRadBits);
    mpfr_abs(bm_down.get(), b.mid_.get(), MPFR_RNDD);
    mpfr_mul(den.get(), den.get(), bm_down.get(), MPFR_RNDD);
    mpfr_div(out.rad_.get(), num.get(), den.get(), MPFR_RNDU);
  }
  out.add_rounding_error(mpfr_div(out.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN));
  return out;
}

BallReal operator+(const BallReal& a, const BigInt& b) { return a + BallReal::exact(b, a.precision()); }
BallReal operator-(const BallReal& a, const BigInt& b) { return a - BallReal::exact(b, a.precision()); }
BallReal operator*(const BallReal& a, const BigInt& b) { return a * BallReal::exact(b, a.precision()); }
BallReal operator*(const BigInt& a, const BallReal& b) { return BallReal::exact(a, b.precision()) * b; }
BallReal operator/(const BallReal& a, const BigInt& b) { return a / BallReal::exact(b, a.precision()); }
BallReal operator*(const BallReal& a, const Rational& b) {
  return a * BallReal::from_rational(b, a.precision());
}

BallReal sqrt(const BallReal& x) {
  if (!x.certainly_positive()) throw NonPositiveInput("sqrt of a ball touching zero or below");
  BallReal out(x.prec_);
  if (!x.is_exact()) {
    // r / (sqrt(m - r) + sqrt(m))
    Float lo = abs_minus_down(x.mid_.get(), x.rad_.get());
    mpfr_sqrt(lo.get(), lo.get(), MPFR_RNDD);
    Float sm(kRadBits);
    mpfr_sqrt(sm.get(), x.mid_.get(), MPFR_RNDD);
    mpfr_add(lo.get(), lo.get(), sm.get(), MPFR_RNDD);
    mpfr_div(out.rad_.get(), x.rad_.get(), lo.get(), MPFR_RNDU);
  }
  out.add_rounding_error(mpfr_sqrt(out.mid_.get(), x.mid_.get(), MPFR_RNDN));
  return out;
}

BallReal log(const BallReal& x) {
  if (!x.certainly_positive()) throw NonPositiveInput("log of a ball touching zero or below");
  BallReal out(x.prec_);
  if (!x.is_exact()) {
    // |log x - log m| <= r / (m - r) on the whole ball.
    Float lo = abs_minus_down(x.mid_.get(), x.rad_.get());
    mpfr_div(out.rad_.get(), x.rad_.get(), lo.get(), MPFR_RNDU);
  }
  out.add_rounding_error(mpfr_log(out.mid_.get(), x.mid_.get(), MPFR_RNDN));
  return out;
}

BallReal exp(const BallReal& x) {
  BallReal out(x.prec_);
  if (!x.is_exact()) {
    // e^m (e^r - 1)
    Float em(kRadBits);
    mpfr_exp(em.get(), x.mid_.get(), MPFR_RNDU);
    mpfr_expm1(out.rad_.get(), x.rad_.get(), MPFR_RNDU);
    mpfr_mul(out.rad_.get(), out.rad_.get(), em.get(), MPFR_RNDU);
  }
  out.add_rounding_error(mpfr_exp(out.mid_.get(), x.mid_.get(), MPFR_RNDN));
  return out;
}

BallReal pow(const BallReal& x, long exponent) {
  if (exponent == 0) return BallReal::exact(1, x.precision());
  if (exponent < 0) return BallReal::exact(1, x.precision()) / pow(x, -exponent);
  BallReal result = BallReal::exact(1, x.precision());
  BallReal base = x;
  auto e = static_cast<unsigned long>(exponent);
  while (true) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e == 0) break;
    base = base * base;
  }
  return result;
}

Interval nearest_int_distance(const BallReal& x) {
  const Rational lo = x.lower();
  const Rational hi = x.upper();
  const Rational half(1, 2);
  auto dist = [&](const Rational& v) {
    Rational d = v - Rational(floor(v + half));
    return Rational(abs(d));
  };

  const bool has_int = ceil(lo) <= floor(hi);
  const bool has_half = ceil(lo - half) <= floor(hi - half);
  if (has_int && has_half) {
    throw AmbiguousPrecision("ball covers both an integer and a half-integer");
  }
  if (lo == hi) {
    Rational d = dist(lo);
    return {d, d};
  }
  if (has_int) {
    const Rational n(ceil(lo));
    return {Rational(0), std::max<Rational>(n - lo, hi - n)};
  }
  const Rational dl = dist(lo);
  const Rational dh = dist(hi);
  if (has_half) return {std::min(dl, dh), half};
  return {std::min(dl, dh), std::max(dl, dh)};
}

bool certainly_less(const BallReal& a, const BallReal& b) { return a.upper() < b.lower(); }
bool certainly_less(const BallReal& a, const Rational& b) { return a.upper() < b; }
bool certainly_less(const Rational& a, const BallReal& b) { return a < b.lower(); }

BallReal refine(const BallSource& source, Precision prec, const std::optional<Rational>& target_radius) {
  while (true) {
    BallReal value = source(prec);
    if (!target_radius || value.rad() <= *target_radius) return value;
    if (!prec.escalate()) {
      throw PrecisionExhausted("radius target not met at " + std::to_string(prec.digits) + " digits");
    }
  }
}

std::string to_scientific(const Rational& value, unsigned sig, Rounding mode) {
  if (value == 0) return "0";
  if (sig == 0) sig = 1;
  const bool negative = value < 0;
  const Rational mag = abs(value);

  long e = static_cast<long>(decimal_digits(mag.get_num())) - static_cast<long>(decimal_digits(mag.get_den()));
  while (mag < pow10_rational(e)) --e;
  while (mag >= pow10_rational(e + 1)) ++e;

  const Rational scaled = mag / pow10_rational(e - static_cast<long>(sig) + 1);
  // Directed modes refer to the signed value, so flip them for negatives.
  Rounding m = mode;
  if (negative && mode == Rounding::Down) m = Rounding::Up;
  else if (negative && mode == Rounding::Up) m = Rounding::Down;
  BigInt mant;
  switch (m) {
    case Rounding::Down: mant = floor(scaled); break;
    case Rounding::Up: mant = ceil(scaled); break;
    case Rounding::Nearest: mant = floor(scaled + Rational(1, 2)); break;
  }
  if (mant == pow10(sig)) {
    mant /= 10;
    ++e;
  }

  std::string digits = to_decimal(mant);
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
  std::string out = negative ? "-" : "";
  out += digits.substr(0, 1);
  if (digits.size() > 1) out += "." + digits.substr(1);
  if (e != 0) out += "e" + std::to_string(e);
  return out;
}

SerializedBall serialize(const BallReal& x) {
  SerializedBall s;
  s.digits = x.precision().digits;
  const Rational m = x.mid();
  if (m.get_den() == 1 && decimal_digits(m.get_num()) <= x.precision().digits + 2) {
    s.mid = to_decimal(m.get_num());
  } else {
    s.mid = to_scientific(m, x.precision().digits + 2, Rounding::Nearest);
  }
  const Rational printed = parse_rational(s.mid);
  const Rational r = x.rad() + abs(Rational(printed - m));
  s.rad = to_scientific(r, 3, Rounding::Up);
  return s;
}

BallReal deserialize(const SerializedBall& s) {
  if (s.digits == 0) throw ParseError("ball digits must be positive");
  Precision prec;
  prec.digits = s.digits;
  prec.max_digits = std::max(prec.max_digits, s.digits);
  return BallReal::from_mid_rad(parse_rational(s.mid), parse_rational(s.rad), prec);
}

std::ostream& operator<<(std::ostream& os, const BallReal& x) {
  return os << to_scientific(x.mid(), 20, Rounding::Nearest) << " +/- "
            << to_scientific(x.rad(), 3, Rounding::Up);
}

}  // namespace fibcert
