#include "fibcert/bigint.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "fibcert/errors.hpp"
#include "fibcert/precision.hpp"

namespace fibcert {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

long Precision::bits() const {
  // log2(10) = 3.3219...; eight guard bits keep the last decimal digit honest.
  return static_cast<long>(std::ceil(digits * 3.321928094887362)) + 8;
}

bool Precision::escalate() {
  if (digits >= max_digits) return false;
  digits = digits * 2 > max_digits ? max_digits : digits * 2;
  return true;
}

std::string to_decimal(const BigInt& value) { return value.get_str(10); }

BigInt parse_bigint(std::string_view text) {
  std::string_view body = text;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  if (!all_digits(body)) throw ParseError("not a decimal integer: '" + std::string(text) + "'");
  std::string s(text);
  if (s.front() == '+') s.erase(0, 1);
  return BigInt(s, 10);
}

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_bigint(text.substr(0, slash));
    BigInt den = parse_bigint(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator: '" + std::string(text) + "'");
    return make_rational(num, den);
  }

  std::string_view rest = text;
  bool negative = false;
  if (!rest.empty() && (rest.front() == '-' || rest.front() == '+')) {
    negative = rest.front() == '-';
    rest.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = rest.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = rest.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) {
      throw ParseError("bad exponent in '" + std::string(text) + "'");
    }
    exponent = std::strtol(std::string(exp_text).c_str(), nullptr, 10);
    if (exp_negative) exponent = -exponent;
    rest = rest.substr(0, e);
  }
  std::string digits;
  if (auto dot = rest.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = rest.substr(0, dot);
    std::string_view frac_part = rest.substr(dot + 1);
    if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)) ||
        (int_part.empty() && frac_part.empty())) {
      throw ParseError("not a decimal number: '" + std::string(text) + "'");
    }
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(rest)) throw ParseError("not a decimal number: '" + std::string(text) + "'");
    digits = std::string(rest);
  }
  BigInt mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  if (exponent >= 0) return Rational(mantissa * pow10(static_cast<std::uint64_t>(exponent)));
  return make_rational(mantissa, pow10(static_cast<std::uint64_t>(-exponent)));
}

std::string to_decimal(const Rational& value) {
  BigInt den = value.get_den();
  unsigned twos = 0;
  unsigned fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return value.get_str(10);

  const unsigned scale = twos > fives ? twos : fives;
  BigInt scaled = value.get_num() * pow10(scale) / value.get_den();
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string s = to_decimal(scaled);
  if (scale > 0) {
    if (s.size() <= scale) s.insert(0, scale - s.size() + 1, '0');
    s.insert(s.size() - scale, ".");
  }
  return negative ? "-" + s : s;
}

Rational make_rational(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

BigInt pow(const BigInt& base, std::uint64_t exponent) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

BigInt pow10(std::uint64_t exponent) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), 10, exponent);
  return out;
}

std::size_t decimal_digits(const BigInt& value) {
  if (value == 0) return 1;
  BigInt mag = abs(value);
  std::size_t d = mpz_sizeinbase(mag.get_mpz_t(), 10);  // exact or one too many
  if (mag < pow10(d - 1)) --d;
  return d;
}

BigInt floor(const Rational& value) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return out;
}

BigInt ceil(const Rational& value) {
  BigInt out;
  mpz_cdiv_q(out.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return out;
}

BigInt round_up_significant(const BigInt& value, unsigned sig) {
  if (value <= 0 || sig == 0) return value;
  const std::size_t d = decimal_digits(value);
  if (d <= sig) return value;
  const BigInt unit = pow10(d - sig);
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), value.get_mpz_t(), unit.get_mpz_t());
  return q * unit;
}

}  // namespace fibcert
