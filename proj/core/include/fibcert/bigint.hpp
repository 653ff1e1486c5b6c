#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace fibcert {

/// Arbitrary-precision integer. GMP keeps the representation canonical.
using BigInt = mpz_class;

/// Exact rational with positive denominator, always kept in lowest terms.
using Rational = mpq_class;

std::string to_decimal(const BigInt& value);

/// Parses an optionally signed decimal integer. Throws ParseError on junk.
BigInt parse_bigint(std::string_view text);

/// Parses "p/q", an integer, or a plain decimal such as "-1.03e-28" exactly.
Rational parse_rational(std::string_view text);

/// Exact decimal rendering of a rational whose denominator divides a power of ten;
/// otherwise "p/q".
std::string to_decimal(const Rational& value);

Rational make_rational(const BigInt& num, const BigInt& den);

BigInt pow(const BigInt& base, std::uint64_t exponent);

/// 10^exponent.
BigInt pow10(std::uint64_t exponent);

/// Number of decimal digits of |value| (1 for zero).
std::size_t decimal_digits(const BigInt& value);

/// floor(value) and ceil(value) for rationals.
BigInt floor(const Rational& value);
BigInt ceil(const Rational& value);

/// Smallest number >= value that has at most `sig` significant decimal digits.
BigInt round_up_significant(const BigInt& value, unsigned sig);

}  // namespace fibcert
