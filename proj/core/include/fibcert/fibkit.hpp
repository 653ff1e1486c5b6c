#pragma once

#include <cstdint>

#include "fibcert/ball.hpp"
#include "fibcert/bigint.hpp"

namespace fibcert {

using FibIndex = std::uint32_t;

/// F_l^k exactly divides F_n.
struct Valuation {
  FibIndex base_index = 0;
  FibIndex target_index = 0;
  std::uint32_t k = 0;
};

/// F_n by fast doubling.
BigInt fib(FibIndex n);

/// Largest k with d^k | value, for |d| >= 2 and value != 0.
std::uint32_t exact_valuation(const BigInt& d, const BigInt& value);

/// True iff the ball (phi^n - (-phi)^-n) / sqrt 5 contains F_n.
bool binet_check(FibIndex n, const Precision& prec = kDefaultPrecision);

/// phi^(n-2) <= F_n <= phi^(n-1), decided by certified comparison. n >= 1.
bool golden_bounds_check(FibIndex n, const Precision& prec = kDefaultPrecision);

/// F_{l-d} F_{l+d} - F_l^2 == (-1)^(l+d+1) F_d^2 in exact arithmetic. l >= d >= 1.
bool catalan_identity_check(FibIndex l, FibIndex d);

/// (F_l - 1) divides F_{l-2} F_{l-1} F_{l+1} F_{l+2}. l >= 3.
bool fl_minus_one_divides(FibIndex l);

/// The k with F_l^k || F_n. l >= 3, n >= 1.
Valuation fib_valuation(FibIndex l, FibIndex n);

/// Checks the clause of the exact-divisibility lemma that applies to (l, n):
///   l != 3 (mod 6)                      =>  F_l^(k-1) || n/l
///   l == 3 (mod 6) and 2^(k-1) | n/l    =>  F_l^(k-1) || n/l
///   l == 3 (mod 6) and 2^(k-1) !| n/l   =>  F_l^(k-2) || n/l
/// An exponent of 0 means F_l does not divide n/l.
/// Throws PreconditionViolated unless k >= 2 and l | n.
bool exact_divisibility_check(FibIndex l, FibIndex n);

/// log l + (k-2)(l-2) log phi, a lower bound on log n for any solution. l >= 3, k >= 2.
BallReal log_index_lower_bound(FibIndex l, std::uint32_t k, const Precision& prec = kDefaultPrecision);

}  // namespace fibcert
