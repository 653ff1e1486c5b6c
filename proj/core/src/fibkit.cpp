#include "fibcert/fibkit.hpp"

#include <string>

#include "fibcert/constants.hpp"
#include "fibcert/errors.hpp"

namespace fibcert {

BigInt fib(FibIndex n) {
  // (F_k, F_{k+1}) -> (F_2k, F_2k+1):
  //   F_2k   = F_k (2 F_{k+1} - F_k)
  //   F_2k+1 = F_k^2 + F_{k+1}^2
  BigInt a = 0;
  BigInt b = 1;
  for (int bit = 31; bit >= 0; --bit) {
    BigInt c = a * (2 * b - a);
    BigInt d = a * a + b * b;
    if ((n >> bit) & 1U) {
      a = d;
      b = c + d;
    } else {
      a = c;
      b = d;
    }
  }
  return a;
}

std::uint32_t exact_valuation(const BigInt& d, const BigInt& value) {
  if (abs(d) < 2) throw PreconditionViolated("valuation base must satisfy |d| >= 2");
  if (value == 0) throw PreconditionViolated("valuation of zero is unbounded");
  std::uint32_t k = 0;
  BigInt rest = value;
  while (mpz_divisible_p(rest.get_mpz_t(), d.get_mpz_t())) {
    mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), d.get_mpz_t());
    ++k;
  }
  return k;
}

bool binet_check(FibIndex n, const Precision& prec) {
  const BallReal phi = golden_ratio(prec);
  BallReal tail = pow(phi, -static_cast<long>(n));
  if (n % 2 == 1) tail = -tail;  // (-phi)^-n
  const BallReal value = (pow(phi, static_cast<long>(n)) - tail) / sqrt5(prec);
  return value.contains(fib(n));
}

bool golden_bounds_check(FibIndex n, const Precision& prec) {
  if (n < 1) throw PreconditionViolated("golden_bounds_check needs n >= 1");
  const BallReal phi = golden_ratio(prec);
  const Rational f(fib(n));
  const BallReal below = pow(phi, static_cast<long>(n) - 2);
  const BallReal above = pow(phi, static_cast<long>(n) - 1);
  return below.upper() <= f && f <= above.lower();
}

bool catalan_identity_check(FibIndex l, FibIndex d) {
  if (d < 1 || d > l) throw PreconditionViolated("catalan_identity_check needs l >= d >= 1");
  const BigInt fl = fib(l);
  const BigInt fd = fib(d);
  const BigInt lhs = fib(l - d) * fib(l + d) - fl * fl;
  const BigInt rhs = ((l + d + 1) % 2 == 0 ? 1 : -1) * fd * fd;
  return lhs == rhs;
}

bool fl_minus_one_divides(FibIndex l) {
  if (l < 3) throw PreconditionViolated("fl_minus_one_divides needs l >= 3");
  const BigInt divisor = fib(l) - 1;
  const BigInt product = fib(l - 2) * fib(l - 1) * fib(l + 1) * fib(l + 2);
  return mpz_divisible_p(product.get_mpz_t(), divisor.get_mpz_t()) != 0;
}

Valuation fib_valuation(FibIndex l, FibIndex n) {
  if (l < 3 || n < 1) throw PreconditionViolated("fib_valuation needs l >= 3 and n >= 1");
  return {l, n, exact_valuation(fib(l), fib(n))};
}

bool exact_divisibility_check(FibIndex l, FibIndex n) {
  const Valuation v = fib_valuation(l, n);
  if (v.k < 2) {
    throw PreconditionViolated("exact_divisibility_check needs F_l^k || F_n with k >= 2 (got k=" +
                               std::to_string(v.k) + ")");
  }
  if (n % l != 0) throw PreconditionViolated("exact_divisibility_check needs l | n");
  const BigInt quotient = n / l;

  std::uint32_t expected = v.k - 1;
  if (l % 6 == 3) {
    const BigInt power_of_two = pow(BigInt(2), v.k - 1);
    if (!mpz_divisible_p(quotient.get_mpz_t(), power_of_two.get_mpz_t())) expected = v.k - 2;
  }
  return exact_valuation(fib(l), quotient) == expected;
}

BallReal log_index_lower_bound(FibIndex l, std::uint32_t k, const Precision& prec) {
  if (l < 3 || k < 2) throw PreconditionViolated("log_index_lower_bound needs l >= 3 and k >= 2");
  const BigInt steps = BigInt(k - 2) * BigInt(l - 2);
  return log(BallReal::exact(l, prec)) + steps * log_golden_ratio(prec);
}

}  // namespace fibcert
