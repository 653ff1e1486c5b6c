#include <doctest.h>

#include <cmath>

#include "fibcert/errors.hpp"
#include "fibcert/fibkit.hpp"
#include "support/oracle.hpp"

using namespace fibcert;

TEST_CASE("fib base cases and recurrence") {
  CHECK(fib(0) == 0);
  CHECK(fib(1) == 1);
  CHECK(fib(10) == 55);
  const auto naive = oracle::fib_recurrence(1000);
  for (FibIndex n = 0; n <= 1000; ++n) REQUIRE(fib(n) == naive[n]);
}

TEST_CASE("binet_check examples") {
  CHECK(binet_check(0));
  CHECK(binet_check(9));
  CHECK(binet_check(100));
}

TEST_CASE("golden_bounds_check examples") {
  CHECK(golden_bounds_check(1));
  CHECK(golden_bounds_check(6));
  CHECK(golden_bounds_check(869));
}

TEST_CASE("catalan_identity_check examples") {
  for (FibIndex l = 1; l <= 12; ++l) CHECK(catalan_identity_check(l, l));
  CHECK(catalan_identity_check(5, 2));
  CHECK(catalan_identity_check(20, 7));
}

TEST_CASE("fl_minus_one_divides examples") {
  CHECK(fl_minus_one_divides(3));
  CHECK(fl_minus_one_divides(7));
  CHECK(BigInt(5 * 8 * 21 * 34) / 12 == 2380);
  CHECK(fl_minus_one_divides(50));
}

TEST_CASE("fib_valuation examples") {
  CHECK(fib_valuation(3, 6).k == 3);
  CHECK(fib_valuation(4, 5).k == 0);
  CHECK(fib(36) == 14930352);
  CHECK(fib_valuation(4, 36).k == 3);
  const Valuation v = fib_valuation(5, 25);
  CHECK(v.base_index == 5);
  CHECK(v.target_index == 25);
  CHECK(v.k == 2);
}

TEST_CASE("exact_valuation") {
  CHECK(exact_valuation(2, 96) == 5);
  CHECK(exact_valuation(-3, 81) == 4);
  CHECK(exact_valuation(7, 5) == 0);
}

TEST_CASE("exact_divisibility_check examples and preconditions") {
  CHECK(exact_divisibility_check(4, 36));
  CHECK(exact_divisibility_check(3, 6));
  CHECK(fib(25) == 75025);
  CHECK(exact_divisibility_check(5, 25));
  CHECK_THROWS_AS(exact_divisibility_check(4, 8), PreconditionViolated);   // k = 1
  CHECK_THROWS_AS(exact_divisibility_check(4, 30), PreconditionViolated);  // 4 does not divide 30
}

TEST_CASE("log_index_lower_bound examples") {
  const BallReal b32 = log_index_lower_bound(3, 2);
  CHECK(b32.contains(Rational(0)) == false);
  CHECK(std::abs(b32.mid_double() - std::log(3.0)) < 1e-12);

  const BallReal b33 = log_index_lower_bound(3, 3);
  CHECK(std::abs(b33.mid_double() - 1.5798) < 1e-4);

  // The l = 157 threshold sits just below log(4.64e34).
  const BallReal b157 = log_index_lower_bound(157, 3);
  const BallReal logn = log(BallReal::exact(BigInt(464) * pow10(32)));
  CHECK(std::abs(b157.mid_double() - 79.64) < 0.01);
  CHECK(certainly_less(b157, logn));
  CHECK(certainly_less(logn, log_index_lower_bound(158, 3)));
}
