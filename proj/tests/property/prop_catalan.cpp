#include <doctest.h>

#include "fibcert/fibkit.hpp"
#include "support/oracle.hpp"

using namespace fibcert;

TEST_CASE("Catalan identity for 1 <= d <= l <= 60") {
  for (FibIndex l = 1; l <= 60; ++l)
    for (FibIndex d = 1; d <= l; ++d) REQUIRE_MESSAGE(catalan_identity_check(l, d), "l = " << l << ", d = " << d);
}

TEST_CASE("Catalan identity from the recurrence") {
  const auto f = oracle::fib_recurrence(120);
  for (std::uint32_t l = 1; l <= 60; ++l) {
    for (std::uint32_t d = 1; d <= l; ++d) {
      const BigInt lhs = f[l - d] * f[l + d] - f[l] * f[l];
      const BigInt rhs = ((l + d + 1) % 2 == 0 ? 1 : -1) * f[d] * f[d];
      REQUIRE(lhs == rhs);
    }
  }
}
