#include <doctest.h>

#include "fibcert/fibkit.hpp"
#include "support/oracle.hpp"

using namespace fibcert;

TEST_CASE("F_l - 1 divides F_{l-2} F_{l-1} F_{l+1} F_{l+2} for 3 <= l <= 200") {
  for (FibIndex l = 3; l <= 200; ++l) REQUIRE_MESSAGE(fl_minus_one_divides(l), "l = " << l);
}

TEST_CASE("divisibility by residues from the recurrence") {
  const auto f = oracle::fib_recurrence(202);
  for (std::uint32_t l = 3; l <= 200; ++l) {
    const BigInt mod = f[l] - 1;
    BigInt r = 1;
    for (std::uint32_t j : {l - 2, l - 1, l + 1, l + 2}) r = (r * (f[j] % mod)) % mod;
    REQUIRE(r == 0);
  }
}
