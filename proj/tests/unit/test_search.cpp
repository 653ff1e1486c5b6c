#include <doctest.h>

#include <algorithm>

#include "fibcert/search.hpp"
#include "support/oracle.hpp"

using namespace fibcert;

namespace {

const SearchBox kFinalBox{{9, 869}, {3, 18}, {3, 24}, {2, 27}};

// Independent check by repeated multiplication.
BigInt rhs(std::uint32_t a, std::uint32_t k, std::uint32_t b, std::uint32_t m) {
  BigInt ak = 1, bm = 1;
  for (std::uint32_t i = 0; i < k; ++i) ak *= a;
  for (std::uint32_t i = 0; i < m; ++i) bm *= b;
  return ak * (bm - 1);
}

}  // namespace

TEST_CASE("fibonacci lookup table") {
  const FibTable small(3);
  CHECK(small.lookup(BigInt(1)) == std::vector<FibIndex>{1, 2});
  CHECK(small.lookup(BigInt(2)) == std::vector<FibIndex>{3});
  CHECK(small.lookup(BigInt(3)).empty());
  CHECK(small.size() == 3);

  const FibTable big = build_fib_table(869);
  CHECK(big.size() == 869);
  CHECK(decimal_digits(big.max_value()) == 182);
  CHECK(big.lookup(BigInt(8)) == std::vector<FibIndex>{6});
  const auto naive = oracle::fib_recurrence(869);
  CHECK(big.max_value() == naive[869]);
  CHECK(big.lookup(naive[500]) == std::vector<FibIndex>{500});
}

TEST_CASE("size window") {
  // l = 3, m = 1: (l-2) m < 2, so there is no lower bound.
  const IndexRange w = size_window(3, 3, 1);
  CHECK(w.lo <= 6);
  CHECK(w.hi == 2 + 4 * 2);
  const IndexRange w2 = size_window(18, 24, 27);
  CHECK(w2.hi == 869);
  CHECK(w2.lo == 51 * 16);
}

TEST_CASE("final box is empty") {
  SearchStats stats;
  CHECK(search_box(kFinalBox, {.prefilter = true, .jobs = 4}, &stats).empty());
  CHECK(stats.evaluated > 0);
  CHECK(stats.evaluated + stats.prefiltered <= 16ULL * 22 * 26);
  CHECK(search_box(kFinalBox, {.prefilter = false, .jobs = 4}).empty());
}

TEST_CASE("prefilter skips triples and changes nothing") {
  const SearchBox narrow{{9, 40}, {3, 18}, {1, 24}, {1, 27}};
  SearchStats with, without;
  const auto a = search_box(narrow, {.prefilter = true, .jobs = 1}, &with);
  const auto b = search_box(narrow, {.prefilter = false, .jobs = 1}, &without);
  CHECK(a == b);
  CHECK(with.prefiltered > 0);
  CHECK(without.prefiltered == 0);
}

TEST_CASE("m = 1 box") {
  const std::vector<Solution> expected{{3, 3, 1, 1}, {6, 3, 3, 1}};
  CHECK(search_box({{1, 12}, {3, 12}, {1, 12}, {1, 1}}) == expected);
  const std::vector<Solution> m1 = search_m1_case();
  CHECK(m1 == expected);
  CHECK(std::none_of(m1.begin(), m1.end(), [](const Solution& s) { return s.l >= 4; }));
  CHECK(m1_box().m == IndexRange{1, 1});
}

TEST_CASE("empty boxes") {
  CHECK(search_box({{1, 100}, {5, 4}, {1, 10}, {1, 10}}).empty());
  CHECK(search_box({{10, 9}, {3, 4}, {1, 10}, {1, 10}}).empty());
}

TEST_CASE("solutions verify independently") {
  CHECK(verify_solution({6, 3, 3, 1}));
  CHECK(verify_solution({3, 3, 1, 1}));
  CHECK_FALSE(verify_solution({7, 3, 3, 1}));
  CHECK(oracle::fib_recurrence(6)[6] == rhs(2, 3, 2, 1));
}

TEST_CASE("open problem oracle") {
  const std::vector<OracleHit> hits = open_problem_oracle({2, 2}, {2, 2}, {3, 3}, {1, 1}, 10);
  CHECK(std::find(hits.begin(), hits.end(), OracleHit{6, 2, 3, 2, 1}) != hits.end());

  // Naive double loop over the tuple and over n.
  const auto f = oracle::fib_recurrence(100);
  std::vector<OracleHit> naive;
  for (std::uint32_t n = 1; n <= 100; ++n)
    for (std::uint32_t a = 2; a <= 5; ++a)
      for (std::uint32_t k = 1; k <= 6; ++k)
        for (std::uint32_t b = 2; b <= 5; ++b)
          for (std::uint32_t m = 1; m <= 6; ++m)
            if (rhs(a, k, b, m) == f[n]) naive.push_back({n, a, k, b, m});
  std::sort(naive.begin(), naive.end());
  std::vector<OracleHit> got = open_problem_oracle({2, 5}, {2, 5}, {1, 6}, {1, 6}, 100);
  std::sort(got.begin(), got.end());
  CHECK(got == naive);
  CHECK_FALSE(got.empty());
  for (const OracleHit& h : got) CHECK(rhs(h.a, h.k, h.b, h.m) >= 2);
}
