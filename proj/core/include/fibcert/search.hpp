#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "fibcert/bigint.hpp"
#include "fibcert/fibkit.hpp"

namespace fibcert {

/// Inclusive integer range; empty when lo > hi.
struct IndexRange {
  std::uint32_t lo = 1;
  std::uint32_t hi = 0;

  [[nodiscard]] bool empty() const { return lo > hi; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

struct SearchBox {
  IndexRange n;
  IndexRange l;
  IndexRange k;
  IndexRange m;

  [[nodiscard]] bool empty() const { return n.empty() || l.empty() || k.empty() || m.empty(); }
  friend bool operator==(const SearchBox&, const SearchBox&) = default;
};

/// F_n = F_l^k (F_l^m - 1).
struct Solution {
  std::uint32_t n = 0;
  std::uint32_t l = 0;
  std::uint32_t k = 0;
  std::uint32_t m = 0;

  friend auto operator<=>(const Solution&, const Solution&) = default;
};

/// F_n = a^k (b^m - 1).
struct OracleHit {
  std::uint32_t n = 0;
  std::uint32_t a = 0;
  std::uint32_t k = 0;
  std::uint32_t b = 0;
  std::uint32_t m = 0;

  friend auto operator<=>(const OracleHit&, const OracleHit&) = default;
};

/// Exact map F_n -> n for 1 <= n <= n_hi. F_1 = F_2 = 1 keeps both indices.
class FibTable {
 public:
  explicit FibTable(FibIndex n_hi);

  /// Indices n with F_n == value, ascending; empty if none.
  [[nodiscard]] const std::vector<FibIndex>& lookup(const BigInt& value) const;
  [[nodiscard]] const BigInt& max_value() const { return max_value_; }
  [[nodiscard]] std::size_t size() const { return entries_; }
  [[nodiscard]] FibIndex n_hi() const { return n_hi_; }

 private:
  std::map<BigInt, std::vector<FibIndex>> index_;
  BigInt max_value_;
  FibIndex n_hi_ = 0;
  std::size_t entries_ = 0;
};

FibTable build_fib_table(FibIndex n_hi);

struct SearchOptions {
  /// Skip (l, k, m) whose admissible n-range misses the box before any big-integer work.
  bool prefilter = true;
  unsigned jobs = 1;
};

struct SearchStats {
  std::uint64_t evaluated = 0;
  std::uint64_t prefiltered = 0;
};

/// Admissible n for a solution with these (l, k, m):
/// n <= 2 + (k+m)(l-1) always, and n >= (k+m)(l-2) when (l-2) m >= 2.
IndexRange size_window(std::uint32_t l, std::uint32_t k, std::uint32_t m);

/// All solutions inside the box, sorted. Every emitted solution is re-verified.
std::vector<Solution> search_box(const SearchBox& box, const SearchOptions& opts = {},
                                 SearchStats* stats = nullptr);

/// The m = 1 equation F_n = F_l^k (F_l - 1) for n <= 12, l >= 3, k >= 1.
std::vector<Solution> search_m1_case();

/// Box used by search_m1_case. It is exhaustive: F_l (F_l - 1) <= 144 forces
/// l <= 6 and 2^k <= 144 forces k <= 7.
SearchBox m1_box();

/// Tuples with a^k (b^m - 1) == F_n for some n <= n_hi. a, b >= 2.
std::vector<OracleHit> open_problem_oracle(IndexRange a, IndexRange b, IndexRange k, IndexRange m,
                                           FibIndex n_hi);

/// Recomputes both sides from scratch.
bool verify_solution(const Solution& s);

}  // namespace fibcert
