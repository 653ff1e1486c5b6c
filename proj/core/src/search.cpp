#include "fibcert/search.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "fibcert/errors.hpp"

namespace fibcert {

namespace {

const std::vector<FibIndex> kNoIndices;

void append_hits(const FibTable& table, const BigInt& value, const IndexRange& n_range, std::uint32_t l,
                 std::uint32_t k, std::uint32_t m, std::vector<Solution>& out) {
  for (FibIndex n : table.lookup(value)) {
    if (n < n_range.lo || n > n_range.hi) continue;
    Solution s{n, l, k, m};
    if (!verify_solution(s)) throw std::logic_error("table hit failed exact re-verification");
    out.push_back(s);
  }
}

// One l-slice of the box.
void search_slice(const FibTable& table, const SearchBox& box, std::uint32_t l, const SearchOptions& opts,
                  std::vector<Solution>& out, SearchStats& stats) {
  const BigInt fl = fib(l);
  const bool grows = fl >= 2;  // v increases with k and m
  BigInt fl_k = pow(fl, box.k.lo);
  for (std::uint32_t k = box.k.lo; k <= box.k.hi; ++k, fl_k *= fl) {
    BigInt fl_m = pow(fl, box.m.lo);
    bool first_m = true;
    for (std::uint32_t m = box.m.lo; m <= box.m.hi; ++m, fl_m *= fl) {
      if (opts.prefilter) {
        const IndexRange w = size_window(l, k, m);
        if (std::max(w.lo, box.n.lo) > std::min(w.hi, box.n.hi)) {
          ++stats.prefiltered;
          first_m = false;
          continue;
        }
      }
      const BigInt value = fl_k * (fl_m - 1);
      ++stats.evaluated;
      if (grows && value > table.max_value()) {
        if (first_m) return;  // larger k only makes it bigger
        break;
      }
      first_m = false;
      append_hits(table, value, box.n, l, k, m, out);
    }
  }
}

}  // namespace

FibTable::FibTable(FibIndex n_hi) : n_hi_(n_hi) {
  if (n_hi < 1) throw PreconditionViolated("fib table needs n_hi >= 1");
  BigInt a = 0;
  BigInt b = 1;
  for (FibIndex n = 1; n <= n_hi; ++n) {
    BigInt c = a + b;
    a = std::move(b);
    b = std::move(c);
    index_[a].push_back(n);  // a == F_n
    ++entries_;
  }
  max_value_ = a;
}

const std::vector<FibIndex>& FibTable::lookup(const BigInt& value) const {
  auto it = index_.find(value);
  return it == index_.end() ? kNoIndices : it->second;
}

FibTable build_fib_table(FibIndex n_hi) { return FibTable(n_hi); }

IndexRange size_window(std::uint32_t l, std::uint32_t k, std::uint32_t m) {
  const std::uint64_t km = static_cast<std::uint64_t>(k) + m;
  const std::uint64_t hi = 2 + km * (l >= 1 ? l - 1 : 0);
  std::uint64_t lo = 1;
  // phi^(n-1) >= F_l^k (F_l^m - 1) >= phi^((l-2)(k+m) - 1) needs phi^((l-2)m) >= phi^2.
  if (l >= 2 && static_cast<std::uint64_t>(l - 2) * m >= 2) lo = std::max<std::uint64_t>(1, km * (l - 2));
  const auto clamp = [](std::uint64_t v) {
    return static_cast<std::uint32_t>(std::min<std::uint64_t>(v, UINT32_MAX));
  };
  return {clamp(lo), clamp(hi)};
}

std::vector<Solution> search_box(const SearchBox& box, const SearchOptions& opts, SearchStats* stats) {
  SearchStats local;
  std::vector<Solution> out;
  if (box.empty() || box.n.hi < 1) {
    if (stats) *stats = local;
    return out;
  }
  const FibTable table(box.n.hi);

  const std::uint32_t slices = box.l.hi - box.l.lo + 1;
  std::vector<std::vector<Solution>> found(slices);
  std::vector<SearchStats> slice_stats(slices);
  std::vector<std::exception_ptr> errors(slices);
  std::atomic<std::uint32_t> next{0};
  auto worker = [&] {
    for (std::uint32_t i = next++; i < slices; i = next++) {
      try {
        search_slice(table, box, box.l.lo + i, opts, found[i], slice_stats[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned jobs = std::max(1U, std::min(opts.jobs, slices));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (std::uint32_t i = 0; i < slices; ++i) {
    out.insert(out.end(), found[i].begin(), found[i].end());
    local.evaluated += slice_stats[i].evaluated;
    local.prefiltered += slice_stats[i].prefiltered;
  }
  std::sort(out.begin(), out.end());
  if (stats) *stats = local;
  return out;
}

SearchBox m1_box() { return {{1, 12}, {3, 12}, {1, 12}, {1, 1}}; }

std::vector<Solution> search_m1_case() { return search_box(m1_box()); }

std::vector<OracleHit> open_problem_oracle(IndexRange a, IndexRange b, IndexRange k, IndexRange m,
                                           FibIndex n_hi) {
  std::vector<OracleHit> out;
  if (a.empty() || b.empty() || k.empty() || m.empty()) return out;
  if (a.lo < 2 || b.lo < 2) throw PreconditionViolated("open_problem_oracle needs a, b >= 2");
  const FibTable table(n_hi);
  for (std::uint32_t av = a.lo; av <= a.hi; ++av) {
    for (std::uint32_t kv = k.lo; kv <= k.hi; ++kv) {
      const BigInt ak = pow(BigInt(av), kv);
      if (ak > table.max_value()) break;
      for (std::uint32_t bv = b.lo; bv <= b.hi; ++bv) {
        BigInt bm = pow(BigInt(bv), m.lo);
        bool first_m = true;
        for (std::uint32_t mv = m.lo; mv <= m.hi; ++mv, bm *= bv) {
          const BigInt value = ak * (bm - 1);
          if (value > table.max_value()) break;
          first_m = false;
          for (FibIndex n : table.lookup(value)) out.push_back({n, av, kv, bv, mv});
        }
        if (first_m) break;  // larger b only makes it bigger
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool verify_solution(const Solution& s) {
  const BigInt fl = fib(s.l);
  return fib(s.n) == pow(fl, s.k) * (pow(fl, s.m) - 1);
}

}  // namespace fibcert
