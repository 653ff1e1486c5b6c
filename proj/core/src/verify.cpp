#include <algorithm>
#include <atomic>
#include <thread>

#include "fibcert/errors.hpp"
#include "fibcert/pipeline.hpp"

namespace fibcert {

namespace {

class Checker {
 public:
  void claim(bool ok, const std::string& what) {
    ++count_;
    if (!ok) throw VerificationFailed(what);
  }
  [[nodiscard]] std::size_t count() const { return count_; }
  void add(std::size_t n) { count_ += n; }

 private:
  std::size_t count_ = 0;
};

// Re-checks every table row; returns the first failure in l order.
std::string check_rows(const RoundResult& r, unsigned jobs) {
  std::vector<std::string> failures(r.table.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < r.table.size(); i = next++) {
      const ReductionOutcome& o = r.table[i];
      try {
        failures[i] = o.certified ? check_outcome(fibonacci_instance(o.l, r.M), o)
                                  : "l=" + std::to_string(o.l) + ": row not certified";
      } catch (const Error& e) {
        failures[i] = "l=" + std::to_string(o.l) + ": " + e.what();
      }
    }
  };
  const unsigned n = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(r.table.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < n; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const std::string& f : failures) {
    if (!f.empty()) return f;
  }
  return {};
}

void check_analytic(Checker& c, const StageRecord& s, const Precision& prec) {
  c.claim(s.analytic.has_value(), "analytic: missing payload");
  const AnalyticResult& a = *s.analytic;
  const BoundState& b = s.bounds;
  const MatveevConstants constants = matveev_constants(prec);  // throws if 1.61e12 is not an upper bound
  c.claim(true, "analytic: m coefficient below 1.61e12");
  c.claim(certainly_less(n_bound_ratio(a.n_solver, prec), Rational(1)), "analytic: f(N) < 1 not certified");
  c.claim(b.n_max >= a.n_solver - 1, "analytic: n_max below N - 1");
  const BallReal m_bound = derive_m_bound(BallReal::exact(b.n_max, prec), prec);
  c.claim(b.m_max >= ceil(m_bound.upper()) - 1, "analytic: m_max below 1.61e12 (1 + log n_max)");
  const auto [l, k] = lk_bounds_from_n(b.n_max, prec);
  c.claim(b.l_max >= l && b.k_max >= k, "analytic: l/k thresholds below those implied by n_max");
  c.claim(!certainly_less(constants.m_coefficient_bound, constants.m_coefficient_displayed),
          "analytic: recorded coefficient bound");
}

void check_round(Checker& c, const StageRecord& s, const BoundState& prev, const Precision& prec, unsigned jobs) {
  const std::string tag = to_string(s.stage) + ": ";
  c.claim(s.round.has_value(), tag + "missing round payload");
  const RoundResult& r = *s.round;
  const BoundState& b = s.bounds;

  c.claim(prev.dominates(b), tag + "bounds grew");
  if (s.stage == Stage::Reduced2) {
    const auto [l, k] = lk_bounds_from_n(prev.n_max, prec);
    c.claim(b.l_max >= std::min(prev.l_max, l) && b.k_max >= std::min(prev.k_max, k),
            tag + "l/k thresholds below those implied by the previous n_max");
  } else {
    c.claim(b.l_max == prev.l_max && b.k_max == prev.k_max, tag + "l/k changed without re-derivation");
  }
  c.claim(r.M == BigInt(b.k_max) + prev.m_max, tag + "M is not k_max + previous m_max");
  c.claim(r.l_lo == BoundState::kLMin && r.l_hi == b.l_max, tag + "l range does not cover [3, l_max]");
  c.claim(r.table.size() == r.l_hi - r.l_lo + 1, tag + "table size");
  for (std::size_t i = 0; i < r.table.size(); ++i) {
    c.claim(r.table[i].l == r.l_lo + i, tag + "table rows out of order");
  }
  const std::string row_failure = check_rows(r, jobs);
  c.claim(row_failure.empty(), tag + row_failure);
  c.add(r.table.size());

  const RoundResult again = aggregate_round(fibonacci_instance(r.l_lo, r.M), r.table, prec);
  c.claim(again.q_max == r.q_max && again.l_at_q_max == r.l_at_q_max, tag + "max q");
  c.claim(again.epsilon_min == r.epsilon_min && again.l_at_epsilon_min == r.l_at_epsilon_min, tag + "min epsilon");
  c.claim(again.omega_aggregate <= r.omega_aggregate, tag + "omega bound below recomputed value");
  c.claim(again.omega_per_l_max == r.omega_per_l_max, tag + "per-l omega maximum");
  c.claim(r.m_max >= 1 + floor(r.omega_aggregate) && b.m_max >= r.m_max, tag + "m_max below 1 + floor(omega)");
  c.claim(b.n_max >= std::min(prev.n_max, n_from_size_bounds(b.k_max, b.m_max, b.l_max)),
          tag + "n_max below 2 + (k+m)(l-1)");
}

void check_search(Checker& c, const ProofReport& report, const StageRecord& s, const BoundState& prev,
                  unsigned jobs) {
  c.claim(s.search.has_value(), "searched: missing payload");
  const SearchSummary& x = *s.search;
  c.claim(s.bounds.n_max == prev.n_max && s.bounds.l_max == prev.l_max && s.bounds.k_max == prev.k_max &&
              s.bounds.m_max == prev.m_max,
          "searched: bounds differ from the last reduction");
  c.claim(x.box == final_box(prev), "searched: box does not match the final bounds");
  c.claim(search_box(x.box, {.prefilter = true, .jobs = jobs}) == x.box_solutions, "searched: box solutions");
  c.claim(x.m1_box == m1_box() && search_m1_case() == x.m1_solutions, "searched: m = 1 solutions");

  std::vector<Solution> verdict;
  for (const auto* list : {&x.box_solutions, &x.m1_solutions}) {
    for (const Solution& sol : *list) {
      c.claim(verify_solution(sol), "searched: " + to_string(sol) + " does not satisfy the equation");
      if (sol.k >= BoundState::kKMin) verdict.push_back(sol);
    }
  }
  std::sort(verdict.begin(), verdict.end());
  verdict.erase(std::unique(verdict.begin(), verdict.end()), verdict.end());
  c.claim(verdict == report.verdict, "verdict is not the k >= 3 part of the solutions");
}

}  // namespace

VerifyResult verify_report(const ProofReport& report, unsigned jobs) {
  VerifyResult result;
  Checker c;
  try {
    c.claim(report.version == kReportVersion, "unsupported version");
    c.claim(report.input_checksum == settings_checksum(report.settings), "input checksum");
    const Stage order[] = {Stage::Analytic, Stage::Reduced1, Stage::Reduced2, Stage::Searched};
    c.claim(report.stages.size() == 4, "report must contain four stages");
    for (std::size_t i = 0; i < 4; ++i) {
      c.claim(report.stages[i].stage == order[i], "stage " + std::to_string(i) + " out of order");
      c.claim(report.stages[i].certified, to_string(order[i]) + ": stage not certified");
    }
    const Precision prec = report.settings.precision();
    check_analytic(c, report.stages[0], prec);
    check_round(c, report.stages[1], report.stages[0].bounds, prec, jobs);
    check_round(c, report.stages[2], report.stages[1].bounds, prec, jobs);
    check_search(c, report, report.stages[3], report.stages[2].bounds, jobs);
    result.ok = true;
  } catch (const VerificationFailed& e) {
    result.failure = e.what();
  } catch (const Error& e) {
    result.failure = std::string("re-computation failed: ") + e.what();
  }
  result.claims_checked = c.count();
  return result;
}

}  // namespace fibcert
