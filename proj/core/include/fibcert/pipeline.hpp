#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "fibcert/report.hpp"

namespace fibcert {

/// Resumable store of reduction outcomes keyed by (M, starting digits, l).
/// Entries are re-verified with check_outcome before they are reused.
class ReductionCache {
 public:
  /// Loads `path` if it exists. A malformed file is ignored and overwritten.
  explicit ReductionCache(std::string path);

  std::optional<ReductionOutcome> lookup(const BigInt& M, std::uint32_t digits, std::uint32_t l) const;
  void store(const BigInt& M, std::uint32_t digits, const ReductionOutcome& outcome);
  [[nodiscard]] std::size_t size() const;

 private:
  void flush_locked() const;

  std::string path_;
  mutable std::mutex mutex_;
  struct Entry;
  std::vector<std::shared_ptr<Entry>> entries_;
};

struct ProofConfig {
  RunSettings settings;
  unsigned jobs = 1;
  /// Empty: no cache.
  std::string cache_path;
  /// Called after each l of a reduction round.
  std::function<void(Stage, const ReductionOutcome&)> on_outcome;
  /// Called after each finished stage.
  std::function<void(const StageRecord&)> on_stage;
};

/// Reduction round over l in [3, bounds.l_max] with M = k_max + m_max.
RoundResult run_reduction_round(const BoundState& bounds, const ProofConfig& config, Stage stage,
                                ReductionCache* cache = nullptr);

/// Bounds after a reduction round: m from the round, n from the size bounds;
/// l and k are carried over.
BoundState bounds_after_round(const BoundState& previous, const RoundResult& round, Stage stage);

/// l and k thresholds recomputed from the current n bound.
BoundState tighten_lk(const BoundState& bounds, const Precision& prec);

/// [9, n_max] x [3, l_max] x [3, k_max] x [2, m_max].
SearchBox final_box(const BoundState& bounds);

/// Analytic stage, two reduction rounds, final box search and the m = 1 case.
/// A stage that fails (for instance with PrecisionExhausted) ends the run: the
/// report then carries `abort`, the failing stage uncertified and no verdict.
ProofReport run_proof(const ProofConfig& config);

/// Compares the computed values with the published ones.
std::vector<ReferenceMatch> reference_matches(const ProofReport& report);

/// The verdict every complete run must reach.
std::vector<Solution> expected_verdict();

struct VerifyResult {
  bool ok = false;
  std::size_t claims_checked = 0;
  /// First failing claim when !ok.
  std::string failure;
};

/// Re-checks every claim of a report from scratch.
VerifyResult verify_report(const ProofReport& report, unsigned jobs = 1);

/// Parses then verifies. Throws ParseError on malformed input.
VerifyResult verify_report_json(std::string_view json_text, unsigned jobs = 1);

}  // namespace fibcert
