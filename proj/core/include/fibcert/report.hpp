#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fibcert/matveev.hpp"
#include "fibcert/precision.hpp"
#include "fibcert/reduction.hpp"
#include "fibcert/search.hpp"

namespace fibcert {

inline constexpr int kReportVersion = 1;

/// Inputs that determine a proof run. Everything here is serialized.
struct RunSettings {
  std::uint32_t digits = kDefaultPrecision.digits;
  std::uint32_t max_digits = kDefaultPrecision.max_digits;
  unsigned sig_digits = 3;

  [[nodiscard]] Precision precision() const { return Precision{digits, max_digits}; }
  friend bool operator==(const RunSettings&, const RunSettings&) = default;
};

struct SearchSummary {
  SearchBox box;
  std::vector<Solution> box_solutions;
  SearchStats stats;
  SearchBox m1_box;
  std::vector<Solution> m1_solutions;
};

struct StageRecord {
  Stage stage = Stage::Analytic;
  BoundState bounds;
  bool certified = false;
  double wall_time_ms = 0;
  std::optional<AnalyticResult> analytic;  // analytic stage
  std::optional<RoundResult> round;        // reduced-1, reduced-2
  std::optional<SearchSummary> search;     // searched
};

/// A published value next to the computed one.
struct ReferenceMatch {
  std::string claim;
  std::string relation;  // "==", "<=", ">=", "<"
  std::string published;
  std::string computed;
  bool match = false;
};

/// Why a run stopped early.
struct AbortInfo {
  Stage stage = Stage::Analytic;
  bool precision_exhausted = false;
  std::string message;
};

struct ProofReport {
  int version = kReportVersion;
  RunSettings settings;
  std::string input_checksum;
  std::vector<StageRecord> stages;
  std::vector<Solution> verdict;
  std::vector<ReferenceMatch> reference_matches;
  /// Set when a stage failed; the report then ends with that stage, not certified.
  std::optional<AbortInfo> abort;

  [[nodiscard]] const StageRecord* find(Stage stage) const;
};

/// SHA-256 of the canonical encoding of the settings.
std::string settings_checksum(const RunSettings& settings);

/// JSON with big numbers as decimal strings. indent < 0 gives one line.
std::string to_json(const ProofReport& report, int indent = 2);

std::string to_json(const AnalyticResult& analytic, int indent = 2);
std::string to_json(const RoundResult& round, int indent = 2);
std::string to_json(const ReductionOutcome& outcome, int indent = 2);
std::string to_json(const std::vector<Solution>& solutions, int indent = 2);

/// to_json with every wall_time_ms set to 0, for run-to-run comparison.
std::string canonical_json(const ProofReport& report);

/// Throws ParseError on malformed input.
ProofReport parse_report(std::string_view json_text);

/// Human-readable summary.
std::string to_text(const ProofReport& report);

std::string to_string(const Solution& s);
std::string to_string(const SearchBox& box);

/// Parses "n_lo:n_hi,l_lo:l_hi,k_lo:k_hi,m_lo:m_hi". Throws ParseError.
SearchBox parse_box(std::string_view text);

}  // namespace fibcert
