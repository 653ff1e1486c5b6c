// fibcert: command-line front end for the certified pipeline.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "fibcert/errors.hpp"
#include "fibcert/pipeline.hpp"

namespace {

using namespace fibcert;
using Json = nlohmann::ordered_json;

enum Exit { kOk = 0, kFailed = 1, kExhausted = 2 };

struct Globals {
  std::uint32_t digits = kDefaultPrecision.digits;
  std::uint32_t max_digits = kDefaultPrecision.max_digits;
  unsigned jobs = std::max(1U, std::thread::hardware_concurrency());
  std::string output = "text";
  std::string out_path;
  bool quiet = false;

  [[nodiscard]] Precision precision() const { return Precision{digits, max_digits}; }
  [[nodiscard]] bool json() const { return output == "json"; }
};

void emit(const Globals& g, const std::string& text) {
  if (g.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(g.out_path, std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + g.out_path);
}

IndexRange parse_range(const std::string& text) {
  const SearchBox b = parse_box(text + ",1:1,1:1,1:1");
  return b.n;
}

std::string row_text(const ReductionOutcome& o) {
  std::ostringstream s;
  s << "l=" << o.l << " q_" << o.convergent.index << "=" << to_decimal(o.convergent.q)
    << " eps>=" << to_scientific(o.epsilon_lower, 12, Rounding::Down) << " omega<=" << to_decimal(o.omega_bound)
    << " digits=" << o.digits;
  if (o.skipped) s << " skipped=" << o.skipped;
  return s.str();
}

std::string bounds_text(const BoundState& b) {
  return "n<=" + to_decimal(b.n_max) + " l<=" + std::to_string(b.l_max) + " k<=" + std::to_string(b.k_max) +
         " m<=" + to_decimal(b.m_max);
}

std::string solutions_text(const std::vector<Solution>& v) {
  std::string out;
  for (const Solution& s : v) out += to_string(s) + "\n";
  return out.empty() ? "no solutions\n" : out;
}

ProofConfig proof_config(const Globals& g, unsigned sig_digits, const std::string& cache) {
  ProofConfig c;
  c.settings.digits = g.digits;
  c.settings.max_digits = g.max_digits;
  c.settings.sig_digits = sig_digits;
  c.jobs = g.jobs;
  c.cache_path = cache;
  if (!g.quiet) {
    c.on_outcome = [](Stage stage, const ReductionOutcome& o) {
      std::cerr << to_string(stage) << " " << row_text(o) << "\n";
    };
    c.on_stage = [](const StageRecord& s) {
      std::cerr << "[" << to_string(s.stage) << "] " << bounds_text(s.bounds) << " (" << s.wall_time_ms << " ms)\n";
    };
  }
  return c;
}

int cmd_prove(const Globals& g, unsigned sig_digits, const std::string& cache) {
  const ProofReport report = run_proof(proof_config(g, sig_digits, cache));
  emit(g, g.json() ? to_json(report) : to_text(report));
  if (report.abort) return report.abort->precision_exhausted ? kExhausted : kFailed;
  return report.verdict == expected_verdict() ? kOk : kFailed;
}

int cmd_bounds(const Globals& g, unsigned sig_digits) {
  const AnalyticResult a = analytic_stage(g.precision(), sig_digits);
  if (g.json()) {
    emit(g, to_json(a));
  } else {
    emit(g, bounds_text(a.bounds) + "\nN=" + to_decimal(a.n_solver) + " m coefficient<=" +
                to_scientific(a.constants.m_coefficient_displayed.upper(), 7, Rounding::Up) + "\n");
  }
  return kOk;
}

int cmd_reduce(const Globals& g, int round, std::uint32_t only_l, const std::string& M_text, const std::string& n_text,
               unsigned sig_digits, const std::string& cache_path) {
  const Precision prec = g.precision();
  ProofConfig config = proof_config(g, sig_digits, cache_path);
  std::unique_ptr<ReductionCache> cache;
  if (!cache_path.empty()) cache = std::make_unique<ReductionCache>(cache_path);

  // Bounds entering the requested round.
  BoundState bounds = analytic_stage(prec, sig_digits).bounds;
  if (!n_text.empty()) {
    bounds.n_max = parse_bigint(n_text);
    bounds = tighten_lk(bounds, prec);
  } else if (round == 2) {
    const RoundResult first = run_reduction_round(bounds, config, Stage::Reduced1, cache.get());
    bounds = tighten_lk(bounds_after_round(bounds, first, Stage::Reduced1), prec);
  }
  if (!M_text.empty()) {
    const BigInt M = parse_bigint(M_text);
    if (M <= bounds.k_max) throw PreconditionViolated("--M must exceed k_max");
    bounds.m_max = M - bounds.k_max;
  }
  const BigInt M = BigInt(bounds.k_max) + bounds.m_max;

  if (only_l) {
    ReductionOptions opts;
    opts.prec = prec;
    const ReductionOutcome o = reduce_one(fibonacci_instance(only_l, M), only_l, opts);
    emit(g, g.json() ? to_json(o) : row_text(o) + "\n");
    return kOk;
  }
  const Stage stage = round == 1 ? Stage::Reduced1 : Stage::Reduced2;
  const RoundResult r = run_reduction_round(bounds, config, stage, cache.get());
  if (g.json()) {
    emit(g, to_json(r));
    return kOk;
  }
  const BoundState after = bounds_after_round(bounds, r, stage);
  std::ostringstream s;
  s << "M=" << to_decimal(r.M) << " l=" << r.l_lo << ".." << r.l_hi << "\n";
  for (const ReductionOutcome& o : r.table) s << "  " << row_text(o) << "\n";
  s << "max q=" << to_decimal(r.q_max) << " (l=" << r.l_at_q_max << ")\n"
    << "min eps=" << to_scientific(r.epsilon_min, 22, Rounding::Down) << " (l=" << r.l_at_epsilon_min << ")\n"
    << "omega<=" << to_decimal(r.omega_aggregate) << " (per-l max " << to_decimal(r.omega_per_l_max) << ")\n"
    << bounds_text(after) << "\n";
  emit(g, s.str());
  return kOk;
}

int cmd_search(const Globals& g, const std::string& box_text, bool no_prefilter) {
  SearchStats stats;
  const std::vector<Solution> found =
      search_box(parse_box(box_text), {.prefilter = !no_prefilter, .jobs = g.jobs}, &stats);
  emit(g, g.json() ? to_json(found) : solutions_text(found));
  return kOk;
}

int cmd_oracle(const Globals& g, const std::string& a, const std::string& b, const std::string& k,
               const std::string& m, std::uint32_t n_hi) {
  const auto hits = open_problem_oracle(parse_range(a), parse_range(b), parse_range(k), parse_range(m), n_hi);
  if (g.json()) {
    Json out = Json::array();
    for (const OracleHit& h : hits) out.push_back({{"n", h.n}, {"a", h.a}, {"k", h.k}, {"b", h.b}, {"m", h.m}});
    emit(g, out.dump(2) + "\n");
    return kOk;
  }
  std::ostringstream s;
  for (const OracleHit& h : hits) {
    s << "F_" << h.n << " = " << h.a << "^" << h.k << " (" << h.b << "^" << h.m << " - 1)\n";
  }
  emit(g, hits.empty() ? "no hits\n" : s.str());
  return kOk;
}

int cmd_fib(const Globals& g, std::uint32_t n) {
  const std::string value = to_decimal(fib(n));
  emit(g, g.json() ? Json{{"n", n}, {"F_n", value}}.dump(2) + "\n" : value + "\n");
  return kOk;
}

int cmd_verify(const Globals& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const VerifyResult r = verify_report_json(buf.str(), g.jobs);
  if (g.json()) {
    emit(g, Json{{"ok", r.ok}, {"claims_checked", r.claims_checked}, {"failure", r.failure}}.dump(2) + "\n");
  } else {
    emit(g, r.ok ? "verified " + std::to_string(r.claims_checked) + " claims\n"
                 : "FAILED after " + std::to_string(r.claims_checked) + " claims: " + r.failure + "\n");
  }
  return r.ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified solver for F_n = F_l^k (F_l^m - 1)"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--precision", g.digits, "Working precision in decimal digits")->check(CLI::Range(20U, 100000U));
  app.add_option("--max-precision", g.max_digits, "Escalation ceiling in decimal digits");
  app.add_option("--jobs,-j", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--output", g.output, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--out", g.out_path, "Write output to a file instead of stdout");
  app.add_flag("--quiet,-q", g.quiet, "No progress on stderr");

  unsigned sig_digits = 3;
  std::string cache;
  auto* prove = app.add_subcommand("prove", "Run the whole pipeline and print the report");
  prove->add_option("--sig-digits", sig_digits, "Significant digits of published analytic bounds (0 = exact)");
  prove->add_option("--cache", cache, "Resumable per-l reduction cache file");

  auto* bounds = app.add_subcommand("bounds", "Analytic stage only");
  bounds->add_option("--sig-digits", sig_digits, "Significant digits of published bounds (0 = exact)");

  int round = 1;
  std::uint32_t only_l = 0;
  std::string M_text, n_text;
  auto* reduce = app.add_subcommand("reduce", "One reduction round");
  reduce->add_option("--round", round, "Round number")->required()->check(CLI::IsMember({1, 2}));
  reduce->add_option("--l", only_l, "Reduce a single l")->check(CLI::Range(3U, 100000U));
  reduce->add_option("--M", M_text, "Override M");
  reduce->add_option("--n", n_text, "Derive the l range from this n bound");
  reduce->add_option("--cache", cache, "Resumable per-l reduction cache file");

  std::string box_text;
  bool no_prefilter = false;
  auto* search = app.add_subcommand("search", "Exhaustive search over a box");
  search->add_option("--box", box_text, "n_lo:n_hi,l_lo:l_hi,k_lo:k_hi,m_lo:m_hi")->required();
  search->add_flag("--no-prefilter", no_prefilter, "Evaluate every tuple");

  std::string a_range = "2:20", b_range = "2:20", k_range = "1:20", m_range = "1:20";
  std::uint32_t oracle_n = 500;
  auto* oracle = app.add_subcommand("oracle", "Search F_n = a^k (b^m - 1)");
  oracle->add_option("--a", a_range, "a range lo:hi");
  oracle->add_option("--b", b_range, "b range lo:hi");
  oracle->add_option("--k", k_range, "k range lo:hi");
  oracle->add_option("--m", m_range, "m range lo:hi");
  oracle->add_option("--n-max", oracle_n, "Largest Fibonacci index");

  std::uint32_t fib_n = 0;
  auto* fibc = app.add_subcommand("fib", "Print F_n");
  fibc->add_option("--n", fib_n, "Index")->required();

  std::string report_path;
  auto* verify = app.add_subcommand("verify", "Re-check a saved report");
  verify->add_option("report", report_path, "Report JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*prove) return cmd_prove(g, sig_digits, cache);
    if (*bounds) return cmd_bounds(g, sig_digits);
    if (*reduce) return cmd_reduce(g, round, only_l, M_text, n_text, sig_digits, cache);
    if (*search) return cmd_search(g, box_text, no_prefilter);
    if (*oracle) return cmd_oracle(g, a_range, b_range, k_range, m_range, oracle_n);
    if (*fibc) return cmd_fib(g, fib_n);
    if (*verify) return cmd_verify(g, report_path);
  } catch (const PrecisionExhausted& e) {
    std::cerr << "precision exhausted: " << e.what() << "\n";
    return kExhausted;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kFailed;
}
