// Acceptance suite. Prints one PASS/FAIL line per criterion.
//
//   acceptance                 run every criterion
//   acceptance --criterion N   run only criterion N

#include <CLI11.hpp>

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "acceptance_paths.hpp"
#include "fibcert/matveev.hpp"
#include "fibcert/pipeline.hpp"
#include "fibcert/reduction.hpp"
#include "fibcert/report.hpp"
#include "fibcert/search.hpp"

using namespace fibcert;

namespace {

using Clock = std::chrono::steady_clock;

/// Collects named sub-checks of one criterion.
class Verdict {
 public:
  void check(bool ok, const std::string& what) {
    if (!ok) failed_ = true;
    notes_.push_back((ok ? "" : "!") + what);
  }
  [[nodiscard]] bool ok() const { return !failed_; }
  [[nodiscard]] std::string notes() const {
    std::string out;
    for (const std::string& n : notes_) out += (out.empty() ? "" : "; ") + n;
    return out;
  }

 private:
  bool failed_ = false;
  std::vector<std::string> notes_;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fixed(double x, int decimals = 2) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(decimals);
  os << x;
  return os.str();
}

void runtime_check(Verdict& v, Clock::time_point start, double limit_s) {
  const double s = seconds_since(start);
  v.check(s < limit_s, "runtime " + fixed(s) + "s < " + fixed(limit_s, 0) + "s");
}

std::string dec(const Rational& x, int sig = 12) { return to_scientific(x, sig, Rounding::Nearest); }

/// Exit status of a shell command; output goes to `log` when non-null.
int run(const std::string& command, std::string* log = nullptr) {
  FILE* pipe = popen((command + " 2>&1").c_str(), "r");
  if (pipe == nullptr) return -1;
  std::string out;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) out += buf;
  const int status = pclose(pipe);
  if (log != nullptr) *log = std::move(out);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RoundResult round_with(const BigInt& M, std::uint32_t l_hi) {
  RoundHooks hooks;
  hooks.jobs = std::max(1U, std::thread::hardware_concurrency());
  return reduce_round([&](std::uint32_t l) { return fibonacci_instance(l, M); }, 3, l_hi, {}, hooks);
}

std::uint32_t index_at(const RoundResult& r, std::uint32_t l) {
  for (const ReductionOutcome& o : r.table)
    if (o.l == l) return static_cast<std::uint32_t>(o.convergent.index);
  return 0;
}

Verdict criterion_1() {
  Verdict v;
  const auto start = Clock::now();
  const AnalyticResult a = analytic_stage();
  const BoundState& b = a.bounds;
  v.check(b.n_max >= pow10(33) && b.n_max <= BigInt(464) * pow10(32),
          "n_max " + to_scientific(Rational(b.n_max), 4, Rounding::Up) + " in [1e33, 4.64e34]");
  v.check(b.m_max <= BigInt(131) * pow10(12), "m_max " + to_scientific(Rational(b.m_max), 4, Rounding::Up) + " <= 1.31e14");
  v.check(b.l_max == 157, "l_max " + std::to_string(b.l_max) + " == 157");
  v.check(b.k_max == 167, "k_max " + std::to_string(b.k_max) + " == 167");
  runtime_check(v, start, 1);
  return v;
}

Verdict criterion_2() {
  Verdict v;
  const auto start = Clock::now();
  const BigInt M("131000000000167");
  const RoundResult r = round_with(M, 157);
  const BigInt published_q("25431328747122828658870707509980696460342");
  v.check(r.q_max == published_q, "max q " + to_decimal(r.q_max) + " at l=" + std::to_string(r.l_at_q_max) +
                                      " index " + std::to_string(index_at(r, r.l_at_q_max)));
  v.check(r.epsilon_min >= parse_rational("1.5e-28"),
          "min eps " + dec(r.epsilon_min) + " at l=" + std::to_string(r.l_at_epsilon_min) + " >= 1.5e-28");
  v.check(r.m_max == 227, "m_max " + to_decimal(r.m_max) + " == 227");
  v.check(r.omega_aggregate >= parse_rational("225.6") && r.omega_aggregate <= parse_rational("226.1"),
          "omega " + to_decimal(r.omega_aggregate) + " in [225.6, 226.1] (per-l max " +
              to_decimal(r.omega_per_l_max) + ")");
  const BigInt n = n_from_size_bounds(167, r.m_max, 157);
  v.check(n == 61466, "n_max " + to_decimal(n) + " == 61466");
  runtime_check(v, start, 300);
  return v;
}

Verdict criterion_3() {
  Verdict v;
  const auto [l, k] = lk_bounds_from_n(BigInt(61466));
  v.check(l == 18, "l_max " + std::to_string(l) + " == 18");
  v.check(k == 24, "k_max " + std::to_string(k) + " == 24");
  return v;
}

Verdict criterion_4() {
  Verdict v;
  const auto start = Clock::now();
  const RoundResult r = round_with(BigInt(251), 18);
  std::string q16 = "missing";
  for (const ReductionOutcome& o : r.table)
    if (o.l == 16) q16 = to_decimal(o.convergent.q);
  v.check(q16 == "61976", "q(16) " + q16 + " == 61976");
  const Rational published = parse_rational("0.001274174011265825");
  const Rational rel = (r.epsilon_min - published) / published;
  v.check(r.epsilon_min >= published && rel <= Rational(1, 1000000),
          "min eps " + dec(r.epsilon_min, 22) + " at l=" + std::to_string(r.l_at_epsilon_min) +
              ", relative excess " + to_scientific(rel, 3, Rounding::Up) + " <= 1e-6");
  v.check(r.m_max == 27, "m_max " + to_decimal(r.m_max) + " == 27");
  v.check(r.omega_aggregate >= 26 && r.omega_aggregate <= parse_rational("26.7"),
          "omega " + to_decimal(r.omega_aggregate) + " in [26.0, 26.7]");
  const BigInt n = n_from_size_bounds(24, r.m_max, 18);
  v.check(n == 869, "n_max " + to_decimal(n) + " == 869");
  runtime_check(v, start, 10);
  return v;
}

std::string solutions_text(const std::vector<Solution>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + to_string(s[i]);
  return out + "}";
}

Verdict criterion_5() {
  Verdict v;
  const auto start = Clock::now();
  SearchOptions opts;
  opts.jobs = std::max(1U, std::thread::hardware_concurrency());
  const SearchBox box{{9, 869}, {3, 18}, {3, 24}, {2, 27}};
  const std::vector<Solution> in_box = search_box(box, opts);
  v.check(in_box.empty(), "box " + to_string(box) + " -> " + solutions_text(in_box));
  const std::vector<Solution> m1 = search_box({{1, 12}, {3, 12}, {1, 12}, {1, 1}}, opts);
  const std::vector<Solution> m1_expected{{3, 3, 1, 1}, {6, 3, 3, 1}};
  v.check(m1 == m1_expected, "m=1 -> " + solutions_text(m1));

  ProofConfig config;
  config.jobs = opts.jobs;
  const ProofReport report = run_proof(config);
  const std::vector<Solution> expected{{6, 3, 3, 1}};
  v.check(report.verdict == expected, "verdict " + solutions_text(report.verdict));
  runtime_check(v, start, 10);
  return v;
}

Verdict criterion_6() {
  Verdict v;
  for (const auto& [name, path] : acceptance_paths::kPropertySuites) {
    const auto start = Clock::now();
    const int status = run(std::string("\"") + path + "\"");
    v.check(status == 0, std::string(name) + (status == 0 ? " ok " : " failed ") + fixed(seconds_since(start)) + "s");
  }
  return v;
}

Verdict criterion_7() {
  Verdict v;
  std::string log;
  const int status = run(std::string("\"") + acceptance_paths::kContainmentSuite +
                         "\" --test-case='random operation chains*'", &log);
  const std::regex summary(R"(assertions:\s*(\d+)\s*\|\s*(\d+) passed\s*\|\s*(\d+) failed)");
  std::smatch m;
  const bool parsed = std::regex_search(log, m, summary);
  v.check(status == 0 && parsed && m[3] == "0",
          parsed ? std::string(m[2]) + " checks over 1000 chains, " + std::string(m[3]) + " violations" : "no summary");
  return v;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Verdict criterion_8() {
  Verdict v;
  if (std::string(acceptance_paths::kCli).empty()) {
    v.check(false, "command-line tool not built");
    return v;
  }
  const std::filesystem::path dir = std::filesystem::temp_directory_path();
  std::string texts[2];
  for (int i = 0; i < 2; ++i) {
    const std::filesystem::path out = dir / ("fibcert_acceptance_" + std::to_string(i) + ".json");
    const int status =
        run(std::string("\"") + acceptance_paths::kCli + "\" -q --output json --out \"" + out.string() + "\" prove");
    v.check(status == 0, "run " + std::to_string(i + 1) + " exit " + std::to_string(status));
    texts[i] = read_file(out);
    std::filesystem::remove(out);
  }
  const std::regex timing(R"("wall_time_ms":\s*[-+0-9.eE]+)");
  const std::string a = std::regex_replace(texts[0], timing, "\"wall_time_ms\": 0");
  const std::string b = std::regex_replace(texts[1], timing, "\"wall_time_ms\": 0");
  v.check(!a.empty() && a == b, std::to_string(a.size()) + " bytes, identical modulo timing");
  try {
    v.check(canonical_json(parse_report(texts[0])) == canonical_json(parse_report(texts[1])), "canonical forms equal");
  } catch (const std::exception& e) {
    v.check(false, std::string("parse: ") + e.what());
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"analytic stage bounds", criterion_1},
      {"first reduction round", criterion_2},
      {"thresholds from n = 61466", criterion_3},
      {"second reduction round", criterion_4},
      {"final search and verdict", criterion_5},
      {"property suites", criterion_6},
      {"ball containment", criterion_7},
      {"determinism of prove", criterion_8},
  };

  bool all_ok = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.check(false, std::string("exception: ") + e.what());
    }
    all_ok = all_ok && v.ok();
    std::cout << "criterion " << i + 1 << " " << (v.ok() ? "PASS" : "FAIL") << " " << criteria[i].first << ": "
              << v.notes() << std::endl;
  }
  return all_ok ? 0 : 1;
}
