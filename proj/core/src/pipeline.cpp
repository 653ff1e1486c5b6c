#include "fibcert/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fibcert/errors.hpp"
#include "json_codec.hpp"

namespace fibcert {

using detail::Json;

// ---------------------------------------------------------------- cache

struct ReductionCache::Entry {
  std::string M;
  std::uint32_t digits = 0;
  std::uint32_t l = 0;
  Json outcome;
};

ReductionCache::ReductionCache(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;
  try {
    const Json j = Json::parse(in);
    for (const Json& e : j.at("entries")) {
      auto entry = std::make_shared<Entry>();
      entry->M = e.at("M").get<std::string>();
      entry->digits = e.at("digits").get<std::uint32_t>();
      entry->outcome = e.at("outcome");
      entry->l = entry->outcome.at("l").get<std::uint32_t>();
      entries_.push_back(std::move(entry));
    }
  } catch (const Json::exception&) {
    entries_.clear();
  }
}

std::optional<ReductionOutcome> ReductionCache::lookup(const BigInt& M, std::uint32_t digits,
                                                       std::uint32_t l) const {
  const std::string key = to_decimal(M);
  std::shared_ptr<Entry> hit;
  {
    std::lock_guard lock(mutex_);
    for (const auto& e : entries_) {
      if (e->M == key && e->digits == digits && e->l == l) hit = e;
    }
  }
  if (!hit) return std::nullopt;
  try {
    ReductionOutcome o = detail::decode_outcome(hit->outcome);
    const ReductionInstance inst = fibonacci_instance(l, M);
    if (!o.certified || !check_outcome(inst, o).empty()) return std::nullopt;
    // The stored ball was widened by decimal rounding; recompute it so a
    // resumed run reports exactly what a fresh one would.
    o.epsilon = epsilon(inst, o.convergent.q, Precision{o.digits, std::max(o.digits, kDefaultPrecision.max_digits)});
    return o;
  } catch (const Error&) {
    return std::nullopt;
  }
}

void ReductionCache::store(const BigInt& M, std::uint32_t digits, const ReductionOutcome& outcome) {
  auto entry = std::make_shared<Entry>();
  entry->M = to_decimal(M);
  entry->digits = digits;
  entry->l = outcome.l;
  entry->outcome = detail::encode(outcome);
  std::lock_guard lock(mutex_);
  std::erase_if(entries_, [&](const auto& e) { return e->M == entry->M && e->digits == digits && e->l == entry->l; });
  entries_.push_back(std::move(entry));
  flush_locked();
}

std::size_t ReductionCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

void ReductionCache::flush_locked() const {
  Json list = Json::array();
  for (const auto& e : entries_) list.push_back(Json{{"M", e->M}, {"digits", e->digits}, {"outcome", e->outcome}});
  const std::string tmp = path_ + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << Json{{"version", kReportVersion}, {"entries", std::move(list)}}.dump() << "\n";
    if (!out) throw std::runtime_error("cannot write cache file " + tmp);
  }
  std::filesystem::rename(tmp, path_);
}

// ---------------------------------------------------------------- stages

RoundResult run_reduction_round(const BoundState& bounds, const ProofConfig& config, Stage stage,
                                ReductionCache* cache) {
  const BigInt M = BigInt(bounds.k_max) + bounds.m_max;
  const Precision prec = config.settings.precision();
  ReductionOptions opts;
  opts.prec = prec;
  RoundHooks hooks;
  hooks.jobs = config.jobs;
  hooks.on_outcome = [&](const ReductionOutcome& o) {
    if (cache) cache->store(M, prec.digits, o);
    if (config.on_outcome) config.on_outcome(stage, o);
  };
  if (cache) hooks.lookup = [&](std::uint32_t l) { return cache->lookup(M, prec.digits, l); };
  return reduce_round([&](std::uint32_t l) { return fibonacci_instance(l, M); }, BoundState::kLMin, bounds.l_max,
                      opts, hooks);
}

BoundState bounds_after_round(const BoundState& previous, const RoundResult& round, Stage stage) {
  BoundState next = previous;
  next.stage = stage;
  next.m_max = std::max<BigInt>(BoundState::kMMin, std::min(previous.m_max, round.m_max));
  const BigInt n = n_from_size_bounds(next.k_max, next.m_max, next.l_max);
  next.n_max = std::max<BigInt>(BoundState::kNMin, std::min(previous.n_max, n));
  return next;
}

BoundState tighten_lk(const BoundState& bounds, const Precision& prec) {
  BoundState next = bounds;
  const auto [l, k] = lk_bounds_from_n(bounds.n_max, prec);
  next.l_max = std::min(bounds.l_max, l);
  next.k_max = std::min(bounds.k_max, k);
  return next;
}

SearchBox final_box(const BoundState& bounds) {
  const auto n_hi = static_cast<std::uint32_t>(bounds.n_max.get_ui());
  if (bounds.n_max > UINT32_MAX || bounds.m_max > UINT32_MAX) {
    throw PreconditionViolated("bounds too large for an exhaustive search");
  }
  return {{BoundState::kNMin, n_hi},
          {BoundState::kLMin, bounds.l_max},
          {BoundState::kKMin, bounds.k_max},
          {BoundState::kMMin, static_cast<std::uint32_t>(bounds.m_max.get_ui())}};
}

std::vector<Solution> expected_verdict() { return {{6, 3, 3, 1}}; }

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<Solution> filter_verdict(const SearchSummary& s) {
  std::vector<Solution> out;
  for (const auto* list : {&s.box_solutions, &s.m1_solutions}) {
    for (const Solution& x : *list) {
      if (x.k >= BoundState::kKMin && verify_solution(x)) out.push_back(x);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

ProofReport run_proof(const ProofConfig& config) {
  ProofReport report;
  report.settings = config.settings;
  report.input_checksum = settings_checksum(config.settings);
  const Precision prec = config.settings.precision();
  std::unique_ptr<ReductionCache> cache;
  if (!config.cache_path.empty()) cache = std::make_unique<ReductionCache>(config.cache_path);

  // Runs one stage; on failure records a non-certified stage and the reason.
  auto run_stage = [&](Stage stage, const BoundState& entering, auto&& body) {
    StageRecord s;
    s.stage = stage;
    s.bounds = entering;
    s.bounds.stage = stage;
    const auto start = Clock::now();
    try {
      body(s);
      s.certified = true;
    } catch (const PrecisionExhausted& e) {
      report.abort = AbortInfo{stage, true, e.what()};
    } catch (const Error& e) {
      report.abort = AbortInfo{stage, false, e.what()};
    }
    s.wall_time_ms = elapsed_ms(start);
    report.stages.push_back(std::move(s));
    if (config.on_stage) config.on_stage(report.stages.back());
    return !report.abort;
  };
  auto finish = [&] {
    report.reference_matches = reference_matches(report);
    return report;
  };

  const bool analytic_ok = run_stage(Stage::Analytic, BoundState{}, [&](StageRecord& s) {
    s.analytic = analytic_stage(prec, config.settings.sig_digits);
    s.bounds = s.analytic->bounds;
  });
  if (!analytic_ok) return finish();
  const BoundState b0 = report.stages.back().bounds;

  if (!run_stage(Stage::Reduced1, b0, [&](StageRecord& s) {
        s.round = run_reduction_round(b0, config, Stage::Reduced1, cache.get());
        s.bounds = bounds_after_round(b0, *s.round, Stage::Reduced1);
      })) {
    return finish();
  }
  const BoundState b1t = tighten_lk(report.stages.back().bounds, prec);

  if (!run_stage(Stage::Reduced2, b1t, [&](StageRecord& s) {
        s.round = run_reduction_round(b1t, config, Stage::Reduced2, cache.get());
        s.bounds = bounds_after_round(b1t, *s.round, Stage::Reduced2);
      })) {
    return finish();
  }
  const BoundState b2 = report.stages.back().bounds;

  std::vector<Solution> verdict;
  if (!run_stage(Stage::Searched, b2, [&](StageRecord& s) {
        SearchSummary x;
        x.box = final_box(b2);
        x.box_solutions = search_box(x.box, {.prefilter = true, .jobs = config.jobs}, &x.stats);
        x.m1_box = m1_box();
        x.m1_solutions = search_m1_case();
        verdict = filter_verdict(x);
        s.search = std::move(x);
      })) {
    return finish();
  }
  // Every stage certified: only now is the verdict released.
  report.verdict = std::move(verdict);
  return finish();
}

// ---------------------------------------------------------------- published values

namespace {

ReferenceMatch make_match(std::string claim, std::string relation, std::string published, std::string computed,
                          bool match) {
  return {std::move(claim), std::move(relation), std::move(published), std::move(computed), match};
}

ReferenceMatch compare(std::string claim, std::string relation, const std::string& published,
                       const Rational& computed, std::string shown) {
  const Rational p = parse_rational(published);
  bool ok = false;
  if (relation == "==") ok = computed == p;
  else if (relation == "<=") ok = computed <= p;
  else if (relation == ">=") ok = computed >= p;
  else if (relation == "<") ok = computed < p;
  else if (relation == ">") ok = computed > p;
  return make_match(std::move(claim), std::move(relation), published, std::move(shown), ok);
}

ReferenceMatch compare_int(std::string claim, std::string relation, const std::string& published,
                           const BigInt& computed) {
  return compare(std::move(claim), std::move(relation), published, Rational(computed), to_decimal(computed));
}

std::string location(std::uint32_t l, std::size_t index) {
  return "l=" + std::to_string(l) + " index=" + std::to_string(index);
}

std::size_t index_at(const RoundResult& r, std::uint32_t l) {
  for (const ReductionOutcome& o : r.table) {
    if (o.l == l) return o.convergent.index;
  }
  return 0;
}

std::string solutions_text(const std::vector<Solution>& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + to_string(v[i]);
  return out + "}";
}

void round_matches(std::vector<ReferenceMatch>& out, const std::string& tag, const RoundResult& r,
                   const BoundState& b, const std::string& M, const std::string& q_max, std::uint32_t q_l,
                   std::size_t q_index, const std::string& eps, const std::string& omega, const std::string& m_max,
                   const std::string& n_max) {
  out.push_back(compare_int(tag + " M", "==", M, r.M));
  out.push_back(compare_int(tag + " max q", "==", q_max, r.q_max));
  const std::string loc = location(r.l_at_q_max, index_at(r, r.l_at_q_max));
  const std::string published_loc = location(q_l, q_index);
  out.push_back(make_match(tag + " max q location", "==", published_loc, loc, loc == published_loc));
  out.push_back(compare(tag + " min epsilon", ">", eps, r.epsilon_min, to_scientific(r.epsilon_min, 22, Rounding::Down)));
  out.push_back(compare(tag + " omega bound", "<", omega, r.omega_aggregate, to_decimal(r.omega_aggregate)));
  out.push_back(compare_int(tag + " m_max", "==", m_max, b.m_max));
  out.push_back(compare_int(tag + " n_max", "==", n_max, b.n_max));
}

}  // namespace

std::vector<ReferenceMatch> reference_matches(const ProofReport& report) {
  std::vector<ReferenceMatch> out;
  if (const StageRecord* a = report.find(Stage::Analytic); a && a->analytic) {
    const BoundState& b = a->bounds;
    out.push_back(compare_int("analytic n_max", "<=", "4.64e34", b.n_max));
    out.push_back(compare_int("analytic m_max", "<=", "1.31e14", b.m_max));
    out.push_back(compare_int("analytic l_max", "==", "157", b.l_max));
    out.push_back(compare_int("analytic k_max", "==", "167", b.k_max));
    const Rational c = a->analytic->constants.m_coefficient_displayed.upper();
    out.push_back(compare("m coefficient", "<", "1.61e12", c, to_scientific(c, 7, Rounding::Up)));
  }
  if (const StageRecord* s = report.find(Stage::Reduced1); s && s->round) {
    round_matches(out, "reduced-1", *s->round, s->bounds, "131000000000167",
                  "25431328747122828658870707509980696460342", 154, 75, "1.5e-28", "226.1", "227", "61466");
  }
  if (const StageRecord* s = report.find(Stage::Reduced2); s && s->round) {
    out.push_back(compare_int("reduced-2 l_max", "==", "18", s->bounds.l_max));
    out.push_back(compare_int("reduced-2 k_max", "==", "24", s->bounds.k_max));
    round_matches(out, "reduced-2", *s->round, s->bounds, "251", "61976", 16, 6, "0.001274174011265825", "26.7",
                  "27", "869");
  }
  if (const StageRecord* s = report.find(Stage::Searched); s && s->search) {
    const std::string box = solutions_text(s->search->box_solutions);
    out.push_back(make_match("final box solutions", "==", "{}", box, s->search->box_solutions.empty()));
    const std::vector<Solution> m1_expected{{3, 3, 1, 1}, {6, 3, 3, 1}};
    out.push_back(make_match("m=1 solutions", "==", solutions_text(m1_expected), solutions_text(s->search->m1_solutions),
                             s->search->m1_solutions == m1_expected));
    out.push_back(make_match("verdict", "==", solutions_text(expected_verdict()), solutions_text(report.verdict),
                             report.verdict == expected_verdict()));
  }
  return out;
}

VerifyResult verify_report_json(std::string_view json_text, unsigned jobs) {
  return verify_report(parse_report(json_text), jobs);
}

}  // namespace fibcert
