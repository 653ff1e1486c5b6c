#include "fibcert/report.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <iomanip>
#include <sstream>

#include "fibcert/errors.hpp"
#include "json_codec.hpp"

namespace fibcert {

using detail::Json;

namespace {

const Json& req(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string req_string(const Json& j, const char* key) {
  const Json& v = req(j, key);
  if (!v.is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

BigInt req_bigint(const Json& j, const char* key) { return parse_bigint(req_string(j, key)); }
Rational req_rational(const Json& j, const char* key) { return parse_rational(req_string(j, key)); }

template <typename T>
T req_number(const Json& j, const char* key) {
  const Json& v = req(j, key);
  if (!v.is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return v.get<T>();
}

bool req_bool(const Json& j, const char* key) {
  const Json& v = req(j, key);
  if (!v.is_boolean()) throw ParseError(std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

const Json& req_array(const Json& j, const char* key) {
  const Json& v = req(j, key);
  if (!v.is_array()) throw ParseError(std::string("field '") + key + "' must be an array");
  return v;
}

Json encode(const BallReal& x) {
  const SerializedBall s = serialize(x);
  return Json{{"mid", s.mid}, {"rad", s.rad}, {"digits", s.digits}};
}

BallReal decode_ball(const Json& j) {
  return deserialize({req_string(j, "mid"), req_string(j, "rad"), req_number<std::uint32_t>(j, "digits")});
}

Json encode(const IndexRange& r) { return Json::array({r.lo, r.hi}); }

IndexRange decode_range(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned() || !j[1].is_number_unsigned()) {
    throw ParseError("range must be [lo, hi]");
  }
  return {j[0].get<std::uint32_t>(), j[1].get<std::uint32_t>()};
}

Json encode(const SearchBox& b) {
  return Json{{"n", encode(b.n)}, {"l", encode(b.l)}, {"k", encode(b.k)}, {"m", encode(b.m)}};
}

SearchBox decode_box(const Json& j) {
  return {decode_range(req(j, "n")), decode_range(req(j, "l")), decode_range(req(j, "k")),
          decode_range(req(j, "m"))};
}

Json encode(const std::vector<Solution>& v) {
  Json out = Json::array();
  for (const Solution& s : v) {
    const BigInt fl = fib(s.l);
    out.push_back(Json{{"n", s.n},
                       {"l", s.l},
                       {"k", s.k},
                       {"m", s.m},
                       {"lhs", to_decimal(fib(s.n))},
                       {"rhs", to_decimal(BigInt(pow(fl, s.k) * (pow(fl, s.m) - 1)))}});
  }
  return out;
}

std::vector<Solution> decode_solutions(const Json& j) {
  if (!j.is_array()) throw ParseError("solutions must be an array");
  std::vector<Solution> out;
  for (const Json& s : j) {
    out.push_back({req_number<std::uint32_t>(s, "n"), req_number<std::uint32_t>(s, "l"),
                   req_number<std::uint32_t>(s, "k"), req_number<std::uint32_t>(s, "m")});
  }
  return out;
}

Json encode(const BoundState& b) {
  return Json{{"n_max", to_decimal(b.n_max)},
              {"l_max", b.l_max},
              {"k_max", b.k_max},
              {"m_max", to_decimal(b.m_max)}};
}

BoundState decode_bounds(const Json& j, Stage stage) {
  BoundState b;
  b.n_max = req_bigint(j, "n_max");
  b.l_max = req_number<std::uint32_t>(j, "l_max");
  b.k_max = req_number<std::uint32_t>(j, "k_max");
  b.m_max = req_bigint(j, "m_max");
  b.stage = stage;
  return b;
}

Json encode(const AnalyticResult& a) {
  const MatveevConstants& c = a.constants;
  return Json{{"n_solver", to_decimal(a.n_solver)},
              {"sig_digits", a.sig_digits},
              {"m_bound", encode(a.m_bound)},
              {"constants",
               {{"degree_factor_literal", encode(c.degree_factor_literal)},
                {"degree_factor_displayed", encode(c.degree_factor_displayed)},
                {"m_coefficient_literal", encode(c.m_coefficient_literal)},
                {"m_coefficient_displayed", encode(c.m_coefficient_displayed)},
                {"m_coefficient_bound", to_decimal(c.m_coefficient_bound)},
                {"n_coefficient", encode(c.n_coefficient)}}}};
}

AnalyticResult decode_analytic(const Json& j, const BoundState& bounds) {
  AnalyticResult a;
  a.bounds = bounds;
  a.n_solver = req_bigint(j, "n_solver");
  a.sig_digits = req_number<unsigned>(j, "sig_digits");
  a.m_bound = decode_ball(req(j, "m_bound"));
  const Json& c = req(j, "constants");
  a.constants.degree_factor_literal = decode_ball(req(c, "degree_factor_literal"));
  a.constants.degree_factor_displayed = decode_ball(req(c, "degree_factor_displayed"));
  a.constants.m_coefficient_literal = decode_ball(req(c, "m_coefficient_literal"));
  a.constants.m_coefficient_displayed = decode_ball(req(c, "m_coefficient_displayed"));
  a.constants.m_coefficient_bound = req_rational(c, "m_coefficient_bound");
  a.constants.n_coefficient = decode_ball(req(c, "n_coefficient"));
  return a;
}

Json encode(const RoundResult& r) {
  Json table = Json::array();
  for (const ReductionOutcome& o : r.table) table.push_back(detail::encode(o));
  return Json{{"M", to_decimal(r.M)},
              {"l_lo", r.l_lo},
              {"l_hi", r.l_hi},
              {"q_max", to_decimal(r.q_max)},
              {"l_at_q_max", r.l_at_q_max},
              {"epsilon_min", to_decimal(r.epsilon_min)},
              {"l_at_epsilon_min", r.l_at_epsilon_min},
              {"omega_aggregate", to_decimal(r.omega_aggregate)},
              {"omega_per_l_max", to_decimal(r.omega_per_l_max)},
              {"m_max", to_decimal(r.m_max)},
              {"table", std::move(table)}};
}

RoundResult decode_round(const Json& j) {
  RoundResult r;
  r.M = req_bigint(j, "M");
  r.l_lo = req_number<std::uint32_t>(j, "l_lo");
  r.l_hi = req_number<std::uint32_t>(j, "l_hi");
  r.q_max = req_bigint(j, "q_max");
  r.l_at_q_max = req_number<std::uint32_t>(j, "l_at_q_max");
  r.epsilon_min = req_rational(j, "epsilon_min");
  r.l_at_epsilon_min = req_number<std::uint32_t>(j, "l_at_epsilon_min");
  r.omega_aggregate = req_rational(j, "omega_aggregate");
  r.omega_per_l_max = req_rational(j, "omega_per_l_max");
  r.m_max = req_bigint(j, "m_max");
  for (const Json& row : req_array(j, "table")) r.table.push_back(detail::decode_outcome(row));
  return r;
}

Json encode(const SearchSummary& s) {
  return Json{{"box", encode(s.box)},
              {"solutions", encode(s.box_solutions)},
              {"evaluated", s.stats.evaluated},
              {"prefiltered", s.stats.prefiltered},
              {"m1_box", encode(s.m1_box)},
              {"m1_solutions", encode(s.m1_solutions)}};
}

SearchSummary decode_search(const Json& j) {
  SearchSummary s;
  s.box = decode_box(req(j, "box"));
  s.box_solutions = decode_solutions(req(j, "solutions"));
  s.stats.evaluated = req_number<std::uint64_t>(j, "evaluated");
  s.stats.prefiltered = req_number<std::uint64_t>(j, "prefiltered");
  s.m1_box = decode_box(req(j, "m1_box"));
  s.m1_solutions = decode_solutions(req(j, "m1_solutions"));
  return s;
}

Json encode(const StageRecord& s, bool with_timing) {
  Json j{{"stage", to_string(s.stage)},
         {"certified", s.certified},
         {"wall_time_ms", with_timing ? s.wall_time_ms : 0.0},
         {"bounds", encode(s.bounds)}};
  if (s.analytic) j["analytic"] = encode(*s.analytic);
  if (s.round) j["round"] = encode(*s.round);
  if (s.search) j["search"] = encode(*s.search);
  return j;
}

StageRecord decode_stage(const Json& j) {
  StageRecord s;
  s.stage = parse_stage(req_string(j, "stage"));
  s.certified = req_bool(j, "certified");
  s.wall_time_ms = req_number<double>(j, "wall_time_ms");
  s.bounds = decode_bounds(req(j, "bounds"), s.stage);
  if (j.contains("analytic")) s.analytic = decode_analytic(j.at("analytic"), s.bounds);
  if (j.contains("round")) s.round = decode_round(j.at("round"));
  if (j.contains("search")) s.search = decode_search(j.at("search"));
  return s;
}

Json encode_report(const ProofReport& r, bool with_timing) {
  Json stages = Json::array();
  for (const StageRecord& s : r.stages) stages.push_back(encode(s, with_timing));
  Json refs = Json::array();
  for (const ReferenceMatch& m : r.reference_matches) {
    refs.push_back(Json{{"claim", m.claim},
                        {"relation", m.relation},
                        {"published", m.published},
                        {"computed", m.computed},
                        {"match", m.match}});
  }
  Json j{{"version", r.version},
         {"config",
          {{"digits", r.settings.digits},
           {"max_digits", r.settings.max_digits},
           {"sig_digits", r.settings.sig_digits}}},
         {"input_checksum", r.input_checksum},
         {"stages", std::move(stages)},
         {"verdict", encode(r.verdict)},
         {"paper_reference_matches", std::move(refs)}};
  if (r.abort) {
    j["abort"] = Json{{"stage", to_string(r.abort->stage)},
                      {"precision_exhausted", r.abort->precision_exhausted},
                      {"message", r.abort->message}};
  }
  return j;
}

std::string dump(const Json& j, int indent) { return j.dump(indent < 0 ? -1 : indent) + "\n"; }

}  // namespace

namespace detail {

Json encode(const ReductionOutcome& o) {
  return Json{{"l", o.l},
              {"q_index", o.convergent.index},
              {"p", to_decimal(o.convergent.p)},
              {"q", to_decimal(o.convergent.q)},
              {"epsilon_lower", to_decimal(o.epsilon_lower)},
              {"epsilon", fibcert::encode(o.epsilon)},
              {"omega_bound", to_decimal(o.omega_bound)},
              {"digits", o.digits},
              {"skipped", o.skipped},
              {"certified", o.certified}};
}

ReductionOutcome decode_outcome(const Json& j) {
  ReductionOutcome o;
  o.l = req_number<std::uint32_t>(j, "l");
  o.convergent.index = req_number<std::size_t>(j, "q_index");
  o.convergent.p = req_bigint(j, "p");
  o.convergent.q = req_bigint(j, "q");
  o.epsilon_lower = req_rational(j, "epsilon_lower");
  o.epsilon = decode_ball(req(j, "epsilon"));
  o.omega_bound = req_rational(j, "omega_bound");
  o.digits = req_number<std::uint32_t>(j, "digits");
  o.skipped = req_number<std::uint32_t>(j, "skipped");
  o.certified = req_bool(j, "certified");
  return o;
}

}  // namespace detail

const StageRecord* ProofReport::find(Stage stage) const {
  for (const StageRecord& s : stages) {
    if (s.stage == stage) return &s;
  }
  return nullptr;
}

std::string settings_checksum(const RunSettings& settings) {
  const std::string canonical = "fibcert/v" + std::to_string(kReportVersion) +
                                ";digits=" + std::to_string(settings.digits) +
                                ";max_digits=" + std::to_string(settings.max_digits) +
                                ";sig_digits=" + std::to_string(settings.sig_digits);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(canonical.data(), canonical.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::ostringstream hex;
  for (unsigned i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

std::string to_json(const ProofReport& report, int indent) { return dump(encode_report(report, true), indent); }

std::string to_json(const AnalyticResult& analytic, int indent) {
  Json j = encode(analytic);
  j["bounds"] = encode(analytic.bounds);
  return dump(j, indent);
}

std::string to_json(const RoundResult& round, int indent) { return dump(encode(round), indent); }

std::string to_json(const ReductionOutcome& outcome, int indent) { return dump(detail::encode(outcome), indent); }

std::string to_json(const std::vector<Solution>& solutions, int indent) { return dump(encode(solutions), indent); }

std::string canonical_json(const ProofReport& report) { return dump(encode_report(report, false), 2); }

ProofReport parse_report(std::string_view json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  try {
    ProofReport r;
    r.version = req_number<int>(j, "version");
    if (r.version != kReportVersion) throw ParseError("unsupported report version " + std::to_string(r.version));
    const Json& cfg = req(j, "config");
    r.settings.digits = req_number<std::uint32_t>(cfg, "digits");
    r.settings.max_digits = req_number<std::uint32_t>(cfg, "max_digits");
    r.settings.sig_digits = req_number<unsigned>(cfg, "sig_digits");
    r.input_checksum = req_string(j, "input_checksum");
    for (const Json& s : req_array(j, "stages")) r.stages.push_back(decode_stage(s));
    r.verdict = decode_solutions(req(j, "verdict"));
    for (const Json& m : req_array(j, "paper_reference_matches")) {
      r.reference_matches.push_back({req_string(m, "claim"), req_string(m, "relation"),
                                     req_string(m, "published"), req_string(m, "computed"),
                                     req_bool(m, "match")});
    }
    if (j.contains("abort")) {
      const Json& a = j.at("abort");
      r.abort = AbortInfo{parse_stage(req_string(a, "stage")), req_bool(a, "precision_exhausted"),
                          req_string(a, "message")};
    }
    return r;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad report field: ") + e.what());
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("bad report value: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("bad report value: ") + e.what());
  }
}

std::string to_string(const Solution& s) {
  return "(" + std::to_string(s.n) + "," + std::to_string(s.l) + "," + std::to_string(s.k) + "," +
         std::to_string(s.m) + ")";
}

std::string to_string(const SearchBox& box) {
  auto r = [](const IndexRange& x) { return std::to_string(x.lo) + ":" + std::to_string(x.hi); };
  return r(box.n) + "," + r(box.l) + "," + r(box.k) + "," + r(box.m);
}

SearchBox parse_box(std::string_view text) {
  IndexRange parts[4];
  std::size_t start = 0;
  for (int i = 0; i < 4; ++i) {
    const std::size_t end = i < 3 ? text.find(',', start) : text.size();
    if (end == std::string_view::npos) throw ParseError("box needs four ranges");
    const std::string_view piece = text.substr(start, end - start);
    const std::size_t colon = piece.find(':');
    if (colon == std::string_view::npos) throw ParseError("range must be lo:hi");
    auto parse = [](std::string_view s) {
      std::uint32_t v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("bad range bound '" + std::string(s) + "'");
      return v;
    };
    parts[i] = {parse(piece.substr(0, colon)), parse(piece.substr(colon + 1))};
    start = end + 1;
  }
  if (start <= text.size()) throw ParseError("box has more than four ranges");
  return {parts[0], parts[1], parts[2], parts[3]};
}

std::string to_text(const ProofReport& report) {
  std::ostringstream out;
  out << "fibcert report v" << report.version << " (" << report.settings.digits << " digits)\n";
  for (const StageRecord& s : report.stages) {
    const BoundState& b = s.bounds;
    out << std::left << std::setw(10) << to_string(s.stage) << " n<=" << to_decimal(b.n_max)
        << " l<=" << b.l_max << " k<=" << b.k_max << " m<=" << to_decimal(b.m_max)
        << (s.certified ? "  certified" : "  NOT certified") << "  " << std::fixed << std::setprecision(1)
        << s.wall_time_ms << " ms\n";
    if (s.round) {
      const RoundResult& r = *s.round;
      out << "           M=" << to_decimal(r.M) << " l=" << r.l_lo << ".." << r.l_hi << " q_max=" << to_decimal(r.q_max)
          << " (l=" << r.l_at_q_max << ") eps_min=" << to_scientific(r.epsilon_min, 6, Rounding::Down)
          << " (l=" << r.l_at_epsilon_min << ") omega<=" << to_decimal(r.omega_aggregate) << "\n";
    }
    if (s.search) {
      out << "           box " << to_string(s.search->box) << ": " << s.search->box_solutions.size()
          << " solutions; m=1 case:";
      for (const Solution& x : s.search->m1_solutions) out << ' ' << to_string(x);
      out << "\n";
    }
  }
  if (report.abort) {
    out << "ABORTED in " << to_string(report.abort->stage) << ": " << report.abort->message << "\n";
  }
  out << "verdict:";
  for (const Solution& x : report.verdict) out << ' ' << to_string(x);
  out << "\n";
  for (const ReferenceMatch& m : report.reference_matches) {
    out << (m.match ? "  match    " : "  MISMATCH ") << m.claim << ": " << m.computed << ' ' << m.relation << ' ' << m.published
        << "\n";
  }
  return out.str();
}

}  // namespace fibcert
