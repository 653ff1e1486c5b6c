#include "fibcert/reduction.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "fibcert/constants.hpp"
#include "fibcert/errors.hpp"

namespace fibcert {

namespace {

constexpr unsigned kEpsilonDigits = 30;
const BigInt kOmegaScale = 1000000;

Rational round_down_decimal(const Rational& value, unsigned sig) {
  return parse_rational(to_scientific(value, sig, Rounding::Down));
}

}  // namespace

ReductionInstance fibonacci_instance(std::uint32_t l, const BigInt& M) {
  ReductionInstance inst;
  inst.gamma = fib_log_ratio_source(l);
  inst.mu = sqrt5_log_ratio_source();
  inst.A = [](const Precision& prec) {
    return BallReal::from_rational(Rational(103, 100), prec) / log_golden_ratio(prec);
  };
  inst.B = [](const Precision& prec) { return BallReal::exact(2, prec); };
  inst.M = M;
  return inst;
}

BallReal epsilon(const ReductionInstance& inst, const BigInt& q, const Precision& prec) {
  const Interval mu_dist = nearest_int_distance(inst.mu(prec) * q);
  const Interval gamma_dist = nearest_int_distance(inst.gamma(prec) * q);
  const Rational M(inst.M);
  return BallReal::from_interval({mu_dist.lo - M * gamma_dist.hi, mu_dist.hi - M * gamma_dist.lo}, prec);
}

Rational omega_bound(const ReductionInstance& inst, const BigInt& q, const Rational& epsilon_lower,
                     const Precision& prec) {
  if (epsilon_lower <= 0) throw PreconditionViolated("omega_bound needs a positive epsilon");
  const BallReal ratio = inst.A(prec) * q / BallReal::from_rational(epsilon_lower, prec);
  const BallReal omega = log(ratio) / log(inst.B(prec));
  const BigInt scaled = ceil(omega.upper() * Rational(kOmegaScale));
  return make_rational(scaled, kOmegaScale);
}

ReductionOutcome reduce_one(const ReductionInstance& inst, std::uint32_t l, const ReductionOptions& opts) {
  if (inst.M < 1) throw PreconditionViolated("reduction needs M >= 1");
  const BigInt threshold = 6 * inst.M;
  ConvergentStream stream(inst.gamma, opts.prec, opts.denominator_cap);

  ReductionOutcome out;
  out.l = l;
  while (std::optional<Convergent> c = stream.next()) {
    if (c->q <= threshold) continue;

    Precision prec = opts.prec;
    if (stream.precision().digits > prec.digits) prec = stream.precision();
    while (true) {
      std::optional<BallReal> eps;
      try {
        eps = epsilon(inst, c->q, prec);
      } catch (const AmbiguousPrecision&) {
      }
      if (eps && eps->certainly_positive()) {
        out.convergent = *c;
        out.epsilon = *eps;
        out.epsilon_lower = round_down_decimal(eps->lower(), kEpsilonDigits);
        out.digits = prec.digits;
        out.omega_bound = omega_bound(inst, c->q, out.epsilon_lower, prec);
        out.certified = true;
        return out;
      }
      if (eps && eps->upper() <= 0) {
        ++out.skipped;
        break;
      }
      // Sign of eps not certifiable yet: refine before deciding to skip.
      if (!prec.escalate()) {
        throw PrecisionExhausted("sign of epsilon undecided for q = " + to_decimal(c->q) + " at " +
                                 std::to_string(prec.digits) + " digits");
      }
    }
  }
  throw TerminatedBelowThreshold("expansion terminated before a usable convergent above 6M");
}

std::string check_outcome(const ReductionInstance& inst, const ReductionOutcome& outcome,
                          const BigInt& denominator_cap) {
  const std::string where = "l=" + std::to_string(outcome.l) + ": ";
  if (outcome.digits == 0) return where + "missing precision";
  Precision prec;
  prec.digits = outcome.digits;
  prec.max_digits = std::max(outcome.digits * 8, prec.max_digits);

  const Convergent& c = outcome.convergent;
  if (c.q <= 6 * inst.M) return where + "q does not exceed 6M";
  ConvergentStream stream(inst.gamma, prec, denominator_cap);
  std::optional<Convergent> replay = stream.next();
  while (replay && replay->index < c.index) replay = stream.next();
  if (!replay || replay->index != c.index || replay->p != c.p || replay->q != c.q) {
    return where + "p/q is not convergent #" + std::to_string(c.index) + " of gamma";
  }

  if (outcome.epsilon_lower <= 0) return where + "epsilon_lower is not positive";
  BallReal eps;
  try {
    eps = epsilon(inst, c.q, prec);
  } catch (const AmbiguousPrecision&) {
    return where + "epsilon not certifiable at recorded precision";
  }
  if (eps.lower() < outcome.epsilon_lower) {
    return where + "recorded epsilon_lower exceeds the recomputed certified lower bound";
  }
  if (omega_bound(inst, c.q, outcome.epsilon_lower, prec) > outcome.omega_bound) {
    return where + "recorded omega bound is below the recomputed bound";
  }
  return {};
}

RoundResult aggregate_round(const ReductionInstance& any_instance, std::vector<ReductionOutcome> table,
                            const Precision& prec) {
  if (table.empty()) throw PreconditionViolated("cannot aggregate an empty reduction table");
  std::sort(table.begin(), table.end(), [](const auto& a, const auto& b) { return a.l < b.l; });

  RoundResult r;
  r.M = any_instance.M;
  r.l_lo = table.front().l;
  r.l_hi = table.back().l;
  r.q_max = table.front().convergent.q;
  r.l_at_q_max = table.front().l;
  r.epsilon_min = table.front().epsilon_lower;
  r.l_at_epsilon_min = table.front().l;
  r.omega_per_l_max = table.front().omega_bound;
  for (const ReductionOutcome& o : table) {
    if (!o.certified) throw PreconditionViolated("uncertified outcome for l=" + std::to_string(o.l));
    if (o.convergent.q > r.q_max) {
      r.q_max = o.convergent.q;
      r.l_at_q_max = o.l;
    }
    if (o.epsilon_lower < r.epsilon_min) {
      r.epsilon_min = o.epsilon_lower;
      r.l_at_epsilon_min = o.l;
    }
    if (o.omega_bound > r.omega_per_l_max) r.omega_per_l_max = o.omega_bound;
  }
  r.omega_aggregate = omega_bound(any_instance, r.q_max, r.epsilon_min, prec);
  r.m_max = 1 + floor(r.omega_aggregate);
  r.table = std::move(table);
  return r;
}

RoundResult reduce_round(const InstanceFactory& factory, std::uint32_t l_lo, std::uint32_t l_hi,
                         const ReductionOptions& opts, const RoundHooks& hooks) {
  if (l_lo < 3 || l_lo > l_hi) throw PreconditionViolated("reduce_round needs 3 <= l_lo <= l_hi");
  const std::size_t count = l_hi - l_lo + 1;
  std::vector<std::optional<ReductionOutcome>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  std::mutex callback_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      const auto l = static_cast<std::uint32_t>(l_lo + i);
      try {
        std::optional<ReductionOutcome> cached = hooks.lookup ? hooks.lookup(l) : std::nullopt;
        slots[i] = cached ? std::move(cached) : reduce_one(factory(l), l, opts);
        if (hooks.on_outcome) {
          std::lock_guard lock(callback_mutex);
          hooks.on_outcome(*slots[i]);
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const unsigned jobs = std::max(1U, std::min<unsigned>(hooks.jobs, static_cast<unsigned>(count)));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<ReductionOutcome> table;
  table.reserve(count);
  for (auto& s : slots) table.push_back(std::move(*s));
  return aggregate_round(factory(l_lo), std::move(table), opts.prec);
}

}  // namespace fibcert
