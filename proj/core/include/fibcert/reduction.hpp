#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fibcert/ball.hpp"
#include "fibcert/bigint.hpp"
#include "fibcert/cfrac.hpp"

namespace fibcert {

/// Data for one application of the reduction lemma: no positive integers
/// u <= M, v, w with 0 < |u gamma - v + mu| < A B^-w once w >= log(Aq/eps)/log B.
struct ReductionInstance {
  BallSource gamma;
  BallSource mu;
  BallSource A;  // > 0
  BallSource B;  // > 1
  BigInt M;      // >= 1
};

/// gamma = log F_l / log phi, mu = log sqrt5 / log phi, A = 1.03 / log phi, B = 2.
ReductionInstance fibonacci_instance(std::uint32_t l, const BigInt& M);

struct ReductionOptions {
  Precision prec = kDefaultPrecision;
  BigInt denominator_cap = default_denominator_cap();
};

struct ReductionOutcome {
  std::uint32_t l = 0;
  Convergent convergent;
  /// Certified lower bound on eps, rounded down to 30 significant digits.
  Rational epsilon_lower;
  /// Enclosure of eps at the certifying precision.
  BallReal epsilon;
  /// Upper bound on log(A q / epsilon_lower) / log B, a multiple of 10^-6.
  Rational omega_bound;
  /// Digits at which epsilon was certified; re-verification uses the same.
  std::uint32_t digits = 0;
  /// Convergents beyond 6M rejected because eps <= 0.
  std::uint32_t skipped = 0;
  bool certified = false;
};

/// Enclosure of ||mu q|| - M ||gamma q||, built from the lower end of ||mu q||
/// and the upper end of ||gamma q||. Throws AmbiguousPrecision.
BallReal epsilon(const ReductionInstance& inst, const BigInt& q, const Precision& prec);

/// ceil(10^6 * upper(log(A q / eps) / log B)) / 10^6.
Rational omega_bound(const ReductionInstance& inst, const BigInt& q, const Rational& epsilon_lower,
                     const Precision& prec);

/// First convergent of gamma with q > 6M and certified eps > 0.
ReductionOutcome reduce_one(const ReductionInstance& inst, std::uint32_t l,
                            const ReductionOptions& opts = {});

/// Re-checks a recorded outcome: the convergent is the index-th convergent of
/// gamma, q > 6M, the recorded epsilon_lower is positive and below the
/// recomputed enclosure, and omega_bound dominates the recomputed bound.
/// Returns an empty string on success, otherwise the first failing claim.
std::string check_outcome(const ReductionInstance& inst, const ReductionOutcome& outcome,
                          const BigInt& denominator_cap = default_denominator_cap());

struct RoundResult {
  BigInt M;
  std::uint32_t l_lo = 0;
  std::uint32_t l_hi = 0;
  std::vector<ReductionOutcome> table;
  BigInt q_max;
  std::uint32_t l_at_q_max = 0;
  Rational epsilon_min;
  std::uint32_t l_at_epsilon_min = 0;
  /// log(A q_max / epsilon_min) / log B, rounded up: the bound that sets m_max.
  Rational omega_aggregate;
  /// max over l of the per-l omega bounds (never larger than omega_aggregate).
  Rational omega_per_l_max;
  /// 1 + floor(omega_aggregate), since omega = m - 1.
  BigInt m_max;
};

struct RoundHooks {
  unsigned jobs = 1;
  /// Called once per finished l, serialized by the caller's pool.
  std::function<void(const ReductionOutcome&)> on_outcome;
  /// Resumable cache: a hit skips the reduction for that l.
  std::function<std::optional<ReductionOutcome>(std::uint32_t l)> lookup;
};

using InstanceFactory = std::function<ReductionInstance(std::uint32_t l)>;

/// Runs reduce_one for every l in [l_lo, l_hi] and aggregates the bound.
/// All instances must share A and B. Results are ordered by l.
RoundResult reduce_round(const InstanceFactory& factory, std::uint32_t l_lo, std::uint32_t l_hi,
                         const ReductionOptions& opts = {}, const RoundHooks& hooks = {});

/// Aggregates an already computed table (used by reduce_round and by report verification).
RoundResult aggregate_round(const ReductionInstance& any_instance, std::vector<ReductionOutcome> table,
                            const Precision& prec);

}  // namespace fibcert
