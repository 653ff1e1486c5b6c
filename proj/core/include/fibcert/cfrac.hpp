#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fibcert/ball.hpp"
#include "fibcert/bigint.hpp"

namespace fibcert {

/// Partial quotients [a_0; a_1, a_2, ...]. Every stored quotient is certified.
struct PartialQuotients {
  std::vector<BigInt> a;
  std::size_t certified_len = 0;
  /// The expansion ended (the input is rational).
  bool terminated = false;
};

/// p/q = [a_0; ..., a_index] in lowest terms. Index 0 is a_0 / 1.
struct Convergent {
  std::size_t index = 0;
  BigInt p;
  BigInt q;
};

/// Default ceiling on convergent denominators: 10^100.
BigInt default_denominator_cap();

/// Lazily produces certified convergents of a real number.
///
/// Ball inputs are expanded by floor-and-reciprocate on the residual ball. A
/// quotient is emitted only when every point of the residual has the same
/// floor; otherwise the source is re-evaluated at doubled precision and the
/// certified prefix is replayed before continuing.
class ConvergentStream {
 public:
  ConvergentStream(BallSource source, Precision prec, BigInt denominator_cap = default_denominator_cap());
  explicit ConvergentStream(const Rational& value);

  /// Next convergent, or nullopt once the expansion has terminated.
  /// Throws PrecisionExhausted or DenominatorCapExceeded.
  std::optional<Convergent> next();

  [[nodiscard]] const std::vector<BigInt>& quotients() const { return quotients_; }
  [[nodiscard]] bool terminated() const { return terminated_; }
  /// Precision of the current residual (grows on escalation).
  [[nodiscard]] const Precision& precision() const { return prec_; }

 private:
  std::optional<BigInt> next_quotient();
  std::optional<BigInt> next_exact_quotient();
  void escalate_and_replay();

  BallSource source_;
  std::optional<Rational> exact_residual_;
  std::optional<BallReal> residual_;
  Precision prec_;
  BigInt cap_;
  std::vector<BigInt> quotients_;
  bool terminated_ = false;
  BigInt p_prev_ = 0, p_ = 1;  // p_{i-2}, p_{i-1}
  BigInt q_prev_ = 1, q_ = 0;
};

/// Up to `count` certified partial quotients of a ball-valued quantity.
PartialQuotients expand(const BallSource& source, std::size_t count, Precision prec = kDefaultPrecision);

/// Complete expansion of a rational by the Euclidean algorithm.
PartialQuotients expand(const Rational& value);

/// Convergents p_i/q_i for the certified prefix.
std::vector<Convergent> convergents(const PartialQuotients& pq);

/// Exact value of [a_0; a_1, ..., a_k].
Rational evaluate_continued_fraction(std::span<const BigInt> quotients);

/// Least-index certified convergent with q > threshold.
/// Throws TerminatedBelowThreshold, PrecisionExhausted or DenominatorCapExceeded.
Convergent first_convergent_above(const BallSource& source, const BigInt& threshold,
                                  Precision prec = kDefaultPrecision,
                                  const BigInt& denominator_cap = default_denominator_cap());
Convergent first_convergent_above(const Rational& value, const BigInt& threshold);

}  // namespace fibcert
