#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fibcert/ball.hpp"
#include "fibcert/bigint.hpp"
#include "fibcert/fibkit.hpp"

namespace fibcert {

/// Lambda = beta_1^r_1 ... beta_t^r_t - 1 over a real field of degree D.
struct LinearFormSpec {
  std::uint32_t term_count = 0;  // t >= 2
  std::uint32_t degree = 0;      // D
  BigInt T;                      // T >= max |r_j|
  std::vector<BallReal> heights; // A_j >= max(D h(beta_j), |log beta_j|, 0.16)
};

/// C = 1.4 30^(t+3) t^4.5 D^2 (1 + log D)(1 + log T) A_1...A_t, so |Lambda| > exp(-C).
BallReal matveev_exponent(const LinearFormSpec& spec, const Precision& prec = kDefaultPrecision);

/// Logarithmic heights of the numbers entering both linear forms.
struct HeightTable {
  FibIndex l = 0;
  std::uint32_t m = 0;
  BallReal h_phi;    // (1/2) log phi
  BallReal h_sqrt5;  // (1/2) log 5
  BallReal h_fl;     // log F_l
  BallReal h_flm1;   // log(F_l^m - 1)
};

HeightTable height_table(FibIndex l, std::uint32_t m, const Precision& prec = kDefaultPrecision);

/// Verifies the table's invariants and that the declared A_j of both linear
/// forms dominate D h(beta_j), |log beta_j| and 0.16. Empty string on success.
std::string check_heights(const HeightTable& t, const Precision& prec = kDefaultPrecision);

/// The assembled constants of the bound cascade.
struct MatveevConstants {
  /// Literal lemma factor D^2 (1 + log D) = 4 (1 + log 2).
  BallReal degree_factor_literal;
  /// Displayed factor 2^3 (1 + log 2): the literal one times A_3 / log F_l = 2.
  BallReal degree_factor_displayed;
  /// m < c (1 + log n) + log 1.03 / log 2 with c = 1.4 30^6 3^4.5 2^3 (1 + log 2) log phi log 5.
  BallReal m_coefficient_literal;
  /// The same with 1.5 in front, which absorbs the log 1.03 term for n >= 9.
  BallReal m_coefficient_displayed;
  /// Published rounding of the displayed coefficient: 1.61e12.
  Rational m_coefficient_bound;
  /// n < c (l-1)^2 (1 + log n) m with c = 1.4 30^7 2^13 (1 + log 2) (log phi)^2 log 5.
  BallReal n_coefficient;
};

/// Throws VerificationFailed if a published rounding does not dominate its exact value.
MatveevConstants matveev_constants(const Precision& prec = kDefaultPrecision);

/// Certified upper bound 1.61e12 (1 + log n) on m. n >= 9.
BallReal derive_m_bound(const BallReal& n, const Precision& prec = kDefaultPrecision);

/// RHS/n of n < c 1.61e12 [1 + log n / log phi]^2 (1 + log n)^2.
BallReal n_bound_ratio(const BigInt& n, const Precision& prec = kDefaultPrecision);

/// Least N such that n_bound_ratio(n) < 1 is certified for every n >= N.
/// Throws NoConvergence if N would exceed 10^50.
BigInt solve_n_bound(const Precision& prec = kDefaultPrecision);

/// (l_max, k_max): greatest l with log l + (l-2) log phi < log n_max and
/// greatest k with (k-2) log phi < log n_max. Values are never below 3.
std::pair<std::uint32_t, std::uint32_t> lk_bounds_from_n(const BigInt& n_max,
                                                         const Precision& prec = kDefaultPrecision);

/// 2 + (k_max + m_max)(l_max - 1).
BigInt n_from_size_bounds(const BigInt& k_max, const BigInt& m_max, const BigInt& l_max);

enum class Stage { Analytic, Reduced1, Reduced2, Searched };

std::string to_string(Stage stage);
Stage parse_stage(const std::string& label);

/// Box of upper bounds threaded through the proof. Lower bounds are the
/// theorem hypotheses n >= 9, l >= 3, k >= 3, m >= 2.
struct BoundState {
  BigInt n_max;
  std::uint32_t l_max = 0;
  std::uint32_t k_max = 0;
  BigInt m_max;
  Stage stage = Stage::Analytic;

  static constexpr std::uint32_t kNMin = 9;
  static constexpr std::uint32_t kLMin = 3;
  static constexpr std::uint32_t kKMin = 3;
  static constexpr std::uint32_t kMMin = 2;

  /// Each bound of `next` is <= the corresponding bound here.
  [[nodiscard]] bool dominates(const BoundState& next) const;
};

struct AnalyticResult {
  BoundState bounds;
  MatveevConstants constants;
  /// Exact solver output before published rounding.
  BigInt n_solver;
  /// 1.61e12 (1 + log n_max).
  BallReal m_bound;
  /// Significant digits used to round bounds upward (0 = no rounding).
  unsigned sig_digits = 3;
};

/// Runs the cascade from the first linear form to the l/k thresholds.
/// With sig_digits > 0 the n and m bounds are rounded up to that many
/// significant digits before they feed the next step.
AnalyticResult analytic_stage(const Precision& prec = kDefaultPrecision, unsigned sig_digits = 3);

}  // namespace fibcert
