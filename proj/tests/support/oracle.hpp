#pragma once

// Independent reference implementations used only by tests.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "fibcert/ball.hpp"
#include "fibcert/bigint.hpp"

namespace oracle {

/// 160 significant decimal digits, independent of GMP/MPFR.
using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<160>>;

/// Digits frozen from a 120-digit mpmath session.
inline constexpr const char* kLogPhi = "0.481211825059603447497758913424368423135184334385660519661018";
inline constexpr const char* kLog5 = "1.60943791243410037460075933322618763952560135426851772191265";
inline constexpr const char* kSqrt5 = "2.2360679774997896964091736687312762354406183596115257242709";
inline constexpr const char* kPhi = "1.61803398874989484820458683436563811772030917980576286213545";
inline constexpr const char* kMu = "1.67227593818455474617031912639443655392849942014208800622937";
inline constexpr const char* kGamma16 = "14.3277236351777096497365469956140822123500030100534860852221";
inline constexpr const char* kGamma154 = "152.327724061815445253829680873605563446071500579857911993771";

/// The frozen strings are accurate to better than this.
inline fibcert::Rational frozen_slack() {
  return fibcert::Rational(1) / fibcert::Rational(fibcert::pow10(58));
}

/// F_0 .. F_n by the defining recurrence.
inline std::vector<fibcert::BigInt> fib_recurrence(std::uint32_t n) {
  std::vector<fibcert::BigInt> f{0, 1};
  while (f.size() <= n) f.push_back(f[f.size() - 1] + f[f.size() - 2]);
  f.resize(n + 1);
  return f;
}

inline fibcert::Rational to_rational(const Real& x) {
  return fibcert::parse_rational(x.str(0, std::ios_base::scientific));
}

inline Real from_rational(const fibcert::Rational& q) {
  return Real(q.get_num().get_str()) / Real(q.get_den().get_str());
}

/// True when the ball, widened by `slack`, contains the decimal reference value.
inline bool encloses(const fibcert::BallReal& ball, const std::string& digits,
                     const fibcert::Rational& slack = frozen_slack()) {
  const fibcert::Rational v = fibcert::parse_rational(digits);
  return ball.lower() - slack <= v && v <= ball.upper() + slack;
}

}  // namespace oracle
