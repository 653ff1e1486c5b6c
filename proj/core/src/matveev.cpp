#include "fibcert/matveev.hpp"

#include "fibcert/constants.hpp"
#include "fibcert/errors.hpp"

namespace fibcert {

namespace {

BallReal rational_ball(long num, long den, const Precision& prec) {
  return BallReal::from_rational(make_rational(num, den), prec);
}

BallReal one_plus_log(const BigInt& x, const Precision& prec) {
  return BallReal::exact(1, prec) + log(BallReal::exact(x, prec));
}

// A >= X up to the enclosure width. Several of the declared A_j equal
// D h(beta_j) identically, and those cannot be separated by certified comparison.
bool not_below(const BallReal& a, const BallReal& x) { return !certainly_less(a, x); }

}  // namespace

BallReal matveev_exponent(const LinearFormSpec& spec, const Precision& prec) {
  if (spec.term_count < 2) throw PreconditionViolated("linear form needs at least two terms");
  if (spec.heights.size() != spec.term_count) throw PreconditionViolated("one height per term");
  if (spec.degree < 1 || spec.T < 1) throw PreconditionViolated("need D >= 1 and T >= 1");
  const Rational floor_height(16, 100);
  for (const BallReal& a : spec.heights) {
    if (certainly_less(a, floor_height)) throw PreconditionViolated("height A_j below 0.16");
  }

  const BallReal t = BallReal::exact(spec.term_count, prec);
  const BallReal t_pow = exp(rational_ball(9, 2, prec) * log(t));  // t^4.5
  BallReal c = rational_ball(14, 10, prec) * pow(BigInt(30), spec.term_count + 3) * t_pow;
  c = c * BigInt(spec.degree * spec.degree) * one_plus_log(spec.degree, prec) * one_plus_log(spec.T, prec);
  for (const BallReal& a : spec.heights) c = c * a;
  return c;
}

HeightTable height_table(FibIndex l, std::uint32_t m, const Precision& prec) {
  if (l < 3 || m < 1) throw PreconditionViolated("height_table needs l >= 3 and m >= 1");
  const BigInt fl = fib(l);
  HeightTable t;
  t.l = l;
  t.m = m;
  t.h_phi = log_golden_ratio(prec) * Rational(1, 2);
  t.h_sqrt5 = log5(prec) * Rational(1, 2);
  t.h_fl = log(BallReal::exact(fl, prec));
  t.h_flm1 = log(BallReal::exact(pow(fl, m) - 1, prec));
  return t;
}

std::string check_heights(const HeightTable& t, const Precision& prec) {
  const BallReal lp = log_golden_ratio(prec);
  const BallReal l5 = log5(prec);
  const BigInt two = 2;
  const BigInt lm1 = t.l - 1;
  const BallReal cap = BigInt(t.m) * lm1 * lp;  // m (l-1) log phi

  if (!t.h_phi.certainly_positive() || !t.h_sqrt5.certainly_positive() || !t.h_fl.certainly_positive()) {
    return "non-positive height";
  }
  if (pow(fib(t.l), t.m) > 2 && !t.h_flm1.certainly_positive()) return "non-positive height of F_l^m - 1";
  if (!certainly_less(t.h_flm1, cap) ) return "log(F_l^m - 1) not below m(l-1) log phi";

  const BallReal floor_height = BallReal::from_rational(Rational(16, 100), prec);
  struct Term {
    const char* name;
    BallReal A;
    BallReal h;
    BallReal abs_log;
  };
  const BallReal log_fl = t.h_fl;
  const BallReal log_flm1 = t.h_flm1;
  const Term terms[] = {
      // first form: phi, sqrt 5, F_l
      {"L1:phi", lp, t.h_phi, lp},
      {"L1:sqrt5", l5, t.h_sqrt5, l5 * Rational(1, 2)},
      {"L1:F_l", two * log_fl, log_fl, log_fl},
      // second form: sqrt 5, phi, F_l, F_l^m - 1
      {"L2:sqrt5", l5, t.h_sqrt5, l5 * Rational(1, 2)},
      {"L2:phi", lp, t.h_phi, lp},
      {"L2:F_l", two * lm1 * lp, log_fl, log_fl},
      {"L2:F_l^m-1", two * lm1 * BigInt(t.m) * lp, log_flm1, log_flm1},
  };
  for (const Term& term : terms) {
    if (!not_below(term.A, two * term.h)) return std::string(term.name) + ": A below D h";
    if (!not_below(term.A, term.abs_log)) return std::string(term.name) + ": A below |log beta|";
    if (!not_below(term.A, floor_height)) return std::string(term.name) + ": A below 0.16";
  }
  return {};
}

MatveevConstants matveev_constants(const Precision& prec) {
  MatveevConstants c;
  const BallReal one_log2 = one_plus_log(2, prec);
  const BallReal lp = log_golden_ratio(prec);
  const BallReal l5 = log5(prec);
  c.degree_factor_literal = BigInt(4) * one_log2;
  c.degree_factor_displayed = BigInt(8) * one_log2;

  const BallReal three_pow = exp(rational_ball(9, 2, prec) * log(BallReal::exact(3, prec)));
  const BallReal core = pow(BigInt(30), 6) * three_pow * c.degree_factor_displayed * lp * l5;
  c.m_coefficient_literal = rational_ball(14, 10, prec) * core;
  c.m_coefficient_displayed = rational_ball(15, 10, prec) * core;
  c.m_coefficient_bound = Rational(161) * Rational(pow10(10));

  if (!certainly_less(c.m_coefficient_displayed, c.m_coefficient_bound)) {
    throw VerificationFailed("1.5 30^6 3^4.5 2^3 (1+log 2) log phi log 5 is not below 1.61e12");
  }
  // For n >= 9 the 0.1 c (1 + log n) slack dominates log 1.03 / log 2.
  const BallReal slack = (c.m_coefficient_displayed - c.m_coefficient_literal) * one_plus_log(9, prec);
  const BallReal absorbed = log(rational_ball(103, 100, prec)) / log(BallReal::exact(2, prec));
  if (!certainly_less(absorbed, slack)) {
    throw VerificationFailed("1.5 factor does not absorb log 1.03 / log 2");
  }

  c.n_coefficient = rational_ball(14, 10, prec) * pow(BigInt(30), 7) * pow(BigInt(2), 13) * one_log2 * lp * lp * l5;
  return c;
}

BallReal derive_m_bound(const BallReal& n, const Precision& prec) {
  if (certainly_less(n, Rational(9))) throw PreconditionViolated("derive_m_bound needs n >= 9");
  const Rational coeff = Rational(161) * Rational(pow10(10));
  return BallReal::from_rational(coeff, prec) * (BallReal::exact(1, prec) + log(n.with_precision(prec)));
}

namespace {

BallReal n_bound_ratio_with(const MatveevConstants& c, const BigInt& n, const Precision& prec) {
  if (n < 1) throw PreconditionViolated("n_bound_ratio needs n >= 1");
  const BallReal one = BallReal::exact(1, prec);
  const BallReal L = log(BallReal::exact(n, prec));
  const BallReal bracket = one + L / log_golden_ratio(prec);
  const BallReal tail = one + L;
  const BallReal rhs = c.n_coefficient * c.m_coefficient_bound * bracket * bracket * tail * tail;
  return rhs / n;
}

}  // namespace

BallReal n_bound_ratio(const BigInt& n, const Precision& prec) {
  return n_bound_ratio_with(matveev_constants(prec), n, prec);
}

BigInt solve_n_bound(const Precision& prec) {
  // The ratio decreases once 2/(log phi + log n) + 2/(1 + log n) < 1, i.e. from
  // about n = 150 on, so the predicate below is monotone from 1024 upward.
  const Rational one(1);
  const MatveevConstants c = matveev_constants(prec);
  auto holds = [&](const BigInt& n) { return certainly_less(n_bound_ratio_with(c, n, prec), one); };
  const BigInt ceiling = pow10(50);

  BigInt lo = 1024;
  if (holds(lo)) return lo;
  BigInt hi = 2 * lo;
  while (!holds(hi)) {
    lo = hi;
    hi *= 2;
    if (hi > ceiling) throw NoConvergence("n bound not found below 10^50");
  }
  while (hi - lo > 1) {
    BigInt mid = (lo + hi) / 2;
    if (holds(mid)) hi = mid;
    else lo = mid;
  }
  return hi;
}

std::pair<std::uint32_t, std::uint32_t> lk_bounds_from_n(const BigInt& n_max, const Precision& prec) {
  if (n_max < 9) {
    return {BoundState::kLMin, BoundState::kKMin};
  }
  const BallReal log_n = log(BallReal::exact(n_max, prec));
  const BallReal lp = log_golden_ratio(prec);

  // An index is excluded only once its left-hand side is certainly >= log n.
  std::uint32_t l = BoundState::kLMin;
  while (true) {
    const std::uint32_t next = l + 1;
    const BallReal lhs = log(BallReal::exact(next, prec)) + BigInt(next - 2) * lp;
    if (lhs.lower() < log_n.upper()) ++l;
    else break;
  }
  std::uint32_t k = BoundState::kKMin;
  while (true) {
    const std::uint32_t next = k + 1;
    const BallReal lhs = BigInt(next - 2) * lp;
    if (lhs.lower() < log_n.upper()) ++k;
    else break;
  }
  return {l, k};
}

BigInt n_from_size_bounds(const BigInt& k_max, const BigInt& m_max, const BigInt& l_max) {
  if (k_max < 1 || m_max < 1 || l_max < 1) throw PreconditionViolated("size bounds must be >= 1");
  return 2 + (k_max + m_max) * (l_max - 1);
}

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::Analytic: return "analytic";
    case Stage::Reduced1: return "reduced-1";
    case Stage::Reduced2: return "reduced-2";
    case Stage::Searched: return "searched";
  }
  return "unknown";
}

Stage parse_stage(const std::string& label) {
  for (Stage s : {Stage::Analytic, Stage::Reduced1, Stage::Reduced2, Stage::Searched}) {
    if (to_string(s) == label) return s;
  }
  throw ParseError("unknown stage label '" + label + "'");
}

bool BoundState::dominates(const BoundState& next) const {
  return next.n_max <= n_max && next.l_max <= l_max && next.k_max <= k_max && next.m_max <= m_max;
}

AnalyticResult analytic_stage(const Precision& prec, unsigned sig_digits) {
  AnalyticResult r;
  r.sig_digits = sig_digits;
  r.constants = matveev_constants(prec);
  r.n_solver = solve_n_bound(prec);

  auto published = [&](const BigInt& v) { return sig_digits > 0 ? round_up_significant(v, sig_digits) : v; };
  // Solutions satisfy ratio > 1, hence n < N.
  const BigInt n_max = published(r.n_solver - 1);
  r.m_bound = derive_m_bound(BallReal::exact(n_max, prec), prec);
  const BigInt m_max = published(ceil(r.m_bound.upper()) - 1);  // m < U  =>  m <= ceil(U) - 1
  const auto [l_max, k_max] = lk_bounds_from_n(n_max, prec);

  r.bounds = BoundState{n_max, l_max, k_max, m_max, Stage::Analytic};
  return r;
}

}  // namespace fibcert
