#include <doctest.h>

#include "fibcert/errors.hpp"
#include "fibcert/matveev.hpp"
#include "support/oracle.hpp"

using namespace fibcert;
namespace mp = boost::multiprecision;

namespace {

const BigInt kPublishedN = BigInt(464) * pow10(32);

oracle::Real real(const BallReal& b) { return oracle::from_rational(b.mid()); }

bool near(const BallReal& b, const oracle::Real& expected, double rel = 1e-40) {
  return mp::abs(real(b) - expected) <= rel * mp::abs(expected);
}

}  // namespace

TEST_CASE("matveev_exponent against an independent evaluation") {
  const Precision p{60, 1600};
  LinearFormSpec spec;
  spec.term_count = 3;
  spec.degree = 2;
  spec.T = 9;
  spec.heights = {log(BallReal::exact(1, p) + sqrt(BallReal::exact(5, p))) - log(BallReal::exact(2, p)),
                  log(BallReal::exact(5, p)), BallReal::exact(2, p) * log(BallReal::exact(2, p))};
  const BallReal C = matveev_exponent(spec, p);

  using mp::log;
  using mp::pow;
  const oracle::Real phi = (1 + mp::sqrt(oracle::Real(5))) / 2;
  const oracle::Real expected = oracle::Real("1.4") * pow(oracle::Real(30), 6) * pow(oracle::Real(3), oracle::Real("4.5")) *
                                4 * (1 + log(oracle::Real(2))) * (1 + log(oracle::Real(9))) * log(phi) *
                                log(oracle::Real(5)) * 2 * log(oracle::Real(2));
  CHECK(near(C, expected));
}

TEST_CASE("assembled constants") {
  const MatveevConstants c = matveev_constants();
  CHECK(c.m_coefficient_bound == Rational(161) * Rational(pow10(10)));
  CHECK(certainly_less(c.m_coefficient_displayed, c.m_coefficient_bound));
  CHECK(certainly_less(c.m_coefficient_literal, c.m_coefficient_displayed));
  CHECK(std::abs(c.m_coefficient_displayed.mid_double() - 1.609384e12) < 1e6);
  CHECK(certainly_less(Rational(15) * Rational(pow10(13)), c.n_coefficient));
  CHECK(certainly_less(c.n_coefficient, Rational(17) * Rational(pow10(13))));

  const oracle::Real phi = (1 + mp::sqrt(oracle::Real(5))) / 2;
  const oracle::Real n_coeff = oracle::Real("1.4") * mp::pow(oracle::Real(30), 7) * mp::pow(oracle::Real(2), 13) *
                               (1 + mp::log(oracle::Real(2))) * mp::pow(mp::log(phi), 2) * mp::log(oracle::Real(5));
  CHECK(near(c.n_coefficient, n_coeff));
}

TEST_CASE("derive_m_bound examples") {
  const BallReal at_published = derive_m_bound(BallReal::exact(kPublishedN));
  CHECK(certainly_less(at_published, Rational(131) * Rational(pow10(12))));
  const BallReal at9 = derive_m_bound(BallReal::exact(9));
  CHECK(std::abs(at9.mid_double() - 5.15e12) < 0.01e12);
  CHECK(certainly_less(derive_m_bound(BallReal::exact(pow10(6))), derive_m_bound(BallReal::exact(pow10(12)))));
}

TEST_CASE("solve_n_bound examples") {
  CHECK(certainly_less(n_bound_ratio(kPublishedN), Rational(1)));
  CHECK(certainly_less(Rational(1), n_bound_ratio(pow10(30))));
  const BigInt N = solve_n_bound();
  CHECK(N >= pow10(33));
  CHECK(N <= kPublishedN);
  CHECK(certainly_less(n_bound_ratio(N), Rational(1)));
  CHECK(certainly_less(Rational(1), n_bound_ratio(N - 2)));
}

TEST_CASE("lk_bounds_from_n examples") {
  CHECK(lk_bounds_from_n(kPublishedN) == std::pair<std::uint32_t, std::uint32_t>{157, 167});
  CHECK(lk_bounds_from_n(BigInt(61466)) == std::pair<std::uint32_t, std::uint32_t>{18, 24});
  const auto [l, k] = lk_bounds_from_n(BigInt(9));
  CHECK(l >= 3);
  CHECK(k >= 3);
}

TEST_CASE("n_from_size_bounds examples") {
  CHECK(n_from_size_bounds(167, 227, 157) == 61466);
  CHECK(n_from_size_bounds(24, 27, 18) == 869);
  CHECK(n_from_size_bounds(1, 1, 1) == 2);
}

TEST_CASE("analytic stage") {
  const AnalyticResult a = analytic_stage();
  CHECK(a.bounds.n_max >= pow10(33));
  CHECK(a.bounds.n_max <= kPublishedN);
  CHECK(a.bounds.m_max <= BigInt(131) * pow10(12));
  CHECK(a.bounds.l_max == 157);
  CHECK(a.bounds.k_max == 167);
  CHECK(a.bounds.stage == Stage::Analytic);
  CHECK(a.n_solver <= a.bounds.n_max);

  const AnalyticResult raw = analytic_stage(kDefaultPrecision, 0);
  CHECK(raw.bounds.n_max + 1 == raw.n_solver);  // n < N
  CHECK(a.bounds.dominates(raw.bounds));
}

TEST_CASE("height tables") {
  for (FibIndex l : {3U, 16U, 157U}) {
    for (std::uint32_t m : {2U, 27U, 227U}) {
      const HeightTable t = height_table(l, m, Precision{40, 1600});
      CHECK(check_heights(t, Precision{40, 1600}).empty());
    }
  }
  HeightTable bad = height_table(5, 3);
  bad.h_flm1 = BallReal::exact(1000);
  CHECK_FALSE(check_heights(bad).empty());
}

TEST_CASE("stage labels round-trip") {
  for (Stage s : {Stage::Analytic, Stage::Reduced1, Stage::Reduced2, Stage::Searched}) {
    CHECK(parse_stage(to_string(s)) == s);
  }
  CHECK_THROWS_AS(parse_stage("bogus"), ParseError);
}

TEST_CASE("bound dominance") {
  BoundState a{BigInt(61466), 157, 167, BigInt(227), Stage::Reduced1};
  BoundState b{BigInt(869), 18, 24, BigInt(27), Stage::Reduced2};
  CHECK(a.dominates(b));
  CHECK_FALSE(b.dominates(a));
  CHECK(a.dominates(a));
}
