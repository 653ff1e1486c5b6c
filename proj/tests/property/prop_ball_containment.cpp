#include <doctest.h>

#include <random>

#include "fibcert/ball.hpp"
#include "fibcert/errors.hpp"
#include "support/oracle.hpp"

using namespace fibcert;
namespace mp = boost::multiprecision;

namespace {

// Contains the oracle value up to its own rounding error.
bool contains(const BallReal& b, const oracle::Real& x) {
  const Rational v = oracle::to_rational(x);
  const Rational slack = abs(v) / Rational(pow10(150)) + Rational(1) / Rational(pow10(300));
  return b.lower() - slack <= v && v <= b.upper() + slack;
}

}  // namespace

TEST_CASE("random operation chains stay inside their balls") {
  std::mt19937 rng(1729);
  std::uniform_int_distribution<int> op(0, 7), num(1, 1000), den(1, 97);
  std::uniform_int_distribution<std::uint32_t> digits(20, 120);
  for (int chain = 0; chain < 1000; ++chain) {
    const Precision p{digits(rng), 1600};
    const Rational start(num(rng), den(rng));
    BallReal b = BallReal::from_rational(start, p);
    oracle::Real x = oracle::from_rational(start);
    for (int step = 0; step < 12; ++step) {
      const Rational c(num(rng), den(rng));
      const BallReal cb = BallReal::from_rational(c, p);
      const oracle::Real cx = oracle::from_rational(c);
      switch (op(rng)) {
        case 0: b = b + cb; x = x + cx; break;
        case 1: b = b - cb; x = x - cx; break;
        case 2: b = b * cb; x = x * cx; break;
        case 3: b = b / cb; x = x / cx; break;
        case 4: if (b.certainly_positive()) { b = sqrt(b); x = mp::sqrt(x); } break;
        case 5: if (b.certainly_positive()) { b = log(b); x = mp::log(x); } break;
        case 6: if (b.upper() < 50) { b = exp(b); x = mp::exp(x); } break;
        default: b = pow(b, 2); x = x * x; break;
      }
      REQUIRE_MESSAGE(contains(b, x), "chain " << chain << " step " << step);
    }
  }
}

TEST_CASE("log of a square root overlaps half the log") {
  for (int v = 2; v <= 500; v += 3) {
    const BallReal x = BallReal::exact(v, Precision{60, 1600});
    const BallReal a = log(sqrt(x));
    const BallReal b = log(x) / BallReal::exact(2);
    REQUIRE(a.lower() <= b.upper());
    REQUIRE(b.lower() <= a.upper());
  }
}

TEST_CASE("radius shrinks monotonically with precision") {
  for (int v = 2; v <= 50; ++v) {
    Rational prev = -1;
    for (std::uint32_t d : {20U, 40U, 80U, 160U, 320U}) {
      const BallReal b = log(BallReal::exact(v, Precision{d, 1600}));
      if (prev >= 0) REQUIRE(b.rad() <= prev);
      prev = b.rad();
    }
  }
}

TEST_CASE("nearest-integer distance lies in [0, 1/2]") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(-5000, 5000), den(1, 300);
  for (int i = 0; i < 2000; ++i) {
    const BallReal b = BallReal::from_mid_rad(Rational(num(rng), den(rng)), Rational(1, 100000));
    try {
      const Interval d = nearest_int_distance(b);
      REQUIRE(d.lo >= 0);
      REQUIRE(d.lo <= d.hi);
      REQUIRE(d.hi <= Rational(1, 2));
    } catch (const AmbiguousPrecision&) {
    }
  }
}
