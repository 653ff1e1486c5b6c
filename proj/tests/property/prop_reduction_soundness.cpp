#include <doctest.h>

#include <cmath>
#include <random>

#include "fibcert/constants.hpp"
#include "fibcert/reduction.hpp"
#include "support/oracle.hpp"

using namespace fibcert;
namespace mp = boost::multiprecision;

namespace {

struct Synthetic {
  unsigned radicand;
  Rational mu;
  unsigned A;
  unsigned M;
};

ReductionInstance make_instance(const Synthetic& s) {
  ReductionInstance inst;
  inst.gamma = [r = s.radicand](const Precision& p) { return sqrt(BallReal::exact(r, p)); };
  inst.mu = [mu = s.mu](const Precision& p) { return BallReal::from_rational(mu, p); };
  inst.A = [a = s.A](const Precision& p) { return BallReal::exact(a, p); };
  inst.B = [](const Precision& p) { return BallReal::exact(2, p); };
  inst.M = s.M;
  return inst;
}

std::vector<Synthetic> synthetic_instances() {
  std::mt19937 rng(20240607);
  std::uniform_int_distribution<unsigned> radicand(2, 200), num(1, 40), den(41, 97), a(1, 3), m(1, 50);
  std::vector<Synthetic> out;
  while (out.size() < 20) {
    const unsigned r = radicand(rng);
    const auto root = static_cast<unsigned>(std::lround(std::sqrt(static_cast<double>(r))));
    if (root * root == r) continue;
    out.push_back({r, Rational(num(rng), den(rng)), a(rng), m(rng)});
  }
  return out;
}

const BigInt kRound1M("131000000000167");

}  // namespace

TEST_CASE("no small solutions beyond the reduced bound on synthetic instances") {
  for (const Synthetic& s : synthetic_instances()) {
    CAPTURE(s.radicand);
    CAPTURE(s.M);
    const ReductionInstance inst = make_instance(s);
    const ReductionOutcome out = reduce_one(inst, 0);
    REQUIRE(out.certified);
    REQUIRE(out.convergent.q > 6 * BigInt(s.M));
    REQUIRE(check_outcome(inst, out).empty());

    const oracle::Real gamma = mp::sqrt(oracle::Real(s.radicand));
    const oracle::Real mu = oracle::from_rational(s.mu);
    const int w0 = static_cast<int>(std::ceil(oracle::from_rational(out.omega_bound).convert_to<double>()));
    for (unsigned u = 1; u <= s.M; ++u) {
      const oracle::Real x = u * gamma + mu;
      const oracle::Real gap = mp::abs(x - mp::round(x));
      for (int w = w0; w <= 60; ++w) {
        REQUIRE_FALSE((gap > 0 && gap < s.A * mp::pow(oracle::Real(2), -w)));
      }
    }
  }
}

TEST_CASE("epsilon_lower stays below epsilon recomputed at doubled precision") {
  for (const auto& [M, l_hi] : {std::pair{BigInt(251), 18U}, std::pair{kRound1M, 157U}}) {
    const RoundResult r = reduce_round([&](std::uint32_t l) { return fibonacci_instance(l, M); }, 3, l_hi);
    for (const ReductionOutcome& o : r.table) {
      CAPTURE(o.l);
      const ReductionInstance inst = fibonacci_instance(o.l, M);
      const Precision doubled{2 * o.digits, 8 * o.digits};
      const BallReal e = epsilon(inst, o.convergent.q, doubled);
      REQUIRE(e.lower() >= o.epsilon_lower);
      REQUIRE(o.epsilon.contains(e.mid()));
      // Refining never raises the omega bound.
      REQUIRE(omega_bound(inst, o.convergent.q, o.epsilon_lower, doubled) <= o.omega_bound);
    }
  }
}

TEST_CASE("known solutions satisfy the linear form chain") {
  const Precision p = kDefaultPrecision;
  const BallReal mu = sqrt5_log_ratio(p);
  const BallReal A = BallReal::from_rational(Rational(103, 100), p) / log_golden_ratio(p);
  struct Case { unsigned n, l, k, m; };
  for (const Case c : {Case{6, 3, 3, 1}, Case{3, 3, 1, 1}}) {
    CAPTURE(c.n);
    const BallReal form = BallReal::exact(c.k + c.m, p) * fib_log_ratio(c.l, p) - BallReal::exact(c.n, p) + mu;
    CHECK(form.certainly_positive());
    CHECK(certainly_less(form, A * pow(BallReal::exact(2, p), 1 - static_cast<int>(c.m))));
  }
}
