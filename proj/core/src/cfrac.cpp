#include "fibcert/cfrac.hpp"

#include <stdexcept>
#include <string>
#include <utility>

#include "fibcert/errors.hpp"

namespace fibcert {

BigInt default_denominator_cap() { return pow10(100); }

ConvergentStream::ConvergentStream(BallSource source, Precision prec, BigInt denominator_cap)
    : source_(std::move(source)), prec_(prec), cap_(std::move(denominator_cap)) {
  residual_ = source_(prec_);
}

ConvergentStream::ConvergentStream(const Rational& value) : exact_residual_(value), cap_(0) {}

std::optional<BigInt> ConvergentStream::next_exact_quotient() {
  Rational& x = *exact_residual_;
  BigInt a = floor(x);
  Rational frac = x - Rational(a);
  if (frac == 0) {
    terminated_ = true;
  } else {
    x = 1 / frac;
  }
  return a;
}

void ConvergentStream::escalate_and_replay() {
  while (true) {
    if (!prec_.escalate()) {
      throw PrecisionExhausted("continued fraction quotient " + std::to_string(quotients_.size()) +
                               " is ambiguous at " + std::to_string(prec_.digits) + " digits");
    }
    BallReal x = source_(prec_);
    bool replayed = true;
    for (const BigInt& certified : quotients_) {
      std::optional<BigInt> a = x.certified_floor();
      if (!a) {
        replayed = false;
        break;
      }
      // A certified prefix cannot change; more digits only sharpen it.
      if (*a != certified) throw std::logic_error("certified continued fraction prefix changed under refinement");
      BallReal frac = x - *a;
      if (!frac.certainly_positive()) {
        replayed = false;
        break;
      }
      x = BallReal::exact(1, prec_) / frac;
    }
    if (replayed) {
      residual_ = std::move(x);
      return;
    }
  }
}

std::optional<BigInt> ConvergentStream::next_quotient() {
  if (terminated_) return std::nullopt;
  if (exact_residual_) return next_exact_quotient();

  while (true) {
    BallReal& x = *residual_;
    std::optional<BigInt> a = x.certified_floor();
    if (a) {
      BallReal frac = x - *a;
      if (frac.is_exact() && frac.mid() == 0) {
        terminated_ = true;
        return a;
      }
      if (frac.certainly_positive()) {
        residual_ = BallReal::exact(1, prec_) / frac;
        return a;
      }
    }
    escalate_and_replay();
  }
}

std::optional<Convergent> ConvergentStream::next() {
  std::optional<BigInt> a = next_quotient();
  if (!a) return std::nullopt;
  if (!quotients_.empty() && *a < 1) throw std::logic_error("partial quotient below 1 after a_0");
  quotients_.push_back(*a);

  BigInt p = *a * p_ + p_prev_;
  BigInt q = *a * q_ + q_prev_;
  if (cap_ > 0 && q > cap_) {
    throw DenominatorCapExceeded("convergent denominator exceeds cap 10^" +
                                 std::to_string(decimal_digits(cap_) - 1));
  }
  p_prev_ = std::exchange(p_, p);
  q_prev_ = std::exchange(q_, q);
  return Convergent{quotients_.size() - 1, p_, q_};
}

PartialQuotients expand(const BallSource& source, std::size_t count, Precision prec) {
  ConvergentStream stream(source, prec, BigInt(0));
  while (stream.quotients().size() < count && stream.next()) {
  }
  return {stream.quotients(), stream.quotients().size(), stream.terminated()};
}

PartialQuotients expand(const Rational& value) {
  ConvergentStream stream(value);
  while (stream.next()) {
  }
  return {stream.quotients(), stream.quotients().size(), true};
}

std::vector<Convergent> convergents(const PartialQuotients& pq) {
  std::vector<Convergent> out;
  out.reserve(pq.certified_len);
  BigInt p_prev = 0, p = 1;
  BigInt q_prev = 1, q = 0;
  for (std::size_t i = 0; i < pq.certified_len; ++i) {
    BigInt pn = pq.a[i] * p + p_prev;
    BigInt qn = pq.a[i] * q + q_prev;
    p_prev = std::exchange(p, pn);
    q_prev = std::exchange(q, qn);
    out.push_back({i, p, q});
  }
  return out;
}

Rational evaluate_continued_fraction(std::span<const BigInt> quotients) {
  if (quotients.empty()) throw PreconditionViolated("empty continued fraction");
  Rational value(quotients.back());
  for (auto it = quotients.rbegin() + 1; it != quotients.rend(); ++it) {
    value = Rational(*it) + 1 / value;
  }
  value.canonicalize();
  return value;
}

namespace {

Convergent scan_above(ConvergentStream& stream, const BigInt& threshold) {
  while (auto c = stream.next()) {
    if (c->q > threshold) return *c;
  }
  throw TerminatedBelowThreshold("expansion terminated before a denominator exceeded " +
                                 to_decimal(threshold));
}

}  // namespace

Convergent first_convergent_above(const BallSource& source, const BigInt& threshold, Precision prec,
                                  const BigInt& denominator_cap) {
  ConvergentStream stream(source, prec, denominator_cap);
  return scan_above(stream, threshold);
}

Convergent first_convergent_above(const Rational& value, const BigInt& threshold) {
  ConvergentStream stream(value);
  return scan_above(stream, threshold);
}

}  // namespace fibcert
