#pragma once

#include <stdexcept>
#include <string>

namespace fibcert {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A ball touched zero (or went negative) where a positive argument is required.
class NonPositiveInput : public Error {
 public:
  using Error::Error;
};

/// A ball is too wide for the requested certified decision.
class AmbiguousPrecision : public Error {
 public:
  using Error::Error;
};

/// Escalation reached the precision ceiling without certifying a result.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

/// A continued fraction ended before a convergent denominator crossed the threshold.
class TerminatedBelowThreshold : public Error {
 public:
  using Error::Error;
};

/// Convergent denominators exceeded the configured cap.
class DenominatorCapExceeded : public Error {
 public:
  using Error::Error;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class VerificationFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace fibcert
