#include "fibcert/constants.hpp"

#include "fibcert/errors.hpp"
#include "fibcert/fibkit.hpp"

namespace fibcert {

BallReal sqrt5(const Precision& prec) { return sqrt(BallReal::exact(5, prec)); }

BallReal golden_ratio(const Precision& prec) {
  return (BallReal::exact(1, prec) + sqrt5(prec)) / BigInt(2);
}

BallReal log_golden_ratio(const Precision& prec) { return log(golden_ratio(prec)); }

BallReal log5(const Precision& prec) { return log(BallReal::exact(5, prec)); }

BallReal fib_log_ratio(std::uint32_t l, const Precision& prec) {
  if (l < 3) throw PreconditionViolated("fib_log_ratio needs l >= 3 (F_1 = F_2 = 1)");
  return log(BallReal::exact(fib(l), prec)) / log_golden_ratio(prec);
}

BallReal sqrt5_log_ratio(const Precision& prec) {
  return log5(prec) / (BigInt(2) * log_golden_ratio(prec));
}

BallSource fib_log_ratio_source(std::uint32_t l) {
  return [l](const Precision& prec) { return fib_log_ratio(l, prec); };
}

BallSource sqrt5_log_ratio_source() {
  return [](const Precision& prec) { return sqrt5_log_ratio(prec); };
}

}  // namespace fibcert
