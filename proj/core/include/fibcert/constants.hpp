#pragma once

#include <cstdint>

#include "fibcert/ball.hpp"

namespace fibcert {

/// (1 + sqrt 5) / 2
BallReal golden_ratio(const Precision& prec);
BallReal sqrt5(const Precision& prec);
BallReal log_golden_ratio(const Precision& prec);
BallReal log5(const Precision& prec);

/// log(F_l) / log(phi), the slope of the linear form in the reduction step. l >= 3.
BallReal fib_log_ratio(std::uint32_t l, const Precision& prec);

/// log(sqrt 5) / log(phi), the shift of the linear form.
BallReal sqrt5_log_ratio(const Precision& prec);

BallSource fib_log_ratio_source(std::uint32_t l);
BallSource sqrt5_log_ratio_source();

}  // namespace fibcert
