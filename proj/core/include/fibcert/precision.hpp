#pragma once

#include <cstdint>

namespace fibcert {

/// Working precision in decimal digits with an escalation ceiling.
struct Precision {
  std::uint32_t digits = 200;
  std::uint32_t max_digits = 1600;

  /// Mantissa bits for MPFR midpoints at this precision.
  [[nodiscard]] long bits() const;

  /// Doubles digits, clamped to max_digits. Returns false when already at the ceiling.
  bool escalate();

  [[nodiscard]] Precision with_digits(std::uint32_t d) const {
    Precision p = *this;
    p.digits = d;
    if (p.max_digits < d) p.max_digits = d;
    return p;
  }

  friend bool operator==(const Precision&, const Precision&) = default;
};

inline constexpr Precision kDefaultPrecision{};

}  // namespace fibcert
