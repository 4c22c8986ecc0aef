#include "factoria/real.hpp"

#include <cmath>
#include <limits>

namespace factoria {

namespace {
std::recursive_mutex& precision_mutex() {
  static std::recursive_mutex m;
  return m;
}
}  // namespace

PrecisionGuard::PrecisionGuard(int digits10)
    : lock_(precision_mutex()), previous_(Real::default_precision()) {
  Real::default_precision(static_cast<unsigned>(digits10));
}

PrecisionGuard::~PrecisionGuard() { Real::default_precision(previous_); }

std::string to_decimal(const Real& x, int digits) {
  return x.str(digits, std::ios_base::scientific);
}

int certified_digits(const Real& value, const Real& radius) {
  if (radius <= 0) return std::numeric_limits<int>::max();
  if (value == 0) return 0;
  Real rel = abs(radius / value);
  double d = -log10(rel).convert_to<double>();
  if (!std::isfinite(d)) return d > 0 ? std::numeric_limits<int>::max() : 0;
  return d < 0 ? 0 : static_cast<int>(std::floor(d));
}

}  // namespace factoria
