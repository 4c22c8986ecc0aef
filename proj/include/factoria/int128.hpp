#pragma once

#include <cstdint>
#include <string>

#include "factoria/error.hpp"

namespace factoria {

using u128 = unsigned __int128;

inline std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return s;
}

// Parses a decimal string; throws UsageError on malformed or out-of-range input.
u128 parse_u128(const std::string& text);

// Checked arithmetic. `n` names the integer whose count is being formed, so
// the overflow message points at the first offending index.
inline u128 checked_add(u128 a, u128 b, std::uint64_t n) {
  u128 r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw OverflowError("count overflow (128-bit) at n = " + std::to_string(n), n);
  }
  return r;
}

inline u128 checked_mul(u128 a, u128 b, std::uint64_t n) {
  u128 r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw OverflowError("count overflow (128-bit) at n = " + std::to_string(n), n);
  }
  return r;
}

inline long double to_long_double(u128 v) { return static_cast<long double>(v); }

}  // namespace factoria
