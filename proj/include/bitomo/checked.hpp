#pragma once

#include <cstdint>
#include <string>

#include "bitomo/errors.hpp"

namespace bitomo {

// Exact signed 64-bit arithmetic that refuses to wrap around.  All the
// counting identities in this library are exact, so a silent overflow would
// corrupt results; these helpers throw OverflowError instead.

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw OverflowError("integer overflow in " + std::to_string(a) + " + " +
                        std::to_string(b));
  }
  return out;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_sub_overflow(a, b, &out)) {
    throw OverflowError("integer overflow in " + std::to_string(a) + " - " +
                        std::to_string(b));
  }
  return out;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw OverflowError("integer overflow in " + std::to_string(a) + " * " +
                        std::to_string(b));
  }
  return out;
}

/// base^exp with overflow detection; exp >= 0.
inline std::int64_t checked_pow(std::int64_t base, int exp) {
  if (exp < 0) throw DomainError("checked_pow: negative exponent");
  std::int64_t result = 1;
  for (int i = 0; i < exp; ++i) result = checked_mul(result, base);
  return result;
}

}  // namespace bitomo
