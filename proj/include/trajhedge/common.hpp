#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace trajhedge {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input or parameter that violates a precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Numerically degenerate outcome (e.g. an infinite root bound).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Rounds to the nearest integer, ties away from zero.
///
/// Quotients within a relative 1e-9 of a half-integer count as ties, so that
/// decimal inputs such as 1.005 / 0.01 resolve the same way as exact ones.
[[nodiscard]] std::int64_t round_half_away(double v);

/// Nearest grid index of `x` on a grid of step `dhat`.
[[nodiscard]] inline std::int64_t to_grid(double x, double dhat) {
  return round_half_away(x / dhat);
}

/// True if `value` reaches `threshold`, allowing for decimal representation
/// error in the last few ulps.
[[nodiscard]] inline bool reaches(double value, double threshold) {
  return value >= threshold - 1e-12 * (threshold > 1.0 ? threshold : 1.0);
}

}  // namespace trajhedge
