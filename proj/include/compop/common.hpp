#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace compop {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce an angle to [0, 2π).
inline double wrap_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Arc-length distance between two points of the circle, in [0, π].
inline double circle_distance(double a, double b) {
  double d = std::fabs(wrap_angle(a) - wrap_angle(b));
  return d > kPi ? kTwoPi - d : d;
}

}  // namespace compop
