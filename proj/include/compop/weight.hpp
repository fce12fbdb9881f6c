#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace compop {

enum class WeightFamily { Zero, Power, LogPower, Custom };

/// Increasing weight h on [0, π] with h(0) = 0, as used in the boundary
/// modulus e^{-h(d(ζ,K))} of the outer symbols.
///
/// LogPower(β) is 1/log^β(e/t) on (0, 1] continued by its tangent line
/// 1 + β(t-1) on (1, π], where the formula stops being increasing.
class WeightFunction {
 public:
  static WeightFunction zero();
  static WeightFunction power(double c, double gamma);
  static WeightFunction log_power(double beta);
  /// Monotone piecewise-cubic interpolant of the table; t must run from 0 to π
  /// and h must be strictly increasing from h(0) = 0.
  static WeightFunction custom(std::vector<std::pair<double, double>> table);

  WeightFamily family() const { return family_; }
  double c() const { return p1_; }
  double gamma() const { return p2_; }
  double beta() const { return p1_; }
  const std::vector<std::pair<double, double>>& table() const { return table_; }

  double operator()(double t) const { return value(t); }
  double value(double t) const;
  double derivative(double t) const;
  /// Inverse on [0, h(π)]; arguments above h(π) return π.
  double inverse(double y) const;

  double max_value() const { return value(3.141592653589793); }
  bool is_zero() const { return family_ == WeightFamily::Zero; }

  std::string describe() const;

 private:
  WeightFunction() = default;

  struct Pchip;

  WeightFamily family_ = WeightFamily::Zero;
  double p1_ = 0.0;
  double p2_ = 0.0;
  std::vector<std::pair<double, double>> table_;
  std::shared_ptr<const Pchip> pchip_;
};

enum class WeightShape { Linear, Concave, Convex, Neither };

const char* to_string(WeightShape s);

struct AdmissibilityReport {
  double doubling_min = 0.0, doubling_max = 0.0;  // h(2t)/h(t)
  double slope_min = 0.0, slope_max = 0.0;        // t h'(t)/h(t)
  WeightShape shape = WeightShape::Neither;
  double constant = 4.0;
  bool admissible = false;
};

/// Ratio ranges and convexity class of h over the grid, which must lie in
/// (0, π/2] and hold at least 16 points.
AdmissibilityReport admissibility_report(const WeightFunction& h, std::span<const double> grid,
                                         double constant = 4.0);

}  // namespace compop
