#include "compop/weight.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "compop/common.hpp"
#include "compop/errors.hpp"

namespace compop {

// Fritsch–Carlson monotone cubic Hermite interpolant. Kept local instead of
// boost's pchip because the inverse needs the per-segment cubic.
struct WeightFunction::Pchip {
  std::vector<double> x, y, d;

  Pchip(const std::vector<std::pair<double, double>>& table) {
    for (const auto& [t, h] : table) {
      x.push_back(t);
      y.push_back(h);
    }
    const std::size_t n = x.size();
    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    d.assign(n, 0.0);
    if (n == 2) {
      d[0] = d[1] = delta[0];
      return;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
      const double w1 = 2.0 * h1 + h0, w2 = h1 + 2.0 * h0;
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
    auto end_slope = [](double h0, double h1, double del0, double del1) {
      double s = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
      if (s * del0 <= 0.0) return 0.0;
      if (del0 * del1 <= 0.0 && std::fabs(s) > std::fabs(3.0 * del0)) return 3.0 * del0;
      return s;
    };
    d[0] = end_slope(x[1] - x[0], x[2] - x[1], delta[0], delta[1]);
    d[n - 1] = end_slope(x[n - 1] - x[n - 2], x[n - 2] - x[n - 3], delta[n - 2], delta[n - 3]);
  }

  std::size_t segment(double t) const {
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
    return std::min(i, x.size() - 2);
  }

  double eval(std::size_t i, double t, double* deriv) const {
    const double h = x[i + 1] - x[i];
    const double s = (t - x[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    if (deriv) {
      const double d00 = 6 * s2 - 6 * s, d10 = 3 * s2 - 4 * s + 1;
      const double d01 = -6 * s2 + 6 * s, d11 = 3 * s2 - 2 * s;
      *deriv = (d00 * y[i] + d01 * y[i + 1]) / h + d10 * d[i] + d11 * d[i + 1];
    }
    return h00 * y[i] + h10 * h * d[i] + h01 * y[i + 1] + h11 * h * d[i + 1];
  }
};

WeightFunction WeightFunction::zero() { return WeightFunction(); }

WeightFunction WeightFunction::power(double c, double gamma) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw Error(ErrorCode::InvalidParameter, "power weight needs c > 0");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw Error(ErrorCode::InvalidParameter, "power weight needs gamma > 0");
  WeightFunction w;
  w.family_ = WeightFamily::Power;
  w.p1_ = c;
  w.p2_ = gamma;
  return w;
}

WeightFunction WeightFunction::log_power(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw Error(ErrorCode::InvalidParameter, "log-power weight needs beta > 0");
  WeightFunction w;
  w.family_ = WeightFamily::LogPower;
  w.p1_ = beta;
  return w;
}

WeightFunction WeightFunction::custom(std::vector<std::pair<double, double>> table) {
  if (table.size() < 2) throw Error(ErrorCode::InvalidParameter, "custom weight needs >= 2 points");
  if (table.front().first != 0.0 || table.front().second != 0.0)
    throw Error(ErrorCode::InvalidParameter, "custom weight table must start at (0, 0)");
  if (std::fabs(table.back().first - kPi) > 1e-12)
    throw Error(ErrorCode::InvalidParameter, "custom weight table must end at t = pi");
  table.back().first = kPi;
  for (std::size_t i = 0; i + 1 < table.size(); ++i) {
    if (!(table[i + 1].first > table[i].first))
      throw Error(ErrorCode::InvalidParameter, "custom weight abscissae must increase");
    if (!(table[i + 1].second > table[i].second))
      throw Error(ErrorCode::NonMonotone, "custom weight values must be strictly increasing");
  }
  WeightFunction w;
  w.family_ = WeightFamily::Custom;
  w.pchip_ = std::make_shared<const Pchip>(table);
  w.table_ = std::move(table);
  return w;
}

double WeightFunction::value(double t) const {
  if (t <= 0.0) return 0.0;
  switch (family_) {
    case WeightFamily::Zero:
      return 0.0;
    case WeightFamily::Power:
      return p1_ * std::pow(t, p2_);
    case WeightFamily::LogPower:
      if (t <= 1.0) return std::pow(1.0 - std::log(t), -p1_);
      return 1.0 + p1_ * (t - 1.0);
    case WeightFamily::Custom: {
      t = std::min(t, kPi);
      return pchip_->eval(pchip_->segment(t), t, nullptr);
    }
  }
  return 0.0;
}

double WeightFunction::derivative(double t) const {
  switch (family_) {
    case WeightFamily::Zero:
      return 0.0;
    case WeightFamily::Power:
      if (t <= 0.0) return p2_ < 1.0 ? INFINITY : (p2_ == 1.0 ? p1_ : 0.0);
      return p1_ * p2_ * std::pow(t, p2_ - 1.0);
    case WeightFamily::LogPower:
      if (t <= 0.0) return INFINITY;
      if (t <= 1.0) {
        const double L = 1.0 - std::log(t);
        return p1_ * std::pow(L, -p1_ - 1.0) / t;
      }
      return p1_;
    case WeightFamily::Custom: {
      t = std::clamp(t, 0.0, kPi);
      double d = 0.0;
      pchip_->eval(pchip_->segment(t), t, &d);
      return d;
    }
  }
  return 0.0;
}

double WeightFunction::inverse(double y) const {
  if (y <= 0.0) return 0.0;
  if (family_ == WeightFamily::Zero) return kPi;
  if (y >= max_value()) return kPi;
  switch (family_) {
    case WeightFamily::Power:
      return std::pow(y / p1_, 1.0 / p2_);
    case WeightFamily::LogPower:
      if (y <= 1.0) return std::exp(1.0 - std::pow(y, -1.0 / p1_));
      return 1.0 + (y - 1.0) / p1_;
    case WeightFamily::Custom: {
      const auto& P = *pchip_;
      auto it = std::upper_bound(P.y.begin(), P.y.end(), y);
      std::size_t i = static_cast<std::size_t>(it - P.y.begin()) - 1;
      i = std::min(i, P.x.size() - 2);
      double lo = P.x[i], hi = P.x[i + 1];
      double t = lo + (hi - lo) * (y - P.y[i]) / (P.y[i + 1] - P.y[i]);
      // safeguarded Newton on the monotone segment
      for (int it2 = 0; it2 < 100; ++it2) {
        double d = 0.0;
        const double f = P.eval(i, t, &d) - y;
        if (f > 0.0) hi = t; else lo = t;
        double next = (d > 0.0) ? t - f / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - t) <= 1e-16 * std::max(1.0, t)) {
          t = next;
          break;
        }
        t = next;
      }
      return t;
    }
    default:
      return kPi;
  }
}

std::string WeightFunction::describe() const {
  std::ostringstream os;
  switch (family_) {
    case WeightFamily::Zero: os << "zero"; break;
    case WeightFamily::Power: os << "power(c=" << p1_ << ", gamma=" << p2_ << ")"; break;
    case WeightFamily::LogPower: os << "logpower(beta=" << p1_ << ")"; break;
    case WeightFamily::Custom: os << "custom(" << table_.size() << " knots)"; break;
  }
  return os.str();
}

const char* to_string(WeightShape s) {
  switch (s) {
    case WeightShape::Linear: return "linear";
    case WeightShape::Concave: return "concave";
    case WeightShape::Convex: return "convex";
    case WeightShape::Neither: return "neither";
  }
  return "neither";
}

AdmissibilityReport admissibility_report(const WeightFunction& h, std::span<const double> grid,
                                         double constant) {
  if (grid.size() < 16) throw Error(ErrorCode::DomainError, "admissibility grid needs >= 16 points");
  std::vector<double> ts(grid.begin(), grid.end());
  std::sort(ts.begin(), ts.end());
  if (!(ts.front() > 0.0) || ts.back() > kPi / 2 + 1e-15)
    throw Error(ErrorCode::DomainError, "admissibility grid must lie in (0, pi/2]");

  AdmissibilityReport r;
  r.constant = constant;
  r.doubling_min = r.slope_min = INFINITY;
  r.doubling_max = r.slope_max = -INFINITY;
  for (double t : ts) {
    const double ht = h(t);
    const double dbl = h(2.0 * t) / ht;
    const double slope = t * h.derivative(t) / ht;
    r.doubling_min = std::min(r.doubling_min, dbl);
    r.doubling_max = std::max(r.doubling_max, dbl);
    r.slope_min = std::min(r.slope_min, slope);
    r.slope_max = std::max(r.slope_max, slope);
  }

  // Convexity from the sequence of chord slopes.
  bool nondecreasing = true, nonincreasing = true;
  double prev = NAN;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double s = (h(ts[i + 1]) - h(ts[i])) / (ts[i + 1] - ts[i]);
    if (!std::isnan(prev)) {
      const double tol = 1e-10 * std::max(std::fabs(s), std::fabs(prev));
      if (s < prev - tol) nondecreasing = false;
      if (s > prev + tol) nonincreasing = false;
    }
    prev = s;
  }
  if (nondecreasing && nonincreasing) r.shape = WeightShape::Linear;
  else if (nondecreasing) r.shape = WeightShape::Convex;
  else if (nonincreasing) r.shape = WeightShape::Concave;
  else r.shape = WeightShape::Neither;

  const double lo = (1.0 / constant) * (1.0 - 1e-12), hi = constant * (1.0 + 1e-12);
  auto inside = [&](double a, double b) { return a >= lo && b <= hi; };
  r.admissible = inside(r.doubling_min, r.doubling_max) && inside(r.slope_min, r.slope_max) &&
                 r.shape != WeightShape::Neither;
  return r;
}

}  // namespace compop
