#include "compop/quadrature.hpp"

#include <map>
#include <mutex>

#include "compop/common.hpp"

namespace compop {

namespace {

GaussRule compute_rule(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    r.nodes[i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
  return it->second;
}

std::vector<double> graded_breakpoints(double a, double b, std::span<const double> interior,
                                       std::span<const double> focus, double scale, double ratio) {
  std::vector<double> pts{a, b};
  for (double x : interior)
    if (x > a && x < b) pts.push_back(x);
  for (double c : focus) {
    if (c > a && c < b) pts.push_back(c);
    if (!(scale > 0.0)) continue;
    for (double w = scale; w < (b - a); w *= ratio) {
      if (c - w > a && c - w < b) pts.push_back(c - w);
      if (c + w > a && c + w < b) pts.push_back(c + w);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double x, double y) { return std::fabs(x - y) <= 1e-15 * (1.0 + std::fabs(x)); }),
            pts.end());
  return pts;
}

}  // namespace compop
