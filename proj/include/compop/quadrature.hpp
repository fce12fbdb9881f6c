#pragma once

// Composite Gauss–Legendre quadrature with global adaptive bisection.
//
// The integrator keeps a pool of panels; each panel carries the one-panel rule
// and the two-half-panel rule, and their difference is the panel's error
// estimate. The worst panel is bisected until the summed estimates fall under
// max(abs_tol, rel_tol·|I|) for every component of the integrand.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <span>
#include <vector>

namespace compop {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss–Legendre rule of the given order (Newton on P_n; cached).
const GaussRule& gauss_legendre(int order);

template <class V>
struct QuadTraits;

template <>
struct QuadTraits<double> {
  static constexpr std::size_t size = 1;
  static double magnitude(double v, std::size_t) { return std::fabs(v); }
  static double zero() { return 0.0; }
};

template <>
struct QuadTraits<std::complex<double>> {
  static constexpr std::size_t size = 1;
  static double magnitude(std::complex<double> v, std::size_t) { return std::abs(v); }
  static std::complex<double> zero() { return {0.0, 0.0}; }
};

template <class T, std::size_t N>
struct QuadTraits<std::array<T, N>> {
  static constexpr std::size_t size = N;
  static double magnitude(const std::array<T, N>& v, std::size_t i) { return std::abs(v[i]); }
  static std::array<T, N> zero() {
    std::array<T, N> z{};
    z.fill(T{});
    return z;
  }
};

template <class T, std::size_t N>
std::array<T, N> operator+(std::array<T, N> a, const std::array<T, N>& b) {
  for (std::size_t i = 0; i < N; ++i) a[i] += b[i];
  return a;
}
template <class T, std::size_t N>
std::array<T, N> operator-(std::array<T, N> a, const std::array<T, N>& b) {
  for (std::size_t i = 0; i < N; ++i) a[i] -= b[i];
  return a;
}
template <class T, std::size_t N>
std::array<T, N> operator*(double s, std::array<T, N> a) {
  for (auto& x : a) x *= s;
  return a;
}

struct QuadOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-15;
  int max_panels = 40000;
  int order = 16;
};

template <class V>
struct QuadResult {
  V value;
  double error = 0.0;  // max over components of summed panel estimates
  int panels = 0;
  bool converged = false;
};

namespace detail {

template <class V, class F>
V gauss_panel(F& f, double a, double b, const GaussRule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  V acc = QuadTraits<V>::zero();
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc = acc + (rule.weights[i] * half) * f(mid + half * rule.nodes[i]);
  }
  return acc;
}

}  // namespace detail

/// Integrate f over [breakpoints.front(), breakpoints.back()], starting from the
/// panels delimited by the (sorted) breakpoints.
template <class F>
auto integrate(F&& f, std::span<const double> breakpoints, const QuadOptions& opt = {})
    -> QuadResult<std::decay_t<decltype(f(0.0))>> {
  using V = std::decay_t<decltype(f(0.0))>;
  using Tr = QuadTraits<V>;
  constexpr std::size_t K = Tr::size;
  const GaussRule& rule = gauss_legendre(opt.order);

  struct Panel {
    double a, b;
    V left, right;  // rules on the two halves
    std::array<double, K> err;
  };
  std::vector<Panel> panels;
  panels.reserve(64);

  auto make_panel = [&](double a, double b, const V& whole) {
    const double m = 0.5 * (a + b);
    Panel p{a, b, detail::gauss_panel<V>(f, a, m, rule), detail::gauss_panel<V>(f, m, b, rule), {}};
    const V diff = (p.left + p.right) - whole;
    for (std::size_t i = 0; i < K; ++i) p.err[i] = Tr::magnitude(diff, i);
    return p;
  };

  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    const double a = breakpoints[k], b = breakpoints[k + 1];
    if (!(b > a)) continue;
    panels.push_back(make_panel(a, b, detail::gauss_panel<V>(f, a, b, rule)));
  }

  QuadResult<V> res{Tr::zero(), 0.0, 0, false};
  if (panels.empty()) {
    res.converged = true;
    return res;
  }

  auto totals = [&](V& value, std::array<double, K>& err) {
    value = Tr::zero();
    err.fill(0.0);
    for (const auto& p : panels) {
      value = value + (p.left + p.right);
      for (std::size_t i = 0; i < K; ++i) err[i] += p.err[i];
    }
  };

  V value;
  std::array<double, K> err;
  totals(value, err);

  auto tol_of = [&](const V& v, std::size_t i) {
    return std::max(opt.abs_tol, opt.rel_tol * Tr::magnitude(v, i));
  };
  auto scaled = [&](const Panel& p, const V& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < K; ++i) s = std::max(s, p.err[i] / tol_of(v, i));
    return s;
  };
  auto done = [&](const V& v, const std::array<double, K>& e) {
    for (std::size_t i = 0; i < K; ++i)
      if (!(e[i] <= tol_of(v, i))) return false;
    return true;
  };

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry> heap;
  for (std::size_t i = 0; i < panels.size(); ++i) heap.emplace(scaled(panels[i], value), i);

  int refreshes = 0;
  while (!done(value, err) && static_cast<int>(panels.size()) < opt.max_panels) {
    const std::size_t idx = heap.top().second;
    heap.pop();
    const Panel p = panels[idx];
    const double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) break;  // interval exhausted in floating point
    Panel lo = make_panel(p.a, m, p.left);
    Panel hi = make_panel(m, p.b, p.right);
    value = value - (p.left + p.right) + (lo.left + lo.right) + (hi.left + hi.right);
    for (std::size_t i = 0; i < K; ++i) err[i] += lo.err[i] + hi.err[i] - p.err[i];
    panels[idx] = lo;
    panels.push_back(hi);
    heap.emplace(scaled(panels[idx], value), idx);
    heap.emplace(scaled(panels.back(), value), panels.size() - 1);
    if (++refreshes % 512 == 0) totals(value, err);  // limit drift of running sums
  }

  totals(value, err);
  res.value = value;
  res.panels = static_cast<int>(panels.size());
  res.converged = done(value, err);
  res.error = 0.0;
  for (std::size_t i = 0; i < K; ++i) res.error = std::max(res.error, err[i]);
  return res;
}

template <class F>
auto integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
  const std::array<double, 2> bp{a, b};
  return integrate(std::forward<F>(f), std::span<const double>(bp), opt);
}

/// Breakpoints a = x_0 < ... < x_m = b that include the given interior points
/// and, around each focus point c with scale w, the geometric sequence
/// c ± w·ratio^k (k >= 0) clipped to [a, b].
std::vector<double> graded_breakpoints(double a, double b, std::span<const double> interior,
                                       std::span<const double> focus, double scale, double ratio = 2.0);

}  // namespace compop
