#include "compop/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "compop/errors.hpp"
#include "compop/io.hpp"
#include "compop/levelset.hpp"
#include "compop/quadrature.hpp"

namespace compop {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Finite: return "finite";
    case Verdict::Divergent: return "divergent";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

void classify_shells(CriterionResult& r) {
  const auto& S = r.shells;
  const std::size_t n = S.size();
  double sum = 0.0;
  for (const auto& s : S) sum += s.integral;
  r.partial_sum = sum;
  r.tail_estimate = 0.0;
  r.kappa = std::numeric_limits<double>::quiet_NaN();
  r.last_ratio = std::numeric_limits<double>::quiet_NaN();
  r.value = sum;
  r.verdict = Verdict::Inconclusive;
  if (n < static_cast<std::size_t>(kMinShells)) {
    r.warnings.push_back("fewer than " + std::to_string(kMinShells) + " shells");
    return;
  }

  bool trailing_zero = true;
  for (std::size_t i = n - 5; i < n; ++i) trailing_zero = trailing_zero && S[i].integral == 0.0;
  if (trailing_zero) {
    r.verdict = Verdict::Finite;
    r.last_ratio = 0.0;
    return;
  }

  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  bool ratios_ok = true;
  for (std::size_t i = n - 5; i < n; ++i) {
    if (!(S[i - 1].integral > 0.0)) {
      ratios_ok = false;
      break;
    }
    const double q = S[i].integral / S[i - 1].integral;
    rmin = std::min(rmin, q);
    rmax = std::max(rmax, q);
    r.last_ratio = q;
  }
  if (ratios_ok && rmax <= 0.9) {
    r.verdict = Verdict::Finite;
    r.tail_estimate = S.back().integral * rmax / (1.0 - rmax);
    r.value = sum + r.tail_estimate;
    return;
  }
  if (ratios_ok && rmin >= 1.1) {
    r.verdict = Verdict::Divergent;
    r.value = std::numeric_limits<double>::infinity();
    return;
  }

  // Least-squares slope of log I_k against log k over the last 10 shells.
  const std::size_t m = std::min<std::size_t>(10, n);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t used = 0;
  for (std::size_t i = n - m; i < n; ++i) {
    if (!(S[i].integral > 0.0)) continue;
    const double x = std::log(static_cast<double>(S[i].k + 1));
    const double y = std::log(S[i].integral);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    ++used;
  }
  if (used < 4) return;
  const double slope = (used * sxy - sx * sy) / (used * sxx - sx * sx);
  r.kappa = -slope;
  if (r.kappa > 1.02) {
    r.verdict = Verdict::Finite;
    const double K = S.back().k + 1.0;
    r.tail_estimate = S.back().integral * K / (r.kappa - 1.0);
    r.value = sum + r.tail_estimate;
  } else if (r.kappa < 0.98) {
    r.verdict = Verdict::Divergent;
    r.value = std::numeric_limits<double>::infinity();
  }
}

CriterionResult shell_integral(std::string id, const std::function<double(double)>& f, double x_max,
                               int n_shells, std::span<const double> kinks) {
  CriterionResult r;
  r.id = std::move(id);
  r.eps_high = x_max;
  r.eps_low = x_max;
  QuadOptions qo;
  qo.rel_tol = 1e-10;
  qo.abs_tol = 1e-300;
  double cumulative = 0.0;
  for (int k = 0; k < n_shells; ++k) {
    const double hi = std::ldexp(x_max, -k), lo = std::ldexp(x_max, -k - 1);
    const double flo = f(lo);
    if (!std::isfinite(flo) || std::fabs(flo) > 1e290) {
      r.warnings.push_back("integrand overflows below x = " + num(hi) + "; shells stop there");
      break;
    }
    std::vector<double> bp{lo};
    for (double x : kinks)
      if (x > lo && x < hi) bp.push_back(x);
    std::sort(bp.begin() + 1, bp.end());
    bp.push_back(hi);
    auto res = integrate(f, std::span<const double>(bp), qo);
    if (!std::isfinite(res.value)) {
      r.warnings.push_back("non-finite shell integral at k = " + std::to_string(k));
      break;
    }
    if (!res.converged) r.warnings.push_back("shell " + std::to_string(k) + " quadrature not converged");
    cumulative += res.value;
    r.shells.push_back({k, lo, hi, res.value, cumulative, f(std::sqrt(lo * hi))});
    r.eps_low = lo;
  }
  classify_shells(r);
  return r;
}

namespace {

constexpr int kProfileLevels = 20;

// |E| as a function of u = 1 - s, power-law interpolated between samples.
struct ProfileInterp {
  std::vector<double> u, E;  // ascending u

  double at(double x) const {
    auto it = std::lower_bound(u.begin(), u.end(), x);
    if (it == u.begin()) return E.front();
    if (it == u.end()) return E.back();
    const std::size_t i = static_cast<std::size_t>(it - u.begin());
    const double ua = u[i - 1], ub = u[i], Ea = E[i - 1], Eb = E[i];
    if (Ea > 0.0 && Eb > 0.0) return Ea * std::pow(x / ua, std::log(Eb / Ea) / std::log(ub / ua));
    return Ea + (Eb - Ea) * (x - ua) / (ub - ua);
  }

  // ∫_{ua}^{ub} E(u)^{p/2} u^{-q} du on one interpolation piece.
  static double piece(double ua, double ub, double Ea, double Eb, double p, double q) {
    if (Ea > 0.0 && Eb > 0.0) {
      const double L = std::log(ub / ua);
      const double m = std::log(Eb / Ea) / L;
      const double e1 = m * p / 2 - q + 1.0;
      const double scale = std::pow(Ea, p / 2) * std::pow(ua, 1.0 - q);
      return scale * (std::fabs(e1 * L) < 1e-12 ? L : std::expm1(e1 * L) / e1);
    }
    if (Ea == 0.0 && Eb == 0.0) return 0.0;
    const GaussRule& g = gauss_legendre(32);
    const double half = 0.5 * (ub - ua), mid = 0.5 * (ua + ub);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double x = mid + half * g.nodes[i];
      const double Ex = Ea + (Eb - Ea) * (x - ua) / (ub - ua);
      acc += g.weights[i] * std::pow(Ex, p / 2) * std::pow(x, -q);
    }
    return acc * half;
  }
};

}  // namespace

CriterionResult levelset_integral(const LevelSetProfile& profile, double p, CriterionMode mode) {
  if (!(p >= 2.0)) throw Error(ErrorCode::InvalidParameter, "levelset_integral needs p >= 2");
  const double q = mode == CriterionMode::Sufficient ? 1.0 + p / 2 : 2.0;

  ProfileInterp P;
  for (auto it = profile.samples.rbegin(); it != profile.samples.rend(); ++it) {
    P.u.push_back(1.0 - it->first);
    P.E.push_back(it->second);
  }
  auto has = [&](double u) {
    return std::any_of(P.u.begin(), P.u.end(), [&](double x) { return std::fabs(x - u) <= 1e-12; });
  };
  for (int k = 0; k <= kProfileLevels; ++k)
    if (!has(std::ldexp(1.0, -k)))
      throw Error(ErrorCode::InsufficientResolution,
                  "profile lacks the sample s = 1 - 2^-" + std::to_string(k));

  CriterionResult r;
  r.id = mode == CriterionMode::Sufficient ? "levelset_sufficient" : "levelset_necessary";
  r.p = p;
  r.eps_high = 1.0;
  r.eps_low = std::ldexp(1.0, -kProfileLevels);
  double cumulative = 0.0;
  for (int k = 0; k < kProfileLevels; ++k) {
    const double lo = std::ldexp(1.0, -k - 1), hi = std::ldexp(1.0, -k);
    std::vector<double> nodes{lo};
    for (double x : P.u)
      if (x > lo * (1 + 1e-12) && x < hi * (1 - 1e-12)) nodes.push_back(x);
    nodes.push_back(hi);
    double I = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
      I += ProfileInterp::piece(nodes[i], nodes[i + 1], P.at(nodes[i]), P.at(nodes[i + 1]), p, q);
    cumulative += I;
    const double mid = std::sqrt(lo * hi);
    r.shells.push_back({k, lo, hi, I, cumulative, std::pow(P.at(mid), p / 2) * std::pow(mid, -q)});
  }
  classify_shells(r);
  return r;
}

namespace {

// Finest gap of a Cantor stage, from its ratio sequence.
double finest_cantor_gap(const std::vector<double>& ratios) {
  double len = kTwoPi, gap = kTwoPi;
  for (double r : ratios) {
    gap = len * (1.0 - 2.0 * r);
    len *= r;
  }
  return gap;
}

}  // namespace

CriterionResult hK_integral(const WeightFunction& h, const BoundarySet& K, double p, CriterionMode mode,
                            int n_shells) {
  if (!(p >= 2.0)) throw Error(ErrorCode::InvalidParameter, "hK_integral needs p >= 2");
  if (h.is_zero()) throw Error(ErrorCode::InvalidParameter, "hK_integral needs a nonzero weight");
  if (K.empty()) throw Error(ErrorCode::InvalidParameter, "hK_integral needs a nonempty set");
  const double q = mode == CriterionMode::Sufficient ? 1.0 + p / 2 : 2.0;

  std::vector<double> kinks;
  int shells = n_shells;
  if (K.is_cantor()) {
    if (K.cantor_level() > 0) {
      const double cut = 0.5 * finest_cantor_gap(K.cantor_ratios());
      shells = std::min(n_shells, static_cast<int>(std::floor(std::log2(kPi / cut))));
    }
  } else {
    const auto& arcs = K.arcs();
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      const double next = i + 1 < arcs.size() ? arcs[i + 1].a : arcs[0].a + kTwoPi;
      kinks.push_back(0.5 * (next - arcs[i].b));
    }
  }
  auto f = [&](double t) {
    return h.derivative(t) * std::pow(h(t), -q) * std::pow(K.neighborhood_measure(t), p / 2);
  };
  CriterionResult r = shell_integral(mode == CriterionMode::Sufficient ? "hK_sufficient" : "hK_necessary", f, kPi,
                                     shells, kinks);
  r.p = p;
  if (shells < n_shells)
    r.warnings.push_back("shells stop at half the finest Cantor gap (t = " + num(r.eps_low) + ")");
  return r;
}

double tail_integral(const WeightFunction& h, double theta) {
  if (!(theta > 0.0 && theta <= kPi)) throw Error(ErrorCode::DomainError, "tail_integral needs θ in (0, π]");
  std::vector<double> bp{theta};
  for (double x = 2 * theta; x < kPi; x *= 2) bp.push_back(x);
  bp.push_back(kPi);
  QuadOptions qo;
  qo.rel_tol = 1e-12;
  qo.abs_tol = 1e-300;
  auto res = integrate([&](double s) { return h(s) / (s * s); }, std::span<const double>(bp), qo);
  if (!res.converged) throw Error(ErrorCode::QuadratureNotConverged, "tail integral");
  return res.value;
}

OnePointResult onepoint_integrals(const WeightFunction& h, double p, int n_shells) {
  if (!(p > 0.0)) throw Error(ErrorCode::InvalidParameter, "onepoint_integrals needs p > 0");
  if (h.is_zero()) throw Error(ErrorCode::InvalidParameter, "onepoint_integrals needs a nonzero weight");
  OnePointResult out;

  std::vector<double> grid;
  for (int k = 1; k <= 40; ++k) grid.push_back(kPi / 2 * std::pow(2.0, -0.5 * (k - 1)));
  if (!admissibility_report(h, grid).admissible) out.warnings.push_back("weight is not flagged admissible");

  // H at the shell endpoints t_k = π 2^{-k}, accumulated from the top.
  const GaussRule& g = gauss_legendre(24);
  auto gl = [&](double a, double b) {
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double s = mid + half * g.nodes[i];
      acc += g.weights[i] * h(s) / (s * s);
    }
    return acc * half;
  };
  std::vector<double> Hk(n_shells + 1, 0.0);
  for (int k = 0; k < n_shells; ++k) Hk[k + 1] = Hk[k] + gl(std::ldexp(kPi, -k - 1), std::ldexp(kPi, -k));
  auto H = [&](double t) {
    const int k = std::clamp(static_cast<int>(std::floor(std::log2(kPi / t))), 0, n_shells - 1);
    const double top = std::ldexp(kPi, -k);
    return Hk[k] + (t < top ? gl(t, top) : 0.0);
  };

  // Hypotheses: t^2 = o(h(t)) and h(θ) = o(θ H(θ)), judged on the dyadic tail.
  {
    std::vector<double> r1, r2;
    for (int k = std::max(1, n_shells - 60); k <= n_shells; ++k) {
      const double t = std::ldexp(kPi, -k);
      r1.push_back(t * t / h(t));
      r2.push_back(h(t) / (t * Hk[k]));
    }
    auto decreasing_to = [](const std::vector<double>& v, double bound) {
      for (std::size_t i = v.size() - 10; i + 1 < v.size(); ++i)
        if (v[i + 1] > v[i] * (1 + 1e-12)) return false;
      return v.back() < bound;
    };
    if (!decreasing_to(r1, 1e-3)) out.warnings.push_back("hypothesis t^2 = o(h(t)) fails numerically");
    if (!decreasing_to(r2, 0.05)) out.warnings.push_back("hypothesis h(θ) = o(θ∫_θ^π h(t)/t^2 dt) fails numerically");
  }

  out.compactness = shell_integral("onepoint_compactness", [&](double t) { return h(t) / (t * t); }, kPi, n_shells);
  out.compactness.p = p;
  // Only the end t -> 0 carries the criterion; at t = π the factor H vanishes and
  // would add a spurious singularity for p >= 4, so the range stops at π/2.
  const double e = p / 2 - 1.0;
  out.schatten = shell_integral(
      "onepoint_schatten", [&](double t) { return 1.0 / (h(t) * std::pow(H(t), e)); }, kPi / 2, n_shells);
  out.schatten.p = p;
  out.compactness.warnings.insert(out.compactness.warnings.end(), out.warnings.begin(), out.warnings.end());
  out.schatten.warnings.insert(out.schatten.warnings.end(), out.warnings.begin(), out.warnings.end());
  return out;
}

PeriodicFunction weight_trace(const WeightFunction& h, const BoundarySet& K) {
  PeriodicFunction g;
  g.f = [h, K](double theta) { return h(K.distance(theta)); };
  if (!K.empty() && K.arc_count() <= 4096) g.kinks = K.kinks();
  return g;
}

double conjugate_function(const PeriodicFunction& g, double theta, const ConjugateOptions& opt) {
  auto F = [&](double t) { return (g.f(theta - t) - g.f(theta + t)) / std::tan(0.5 * t); };
  std::vector<double> interior;
  for (double k : g.kinks) {
    for (double t : {wrap_angle(theta - k), wrap_angle(k - theta)})
      if (t > 0.0 && t < kPi) interior.push_back(t);
  }
  const std::array<double, 1> focus{0.0};
  auto bp = graded_breakpoints(0.0, kPi, interior, focus, 1e-8);
  QuadOptions qo;
  qo.rel_tol = 1e-2 * opt.tolerance;
  qo.abs_tol = 1e-2 * opt.tolerance * kTwoPi;
  auto res = integrate(F, std::span<const double>(bp), qo);
  if (!res.converged) throw Error(ErrorCode::QuadratureNotConverged, "conjugate function");
  return res.value / kTwoPi;
}

double weight_conjugate(const WeightFunction& h, double theta, const ConjugateOptions& opt) {
  return -conjugate_function(weight_trace(h, BoundarySet::point(0.0)), theta, opt);
}

double psi(const WeightFunction& h, double theta, double tolerance) {
  if (!(theta > 0.0 && theta < kPi / 4)) throw Error(ErrorCode::DomainError, "psi needs θ in (0, π/4)");
  if (h.is_zero()) return 0.0;
  auto f = [&](double s) { return h.derivative(s) * std::log((s + theta) / (s - theta)); };
  const std::array<double, 1> focus{2 * theta};
  auto bp = graded_breakpoints(2 * theta, kPi - 2 * theta, {}, focus, 0.25 * theta);
  QuadOptions qo;
  qo.rel_tol = 0.1 * tolerance;
  qo.abs_tol = 0.1 * tolerance * kPi;
  auto res = integrate(f, std::span<const double>(bp), qo);
  if (!res.converged) throw Error(ErrorCode::QuadratureNotConverged, "psi");
  return res.value / kPi;
}

SandwichFit sandwich_fit(const WeightFunction& h, std::span<const double> theta_grid, bool enforce_lower_bound) {
  SandwichFit fit;
  ConjugateOptions co;
  co.tolerance = 1e-10;
  for (double th : theta_grid) {
    if (!(th > 0.0 && th <= kPi / 4)) throw Error(ErrorCode::DomainError, "sandwich grid must lie in (0, π/4]");
    fit.theta.push_back(th);
    fit.h.push_back(h(th));
    fit.psi.push_back(th < kPi / 4 ? psi(h, th, 1e-10) : 0.0);
    fit.conj.push_back(h.is_zero() ? 0.0 : weight_conjugate(h, th, co));
  }
  const std::size_t n = fit.theta.size();
  std::vector<double> D(n), X(n), Y(n);
  fit.max_lower_violation = -std::numeric_limits<double>::infinity();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    D[i] = fit.conj[i] - fit.psi[i];
    X[i] = fit.h[i];
    Y[i] = fit.theta[i] * fit.theta[i];
    mx += X[i] / n;
    my += Y[i] / n;
    fit.max_lower_violation = std::max(fit.max_lower_violation, -D[i]);
  }
  if (enforce_lower_bound && fit.max_lower_violation > 1e-6) {
    std::ostringstream os;
    os << "Ψ exceeds the conjugate by " << fit.max_lower_violation;
    throw Error(ErrorCode::LowerBoundViolated, os.str());
  }

  // Two-variable LP: minimise a·mx + b·my over {a, b >= 0, a X_i + b Y_i >= D_i}.
  // The optimum sits at a vertex: an axis point or the crossing of two constraints.
  auto feasible = [&](double a, double b) {
    if (a < 0 || b < 0) return false;
    for (std::size_t i = 0; i < n; ++i)
      if (a * X[i] + b * Y[i] < D[i] - 1e-14 * (1 + std::fabs(D[i]))) return false;
    return true;
  };
  std::vector<std::pair<double, double>> cand{{0.0, 0.0}};
  double amax = 0.0, bmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (X[i] > 0) amax = std::max(amax, D[i] / X[i]);
    if (Y[i] > 0) bmax = std::max(bmax, D[i] / Y[i]);
  }
  cand.push_back({amax, 0.0});
  cand.push_back({0.0, bmax});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double det = X[i] * Y[j] - X[j] * Y[i];
      if (std::fabs(det) < 1e-300) continue;
      cand.push_back({(D[i] * Y[j] - D[j] * Y[i]) / det, (X[i] * D[j] - X[j] * D[i]) / det});
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (auto [a, b] : cand) {
    if (!feasible(a, b)) continue;
    const double obj = a * mx + b * my;
    if (obj < best) {
      best = obj;
      fit.a = a;
      fit.b = b;
    }
  }
  return fit;
}

std::string criterion_csv(const CriterionResult& r) {
  std::ostringstream os;
  os << "k,lo,hi,integral,cumulative\n";
  for (const auto& s : r.shells)
    os << s.k << ',' << num(s.lo) << ',' << num(s.hi) << ',' << num(s.integral) << ',' << num(s.cumulative) << '\n';
  return os.str();
}

}  // namespace compop
