#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "compop/boundary_set.hpp"
#include "compop/weight.hpp"

namespace compop {

struct LevelSetProfile;

enum class Verdict { Finite, Divergent, Inconclusive };

const char* to_string(Verdict v);

/// One dyadic shell [lo, hi] of an improper integral near its singular end.
struct Shell {
  int k = 0;
  double lo = 0.0, hi = 0.0;
  double integral = 0.0;
  double cumulative = 0.0;
  double sample = 0.0;  // integrand at the geometric midpoint, for audit
};

/// Shell-by-shell evaluation of an improper integral with a heuristic verdict.
///
/// Verdict rule on shell integrals I_k (k counted from the regular end):
///  - trailing zeros, or the last 5 ratios I_{k+1}/I_k all <= 0.9: finite;
///  - the last 5 ratios all >= 1.1: divergent;
///  - otherwise κ = -slope of log I_k against log k over the last 10 shells
///    (algebraic decay I_k ~ k^{-κ}): κ > 1.02 finite, κ < 0.98 divergent,
///    inconclusive in between.
/// value is the sum over shells plus a tail estimate when finite.
struct CriterionResult {
  std::string id;
  Verdict verdict = Verdict::Inconclusive;
  double value = 0.0;
  double partial_sum = 0.0;
  double tail_estimate = 0.0;
  double kappa = 0.0;        // fitted algebraic decay exponent (NaN if unused)
  double last_ratio = 0.0;
  std::vector<Shell> shells;
  double eps_low = 0.0, eps_high = 0.0;
  double p = 0.0, alpha = 1.0;
  std::vector<std::string> warnings;
};

inline constexpr int kMinShells = 12;

/// Classify precomputed shell integrals (fills verdict, value, kappa, ...).
void classify_shells(CriterionResult& r);

/// ∫_0^{x_max} f(x) dx over shells [x_max 2^{-k-1}, x_max 2^{-k}], k < n_shells.
/// Stops early (and records eps_low) if f overflows; breakpoints inside a shell
/// may be supplied through `kinks`.
CriterionResult shell_integral(std::string id, const std::function<double(double)>& f, double x_max,
                               int n_shells, std::span<const double> kinks = {});

enum class CriterionMode { Sufficient, Necessary };

/// ∫_0^1 |E(s)|^{p/2} (1-s)^{-q} ds with q = 1+p/2 (sufficient) or 2 (necessary),
/// on the profile's own samples. The profile must contain s = 1 - 2^{-k}, k = 1..20,
/// and s = 0; |E| is interpolated as a power of 1-s between samples.
CriterionResult levelset_integral(const LevelSetProfile& profile, double p, CriterionMode mode);

/// ∫_0^π h'(t) h(t)^{-q} |K_t|^{p/2} dt with q = 1+p/2 (sufficient) or 2 (necessary).
/// For Cantor sets the shells stop at half the finest gap, where the finite
/// stage stops representing the limit set.
CriterionResult hK_integral(const WeightFunction& h, const BoundarySet& K, double p, CriterionMode mode,
                            int n_shells = 200);

struct OnePointResult {
  CriterionResult compactness;  // ∫ h(t)/t^2 dt: divergent means compact
  CriterionResult schatten;     // ∫ dt / (h(t) H(t)^{p/2-1}), H(t) = ∫_t^π h(s)/s^2 ds
  std::vector<std::string> warnings;
};

OnePointResult onepoint_integrals(const WeightFunction& h, double p, int n_shells = 200);

/// 2π-periodic function with known nonsmooth points.
struct PeriodicFunction {
  std::function<double(double)> f;
  std::vector<double> kinks;
};

/// θ ↦ h(d(θ, K)).
PeriodicFunction weight_trace(const WeightFunction& h, const BoundarySet& K);

struct ConjugateOptions {
  double tolerance = 1e-8;
};

/// Harmonic conjugate (1/2π) PV∫ g(θ-t) cot(t/2) dt, normalised so that
/// cos θ ↦ sin θ.
double conjugate_function(const PeriodicFunction& g, double theta, const ConjugateOptions& opt = {});

/// h̃(θ) for the one-point trace g(t) = h(|t|): the negative of the conjugate
/// function, positive for increasing h.
double weight_conjugate(const WeightFunction& h, double theta, const ConjugateOptions& opt = {});

/// Ψ(θ) = (1/π) ∫_{2θ}^{π-2θ} h'(s) log((s+θ)/(s-θ)) ds, θ in (0, π/4).
double psi(const WeightFunction& h, double theta, double tolerance = 1e-8);

/// H(θ) = ∫_θ^π h(t)/t^2 dt.
double tail_integral(const WeightFunction& h, double theta);

struct SandwichFit {
  double a = 0.0, b = 0.0;
  double max_lower_violation = 0.0;  // max of Ψ - h̃ over the grid (<= 0 when the bound holds)
  std::vector<double> theta, psi, conj, h;
};

/// Fits minimal a, b >= 0 with h̃ - Ψ <= a h + b θ^2 on the grid. The LP minimises
/// the mean slack a·mean(h) + b·mean(θ^2). Throws LowerBoundViolated when
/// Ψ > h̃ + 1e-6 somewhere, unless enforce_lower_bound is false.
SandwichFit sandwich_fit(const WeightFunction& h, std::span<const double> theta_grid,
                         bool enforce_lower_bound = true);

/// CSV rows (k, lo, hi, integral, cumulative) with header.
std::string criterion_csv(const CriterionResult& r);

}  // namespace compop
