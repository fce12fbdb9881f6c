#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "compop/common.hpp"
#include "compop/criteria.hpp"
#include "compop/symbol.hpp"

namespace compop {

enum class ProfileMethod { ExactArc, BoundarySampling };

const char* to_string(ProfileMethod m);

/// Samples (s, |E_φ(s)|) with E_φ(s) = {ζ : |φ(ζ)| >= s}, sorted by s.
struct LevelSetProfile {
  std::vector<std::pair<double, double>> samples;
  ProfileMethod method = ProfileMethod::ExactArc;
  double resolution = 0.0;  // angular resolution of crossings (sampling route)
};

/// Exact route for outer symbols (|E(s)| = |K_t| with t = h^{-1}(log 1/s)),
/// boundary sampling otherwise.
LevelSetProfile level_set_profile(const Symbol& phi, std::span<const double> s_grid);

struct SamplingOptions {
  int grid = 1 << 14;              // coarse boundary grid
  double resolution = kTwoPi * 1e-6;  // crossing bisection stops below this width
};

/// Measure of {θ : |φ(e^{iθ})| >= s} from a boundary grid with crossings
/// refined by bisection. Excursions narrower than one grid cell are missed.
LevelSetProfile level_set_profile_sampled(const Symbol& phi, std::span<const double> s_grid,
                                          const SamplingOptions& opt = {});

/// s = 0 and s = 1 - 2^{-k}, k = 1..levels (the grid levelset_integral needs).
std::vector<double> dyadic_s_grid(int levels = 20);

/// Boundary value φ(e^{iθ}). For outer symbols the argument is minus the
/// conjugate function of θ ↦ h(d(θ, K)).
cplx boundary_trace(const Symbol& phi, double theta);

/// m_φ(W_{n,j}) for j = 0..2^n-1, from max(2^{n+6}, 2^12)·oversample boundary
/// samples at cell midpoints. Samples with |φ| = 1 go to the box of their argument.
std::vector<double> pullback_box_measures(const Symbol& phi, int n, int oversample = 1);

/// Region of the disc in polar form: r_lo <= |z| < r_hi (<= when r_hi = 1),
/// arg z in [th_lo, th_hi).
struct Region {
  double r_lo = 0.0, r_hi = 1.0;
  double th_lo = 0.0, th_hi = kTwoPi;
  std::string label = "disc";

  static Region disc();
  /// R_{n,j}: 1 - 2^{-n} <= |z| < 1 - 2^{-n-1} (n = 0 starts at the origin).
  static Region polar_box(int n, int j);
  /// W_{n,j}: 1 - 2^{-n} <= |z| <= 1.
  static Region carleson_box(int n, int j);
  static Region sector(double r_lo, double r_hi, double th_lo, double th_hi);

  bool contains(cplx z) const;
  /// Normalised area dx dy / π.
  double area() const { return (r_hi * r_hi - r_lo * r_lo) * (th_hi - th_lo) / kTwoPi; }
};

struct MCOptions {
  std::size_t samples = 1000000;
  std::uint64_t seed = 20240601;
  int strata = 30;  // dyadic annuli in 1 - |z|
};

/// Stratified Monte Carlo over z ~ dA_α = (1+α)(1-|z|^2)^α dA. The visitor adds
/// (bin, value) contributions for each sample; the result is the estimate of
/// E[Σ contributions to bin b] with its standard error. Deterministic for a
/// given seed and stratum count, whatever the thread count.
struct BinnedEstimate {
  std::vector<double> value, stderr_;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

using SampleVisitor =
    std::function<void(cplx z, const EvalResult& w, std::vector<std::pair<std::size_t, double>>& out)>;

BinnedEstimate stratified_disc_estimate(const Symbol& phi, double alpha, std::size_t bins,
                                        const SampleVisitor& visit, const MCOptions& opt);

struct CountingMeasureReport {
  double alpha = 0.0;
  std::string region;
  double value = 0.0;
  double stderr_ = 0.0;
  std::string method = "change-of-variables";
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// μ_{φ,α}(Ω) = (1/(1+α)) ∫ 1_Ω(φ(z)) |φ'(z)|^2 dA_α(z), i.e. ∫_Ω N dA with the
/// AreaDensity weight.
CountingMeasureReport counting_measure(const Symbol& phi, double alpha, const Region& region,
                                       const MCOptions& opt = {});

/// Weight attached to each preimage w in the counting function.
///  - Distance: (1 - |w|)^α, the definition of N_{φ,α}.
///  - AreaDensity: (1 - |w|^2)^α, the weight for which the change of variables
///    ∫ (g∘φ)|φ'|^2 dA_α = (1+α) ∫ g N dA is an identity. The two differ by a
///    factor in [1, 2^α].
enum class CountingWeight { Distance, AreaDensity };

/// N_{φ,α}(z) = Σ_{φ(w) = z, |w| < 1} (1 - |w|)^α for polynomial φ (degree 1..64).
double nevanlinna_counting(const Symbol& phi, double alpha, cplx z,
                           CountingWeight weight = CountingWeight::Distance);

/// Roots of φ(w) = z (companion matrix), clustered at 1e-8.
std::vector<cplx> preimages(const Symbol& phi, cplx z);

/// ∫_Ω N_{φ,α} dA by tensor Gauss quadrature in polar coordinates.
double counting_measure_by_roots(const Symbol& phi, double alpha, const Region& region,
                                 CountingWeight weight = CountingWeight::AreaDensity, int order = 24,
                                 int panels = 4);

struct GrowthDiagnostic {
  double rho = 0.0;    // L_n ∝ 2^{ρ n} over the last 4 levels
  double sigma = 0.0;  // L_n ∝ n^σ over the same levels (used when |ρ| <= 0.1)
  Verdict verdict = Verdict::Inconclusive;
  std::string note;
};

/// Dyadic growth flags: ρ < -0.1 convergent, ρ > 0.1 divergent, inconclusive in
/// between. σ is reported for information only: at n <= 12 the algebraic
/// regime is usually not reached.
GrowthDiagnostic growth_diagnostic(std::span<const double> L, std::span<const double> stderr_ = {});

struct LueckingReport {
  double alpha = 0.0, p = 2.0;
  std::vector<double> L, L_stderr;  // L_0..L_{n_max}
  GrowthDiagnostic diagnostic;
  std::vector<double> hardy;        // α = 1 only: 2^{np/2} Σ_j m_φ(W_{n,j})^{p/2}
  GrowthDiagnostic hardy_diagnostic;
  std::vector<std::vector<double>> box_measures, box_stderr;  // μ(R_{n,j})
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

struct LueckingOptions {
  MCOptions mc;
  int hardy_oversample = 64;
  bool hardy = true;
};

/// L_n = 2^{(2+α)np/2} Σ_j μ_{φ,α}(R_{n,j})^{p/2} for n = 0..n_max (one Monte
/// Carlo pass for all boxes), one report per p.
std::vector<LueckingReport> luecking_sum(const Symbol& phi, double alpha, std::span<const double> p_list,
                                         int n_max, const LueckingOptions& opt = {});

struct CompactnessRow {
  double h = 0.0;
  double sup_measure = 0.0;  // sup_ζ m_φ(W(ζ, h))
  double ratio = 0.0;        // sup_measure / h
};

/// W(ζ, h) = {1 - h <= |z| <= 1, |arg z - arg ζ| <= h}; ζ over 2^10 boundary points.
std::vector<CompactnessRow> compactness_diagnostic(const Symbol& phi, std::span<const double> h_list);

struct LlqpRow {
  double h = 0.0;
  double ratio_min = 0.0, ratio_max = 0.0;
  int windows = 0;  // windows with m_φ(W(ζ, C h)) > 0
};

/// sup_{z ∈ W(ζ,h)} N_φ(z) / m_φ(W(ζ, C h)) over a grid of ζ, with the classical
/// counting function N_φ(z) = Σ log(1/|w|). Polynomial symbols only.
std::vector<LlqpRow> llqp_ratios(const Symbol& phi, double C, std::span<const double> h_list, int n_zeta = 64);

std::string profile_csv(const LevelSetProfile& p);
/// Rows n, j, measure, stderr.
std::string boxes_csv(const std::vector<std::vector<double>>& measures,
                      const std::vector<std::vector<double>>& stderr_, int first_level = 0);

}  // namespace compop
