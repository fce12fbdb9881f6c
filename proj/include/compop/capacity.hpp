#pragma once

#include <span>
#include <string>
#include <vector>

#include "compop/boundary_set.hpp"
#include "compop/criteria.hpp"
#include "compop/errors.hpp"
#include "compop/levelset.hpp"
#include "compop/symbol.hpp"

namespace compop {

/// Discrete probability measure Σ μ_k δ_{θ_k} on the circle with cached
/// coefficients μ̂(n) = Σ μ_k e^{-inθ_k}, n = 0..n_max.
class CircleMeasure {
 public:
  /// Weights must be nonnegative and sum to 1 within 1e-12.
  static CircleMeasure make(std::vector<double> theta, std::vector<double> weights, int n_max);
  /// Equal weights on θ_k = offset + 2πk/M; coefficients in closed form
  /// (zero for 0 < n < M unless M divides n).
  static CircleMeasure equispaced(int M, int n_max, double offset = 0.0);

  const std::vector<double>& theta() const { return theta_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<cplx>& coefficients() const { return coeffs_; }
  int n_max() const { return static_cast<int>(coeffs_.size()) - 1; }

 private:
  std::vector<double> theta_, weights_;
  std::vector<cplx> coeffs_;
};

struct EnergyReport {
  double alpha = 0.0;
  int n_max = 0;
  double partial_sum = 0.0;  // Σ_{1<=n<=n_max} |μ̂(n)|² n^{α-1}
  /// Growth exponent γ of the dyadic block sums B_j = Σ_{2^j<=n<2^{j+1}} (B_j ~ 2^{γj}),
  /// fitted over the last four complete blocks; γ >= 0 points to divergence,
  /// -inf when those blocks vanish.
  double tail_slope = 0.0;
};

/// Fourier-side α-energy truncated at n_max (n_max >= 64 and <= μ.n_max()).
EnergyReport alpha_energy(const CircleMeasure& mu, double alpha, int n_max);

/// Potential (Aμ)_j = Σ_n n^{α-1} Re(μ̂(n) e^{inθ_j}) at the measure's own nodes.
std::vector<double> potential(const CircleMeasure& mu, double alpha, int n_max);

struct EquilibriumOptions {
  int nodes = 512;              // target node count M (<= 4096)
  int lattice = 0;              // global lattice size; 0 picks about `nodes` points on K, at least 2 n_max in all
  int n_max = 256;
  int max_iterations = 20000;
  int window = 100;             // stop when the energy drops by < tolerance over a window
  double tolerance = 1e-10;
  bool polish = true;           // active-set KKT solve on the support (at most 64 steps)
};

struct EquilibriumResult {
  CircleMeasure measure;
  double alpha = 0.0;
  int n_max = 0;
  double energy = 0.0;
  int iterations = 0;           // projected-gradient iterations
  int polish_steps = 0;
  double gradient_norm = 0.0;   // norm of the projected-gradient step x - P(x - ∇E/L)
  double level = 0.0;           // potential level λ (= energy at the optimum)
  double support_spread = 0.0;  // max - min potential over nodes with weight > 1e-6
  double off_support_gap = 0.0; // min over the other nodes of potential - λ
  bool converged = false;
};

class MaxIterationsError : public Error {
 public:
  MaxIterationsError(const std::string& what, EquilibriumResult best)
      : Error(ErrorCode::MaxIterations, what), best_(std::move(best)) {}
  const EquilibriumResult& best() const { return best_; }

 private:
  EquilibriumResult best_;
};

/// Nodes of K: lattice points (j + 1/2)·2π/G inside K's arcs, with one node for
/// each degenerate arc and for arcs containing no lattice point.
std::vector<double> place_nodes(const BoundarySet& K, const EquilibriumOptions& opt);

/// Minimiser of the truncated energy over probability vectors on place_nodes(K):
/// accelerated projected gradient with step 1/L and simplex projection, then
/// (optionally) an active-set polish.
EquilibriumResult equilibrium_measure(const BoundarySet& K, double alpha, const EquilibriumOptions& opt = {});

struct CapacityRow {
  int n_max = 0;
  double energy = 0.0;
  double capacity = 0.0;       // 1/energy (+inf at zero energy)
  double capacity_plus = 0.0;  // 1/(1 + energy)
  int iterations = 0;
  bool converged = false;
  double support_spread = 0.0;
};

struct CapacityReport {
  double alpha = 0.0;
  int nodes = 0;
  std::vector<CapacityRow> rows;
  CircleMeasure measure;  // equilibrium measure at the last n_max
  bool monotone = true;  // energy nondecreasing in n_max (relative slack 1e-9)
};

CapacityReport capacity_estimate(const BoundarySet& K, double alpha, std::span<const int> n_list = {},
                                 const EquilibriumOptions& opt = {});

/// ∫ |φ'|² / ((1-|φ|²)² log(e/(1-|φ|²))) dA_α by the stratified disc estimator,
/// one shell per dyadic annulus 1 - |z| in [2^{-k-1}, 2^{-k}).
CriterionResult xlog_integral(const Symbol& phi, double alpha, const MCOptions& opt = {});

struct KernelCheckRow {
  std::string check;    // "xlog" or "kernel"
  double d = 0.0, c = 0.0, sigma = 0.0;
  double x = 0.0;       // x or |z|
  double lhs = 0.0, rhs = 0.0, ratio = 0.0;
};

struct KernelCheckReport {
  std::vector<KernelCheckRow> rows;
  double min_ratio = 0.0, max_ratio = 0.0;
};

/// Two-sided checks on x, |z| in {0} ∪ {1 - 2^{-k}: k = 1..12}:
///  - 1/((1-x²)² L(x²)) against Σ_{n>=0} (1+n)/log(e(1+n)) x^{2n};
///  - ∫ dA_c(w) / (|1-zw̄|^{2+c+d} L(|w|²)^σ) against 1/((1-|z|²)^d L(|z|²)^σ)
///    for d in {1/2, 1, 2}, c in {-1/2, 0, 1}, σ in {0, 1/2, 1, 2},
/// with L(x) = log(e/(1-x)). Throws RatioOutOfRange outside [1/50, 50].
KernelCheckReport series_kernel_checks();

/// Left side of the kernel check at |z| (radial integral of the angular 2F1 mean).
double kernel_integral(double d, double c, double sigma, double z);

struct WeakTypeRow {
  double t = 0.0;
  std::vector<Arc> arcs;       // {θ : |f(e^{iθ})| >= t}
  double measure = 0.0;        // normalised length
  double capacity_plus = 0.0;
  double ratio = 0.0;          // capacity_plus · t² / ‖f‖²_α
};

struct WeakTypeReport {
  double alpha = 0.0;
  double norm2 = 0.0;          // Σ (n+1)^{1-α} |f̂(n)|²
  std::vector<WeakTypeRow> rows;
  double constant = 0.0;       // max ratio
};

/// Arcs where |f(e^{iθ})| >= t, from the unit-circle roots of the trigonometric
/// polynomial |f|² - t². Tangential roots make t move by 1e-9 once before
/// RootIsolationFailed.
std::vector<Arc> superlevel_arcs(const std::vector<cplx>& f, double t);

WeakTypeReport weak_type_check(const Symbol& f, double alpha, std::span<const double> t_list,
                               const EquilibriumOptions& opt = {});

/// Rows theta, weight.
std::string measure_csv(const CircleMeasure& mu);
/// JSON records {alpha, n_max, capacity, energy, iterations} (one per row).
std::string capacity_json(const CapacityReport& r);

}  // namespace compop
