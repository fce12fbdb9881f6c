#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "compop/criteria.hpp"
#include "compop/levelset.hpp"
#include "compop/symbol.hpp"

namespace compop {

/// Parameters of the two scales of spaces.
///  - D_α, α in [0, 1], with ‖f‖² = Σ (n+1)^{1-α} |f̂(n)|² (α = 1 is H²).
///  - A_a, a > -1, with dA_a = (1+a)(1-|z|²)^a dA and ‖z^n‖² = n! Γ(2+a)/Γ(n+2+a).
struct SpaceParams {
  double alpha = 1.0;
  double bergman_alpha = 0.0;

  double weight(int n) const;          // (n+1)^{1-α}
  double bergman_norm2(int n) const;   // ‖z^n‖² in A_a
};

struct CompositionMatrix {
  Eigen::MatrixXcd matrix;
  int N = 0;
  double alpha = 1.0;
  double tail_mass = 0.0;  // max over columns of Σ_{N<=m<2N} w_m |φ^n_m|² / column norm
  bool under_resolved = false;
};

/// Matrix of C_φ on D_α in the orthonormal basis z^m/√w_m, m, n < N:
/// entry (m, n) = (φ^n)_m √(w_m / w_n). Powers are built by FFT convolution at
/// length 2N; the rows N..2N-1 feed the tail-mass flag (threshold 1e-8).
CompositionMatrix composition_matrix(const Symbol& phi, double alpha, int N);

struct SpectralReport {
  int N = 0;
  std::vector<double> s;      // nonincreasing
  double frobenius2 = 0.0;    // Σ |a_mn|²
  double slope = 0.0;         // fit of log s_n on log(n+1) over n < N/2 with s_n > 1e-14 s_0
};

/// SVD (Eigen BDCSVD) with the check |Σ s_n² - ‖A‖_F²| <= 1e-8 ‖A‖_F²; a failed
/// check is retried once on the rescaled matrix before NoConvergence.
SpectralReport singular_values(const Eigen::MatrixXcd& A);

/// Report from nonnegative values sorted in place (used for Gram eigenvalues).
SpectralReport spectral_report(std::vector<double> s);

struct SchattenPartial {
  double p = 2.0;
  std::vector<int> N;
  std::vector<double> sums;  // Σ_{n<N} s_n^p
  Verdict verdict = Verdict::Inconclusive;
};

/// Partial sums at the requested truncations. The decay slope decides: below
/// -(1+0.05)/p summable, otherwise not.
SchattenPartial schatten_partial(const SpectralReport& r, double p, std::span<const int> N_list);

struct HilbertSchmidtReport {
  Verdict verdict = Verdict::Inconclusive;
  double value = 0.0;          // (1/2π)∫ |dζ| / (1 - |φ(ζ)|²), +inf when divergent
  double series_value = 0.0;   // Σ_n ‖φ^n‖²
  int series_terms = 0;
  bool series_converged = false;
  std::string method;
  std::vector<std::string> notes;
};

/// Boundary route and series route. For outer symbols with |K| = 0 the boundary
/// integral is (1/π) Σ_gaps ∫_0^{g/2} dt / (1 - e^{-2h(t)}) and the shell rule
/// decides divergence at the contact points.
HilbertSchmidtReport hilbert_schmidt_norm(const Symbol& phi);

/// <φ^k, φ^j>_{H²} for j, k < N by boundary quadrature (exact trapezoid for
/// polynomials, panels graded toward the kinks of the boundary exponent for outer
/// symbols). Its eigenvalues are the squared singular values of C_φ restricted
/// to polynomials of degree < N.
Eigen::MatrixXcd hardy_gram_matrix(const Symbol& phi, int N);

struct TruncationSweep {
  std::vector<int> N;                   // 16, 32, ..., N_max
  std::vector<double> p;
  std::vector<std::vector<double>> sums;    // sums[i][k]: Σ s_n(N_k)^{p_i}
  std::vector<std::vector<double>> ratios;  // increment ratios ΔS(N_k)/ΔS(N_{k-1})
  std::vector<Verdict> verdict;
  std::vector<double> top_singular_values;  // at N_max
};

/// Schatten partial sums of C_φ P_N on H² for N doubling from N_min to N_max.
/// Verdict from the last three increment ratios: all >= 0.95 divergent, all
/// <= 0.9 convergent, otherwise inconclusive.
TruncationSweep truncation_sweep(const Symbol& phi, std::span<const double> p_list, int N_max = 512, int N_min = 16);

struct AtomicMeasure {
  std::vector<std::pair<cplx, double>> atoms;  // (w, mass), |w| < 1, mass > 0
  void validate() const;
};

/// <T_μ e_n, e_m> = Σ mass e_n(w) conj(e_m(w)) in the orthonormal monomials of A_a.
Eigen::MatrixXcd toeplitz_matrix(const AtomicMeasure& mu, double bergman_alpha, int N);

/// μ̃(z) = Σ mass (1-|z|²)^{2+a} / |1 - w̄ z|^{4+2a}.
double berezin_transform(const AtomicMeasure& mu, double bergman_alpha, cplx z);

/// Berezin transform of μ_{φ,α} at each z (Monte Carlo over the change of variables).
BinnedEstimate berezin_counting(const Symbol& phi, double alpha, std::span<const cplx> z, const MCOptions& opt = {});

/// ∫ μ̃^p dλ with dλ = (1-|z|²)^{-2} dA: 48 dyadic shells in 1 - |z| (16-point
/// Gauss) times a 512-point angular trapezoid.
CriterionResult berezin_lp_integral(const AtomicMeasure& mu, double bergman_alpha, double p);

struct IapReport {
  double alpha = 0.0, p = 2.0;
  std::vector<double> annulus, annulus_stderr;  // contributions of R_n, n = 0..n_max
  double value = 0.0, stderr_ = 0.0;
  GrowthDiagnostic diagnostic;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// (1+α)^{p/2} ∫ μ̃_{φ,α}(w)^{p/2} dλ(w), one annulus per dyadic level. The w nodes
/// are 2 radial Gauss points times min(2^{n+2}, 256) angles per annulus.
IapReport iap_integral(const Symbol& phi, double alpha, double p, int n_max = 6, const MCOptions& opt = {});

/// Rows row, col, re, im.
std::string matrix_csv(const Eigen::MatrixXcd& A);
/// Rows n, s_n.
std::string spectrum_csv(const SpectralReport& r);

}  // namespace compop
