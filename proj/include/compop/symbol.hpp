#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "compop/boundary_set.hpp"
#include "compop/common.hpp"
#include "compop/weight.hpp"

namespace compop {

enum class SymbolVariant { Polynomial, Outer, ScaledRotation };

const char* to_string(SymbolVariant v);

/// Holomorphic self-map φ of the unit disc.
///
///  - Polynomial: Σ c_k z^k, checked to satisfy |φ| <= 1 + 1e-9 on a 2^14-point
///    boundary grid at construction.
///  - Outer: f_{h,K}(z) = exp(-∫ (ζ+z)/(ζ-z) h(d(ζ,K)) dm(ζ)) with dm = |dζ|/2π,
///    so that |f| = e^{-h(d(ζ,K))} on the circle.
///  - ScaledRotation: z ↦ s·e^{i·angle}·z.
class Symbol {
 public:
  static Symbol polynomial(std::vector<cplx> coefficients);
  static Symbol outer(WeightFunction h, BoundarySet K);
  static Symbol scaled_rotation(double s, double angle = 0.0);
  static Symbol identity() { return scaled_rotation(1.0, 0.0); }

  SymbolVariant variant() const { return variant_; }
  const std::vector<cplx>& coefficients() const { return coeffs_; }
  const WeightFunction& weight() const { return weight_; }
  const BoundarySet& set() const { return set_; }
  double scale() const { return scale_; }
  double angle() const { return angle_; }

  /// g(θ) = h(d(θ, K)), the exponent of the boundary modulus (Outer only).
  double boundary_exponent(double theta) const { return weight_(set_.distance(theta)); }
  /// Breakpoints of g on [0, 2π): kinks of d(·, K), capped for very fine sets.
  const std::vector<double>& exponent_kinks() const { return kinks_; }

  /// Cached Taylor coefficients of length n, filled once by taylor_coefficients.
  std::shared_ptr<const std::vector<cplx>> cached_taylor(int n) const;
  void store_taylor(int n, std::vector<cplx> coeffs) const;

  std::string describe() const;

 private:
  Symbol() : cache_(std::make_shared<Cache>()) {}

  struct Cache {
    std::mutex mu;
    std::map<int, std::shared_ptr<const std::vector<cplx>>> taylor;
  };

  SymbolVariant variant_ = SymbolVariant::ScaledRotation;
  std::vector<cplx> coeffs_;
  WeightFunction weight_ = WeightFunction::zero();
  BoundarySet set_;
  std::vector<double> kinks_;
  double scale_ = 1.0;
  double angle_ = 0.0;
  std::shared_ptr<Cache> cache_;
};

struct EvalResult {
  cplx value;
  cplx derivative;
};

struct EvalOptions {
  double rel_tol = 1e-9;
};

/// φ(z) and φ'(z) for |z| <= 1 - 1e-12.
EvalResult eval(const Symbol& phi, cplx z, const EvalOptions& opt = {});

/// |φ(e^{iθ})|; closed form e^{-h(d(θ,K))} for outer symbols.
double boundary_modulus(const Symbol& phi, double theta);

struct TaylorOptions {
  bool verify = true;          // recompute at 2N and compare
  double tolerance = 1e-8;     // allowed change of c_0..c_{N-1} under doubling
};

/// Coefficients c_0..c_{N-1}; N must be a power of two >= 2.
std::vector<cplx> taylor_coefficients(const Symbol& phi, int N, const TaylorOptions& opt = {});

/// Polynomial evaluation (Horner) with derivative.
EvalResult horner(const std::vector<cplx>& c, cplx z);

}  // namespace compop
