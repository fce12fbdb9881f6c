#include "compop/symbol.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "compop/errors.hpp"
#include "compop/quadrature.hpp"

namespace compop {

namespace {

constexpr int kSelfMapGrid = 1 << 14;
constexpr std::size_t kMaxKinks = 4096;
constexpr int kKinkLevel = 10;

bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

}  // namespace

const char* to_string(SymbolVariant v) {
  switch (v) {
    case SymbolVariant::Polynomial: return "polynomial";
    case SymbolVariant::Outer: return "outer";
    case SymbolVariant::ScaledRotation: return "scaled_rotation";
  }
  return "unknown";
}

EvalResult horner(const std::vector<cplx>& c, cplx z) {
  cplx p = 0.0, dp = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + *it;
  }
  return {p, dp};
}

Symbol Symbol::polynomial(std::vector<cplx> coefficients) {
  if (coefficients.empty()) throw Error(ErrorCode::InvalidParameter, "polynomial needs at least one coefficient");
  while (coefficients.size() > 1 && coefficients.back() == cplx(0.0)) coefficients.pop_back();
  for (const cplx& c : coefficients)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw Error(ErrorCode::InvalidParameter, "non-finite polynomial coefficient");
  double sup = 0.0;
  for (int k = 0; k < kSelfMapGrid; ++k) {
    const double th = kTwoPi * k / kSelfMapGrid;
    sup = std::max(sup, std::abs(horner(coefficients, std::polar(1.0, th)).value));
  }
  if (sup > 1.0 + 1e-9) {
    std::ostringstream os;
    os << "polynomial is not a self-map of the disc (boundary sup " << sup << ")";
    throw Error(ErrorCode::SelfMapViolation, os.str());
  }
  Symbol s;
  s.variant_ = SymbolVariant::Polynomial;
  s.coeffs_ = std::move(coefficients);
  return s;
}

Symbol Symbol::outer(WeightFunction h, BoundarySet K) {
  Symbol s;
  s.variant_ = SymbolVariant::Outer;
  s.weight_ = std::move(h);
  s.set_ = std::move(K);
  if (!s.set_.empty()) {
    if (s.set_.arc_count() <= static_cast<double>(kMaxKinks) / 3) {
      s.kinks_ = s.set_.kinks();
    } else if (s.set_.is_cantor()) {
      // Endpoints and gap midpoints of a shallow stage are kinks of every deeper stage.
      const auto& r = s.set_.cantor_ratios();
      s.kinks_ = BoundarySet::cantor(std::vector<double>(r.begin(), r.begin() + kKinkLevel)).kinks();
    }
  }
  return s;
}

Symbol Symbol::scaled_rotation(double s, double angle) {
  if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorCode::InvalidParameter, "scaled rotation needs s in [0, 1]");
  Symbol sym;
  sym.variant_ = SymbolVariant::ScaledRotation;
  sym.scale_ = s;
  sym.angle_ = angle;
  return sym;
}

std::shared_ptr<const std::vector<cplx>> Symbol::cached_taylor(int n) const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto it = cache_->taylor.find(n);
  return it == cache_->taylor.end() ? nullptr : it->second;
}

void Symbol::store_taylor(int n, std::vector<cplx> coeffs) const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  cache_->taylor.emplace(n, std::make_shared<const std::vector<cplx>>(std::move(coeffs)));
}

std::string Symbol::describe() const {
  std::ostringstream os;
  switch (variant_) {
    case SymbolVariant::Polynomial:
      os << "polynomial(degree " << coeffs_.size() - 1 << ")";
      break;
    case SymbolVariant::Outer:
      os << "outer(" << weight_.describe() << ", " << set_.describe() << ")";
      break;
    case SymbolVariant::ScaledRotation:
      os << "scaled_rotation(s=" << scale_ << ", angle=" << angle_ << ")";
      break;
  }
  return os.str();
}

namespace {

EvalResult eval_outer(const Symbol& phi, cplx z, const EvalOptions& opt) {
  const WeightFunction& h = phi.weight();
  if (h.is_zero()) return {1.0, 0.0};
  if (phi.set().empty()) return {std::exp(-h(kPi)), 0.0};

  const double r = std::abs(z);
  const double arg = r > 0.0 ? wrap_angle(std::arg(z)) : 0.0;
  // Subtract g(arg z): ∫ kernel dm = 1 and ∫ kernel' dm = 0, which removes the
  // peak of the kernels near the boundary from the integrand.
  const double g0 = r > 0.0 ? phi.boundary_exponent(arg) : 0.0;
  const double dscale = (1.0 - r) * (1.0 - r);

  auto integrand = [&](double theta) {
    const cplx zeta = std::polar(1.0, theta);
    const cplx den = zeta - z;
    const double g = phi.boundary_exponent(theta) - g0;
    const cplx k = (zeta + z) / den;
    const cplx dk = 2.0 * zeta / (den * den);
    return std::array<cplx, 2>{k * g, dscale * dk * g};
  };

  std::vector<double> bp;
  if (r > 0.0) {
    const std::array<double, 3> focus{arg - kTwoPi, arg, arg + kTwoPi};
    bp = graded_breakpoints(0.0, kTwoPi, phi.exponent_kinks(), focus, 0.5 * (1.0 - r), 4.0);
  } else {
    bp = graded_breakpoints(0.0, kTwoPi, phi.exponent_kinks(), {}, 0.0);
  }
  QuadOptions qo;
  qo.rel_tol = opt.rel_tol;
  qo.abs_tol = 1e-15 * (1.0 + h.max_value());
  qo.order = 10;
  auto res = integrate(integrand, std::span<const double>(bp), qo);
  if (!res.converged) throw Error(ErrorCode::QuadratureNotConverged, "Herglotz integral did not converge");
  const cplx H = g0 + res.value[0] / kTwoPi;
  const cplx dH = res.value[1] / (kTwoPi * dscale);
  const cplx f = std::exp(-H);
  return {f, -dH * f};
}

}  // namespace

EvalResult eval(const Symbol& phi, cplx z, const EvalOptions& opt) {
  if (std::abs(z) > 1.0 - 1e-12)
    throw Error(ErrorCode::EvaluationTooCloseToBoundary, "|z| must be <= 1 - 1e-12");
  switch (phi.variant()) {
    case SymbolVariant::Polynomial:
      return horner(phi.coefficients(), z);
    case SymbolVariant::ScaledRotation: {
      const cplx a = std::polar(phi.scale(), phi.angle());
      return {a * z, a};
    }
    case SymbolVariant::Outer:
      return eval_outer(phi, z, opt);
  }
  return {};
}

double boundary_modulus(const Symbol& phi, double theta) {
  switch (phi.variant()) {
    case SymbolVariant::Polynomial:
      return std::abs(horner(phi.coefficients(), std::polar(1.0, theta)).value);
    case SymbolVariant::ScaledRotation:
      return phi.scale();
    case SymbolVariant::Outer:
      return std::exp(-phi.boundary_exponent(theta));
  }
  return 0.0;
}

namespace {

// Sample φ on |z| = r at M = 8N points and invert the DFT. With r^N = 10^{-1.5}
// the aliasing from c_{k+M} is below r^M = 1e-12 and the r^{-k} rescaling
// amplifies sampling errors by at most 31.6.
std::vector<cplx> sampled_coefficients(const Symbol& phi, int N) {
  const int M = 8 * N;
  const double r = std::pow(10.0, -1.5 / N);
  std::vector<cplx> samples(M);
  EvalOptions eo;
  eo.rel_tol = 1e-12;
  for (int j = 0; j < M; ++j) samples[j] = eval(phi, std::polar(r, kTwoPi * j / M), eo).value;
  Eigen::FFT<double> fft;
  std::vector<cplx> spectrum;
  fft.fwd(spectrum, samples);
  std::vector<cplx> c(N);
  double rk = 1.0;
  for (int k = 0; k < N; ++k) {
    c[k] = spectrum[k] / (static_cast<double>(M) * rk);
    if (std::abs(c[k]) < 1e-13) c[k] = 0.0;
    rk *= r;
  }
  return c;
}

}  // namespace

std::vector<cplx> taylor_coefficients(const Symbol& phi, int N, const TaylorOptions& opt) {
  if (N < 2 || !is_power_of_two(N)) throw Error(ErrorCode::InvalidParameter, "N must be a power of two >= 2");
  if (auto cached = phi.cached_taylor(N)) return *cached;

  std::vector<cplx> c(N, 0.0);
  switch (phi.variant()) {
    case SymbolVariant::Polynomial: {
      const auto& p = phi.coefficients();
      std::copy_n(p.begin(), std::min<std::size_t>(p.size(), N), c.begin());
      break;
    }
    case SymbolVariant::ScaledRotation:
      c[1] = std::polar(phi.scale(), phi.angle());
      break;
    case SymbolVariant::Outer: {
      c = sampled_coefficients(phi, N);
      if (opt.verify) {
        const auto fine = sampled_coefficients(phi, 2 * N);
        double worst = 0.0;
        for (int k = 0; k < N; ++k) worst = std::max(worst, std::abs(fine[k] - c[k]));
        if (worst > opt.tolerance) {
          std::ostringstream os;
          os << "Taylor coefficients moved by " << worst << " under doubling N=" << N;
          throw Error(ErrorCode::QuadratureNotConverged, os.str());
        }
        std::vector<cplx> longer(fine.begin(), fine.end());
        phi.store_taylor(2 * N, std::move(longer));
      }
      break;
    }
  }
  phi.store_taylor(N, c);
  return c;
}

}  // namespace compop
