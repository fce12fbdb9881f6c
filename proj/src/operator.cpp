#include "compop/operator.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "compop/errors.hpp"
#include "compop/io.hpp"
#include "compop/parallel.hpp"
#include "compop/quadrature.hpp"

namespace compop {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::InvalidParameter, "alpha must lie in [0, 1]");
}

void check_bergman(double a) {
  if (!(a > -1.0)) throw Error(ErrorCode::InvalidParameter, "Bergman parameter must exceed -1");
}

// log of 1/‖z^n‖² in A_a: lgamma(n+2+a) - lgamma(n+1) - lgamma(2+a).
double log_inv_bergman_norm2(double a, int n) {
  return std::lgamma(n + 2.0 + a) - std::lgamma(n + 1.0) - std::lgamma(2.0 + a);
}

// (1-|z|²)^{2+a} / |1 - w̄ z|^{4+2a}
double berezin_kernel(cplx w, cplx z, double a) {
  const double q = 1.0 - std::norm(z);
  const double d = std::norm(1.0 - std::conj(w) * z);
  return std::exp((2.0 + a) * (std::log(q) - std::log(d)));
}

double fit_slope(const std::vector<double>& s) {
  if (s.empty() || s[0] <= 0.0) return -std::numeric_limits<double>::infinity();
  const double floor = 1e-14 * s[0];
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t n = 0; n < std::max<std::size_t>(1, s.size() / 2); ++n) {
    if (!(s[n] > floor)) continue;
    const double x = std::log(n + 1.0), y = std::log(s[n]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    ++m;
  }
  if (m < 4) return -std::numeric_limits<double>::infinity();
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

struct BoundaryNodes {
  std::vector<double> theta, weight;  // weights include the 1/2π of dm
};

// Composite Gauss panels over [0, 2π]: graded toward each kink, wide panels split
// so that a phase growing like N θ is resolved.
BoundaryNodes outer_nodes(const Symbol& phi, int N) {
  std::vector<double> focus = phi.exponent_kinks();
  focus.push_back(0.0);
  focus.push_back(kTwoPi);
  std::sort(focus.begin(), focus.end());
  const auto bp = graded_breakpoints(0.0, kTwoPi, focus, focus, 1e-14, 2.0);
  const GaussRule& rule = gauss_legendre(20);
  BoundaryNodes nodes;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const double a = bp[i], b = bp[i + 1];
    const int sub = std::max(1, static_cast<int>(std::ceil((b - a) * N / 4.0)));
    for (int k = 0; k < sub; ++k) {
      const double lo = a + (b - a) * k / sub, hi = a + (b - a) * (k + 1) / sub;
      const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        nodes.theta.push_back(mid + half * rule.nodes[q]);
        nodes.weight.push_back(rule.weights[q] * half / kTwoPi);
      }
    }
  }
  return nodes;
}

// Trapezoid nodes, exact for trigonometric polynomials of degree < M.
BoundaryNodes trapezoid_nodes(std::size_t M) {
  BoundaryNodes nodes;
  for (std::size_t i = 0; i < M; ++i) {
    nodes.theta.push_back(kTwoPi * i / M);
    nodes.weight.push_back(1.0 / M);
  }
  return nodes;
}

std::vector<Verdict> sweep_verdicts(const std::vector<std::vector<double>>& ratios) {
  std::vector<Verdict> v;
  for (const auto& r : ratios) {
    if (r.size() < 3) {
      v.push_back(Verdict::Inconclusive);
      continue;
    }
    bool up = true, down = true;
    for (std::size_t k = r.size() - 3; k < r.size(); ++k) {
      up = up && r[k] >= 0.95;
      down = down && r[k] <= 0.9;
    }
    v.push_back(up ? Verdict::Divergent : down ? Verdict::Finite : Verdict::Inconclusive);
  }
  return v;
}

}  // namespace

double SpaceParams::weight(int n) const { return std::pow(n + 1.0, 1.0 - alpha); }

double SpaceParams::bergman_norm2(int n) const { return std::exp(-log_inv_bergman_norm2(bergman_alpha, n)); }

CompositionMatrix composition_matrix(const Symbol& phi, double alpha, int N) {
  check_alpha(alpha);
  if (!is_power_of_two(N) || N > 1024) throw Error(ErrorCode::InvalidParameter, "N must be a power of two <= 1024");
  const int L = 2 * N;
  const SpaceParams sp{alpha, 0.0};
  std::vector<double> w(L);
  for (int m = 0; m < L; ++m) w[m] = sp.weight(m);

  std::vector<cplx> c;
  if (phi.variant() == SymbolVariant::Polynomial) {
    c = phi.coefficients();
    c.resize(L, 0.0);
  } else {
    c = taylor_coefficients(phi, L);
  }

  Eigen::FFT<double> fft;
  const int F = 2 * L;
  std::vector<cplx> padded(F, 0.0), chat, phat, prod;
  std::copy(c.begin(), c.end(), padded.begin());
  fft.fwd(chat, padded);

  CompositionMatrix out;
  out.N = N;
  out.alpha = alpha;
  out.matrix = Eigen::MatrixXcd::Zero(N, N);
  std::vector<cplx> P(L, 0.0);
  P[0] = 1.0;
  for (int n = 0; n < N; ++n) {
    if (n > 0) {
      std::fill(padded.begin(), padded.end(), cplx(0.0));
      std::copy(P.begin(), P.end(), padded.begin());
      fft.fwd(phat, padded);
      for (int i = 0; i < F; ++i) phat[i] *= chat[i];
      fft.inv(prod, phat);
      std::copy(prod.begin(), prod.begin() + L, P.begin());
    }
    double total = 0.0, tail = 0.0;
    for (int m = 0; m < L; ++m) {
      const double e = w[m] * std::norm(P[m]);
      total += e;
      if (m >= N) tail += e;
    }
    // Tail compared against 1e-8 times the column norm (not its square), so
    // negligible columns do not raise the flag.
    if (total > 0.0) out.tail_mass = std::max(out.tail_mass, tail / std::sqrt(total));
    const double wn = w[n];
    for (int m = 0; m < N; ++m) out.matrix(m, n) = P[m] * std::sqrt(w[m] / wn);
  }
  out.under_resolved = out.tail_mass > 1e-8;
  return out;
}

SpectralReport spectral_report(std::vector<double> s) {
  for (double& x : s) x = std::max(0.0, x);
  std::sort(s.begin(), s.end(), std::greater<>());
  SpectralReport r;
  r.N = static_cast<int>(s.size());
  for (double x : s) r.frobenius2 += x * x;
  r.s = std::move(s);
  r.slope = fit_slope(r.s);
  return r;
}

SpectralReport singular_values(const Eigen::MatrixXcd& A) {
  const double fro2 = A.squaredNorm();
  auto attempt = [&](double scale) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(A * scale);
    std::vector<double> s(svd.singularValues().data(), svd.singularValues().data() + svd.singularValues().size());
    for (double& x : s) x /= scale;
    return s;
  };
  auto ok = [&](const std::vector<double>& s) {
    double t = 0.0;
    for (double x : s) t += x * x;
    return std::isfinite(t) && std::fabs(t - fro2) <= 1e-8 * std::max(fro2, 1e-300);
  };
  auto s = attempt(1.0);
  if (!ok(s)) {
    const double mx = A.cwiseAbs().maxCoeff();
    s = attempt(mx > 0.0 ? 1.0 / mx : 1.0);
    if (!ok(s)) throw Error(ErrorCode::NoConvergence, "singular values fail the Frobenius check");
  }
  auto r = spectral_report(std::move(s));
  r.frobenius2 = fro2;
  return r;
}

SchattenPartial schatten_partial(const SpectralReport& r, double p, std::span<const int> N_list) {
  if (!(p > 0.0)) throw Error(ErrorCode::InvalidParameter, "p must be positive");
  SchattenPartial out;
  out.p = p;
  for (int N : N_list) {
    if (N < 0 || N > r.N) throw Error(ErrorCode::InvalidParameter, "truncation exceeds the spectrum length");
    double s = 0.0;
    for (int n = 0; n < N; ++n) s += std::pow(r.s[n], p);
    out.N.push_back(N);
    out.sums.push_back(s);
  }
  const double margin = 0.05;
  out.verdict = r.slope < -(1.0 + margin) / p ? Verdict::Finite : Verdict::Divergent;
  return out;
}

HilbertSchmidtReport hilbert_schmidt_norm(const Symbol& phi) {
  HilbertSchmidtReport rep;
  const double inf = std::numeric_limits<double>::infinity();
  auto divergent = [&](std::string method, std::string note) {
    rep.verdict = Verdict::Divergent;
    rep.value = inf;
    rep.series_value = inf;
    rep.method = std::move(method);
    rep.notes.push_back(std::move(note));
    return rep;
  };

  switch (phi.variant()) {
    case SymbolVariant::ScaledRotation: {
      const double s2 = phi.scale() * phi.scale();
      if (s2 >= 1.0) return divergent("closed-form", "|phi| = 1 on the whole circle");
      rep.method = "closed-form";
      rep.verdict = Verdict::Finite;
      rep.value = 1.0 / (1.0 - s2);
      double sum = 0.0, term = 1.0;
      int n = 0;
      for (; n < 1000000 && term > 1e-17 * sum; ++n) {
        sum += term;
        term *= s2;
      }
      rep.series_value = sum;
      rep.series_terms = n;
      rep.series_converged = term <= 1e-17 * sum;
      return rep;
    }
    case SymbolVariant::Polynomial: {
      const auto& c = phi.coefficients();
      const std::size_t deg = c.size() - 1;
      const std::size_t Mmax = std::max<std::size_t>(1 << 14, 16 * (deg + 1));
      double mx = 0.0;
      for (std::size_t i = 0; i < Mmax; ++i)
        mx = std::max(mx, std::abs(horner(c, std::polar(1.0, kTwoPi * i / Mmax)).value));
      if (mx >= 1.0 - 1e-12) return divergent("trapezoid", "boundary contact: 1 - |phi|^2 vanishes to even order");
      // Periodic analytic integrand: the trapezoid rule converges geometrically.
      double prev = 0.0, cur = 0.0;
      for (std::size_t M = 256; M <= (std::size_t{1} << 22); M *= 2) {
        cur = 0.0;
        for (std::size_t i = 0; i < M; ++i)
          cur += 1.0 / (1.0 - std::norm(horner(c, std::polar(1.0, kTwoPi * i / M)).value));
        cur /= M;
        if (M > 256 && std::fabs(cur - prev) <= 1e-14 * cur) break;
        prev = cur;
      }
      rep.method = "trapezoid";
      rep.verdict = Verdict::Finite;
      rep.value = cur;
      // Series: ‖φ^n‖² from exact coefficient convolution.
      std::vector<cplx> P{1.0};
      double sum = 0.0;
      int n = 0;
      for (; n < 20000; ++n) {
        double t = 0.0;
        for (const cplx& x : P) t += std::norm(x);
        sum += t;
        if (t <= 1e-16 * sum) {
          rep.series_converged = true;
          break;
        }
        if (P.size() + deg > (std::size_t{1} << 16)) break;
        std::vector<cplx> Q(P.size() + deg, 0.0);
        for (std::size_t i = 0; i < P.size(); ++i)
          for (std::size_t j = 0; j <= deg; ++j) Q[i + j] += P[i] * c[j];
        P = std::move(Q);
      }
      rep.series_value = sum;
      rep.series_terms = n + 1;
      return rep;
    }
    case SymbolVariant::Outer:
      break;
  }

  const WeightFunction& h = phi.weight();
  const BoundarySet& K = phi.set();
  if (h.is_zero()) return divergent("level-set", "zero weight: |phi| = 1 everywhere");
  if (!K.empty() && K.measure() > 0.0) return divergent("level-set", "|phi| = 1 on a set of positive measure");
  rep.method = "level-set";
  if (K.empty()) {
    const double q = std::exp(-2.0 * h.max_value());
    rep.verdict = Verdict::Finite;
    rep.value = 1.0 / (1.0 - q);
    double sum = 0.0, term = 1.0;
    int n = 0;
    for (; n < 1000000 && term > 1e-17 * sum; ++n) {
      sum += term;
      term *= q;
    }
    rep.series_value = sum;
    rep.series_terms = n;
    rep.series_converged = true;
    return rep;
  }

  // K is a finite set of points: collect the gaps between them.
  std::vector<double> pts;
  for (const Arc& a : K.arcs()) pts.push_back(a.a);
  std::sort(pts.begin(), pts.end());
  std::vector<double> gaps;
  for (std::size_t i = 0; i < pts.size(); ++i)
    gaps.push_back(i + 1 < pts.size() ? pts[i + 1] - pts[i] : pts[0] + kTwoPi - pts[i]);

  auto F = [&h](double t) { return 1.0 / -std::expm1(-2.0 * h(t)); };
  double total = 0.0;
  rep.verdict = Verdict::Finite;
  for (double g : gaps) {
    if (g <= 0.0) continue;
    auto r = shell_integral("hilbert-schmidt", F, 0.5 * g, 200);
    if (r.verdict == Verdict::Divergent) return divergent("level-set", "shell rule: contact point integral diverges");
    if (r.verdict == Verdict::Inconclusive) rep.verdict = Verdict::Inconclusive;
    total += r.value;
  }
  rep.value = total / kPi;

  // Series: ‖φ^n‖² = (1/π) Σ_gaps ∫_0^{g/2} e^{-2n h(t)} dt.
  double sum = 0.0;
  int n = 0;
  for (; n < 20000; ++n) {
    double t = 0.0;
    for (double g : gaps) {
      if (g <= 0.0) continue;
      const double scale = n == 0 ? 0.5 * g : std::min(0.5 * g, h.inverse(1.0 / n));
      const std::array<double, 1> c0{0.0};
      const auto bp = graded_breakpoints(0.0, 0.5 * g, {}, c0, scale * 1e-6, 4.0);
      QuadOptions qo;
      qo.rel_tol = 1e-12;
      qo.abs_tol = 1e-300;
      t += integrate([&](double x) { return std::exp(-2.0 * n * h(x)); }, bp, qo).value;
    }
    t /= kPi;
    sum += t;
    if (t <= 1e-12 * sum) {
      rep.series_converged = true;
      break;
    }
  }
  rep.series_value = sum;
  rep.series_terms = n + 1;
  if (!rep.series_converged) rep.notes.push_back("series truncated at 20000 terms");
  return rep;
}

Eigen::MatrixXcd hardy_gram_matrix(const Symbol& phi, int N) {
  if (N < 1 || N > 4096) throw Error(ErrorCode::InvalidParameter, "Gram size must be in 1..4096");
  BoundaryNodes nodes;
  switch (phi.variant()) {
    case SymbolVariant::ScaledRotation:
      nodes = trapezoid_nodes(std::bit_ceil(static_cast<std::size_t>(2 * N)));
      break;
    case SymbolVariant::Polynomial: {
      const std::size_t deg = std::max<std::size_t>(1, phi.coefficients().size() - 1);
      nodes = trapezoid_nodes(std::bit_ceil(2 * deg * static_cast<std::size_t>(N) + 2));
      break;
    }
    case SymbolVariant::Outer:
      nodes = outer_nodes(phi, N);
      break;
  }
  const std::size_t M = nodes.theta.size();
  std::vector<cplx> b(M);
  parallel_for(M, [&](std::size_t i) { b[i] = boundary_trace(phi, nodes.theta[i]); });

  Eigen::MatrixXcd B(M, N);
  for (std::size_t i = 0; i < M; ++i) {
    cplx v = std::sqrt(nodes.weight[i]);
    for (int k = 0; k < N; ++k) {
      B(i, k) = v;
      v *= b[i];
    }
  }
  Eigen::MatrixXcd G = B.adjoint() * B;
  return G;
}

TruncationSweep truncation_sweep(const Symbol& phi, std::span<const double> p_list, int N_max, int N_min) {
  if (!is_power_of_two(N_min) || !is_power_of_two(N_max) || N_min > N_max)
    throw Error(ErrorCode::InvalidParameter, "sweep sizes must be powers of two with N_min <= N_max");
  for (double p : p_list)
    if (!(p > 0.0)) throw Error(ErrorCode::InvalidParameter, "p must be positive");
  const Eigen::MatrixXcd G = hardy_gram_matrix(phi, N_max);
  TruncationSweep sw;
  sw.p.assign(p_list.begin(), p_list.end());
  sw.sums.assign(sw.p.size(), {});
  for (int N = N_min; N <= N_max; N *= 2) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G.topLeftCorner(N, N), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "Gram eigenvalues did not converge");
    std::vector<double> s(N);
    for (int i = 0; i < N; ++i) s[i] = std::sqrt(std::max(0.0, es.eigenvalues()[i]));
    std::sort(s.begin(), s.end(), std::greater<>());
    sw.N.push_back(N);
    for (std::size_t i = 0; i < sw.p.size(); ++i) {
      double t = 0.0;
      for (double x : s) t += std::pow(x, sw.p[i]);
      sw.sums[i].push_back(t);
    }
    if (N == N_max) sw.top_singular_values = s;
  }
  sw.ratios.assign(sw.p.size(), {});
  for (std::size_t i = 0; i < sw.p.size(); ++i) {
    const auto& S = sw.sums[i];
    // Increments at roundoff level of the sum count as zero.
    auto inc = [&](std::size_t k) {
      const double d = S[k] - S[k - 1];
      return std::fabs(d) <= 1e-12 * std::fabs(S[k]) ? 0.0 : d;
    };
    for (std::size_t k = 2; k < S.size(); ++k) {
      const double prev = inc(k - 1), cur = inc(k);
      sw.ratios[i].push_back(prev > 0.0 ? cur / prev : (cur > 0.0 ? std::numeric_limits<double>::infinity() : 0.0));
    }
  }
  sw.verdict = sweep_verdicts(sw.ratios);
  return sw;
}

void AtomicMeasure::validate() const {
  for (const auto& [w, m] : atoms) {
    if (!(std::abs(w) < 1.0)) throw Error(ErrorCode::InvalidParameter, "atoms must lie in the open disc");
    if (!(m > 0.0)) throw Error(ErrorCode::InvalidParameter, "atom masses must be positive");
  }
}

Eigen::MatrixXcd toeplitz_matrix(const AtomicMeasure& mu, double bergman_alpha, int N) {
  mu.validate();
  check_bergman(bergman_alpha);
  if (N < 1 || N > 1024) throw Error(ErrorCode::InvalidParameter, "N must be in 1..1024");
  const Eigen::Index A = static_cast<Eigen::Index>(mu.atoms.size());
  Eigen::MatrixXcd V(A, N);
  Eigen::VectorXd mass(A);
  for (Eigen::Index a = 0; a < A; ++a) {
    const auto [w, m] = mu.atoms[a];
    mass(a) = m;
    const double r = std::abs(w), th = std::arg(w);
    for (int n = 0; n < N; ++n) {
      if (r == 0.0) {
        V(a, n) = n == 0 ? 1.0 : 0.0;
        continue;
      }
      const double mag = std::exp(n * std::log(r) + 0.5 * log_inv_bergman_norm2(bergman_alpha, n));
      V(a, n) = std::polar(mag, n * th);
    }
  }
  return V.adjoint() * mass.asDiagonal() * V;
}

double berezin_transform(const AtomicMeasure& mu, double bergman_alpha, cplx z) {
  mu.validate();
  check_bergman(bergman_alpha);
  if (!(std::abs(z) < 1.0)) throw Error(ErrorCode::DomainError, "Berezin transform needs |z| < 1");
  double s = 0.0;
  for (const auto& [w, m] : mu.atoms) s += m * berezin_kernel(w, z, bergman_alpha);
  return s;
}

BinnedEstimate berezin_counting(const Symbol& phi, double alpha, std::span<const cplx> z, const MCOptions& opt) {
  check_alpha(alpha);
  for (cplx x : z)
    if (!(std::abs(x) < 1.0)) throw Error(ErrorCode::DomainError, "Berezin transform needs |z| < 1");
  const std::vector<cplx> pts(z.begin(), z.end());
  const double scale = 1.0 / (1.0 + alpha);
  return stratified_disc_estimate(
      phi, alpha, pts.size(),
      [&](cplx, const EvalResult& ev, std::vector<std::pair<std::size_t, double>>& out) {
        const double d2 = std::norm(ev.derivative);
        if (d2 == 0.0) return;
        for (std::size_t i = 0; i < pts.size(); ++i)
          out.emplace_back(i, scale * d2 * berezin_kernel(ev.value, pts[i], alpha));
      },
      opt);
}

CriterionResult berezin_lp_integral(const AtomicMeasure& mu, double bergman_alpha, double p) {
  mu.validate();
  check_bergman(bergman_alpha);
  if (!(p > 0.0)) throw Error(ErrorCode::InvalidParameter, "p must be positive");
  constexpr int kAngles = 512, kShells = 48;
  const GaussRule& rule = gauss_legendre(16);
  // Integrand in u = 1 - r: r/(1-r²)² (1/π)∫ μ̃^p dθ.
  auto f = [&](double u) {
    const double r = 1.0 - u;
    double ang = 0.0;
    for (int k = 0; k < kAngles; ++k)
      ang += std::pow(berezin_transform(mu, bergman_alpha, std::polar(r, kTwoPi * k / kAngles)), p);
    ang *= kTwoPi / kAngles / kPi;
    const double q = u * (2.0 - u);
    return r / (q * q) * ang;
  };
  CriterionResult res;
  res.id = "berezin-lp";
  res.p = p;
  res.alpha = bergman_alpha;
  std::vector<double> I(kShells);
  parallel_for(kShells, [&](std::size_t k) {
    const double lo = std::ldexp(1.0, -static_cast<int>(k) - 1), hi = std::ldexp(1.0, -static_cast<int>(k));
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      acc += rule.weights[q] * f(0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes[q]);
    I[k] = 0.5 * (hi - lo) * acc;
  });
  double cum = 0.0;
  for (int k = 0; k < kShells; ++k) {
    cum += I[k];
    const double lo = std::ldexp(1.0, -k - 1), hi = std::ldexp(1.0, -k);
    res.shells.push_back({k, lo, hi, I[k], cum, f(std::sqrt(lo * hi))});
  }
  res.eps_low = std::ldexp(1.0, -kShells);
  res.eps_high = 1.0;
  classify_shells(res);
  return res;
}

IapReport iap_integral(const Symbol& phi, double alpha, double p, int n_max, const MCOptions& opt) {
  check_alpha(alpha);
  if (!(p >= 2.0)) throw Error(ErrorCode::InvalidParameter, "p must be >= 2");
  if (n_max < 3 || n_max > 12) throw Error(ErrorCode::InvalidParameter, "n_max must be in 3..12");

  // Nodes in w: Gauss in log(1 - r) on each annulus, uniform angles.
  struct Node {
    cplx w;
    double weight;
    int level;
  };
  std::vector<Node> nodes;
  const GaussRule& rule = gauss_legendre(2);
  for (int n = 0; n <= n_max; ++n) {
    const double s_lo = std::log(std::ldexp(1.0, -n - 1)), s_hi = std::log(std::ldexp(1.0, -n));
    const int A = std::min(1 << (n + 2), 256);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double s = 0.5 * (s_lo + s_hi) + 0.5 * (s_hi - s_lo) * rule.nodes[q];
      const double u = std::exp(s), r = 1.0 - u;
      const double qq = u * (2.0 - u);
      // dλ = r dr dθ / (π (1-r²)²), dr = u ds
      const double radial = rule.weights[q] * 0.5 * (s_hi - s_lo) * u * r / (qq * qq);
      for (int k = 0; k < A; ++k)
        nodes.push_back({std::polar(r, kTwoPi * (k + 0.5) / A), radial * (kTwoPi / A) / kPi, n});
    }
  }

  auto est = stratified_disc_estimate(
      phi, alpha, nodes.size(),
      [&](cplx, const EvalResult& ev, std::vector<std::pair<std::size_t, double>>& out) {
        const double d2 = std::norm(ev.derivative);
        if (d2 == 0.0) return;
        for (std::size_t i = 0; i < nodes.size(); ++i) out.emplace_back(i, d2 * berezin_kernel(ev.value, nodes[i].w, alpha));
      },
      opt);

  IapReport rep;
  rep.alpha = alpha;
  rep.p = p;
  rep.samples = est.samples;
  rep.seed = est.seed;
  rep.annulus.assign(n_max + 1, 0.0);
  std::vector<double> var(n_max + 1, 0.0);
  const double e = 0.5 * p;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double v = std::max(0.0, est.value[i]);
    rep.annulus[nodes[i].level] += nodes[i].weight * std::pow(v, e);
    // Delta method per node; correlations between nodes are ignored.
    const double d = nodes[i].weight * e * (v > 0.0 ? std::pow(v, e - 1.0) : 0.0) * est.stderr_[i];
    var[nodes[i].level] += d * d;
  }
  for (int n = 0; n <= n_max; ++n) {
    rep.annulus_stderr.push_back(std::sqrt(var[n]));
    rep.value += rep.annulus[n];
    rep.stderr_ += var[n];
  }
  rep.stderr_ = std::sqrt(rep.stderr_);
  rep.diagnostic = growth_diagnostic(rep.annulus, rep.annulus_stderr);
  return rep;
}

std::string matrix_csv(const Eigen::MatrixXcd& A) {
  std::ostringstream os;
  os << "row,col,re,im\n";
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      os << i << ',' << j << ',' << num(A(i, j).real()) << ',' << num(A(i, j).imag()) << '\n';
  return os.str();
}

std::string spectrum_csv(const SpectralReport& r) {
  std::ostringstream os;
  os << "n,s_n\n";
  for (std::size_t n = 0; n < r.s.size(); ++n) os << n << ',' << num(r.s[n]) << '\n';
  return os.str();
}

}  // namespace compop
