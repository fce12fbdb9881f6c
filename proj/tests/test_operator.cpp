#include <cmath>
#include <random>
#include <vector>

#include "compop/common.hpp"
#include "compop/errors.hpp"
#include "compop/operator.hpp"
#include "doctest.h"

using namespace compop;

namespace {

Symbol one_point(double gamma) { return Symbol::outer(WeightFunction::power(1.0, gamma), BoundarySet::point(0.0)); }

// Direct coefficient convolution, independent of the FFT path.
std::vector<cplx> poly_power(const std::vector<cplx>& c, int n) {
  std::vector<cplx> P{1.0};
  for (int k = 0; k < n; ++k) {
    std::vector<cplx> Q(P.size() + c.size() - 1, 0.0);
    for (std::size_t i = 0; i < P.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j) Q[i + j] += P[i] * c[j];
    P = std::move(Q);
  }
  return P;
}

// ∫ g dA_a by dyadic shells in 1 - r (Gauss) times an angular trapezoid.
template <class G>
double disc_integral(G&& g, double a, int angles = 256) {
  static const double x8[] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                              0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
  static const double w8[] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                              0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
  double total = 0.0;
  for (int k = 0; k < 40; ++k) {
    const double lo = std::ldexp(1.0, -k - 1), hi = std::ldexp(1.0, -k);
    for (int q = 0; q < 8; ++q) {
      const double u = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x8[q];
      const double r = 1.0 - u;
      double ang = 0.0;
      for (int j = 0; j < angles; ++j) ang += g(std::polar(r, kTwoPi * j / angles));
      // dA_a = (1+a)(1-r²)^a r dr dθ / π
      total += w8[q] * 0.5 * (hi - lo) * (1.0 + a) * std::pow(1.0 - r * r, a) * r * ang * (kTwoPi / angles) / kPi;
    }
  }
  return total;
}

}  // namespace

TEST_CASE("space parameters") {
  SpaceParams sp{0.0, 0.0};
  CHECK(sp.weight(3) == doctest::Approx(4.0));
  CHECK(SpaceParams{1.0, 0.0}.weight(7) == 1.0);
  CHECK(sp.bergman_norm2(4) == doctest::Approx(0.2));
  SpaceParams b1{1.0, 1.0};
  CHECK(b1.bergman_norm2(2) == doctest::Approx(2.0 * 2.0 / 24.0));  // 2! Γ(3) / Γ(5)
  // Cross-check one norm by quadrature.
  CHECK(disc_integral([](cplx z) { return std::norm(z * z); }, 1.0) == doctest::Approx(b1.bergman_norm2(2)).epsilon(1e-9));
}

TEST_CASE("composition matrix of a scaled rotation is diagonal") {
  for (double alpha : {1.0, 0.0, 0.5}) {
    auto cm = composition_matrix(Symbol::scaled_rotation(0.7, 0.3), alpha, 32);
    CHECK_FALSE(cm.under_resolved);
    for (int m = 0; m < 32; ++m)
      for (int n = 0; n < 32; ++n) {
        cplx want = m == n ? std::polar(std::pow(0.7, n), 0.3 * n) : cplx(0.0);
        CHECK(std::abs(cm.matrix(m, n) - want) < 1e-13);
      }
  }
}

TEST_CASE("composition matrix of a constant symbol is rank one") {
  const double c = 0.6;
  auto cm = composition_matrix(Symbol::polynomial({c}), 1.0, 64);
  auto r = singular_values(cm.matrix);
  CHECK(r.s[0] == doctest::Approx(1.0 / std::sqrt(1.0 - c * c)).epsilon(1e-12));
  CHECK(r.s[1] < 1e-12);
}

TEST_CASE("composition matrix columns against direct convolution") {
  std::vector<cplx> c{cplx(0.1, 0.05), 0.4, cplx(0.0, 0.3), 0.1};
  auto phi = Symbol::polynomial(c);
  for (double alpha : {1.0, 0.0}) {
    const int N = 32;
    auto cm = composition_matrix(phi, alpha, N);
    SpaceParams sp{alpha, 0.0};
    for (int n : {0, 1, 5, 17, 31}) {
      auto P = poly_power(c, n);
      for (int m = 0; m < N; ++m) {
        cplx want = m < int(P.size()) ? P[m] * std::sqrt(sp.weight(m) / sp.weight(n)) : 0.0;
        CHECK(std::abs(cm.matrix(m, n) - want) < 1e-13);
      }
    }
  }
  // H² column norms are ‖φ^n‖ restricted to the first N coefficients.
  auto cm = composition_matrix(phi, 1.0, 16);
  for (int n = 0; n < 16; ++n) {
    auto P = poly_power(c, n);
    double norm2 = 0.0;
    for (int m = 0; m < 16 && m < int(P.size()); ++m) norm2 += std::norm(P[m]);
    CHECK(cm.matrix.col(n).squaredNorm() == doctest::Approx(norm2).epsilon(1e-12));
  }
}

TEST_CASE("under-resolution flag") {
  auto z2 = composition_matrix(Symbol::polynomial({0.0, 0.0, 1.0}), 1.0, 16);
  CHECK(z2.under_resolved);  // z^{2n} leaves the first 16 rows
  auto small = composition_matrix(Symbol::polynomial({0.0, 0.0, 0.5}), 1.0, 64);
  CHECK_FALSE(small.under_resolved);
  CHECK_THROWS_AS(composition_matrix(Symbol::identity(), 1.0, 48), Error);
}

TEST_CASE("singular values and Schatten partial sums") {
  auto id = singular_values(Eigen::MatrixXcd::Identity(16, 16));
  for (double s : id.s) CHECK(s == doctest::Approx(1.0));
  const int ns[] = {16};
  auto ones = schatten_partial(id, 1.0, ns);
  CHECK(ones.sums[0] == doctest::Approx(16.0));
  CHECK(ones.verdict == Verdict::Divergent);

  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(64, 64);
  for (int n = 0; n < 64; ++n) D(n, n) = std::ldexp(1.0, -n);
  auto geo = singular_values(D);
  for (int n = 0; n < 64; ++n) CHECK(geo.s[n] == doctest::Approx(std::ldexp(1.0, -n)).epsilon(1e-12));
  CHECK(std::fabs(geo.frobenius2 - 4.0 / 3.0) < 1e-12);
  const int n64[] = {64};
  for (double p : {1.0, 2.0, 4.0}) {
    auto sp = schatten_partial(geo, p, n64);
    CHECK(std::fabs(sp.sums[0] - 1.0 / (1.0 - std::pow(2.0, -p))) < 1e-10);
    CHECK(sp.verdict == Verdict::Finite);
  }

  std::vector<double> harm;
  for (int n = 0; n < 1024; ++n) harm.push_back(1.0 / (n + 1.0));
  auto hr = spectral_report(harm);
  CHECK(hr.slope == doctest::Approx(-1.0).epsilon(1e-9));
  const int n1024[] = {1024};
  CHECK(schatten_partial(hr, 2.0, n1024).verdict == Verdict::Finite);
  CHECK(schatten_partial(hr, 2.0, n1024).sums[0] == doctest::Approx(kPi * kPi / 6.0).epsilon(1e-3));
  CHECK(schatten_partial(hr, 1.0, n1024).verdict == Verdict::Divergent);

  // Σ s^p nonincreasing in p after normalising by s_0.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Eigen::MatrixXcd R(24, 24);
  for (int i = 0; i < 24; ++i)
    for (int j = 0; j < 24; ++j) R(i, j) = cplx(U(rng), U(rng));
  auto rr = singular_values(R);
  const double s0 = rr.s[0];
  for (double& s : rr.s) s /= s0;
  const int n24[] = {24};
  double prev = 1e300;
  for (double p : {0.5, 1.0, 2.0, 3.0, 6.0}) {
    double v = schatten_partial(rr, p, n24).sums[0];
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("Hilbert-Schmidt norm") {
  for (double s : {0.3, 0.9}) {
    auto r = hilbert_schmidt_norm(Symbol::scaled_rotation(s, 1.0));
    CHECK(r.verdict == Verdict::Finite);
    CHECK(std::fabs(r.value - 1.0 / (1.0 - s * s)) < 1e-8);
    CHECK(std::fabs(r.series_value - 1.0 / (1.0 - s * s)) < 1e-8);
  }
  CHECK(hilbert_schmidt_norm(Symbol::identity()).verdict == Verdict::Divergent);
  CHECK(hilbert_schmidt_norm(one_point(1.0)).verdict == Verdict::Divergent);
  CHECK(hilbert_schmidt_norm(Symbol::polynomial({0.0, 0.0, 1.0})).verdict == Verdict::Divergent);

  auto poly = hilbert_schmidt_norm(Symbol::polynomial({0.1, 0.5, 0.2}));
  CHECK(poly.verdict == Verdict::Finite);
  CHECK(poly.series_converged);
  CHECK(poly.value == doctest::Approx(poly.series_value).epsilon(1e-10));

  auto sq = hilbert_schmidt_norm(one_point(0.5));
  CHECK(sq.verdict == Verdict::Finite);
  CHECK(sq.value == doctest::Approx(sq.series_value).epsilon(1e-4));

  auto empty = hilbert_schmidt_norm(Symbol::outer(WeightFunction::power(1.0, 1.0), BoundarySet()));
  CHECK(empty.value == doctest::Approx(1.0 / (1.0 - std::exp(-2.0 * kPi))));
}

TEST_CASE("Hardy Gram matrix") {
  // Polynomial: Gram of the first N columns of the full-height Taylor matrix.
  std::vector<cplx> c{0.2, cplx(0.3, 0.1), 0.4};
  auto phi = Symbol::polynomial(c);
  auto G = hardy_gram_matrix(phi, 16);
  auto cm = composition_matrix(phi, 1.0, 32);
  Eigen::MatrixXcd A = cm.matrix.leftCols(16);
  CHECK((G - A.adjoint() * A).cwiseAbs().maxCoeff() < 1e-13);

  // Outer one-point: ‖φ^k‖² = ∫ e^{-2k|θ|} dθ/2π.
  auto Go = hardy_gram_matrix(one_point(1.0), 32);
  CHECK(std::fabs(Go(0, 0).real() - 1.0) < 1e-12);
  for (int k = 1; k < 32; ++k) CHECK(std::fabs(Go(k, k).real() - (1.0 - std::exp(-2.0 * k * kPi)) / (2.0 * k * kPi)) < 1e-12);
  CHECK((Go - Go.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  // <φ^k, 1> = φ(0)^k.
  const cplx f0 = eval(one_point(1.0), 0.0).value;
  for (int k = 1; k < 8; ++k) CHECK(std::abs(Go(0, k) - std::pow(f0, k)) < 1e-9);
}

TEST_CASE("truncation sweep on closed-form spectra") {
  const double ps[] = {1.0, 2.0};
  auto sr = truncation_sweep(Symbol::scaled_rotation(0.5), ps, 256);
  for (auto v : sr.verdict) CHECK(v == Verdict::Finite);
  CHECK(sr.sums[1].back() == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  auto id = truncation_sweep(Symbol::identity(), ps, 256);
  for (auto v : id.verdict) CHECK(v == Verdict::Divergent);
  CHECK(id.sums[0].back() == doctest::Approx(256.0).epsilon(1e-12));
}

TEST_CASE("Toeplitz matrices of atomic measures") {
  for (double a : {0.0, 1.0, 0.5}) {
    auto T0 = toeplitz_matrix(AtomicMeasure{{{0.0, 1.0}}}, a, 16);
    CHECK(std::abs(T0(0, 0) - 1.0) < 1e-15);
    CHECK(T0.cwiseAbs().sum() == doctest::Approx(1.0));

    const cplx w = std::polar(0.5, 0.8);
    auto r = singular_values(toeplitz_matrix(AtomicMeasure{{{w, 1.0}}}, a, 256));
    CHECK(r.s[0] == doctest::Approx(std::pow(0.75, -(2.0 + a))).epsilon(1e-10));
    CHECK(r.s[1] < 1e-10);

    auto T2 = toeplitz_matrix(AtomicMeasure{{{w, 1.0}, {-w, 1.0}}}, a, 256);
    CHECK(T2.trace().real() == doctest::Approx(2.0 * std::pow(0.75, -(2.0 + a))).epsilon(1e-10));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(T2);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
  }
  CHECK_THROWS_AS(toeplitz_matrix(AtomicMeasure{{{1.0, 1.0}}}, 0.0, 8), Error);
  CHECK_THROWS_AS(toeplitz_matrix(AtomicMeasure{{{0.1, -1.0}}}, 0.0, 8), Error);
}

TEST_CASE("Berezin transform") {
  CHECK(berezin_transform(AtomicMeasure{{{0.0, 1.0}}}, 0.0, 0.0) == doctest::Approx(1.0));
  const cplx w(0.3, -0.5);
  for (double a : {0.0, 1.0})
    CHECK(berezin_transform(AtomicMeasure{{{w, 1.0}}}, a, w) == doctest::Approx(std::pow(1.0 - std::norm(w), -(2.0 + a))));
  const double eps = 1e-3;
  for (double r : {0.2, 0.9, 0.999})
    CHECK(berezin_transform(AtomicMeasure{{{0.0, eps}}}, 1.0, r) == doctest::Approx(eps * std::pow(1.0 - r * r, 3.0)));

  // Identity symbol: μ_{id,α} = (1-|z|²)^α dA / ... so (1+α) μ̃ ≡ 1.
  MCOptions opt;
  opt.samples = 200000;
  std::vector<cplx> z{0.0, cplx(0.5, 0.2), cplx(-0.8, 0.1)};
  for (double alpha : {0.0, 1.0}) {
    auto est = berezin_counting(Symbol::identity(), alpha, z, opt);
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(std::fabs(est.value[i] - 1.0 / (1.0 + alpha)) <= 4 * est.stderr_[i] + 1e-12);
  }
}

TEST_CASE("Luecking direction: Toeplitz spectrum vs Berezin integral") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double lo = 1e300, hi = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    AtomicMeasure mu;
    const int atoms = 1 + int(rng() % 8);
    for (int k = 0; k < atoms; ++k) mu.atoms.push_back({std::polar(0.9 * std::sqrt(U(rng)), kTwoPi * U(rng)), 0.1 + U(rng)});
    for (double a : {0.0, 1.0})
      for (double p : {1.0, 2.0}) {
        auto sv = singular_values(toeplitz_matrix(mu, a, 256));
        double sp = 0.0;
        for (double s : sv.s) sp += std::pow(s, p);
        auto bl = berezin_lp_integral(mu, a, p);
        CHECK(std::isfinite(sp));
        CHECK(bl.verdict == Verdict::Finite);
        const double ratio = sp / bl.value;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
  }
  MESSAGE("ratio window [" << lo << ", " << hi << "]");
  CHECK(lo > 0.0);
  CHECK(hi < 1e6);
}

TEST_CASE("pointwise estimate with a single constant per alpha") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (double a : {0.0, 1.0}) {
    double C = 0.0;
    for (int poly = 0; poly < 10; ++poly) {
      std::vector<cplx> f(1 + rng() % 8);
      for (auto& x : f) x = cplx(U(rng), U(rng));
      for (int k = 0; k < 10; ++k) {
        cplx z = std::polar(0.95 * std::sqrt(0.5 * (U(rng) + 1.0)), kPi * U(rng));
        auto g = [&](cplx w) {
          const double d = std::norm(1.0 - std::conj(w) * z);
          return std::pow(1.0 - std::norm(w), 2.0 + a) / std::pow(d, 2.0 + a) * std::norm(horner(f, w).value);
        };
        C = std::max(C, std::norm(horner(f, z).value) / disc_integral(g, a));
      }
    }
    MESSAGE("alpha " << a << ": smallest admissible C observed " << C);
    // Frozen regression bound: observed 2.79 (α = 0) and 2.44 (α = 1).
    CHECK(C < 3.0);
  }
}

TEST_CASE("iap integral examples") {
  MCOptions opt;
  opt.samples = 20000;
  auto sr = iap_integral(Symbol::scaled_rotation(0.5), 0.0, 2.0, 6, opt);
  CHECK(sr.diagnostic.verdict == Verdict::Finite);
  auto id = iap_integral(Symbol::identity(), 1.0, 2.0, 6, opt);
  CHECK(id.diagnostic.verdict == Verdict::Divergent);
  // (1+α) μ̃ ≡ 1 for the identity, so each annulus carries its λ-mass.
  for (int n = 0; n <= 6; ++n) {
    const double rlo = n == 0 ? 0.0 : 1.0 - std::ldexp(1.0, -n), rhi = 1.0 - std::ldexp(1.0, -n - 1);
    const double mass = 1.0 / (1.0 - rhi * rhi) - 1.0 / (1.0 - rlo * rlo);
    CHECK(id.annulus[n] == doctest::Approx(mass).epsilon(0.05));
  }
}

TEST_CASE("CSV output") {
  Eigen::MatrixXcd A(1, 2);
  A << cplx(1.0, 2.0), cplx(0.5, 0.0);
  CHECK(matrix_csv(A) == "row,col,re,im\n0,0,1,2\n0,1,0.5,0\n");
  auto r = spectral_report({0.25, 1.0});
  CHECK(spectrum_csv(r) == "n,s_n\n0,1\n1,0.25\n");
}
