#include "compop/capacity.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "compop/io.hpp"
#include "compop/parallel.hpp"
#include "compop/quadrature.hpp"

namespace compop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidParameter, "alpha must lie in [0, 1)");
}

std::vector<double> energy_weights(double alpha, int n_max) {
  std::vector<double> w(n_max + 1, 0.0);
  for (int n = 1; n <= n_max; ++n) w[n] = std::pow(static_cast<double>(n), alpha - 1.0);
  return w;
}

// Euclidean projection onto the probability simplex (sort and threshold).
void project_simplex(Eigen::VectorXd& x) {
  std::vector<double> u(x.data(), x.data() + x.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, tau = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cum += u[j];
    const double t = (cum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) tau = t;
  }
  for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = std::max(0.0, x[j] - tau);
}

}  // namespace

CircleMeasure CircleMeasure::make(std::vector<double> theta, std::vector<double> weights, int n_max) {
  if (theta.empty() || theta.size() != weights.size())
    throw Error(ErrorCode::InvalidParameter, "need matching nonempty node and weight lists");
  if (n_max < 0) throw Error(ErrorCode::InvalidParameter, "n_max must be nonnegative");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorCode::InvalidParameter, "weights must be nonnegative");
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-12) throw Error(ErrorCode::InvalidParameter, "weights must sum to 1");
  CircleMeasure m;
  m.theta_ = std::move(theta);
  m.weights_ = std::move(weights);
  m.coeffs_.assign(n_max + 1, cplx(0.0, 0.0));
  parallel_for(static_cast<std::size_t>(n_max + 1), [&](std::size_t n) {
    cplx acc(0.0, 0.0);
    for (std::size_t k = 0; k < m.theta_.size(); ++k)
      if (m.weights_[k] != 0.0) acc += m.weights_[k] * std::polar(1.0, -static_cast<double>(n) * m.theta_[k]);
    m.coeffs_[n] = acc;
  });
  m.coeffs_[0] = cplx(1.0, 0.0);
  return m;
}

CircleMeasure CircleMeasure::equispaced(int M, int n_max, double offset) {
  if (M < 1 || n_max < 0) throw Error(ErrorCode::InvalidParameter, "need M >= 1 and n_max >= 0");
  CircleMeasure m;
  m.theta_.resize(M);
  m.weights_.assign(M, 1.0 / M);
  for (int k = 0; k < M; ++k) m.theta_[k] = wrap_angle(offset + kTwoPi * k / M);
  m.coeffs_.assign(n_max + 1, cplx(0.0, 0.0));
  for (int n = 0; n <= n_max; n += M) m.coeffs_[n] = std::polar(1.0, -n * offset);
  m.coeffs_[0] = cplx(1.0, 0.0);
  return m;
}

EnergyReport alpha_energy(const CircleMeasure& mu, double alpha, int n_max) {
  check_alpha(alpha);
  if (n_max < 64) throw Error(ErrorCode::InvalidParameter, "n_max must be at least 64");
  if (n_max > mu.n_max()) throw Error(ErrorCode::InvalidParameter, "measure coefficients cached only to n_max");
  const auto& c = mu.coefficients();
  EnergyReport r;
  r.alpha = alpha;
  r.n_max = n_max;
  std::vector<double> blocks;
  double block = 0.0;
  int next = 2;
  for (int n = 1; n <= n_max; ++n) {
    const double t = std::norm(c[n]) * std::pow(static_cast<double>(n), alpha - 1.0);
    r.partial_sum += t;
    block += t;
    if (n + 1 == next) {
      blocks.push_back(block);
      block = 0.0;
      next *= 2;
    }
  }
  // Least-squares slope of log2 B_j over the last four complete blocks.
  const std::size_t m = blocks.size();
  if (m < 4) {
    r.tail_slope = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t j = m - 4; j < m; ++j) {
    if (!(blocks[j] > 1e-300)) {
      r.tail_slope = -kInf;
      return r;
    }
    const double x = static_cast<double>(j), y = std::log2(blocks[j]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  r.tail_slope = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
  return r;
}

std::vector<double> potential(const CircleMeasure& mu, double alpha, int n_max) {
  if (n_max > mu.n_max()) throw Error(ErrorCode::InvalidParameter, "measure coefficients cached only to n_max");
  const auto w = energy_weights(alpha, n_max);
  const auto& c = mu.coefficients();
  std::vector<double> g(mu.theta().size());
  parallel_for(g.size(), [&](std::size_t j) {
    double acc = 0.0;
    for (int n = 1; n <= n_max; ++n) acc += w[n] * std::real(c[n] * std::polar(1.0, n * mu.theta()[j]));
    g[j] = acc;
  });
  return g;
}

std::vector<double> place_nodes(const BoundarySet& K, const EquilibriumOptions& opt) {
  if (K.empty()) throw Error(ErrorCode::InvalidParameter, "K must be nonempty");
  if (opt.nodes < 1 || opt.nodes > 4096) throw Error(ErrorCode::InvalidParameter, "node count must lie in [1, 4096]");
  const auto& arcs = K.arcs();
  double total = 0.0;
  for (const Arc& a : arcs) total += a.length();
  // The default lattice keeps at least 2 n_max points on the circle: on a
  // coarser one the coefficient at n = G - m repeats the one at m, and frequencies
  // up to n_max would pick up the low-order mass.
  const long G = opt.lattice > 0
                     ? opt.lattice
                     : std::max<long>(2L * opt.n_max,
                                      std::lround(std::ceil(opt.nodes * kTwoPi / std::max(total, 1e-300))));
  const double h = kTwoPi / static_cast<double>(G);
  std::vector<double> nodes;
  for (const Arc& a : arcs) {
    if (a.length() == 0.0) {
      nodes.push_back(a.a);
      continue;
    }
    const long j0 = static_cast<long>(std::ceil(a.a / h - 0.5));
    const long j1 = static_cast<long>(std::floor(a.b / h - 0.5));
    if (j1 < j0) {
      nodes.push_back(0.5 * (a.a + a.b));
      continue;
    }
    for (long j = std::max(0L, j0); j <= std::min(j1, G - 1); ++j) nodes.push_back((j + 0.5) * h);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  if (nodes.size() > 4096) throw Error(ErrorCode::ResolutionExceeded, "more than 4096 nodes on K");
  return nodes;
}

namespace {

struct Quadratic {
  Eigen::MatrixXd A;  // A_jk = Σ_n w_n cos(n(θ_j - θ_k))
};

Quadratic energy_matrix(const std::vector<double>& theta, const std::vector<double>& w, int n_max) {
  const Eigen::Index M = static_cast<Eigen::Index>(theta.size());
  Eigen::MatrixXd C(n_max, M), S(n_max, M);
  parallel_for(static_cast<std::size_t>(n_max), [&](std::size_t i) {
    const int n = static_cast<int>(i) + 1;
    const double s = std::sqrt(w[n]);
    for (Eigen::Index k = 0; k < M; ++k) {
      C(i, k) = s * std::cos(n * theta[k]);
      S(i, k) = s * std::sin(n * theta[k]);
    }
  });
  Quadratic q;
  q.A = C.transpose() * C;
  q.A.noalias() += S.transpose() * S;
  return q;
}

double quad_energy(const Eigen::MatrixXd& A, const Eigen::VectorXd& x) { return x.dot(A * x); }

// Active-set solve of min xᵀAx on the simplex started from x (nonnegative, sum 1).
// Returns false when the step budget runs out.
bool active_set_polish(const Eigen::MatrixXd& A, Eigen::VectorXd& x, int& steps, int max_steps) {
  const Eigen::Index M = x.size();
  std::vector<char> in(M, 0);
  for (Eigen::Index j = 0; j < M; ++j) in[j] = x[j] > 1e-12;
  const double scale = std::max(1e-300, A.diagonal().maxCoeff());
  for (steps = 0; steps < max_steps; ++steps) {
    std::vector<Eigen::Index> S;
    for (Eigen::Index j = 0; j < M; ++j)
      if (in[j]) S.push_back(j);
    const Eigen::Index m = static_cast<Eigen::Index>(S.size());
    Eigen::MatrixXd KKT = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < m; ++b) KKT(a, b) = A(S[a], S[b]);
      KKT(a, m) = -1.0;
      KKT(m, a) = 1.0;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
    rhs[m] = 1.0;
    const Eigen::VectorXd sol = KKT.completeOrthogonalDecomposition().solve(rhs);
    const double lambda = sol[m];

    double tmin = 1.0;
    Eigen::Index blocking = -1;
    for (Eigen::Index a = 0; a < m; ++a) {
      const double xa = x[S[a]], ya = sol[a];
      if (ya < 0.0 && xa - ya > 0.0) {
        const double t = xa / (xa - ya);
        if (t < tmin) tmin = t, blocking = S[a];
      }
    }
    if (blocking >= 0) {
      for (Eigen::Index a = 0; a < m; ++a) x[S[a]] += tmin * (sol[a] - x[S[a]]);
      x[blocking] = 0.0;
      in[blocking] = 0;
      for (Eigen::Index a = 0; a < m; ++a)
        if (x[S[a]] <= 0.0) x[S[a]] = 0.0, in[S[a]] = 0;
      continue;
    }
    for (Eigen::Index a = 0; a < m; ++a) x[S[a]] = sol[a];
    const Eigen::VectorXd g = A * x;
    Eigen::Index worst = -1;
    double worst_gap = -1e-13 * scale;
    for (Eigen::Index j = 0; j < M; ++j)
      if (!in[j] && g[j] - lambda < worst_gap) worst_gap = g[j] - lambda, worst = j;
    if (worst < 0) return true;
    in[worst] = 1;
  }
  return false;
}

}  // namespace

EquilibriumResult equilibrium_measure(const BoundarySet& K, double alpha, const EquilibriumOptions& opt) {
  check_alpha(alpha);
  if (opt.n_max < 1) throw Error(ErrorCode::InvalidParameter, "n_max must be positive");
  const std::vector<double> theta = place_nodes(K, opt);
  const auto w = energy_weights(alpha, opt.n_max);
  const Eigen::Index M = static_cast<Eigen::Index>(theta.size());
  const Quadratic q = energy_matrix(theta, w, opt.n_max);
  const Eigen::MatrixXd& A = q.A;

  // Lipschitz constant of ∇E = 2Ax from a power iteration, with margin.
  double lmax = 0.0;
  {
    Eigen::VectorXd v = Eigen::VectorXd::Ones(M) / std::sqrt(static_cast<double>(M));
    for (int it = 0; it < 100; ++it) {
      Eigen::VectorXd Av = A * v;
      const double nv = Av.norm();
      if (nv == 0.0) break;
      lmax = nv;
      v = Av / nv;
    }
  }
  const double L = std::max(1e-300, 2.0 * 1.1 * lmax);

  // One product per iteration: A·y follows from A·x_k by linearity.
  Eigen::VectorXd x = Eigen::VectorXd::Constant(M, 1.0 / M), y = x, best = x;
  Eigen::VectorXd Ax = A * x, Ay = Ax;
  double e_x = x.dot(Ax), best_e = e_x, window_start = best_e, t = 1.0;
  int it = 0;
  bool stopped = M == 1;
  while (!stopped && it < opt.max_iterations) {
    Eigen::VectorXd next = y - (2.0 / L) * Ay;
    project_simplex(next);
    Eigen::VectorXd An = A * next;
    const double e = next.dot(An);
    if (e < best_e) best_e = e, best = next;
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    if (e > e_x) {
      // Momentum restart when the energy goes up.
      y = x;
      Ay = Ax;
      t = 1.0;
    } else {
      const double beta = (t - 1.0) / tn;
      y = next + beta * (next - x);
      Ay = An + beta * (An - Ax);
      x = std::move(next);
      Ax = std::move(An);
      e_x = e;
      t = tn;
    }
    ++it;
    if (it % opt.window == 0) {
      if (window_start - best_e < opt.tolerance) stopped = true;
      window_start = best_e;
    }
  }

  EquilibriumResult r;
  r.alpha = alpha;
  r.n_max = opt.n_max;
  r.iterations = it;
  x = best;
  bool polished = false;
  if (opt.polish && M > 1) {
    Eigen::VectorXd z = x;
    int steps = 0;
    if (active_set_polish(A, z, steps, std::min(64, static_cast<int>(M) + 1))) {
      for (Eigen::Index j = 0; j < M; ++j) z[j] = std::max(0.0, z[j]);
      z /= z.sum();
      if (quad_energy(A, z) <= best_e + 1e-14 * std::max(1.0, best_e)) x = z, polished = true;
    }
    r.polish_steps = steps;
  }
  x /= x.sum();
  const Eigen::VectorXd g = A * x;
  Eigen::VectorXd step = x - (2.0 / L) * g;
  project_simplex(step);
  r.gradient_norm = (x - step).norm();
  r.energy = x.dot(g);
  r.level = r.energy;
  double lo = kInf, hi = -kInf, gap = kInf;
  for (Eigen::Index j = 0; j < M; ++j) {
    if (x[j] > 1e-6) lo = std::min(lo, g[j]), hi = std::max(hi, g[j]);
    else gap = std::min(gap, g[j] - r.level);
  }
  r.support_spread = hi - lo;
  r.off_support_gap = std::isfinite(gap) ? gap : 0.0;
  r.converged = stopped || polished;
  r.measure = CircleMeasure::make(theta, std::vector<double>(x.data(), x.data() + M), opt.n_max);
  if (!r.converged) {
    std::ostringstream os;
    os << "projected gradient stopped after " << it << " iterations, gradient norm " << r.gradient_norm;
    throw MaxIterationsError(os.str(), std::move(r));
  }
  return r;
}

CapacityReport capacity_estimate(const BoundarySet& K, double alpha, std::span<const int> n_list,
                                 const EquilibriumOptions& opt) {
  static constexpr int kDefault[] = {256, 512, 1024};
  if (n_list.empty()) n_list = kDefault;
  CapacityReport rep;
  rep.alpha = alpha;
  // One node set for the whole list, fine enough for the largest n_max.
  EquilibriumOptions base = opt;
  if (base.lattice <= 0) {
    base.n_max = *std::max_element(n_list.begin(), n_list.end());
    double total = 0.0;
    for (const Arc& a : K.arcs()) total += a.length();
    base.lattice = static_cast<int>(std::max<long>(
        2L * base.n_max, std::lround(std::ceil(opt.nodes * kTwoPi / std::max(total, 1e-300)))));
  }
  for (int n : n_list) {
    EquilibriumOptions o = base;
    o.n_max = n;
    const EquilibriumResult e = equilibrium_measure(K, alpha, o);
    rep.nodes = static_cast<int>(e.measure.theta().size());
    CapacityRow row;
    row.n_max = n;
    row.energy = e.energy;
    row.capacity = e.energy > 0.0 ? 1.0 / e.energy : kInf;
    row.capacity_plus = 1.0 / (1.0 + std::max(0.0, e.energy));
    row.iterations = e.iterations + e.polish_steps;
    row.converged = e.converged;
    row.support_spread = e.support_spread;
    if (!rep.rows.empty() && row.energy < rep.rows.back().energy * (1.0 - 1e-9) - 1e-15) rep.monotone = false;
    rep.rows.push_back(row);
    rep.measure = e.measure;
  }
  return rep;
}

CriterionResult xlog_integral(const Symbol& phi, double alpha, const MCOptions& opt) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidParameter, "alpha must lie in (0, 1)");
  const int K = opt.strata;
  auto est = stratified_disc_estimate(
      phi, alpha, static_cast<std::size_t>(K),
      [&](cplx z, const EvalResult& ev, std::vector<std::pair<std::size_t, double>>& out) {
        const double v = 1.0 - std::norm(ev.value);
        if (!(v > 0.0)) throw Error(ErrorCode::SelfMapViolation, "|φ(z)| >= 1 inside the disc");
        const double f = std::norm(ev.derivative) / (v * v * std::log(std::exp(1.0) / v));
        const int k = std::clamp(static_cast<int>(std::floor(-std::log2(1.0 - std::abs(z)))), 0, K - 1);
        out.emplace_back(static_cast<std::size_t>(k), f);
      },
      opt);
  CriterionResult r;
  r.id = "xlog";
  r.alpha = alpha;
  double cum = 0.0, var = 0.0;
  for (int k = 0; k < K; ++k) {
    cum += est.value[k];
    var += est.stderr_[k] * est.stderr_[k];
    const double lo = std::ldexp(1.0, -k - 1), hi = std::ldexp(1.0, -k);
    r.shells.push_back({k, lo, hi, est.value[k], cum, std::numeric_limits<double>::quiet_NaN()});
  }
  r.eps_low = std::ldexp(1.0, -K);
  r.eps_high = 1.0;
  classify_shells(r);
  std::ostringstream os;
  os << "Monte Carlo standard error " << std::sqrt(var) << " (" << est.samples << " samples, seed " << est.seed << ")";
  r.warnings.push_back(os.str());
  return r;
}

namespace {

double logterm(double x) { return 1.0 - std::log1p(-x); }  // log(e/(1-x))

// m_n = (1+c) ∫_0^1 t^n (1-t)^c L(t)^{-σ} dt for n < N, on Gauss panels
// [2^{-j-1}, 2^{-j}], j < 60, in u = 1 - t plus a closed-form end piece.
std::vector<double> radial_moments(double c, double sigma, std::size_t N) {
  const GaussRule& rule = gauss_legendre(20);
  std::vector<double> t, w;
  for (int j = 0; j < 60; ++j) {
    const double lo = std::ldexp(1.0, -j - 1), hi = std::ldexp(1.0, -j);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double u = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes[q];
      t.push_back(1.0 - u);
      w.push_back(0.5 * (hi - lo) * rule.weights[q] * (1.0 + c) * std::pow(u, c) * std::pow(logterm(1.0 - u), -sigma));
    }
  }
  std::vector<double> m(N, 0.0);
  const std::size_t block = 4096;
  const std::size_t blocks = (N + block - 1) / block;
  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t n0 = b * block, n1 = std::min(N, n0 + block);
    for (std::size_t i = 0; i < t.size(); ++i) {
      double p = std::pow(t[i], static_cast<double>(n0));
      for (std::size_t n = n0; n < n1; ++n) {
        m[n] += w[i] * p;
        p *= t[i];
      }
    }
  });
  // The piece u < 2^{-60} contributes ≈ (1+c)∫ u^c L^{-σ} du to every m_n.
  const double u0 = std::ldexp(1.0, -60);
  const double end = std::pow(u0, 1.0 + c) * std::pow(logterm(1.0 - u0), -sigma);
  for (double& v : m) v += end;
  return m;
}

std::size_t terms_needed(double x) {
  if (x <= 0.0) return 1;
  return static_cast<std::size_t>(std::ceil(80.0 / (1.0 - x))) + 64;
}

double kernel_series(double d, double c, const std::vector<double>& m, double z) {
  const double beta = 0.5 * (2.0 + c + d), x = z * z;
  double a = 1.0, sum = 0.0, xp = 1.0;
  for (std::size_t n = 0; n < m.size(); ++n) {
    const double term = a * a * xp * m[n];
    sum += term;
    if (n > 8 && static_cast<double>(n) * (1.0 - x) > 2.0 * beta + 4.0 && term < 1e-17 * sum) break;
    a *= (beta + static_cast<double>(n)) / static_cast<double>(n + 1);
    xp *= x;
    if (xp == 0.0) break;
  }
  return sum;
}

double kernel_rhs(double d, double sigma, double z) {
  const double x = z * z;
  return 1.0 / (std::pow(1.0 - x, d) * std::pow(logterm(x), sigma));
}

}  // namespace

double kernel_integral(double d, double c, double sigma, double z) {
  if (!(d > 0.0 && c > -1.0 && sigma >= 0.0 && z >= 0.0 && z < 1.0))
    throw Error(ErrorCode::InvalidParameter, "need d > 0, c > -1, sigma >= 0, 0 <= |z| < 1");
  return kernel_series(d, c, radial_moments(c, sigma, terms_needed(z * z)), z);
}

KernelCheckReport series_kernel_checks() {
  std::vector<double> grid{0.0};
  for (int k = 1; k <= 12; ++k) grid.push_back(1.0 - std::ldexp(1.0, -k));
  KernelCheckReport rep;
  rep.min_ratio = kInf;
  rep.max_ratio = -kInf;
  auto add = [&](KernelCheckRow row) {
    row.ratio = row.lhs / row.rhs;
    rep.min_ratio = std::min(rep.min_ratio, row.ratio);
    rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    rep.rows.push_back(row);
  };

  for (double x : grid) {
    const double y = x * x;
    double sum = 0.0, p = 1.0;
    for (std::size_t n = 0;; ++n) {
      const double term = (1.0 + n) / std::log(std::exp(1.0) * (1.0 + n)) * p;
      sum += term;
      if (n > 8 && static_cast<double>(n) * (1.0 - y) > 4.0 && term < 1e-17 * sum) break;
      p *= y;
      if (p == 0.0) break;
    }
    KernelCheckRow row;
    row.check = "xlog";
    row.x = x;
    row.lhs = 1.0 / ((1.0 - y) * (1.0 - y) * logterm(y));
    row.rhs = sum;
    add(row);
  }

  const double zmax = grid.back();
  const std::size_t N = terms_needed(zmax * zmax);
  for (double c : {-0.5, 0.0, 1.0}) {
    for (double sigma : {0.0, 0.5, 1.0, 2.0}) {
      const std::vector<double> m = radial_moments(c, sigma, N);
      for (double d : {0.5, 1.0, 2.0}) {
        for (double z : grid) {
          KernelCheckRow row;
          row.check = "kernel";
          row.d = d, row.c = c, row.sigma = sigma, row.x = z;
          row.lhs = kernel_series(d, c, m, z);
          row.rhs = kernel_rhs(d, sigma, z);
          add(row);
        }
      }
    }
  }
  if (!(rep.min_ratio >= 1.0 / 50.0 && rep.max_ratio <= 50.0)) {
    std::ostringstream os;
    os << "ratio range [" << rep.min_ratio << ", " << rep.max_ratio << "] leaves [1/50, 50]";
    throw Error(ErrorCode::RatioOutOfRange, os.str());
  }
  return rep;
}

namespace {

// |f(e^{iθ})|² - t² as Σ_{|k|<=d} r_k e^{ikθ}, stored r_0..r_d (r_{-k} = conj r_k).
std::vector<cplx> modulus_coefficients(const std::vector<cplx>& f, double t) {
  const int d = static_cast<int>(f.size()) - 1;
  std::vector<cplx> r(d + 1, cplx(0.0, 0.0));
  for (int k = 0; k <= d; ++k)
    for (int l = 0; l + k <= d; ++l) r[k] += f[l + k] * std::conj(f[l]);
  r[0] -= t * t;
  return r;
}

double trig_eval(const std::vector<cplx>& r, double theta, double* derivative = nullptr) {
  double v = r[0].real(), dv = 0.0;
  for (std::size_t k = 1; k < r.size(); ++k) {
    const cplx e = std::polar(1.0, static_cast<double>(k) * theta);
    v += 2.0 * std::real(r[k] * e);
    dv += -2.0 * static_cast<double>(k) * std::imag(r[k] * e);
  }
  if (derivative) *derivative = dv;
  return v;
}

struct Isolation {
  std::vector<double> roots;
  bool degenerate = false;
};

Isolation circle_roots(const std::vector<cplx>& r) {
  Isolation iso;
  double scale = 0.0;
  for (const cplx& v : r) scale = std::max(scale, std::abs(v));
  int d = static_cast<int>(r.size()) - 1;
  while (d > 0 && std::abs(r[d]) <= 1e-14 * scale) --d;
  if (d == 0) {
    iso.degenerate = std::fabs(r[0].real()) <= 1e-14;
    return iso;
  }
  // w^d Σ r_k w^k: coefficients of w^j, j = 0..2d, with r_{-k} = conj r_k.
  const int D = 2 * d;
  std::vector<cplx> q(D + 1);
  for (int j = 0; j <= D; ++j) {
    const int k = j - d;
    q[j] = k >= 0 ? r[k] : std::conj(r[-k]);
  }
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(D, D);
  for (int i = 1; i < D; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < D; ++i) C(i, D - 1) = -q[i] / q[D];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::RootIsolationFailed, "companion eigenvalues did not converge");
  for (Eigen::Index i = 0; i < D; ++i) {
    const cplx w = es.eigenvalues()[i];
    if (std::fabs(std::abs(w) - 1.0) > 1e-5) continue;
    double th = wrap_angle(std::arg(w));
    for (int it = 0; it < 8; ++it) {
      double dv = 0.0;
      const double v = trig_eval(r, th, &dv);
      if (dv == 0.0) break;
      const double step = v / dv;
      if (std::fabs(step) > 1e-3) break;
      th -= step;
    }
    iso.roots.push_back(wrap_angle(th));
  }
  std::sort(iso.roots.begin(), iso.roots.end());
  // Double roots (tangencies) show up as close pairs or as roots with a flat derivative.
  for (std::size_t i = 0; i < iso.roots.size(); ++i) {
    const double next = i + 1 < iso.roots.size() ? iso.roots[i + 1] : iso.roots.front() + kTwoPi;
    if (iso.roots.size() > 1 && next - iso.roots[i] < 1e-7) iso.degenerate = true;
    double dv = 0.0;
    trig_eval(r, iso.roots[i], &dv);
    if (std::fabs(dv) < 1e-9 * scale) iso.degenerate = true;
  }
  return iso;
}

std::vector<Arc> arcs_from_roots(const std::vector<cplx>& r, const std::vector<double>& roots) {
  std::vector<Arc> arcs;
  if (roots.empty()) {
    if (trig_eval(r, 0.0) >= 0.0) arcs.push_back({0.0, kTwoPi});
    return arcs;
  }
  const std::size_t m = roots.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double a = roots[i];
    const double b = i + 1 < m ? roots[i + 1] : roots.front() + kTwoPi;
    if (trig_eval(r, 0.5 * (a + b)) < 0.0) continue;
    if (b <= kTwoPi) {
      arcs.push_back({a, b});
    } else {
      arcs.push_back({a, kTwoPi});
      arcs.push_back({0.0, b - kTwoPi});
    }
  }
  // Merge pieces that touch (a root with no sign change on either side).
  std::sort(arcs.begin(), arcs.end(), [](const Arc& x, const Arc& y) { return x.a < y.a; });
  std::vector<Arc> merged;
  for (const Arc& a : arcs) {
    if (!merged.empty() && a.a <= merged.back().b) merged.back().b = std::max(merged.back().b, a.b);
    else merged.push_back(a);
  }
  return merged;
}

}  // namespace

std::vector<Arc> superlevel_arcs(const std::vector<cplx>& f, double t) {
  if (f.empty()) throw Error(ErrorCode::InvalidParameter, "empty polynomial");
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidParameter, "t must be positive");
  for (double tt : {t, t + 1e-9}) {
    const auto r = modulus_coefficients(f, tt);
    const Isolation iso = circle_roots(r);
    if (!iso.degenerate) return arcs_from_roots(r, iso.roots);
  }
  throw Error(ErrorCode::RootIsolationFailed, "tangential level set at t = " + num(t));
}

WeakTypeReport weak_type_check(const Symbol& f, double alpha, std::span<const double> t_list,
                               const EquilibriumOptions& opt) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidParameter, "alpha must lie in (0, 1)");
  std::vector<cplx> c;
  if (f.variant() == SymbolVariant::Polynomial) {
    c = f.coefficients();
  } else if (f.variant() == SymbolVariant::ScaledRotation) {
    c = {0.0, std::polar(f.scale(), f.angle())};
  } else {
    throw Error(ErrorCode::InvalidParameter, "weak-type check needs a polynomial");
  }
  WeakTypeReport rep;
  rep.alpha = alpha;
  for (std::size_t n = 0; n < c.size(); ++n) rep.norm2 += std::pow(n + 1.0, 1.0 - alpha) * std::norm(c[n]);
  if (!(rep.norm2 > 0.0)) throw Error(ErrorCode::InvalidParameter, "f must be nonzero");
  for (double t : t_list) {
    WeakTypeRow row;
    row.t = t;
    row.arcs = superlevel_arcs(c, t);
    for (const Arc& a : row.arcs) row.measure += a.length() / kTwoPi;
    if (!row.arcs.empty()) {
      const EquilibriumResult e = equilibrium_measure(BoundarySet::from_arcs(row.arcs), alpha, opt);
      row.capacity_plus = 1.0 / (1.0 + std::max(0.0, e.energy));
    }
    row.ratio = row.capacity_plus * t * t / rep.norm2;
    rep.constant = std::max(rep.constant, row.ratio);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

std::string measure_csv(const CircleMeasure& mu) {
  std::string s = "theta,weight\n";
  for (std::size_t k = 0; k < mu.theta().size(); ++k) s += num(mu.theta()[k]) + "," + num(mu.weights()[k]) + "\n";
  return s;
}

std::string capacity_json(const CapacityReport& r) {
  nlohmann::json arr = nlohmann::json::array();
  for (const CapacityRow& row : r.rows) {
    nlohmann::json j;
    j["alpha"] = r.alpha;
    j["n_max"] = row.n_max;
    j["capacity"] = std::isfinite(row.capacity) ? nlohmann::json(row.capacity) : nlohmann::json("inf");
    j["energy"] = row.energy;
    j["iterations"] = row.iterations;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

}  // namespace compop
