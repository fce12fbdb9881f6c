#include "compop/levelset.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "compop/errors.hpp"
#include "compop/io.hpp"
#include "compop/parallel.hpp"
#include "compop/quadrature.hpp"

namespace compop {

const char* to_string(ProfileMethod m) {
  return m == ProfileMethod::ExactArc ? "exact-arc" : "boundary-sampling";
}

namespace {

void check_s_grid(std::span<const double> s_grid) {
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    if (!(s_grid[i] >= 0.0 && s_grid[i] < 1.0)) throw Error(ErrorCode::DomainError, "s values must lie in [0, 1)");
    if (i > 0 && s_grid[i] < s_grid[i - 1]) throw Error(ErrorCode::DomainError, "s grid must be sorted");
  }
}

}  // namespace

std::vector<double> dyadic_s_grid(int levels) {
  std::vector<double> s{0.0};
  for (int k = 1; k <= levels; ++k) s.push_back(1.0 - std::ldexp(1.0, -k));
  return s;
}

LevelSetProfile level_set_profile(const Symbol& phi, std::span<const double> s_grid) {
  if (phi.variant() != SymbolVariant::Outer) return level_set_profile_sampled(phi, s_grid);
  check_s_grid(s_grid);
  LevelSetProfile prof;
  prof.method = ProfileMethod::ExactArc;
  const WeightFunction& h = phi.weight();
  const BoundarySet& K = phi.set();
  for (double s : s_grid) {
    double m;
    if (s == 0.0 || h.is_zero()) {
      m = 1.0;
    } else if (K.empty()) {
      m = s <= std::exp(-h(kPi)) ? 1.0 : 0.0;
    } else {
      const double y = -std::log(s);
      m = y >= h.max_value() ? 1.0 : K.neighborhood_measure(h.inverse(y));
    }
    prof.samples.emplace_back(s, m);
  }
  return prof;
}

LevelSetProfile level_set_profile_sampled(const Symbol& phi, std::span<const double> s_grid,
                                          const SamplingOptions& opt) {
  check_s_grid(s_grid);
  const int G = opt.grid;
  const double cell = kTwoPi / G;
  std::vector<double> mod(G + 1);
  for (int i = 0; i < G; ++i) mod[i] = boundary_modulus(phi, cell * i);
  mod[G] = mod[0];

  LevelSetProfile prof;
  prof.method = ProfileMethod::BoundarySampling;
  prof.resolution = opt.resolution;
  for (double s : s_grid) {
    double measure = 0.0;
    for (int i = 0; i < G; ++i) {
      const bool in_a = mod[i] >= s, in_b = mod[i + 1] >= s;
      if (in_a && in_b) {
        measure += cell;
        continue;
      }
      if (!in_a && !in_b) continue;
      // Bisection on the crossing, then a linear interpolant in the last bracket.
      double a = cell * i, b = cell * (i + 1), ma = mod[i], mb = mod[i + 1];
      int depth = 0;
      while (b - a > opt.resolution) {
        if (++depth > 60) throw Error(ErrorCode::ResolutionExceeded, "crossing refinement depth limit");
        const double m = 0.5 * (a + b);
        const double mm = boundary_modulus(phi, m);
        if ((mm >= s) == (ma >= s)) {
          a = m;
          ma = mm;
        } else {
          b = m;
          mb = mm;
        }
      }
      const double x = mb != ma ? a + (s - ma) / (mb - ma) * (b - a) : 0.5 * (a + b);
      const double cross = std::clamp(x, a, b);
      measure += in_a ? cross - cell * i : cell * (i + 1) - cross;
    }
    prof.samples.emplace_back(s, std::min(1.0, measure / kTwoPi));
  }
  return prof;
}

cplx boundary_trace(const Symbol& phi, double theta) {
  switch (phi.variant()) {
    case SymbolVariant::Polynomial:
      return horner(phi.coefficients(), std::polar(1.0, theta)).value;
    case SymbolVariant::ScaledRotation:
      return std::polar(phi.scale(), theta + phi.angle());
    case SymbolVariant::Outer: {
      if (phi.weight().is_zero()) return 1.0;
      const double mod = boundary_modulus(phi, theta);
      PeriodicFunction g{[&phi](double t) { return phi.boundary_exponent(t); }, phi.exponent_kinks()};
      return std::polar(mod, -conjugate_function(g, theta));
    }
  }
  return 0.0;
}

std::vector<double> pullback_box_measures(const Symbol& phi, int n, int oversample) {
  if (n < 0 || n > 14) throw Error(ErrorCode::InvalidParameter, "box level must be in 0..14");
  if (oversample < 1) throw Error(ErrorCode::InvalidParameter, "oversample must be >= 1");
  const std::size_t G = static_cast<std::size_t>(std::max(1 << (n + 6), 1 << 12)) * oversample;
  const std::size_t boxes = std::size_t{1} << n;
  const double ring = 1.0 - std::ldexp(1.0, -n);
  const double width = kTwoPi / boxes;

  std::vector<std::size_t> ring_idx;
  for (std::size_t k = 0; k < G; ++k)
    if (boundary_modulus(phi, kTwoPi * (k + 0.5) / G) >= ring) ring_idx.push_back(k);

  std::vector<std::size_t> box_of(ring_idx.size());
  parallel_for(ring_idx.size(), [&](std::size_t i) {
    const cplx w = boundary_trace(phi, kTwoPi * (ring_idx[i] + 0.5) / G);
    box_of[i] = std::min(boxes - 1, static_cast<std::size_t>(wrap_angle(std::arg(w)) / width));
  });
  std::vector<double> m(boxes, 0.0);
  for (std::size_t b : box_of) m[b] += 1.0;
  for (double& x : m) x /= static_cast<double>(G);
  return m;
}

Region Region::disc() { return {}; }

Region Region::polar_box(int n, int j) {
  if (n < 0 || n > 30 || j < 0 || j >= (1 << n)) throw Error(ErrorCode::InvalidParameter, "polar box index");
  Region r;
  r.r_lo = n == 0 ? 0.0 : 1.0 - std::ldexp(1.0, -n);
  r.r_hi = 1.0 - std::ldexp(1.0, -n - 1);
  r.th_lo = kTwoPi * j / (1 << n);
  r.th_hi = kTwoPi * (j + 1) / (1 << n);
  r.label = "R(" + std::to_string(n) + "," + std::to_string(j) + ")";
  return r;
}

Region Region::carleson_box(int n, int j) {
  Region r = polar_box(n, j);
  r.r_hi = 1.0;
  r.label = "W(" + std::to_string(n) + "," + std::to_string(j) + ")";
  return r;
}

Region Region::sector(double r_lo, double r_hi, double th_lo, double th_hi) {
  if (!(0.0 <= r_lo && r_lo < r_hi && r_hi <= 1.0 && th_lo < th_hi && th_hi - th_lo <= kTwoPi))
    throw Error(ErrorCode::InvalidParameter, "invalid sector");
  Region r;
  r.r_lo = r_lo, r.r_hi = r_hi, r.th_lo = th_lo, r.th_hi = th_hi;
  std::ostringstream os;
  os << "sector(" << r_lo << "," << r_hi << "," << th_lo << "," << th_hi << ")";
  r.label = os.str();
  return r;
}

bool Region::contains(cplx z) const {
  const double r = std::abs(z);
  if (r < r_lo) return false;
  if (r_hi < 1.0 ? r >= r_hi : r > 1.0) return false;
  if (th_hi - th_lo >= kTwoPi) return true;
  const double a = wrap_angle(std::arg(z) - th_lo);
  return a < th_hi - th_lo;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double unit(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

}  // namespace

BinnedEstimate stratified_disc_estimate(const Symbol& phi, double alpha, std::size_t bins,
                                        const SampleVisitor& visit, const MCOptions& opt) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::InvalidParameter, "alpha must lie in [0, 1]");
  if (opt.strata < 1 || opt.samples < static_cast<std::size_t>(2 * opt.strata))
    throw Error(ErrorCode::InvalidParameter, "need at least two samples per stratum");
  const int K = opt.strata;
  // The first opt.samples % K strata take one extra sample.
  auto count = [&](int k) { return opt.samples / K + (static_cast<std::size_t>(k) < opt.samples % K ? 1 : 0); };
  const double e = 1.0 + alpha;

  // Tail mass G(r) = (1 - r^2)^{1+α} at the stratum radii r_k = 1 - 2^{-k}.
  auto tail = [&](double v) { return std::pow(v * (2.0 - v), e); };  // v = 1 - r
  std::vector<double> Gk(K + 1);
  for (int k = 0; k < K; ++k) Gk[k] = tail(std::ldexp(1.0, -k));
  Gk[K] = 0.0;

  std::vector<std::vector<double>> sum(K, std::vector<double>(bins, 0.0)), sq(K, std::vector<double>(bins, 0.0));
  parallel_for(static_cast<std::size_t>(K), [&](std::size_t k) {
    std::mt19937_64 gen(splitmix64(opt.seed ^ splitmix64(k + 1)));
    std::vector<std::pair<std::size_t, double>> contrib;
    std::vector<double>& S = sum[k];
    std::vector<double>& Q = sq[k];
    // Accumulate per-sample bin totals before squaring.
    std::vector<double> local(bins, 0.0);
    std::vector<std::size_t> touched;
    const std::size_t n = count(static_cast<int>(k));
    for (std::size_t i = 0; i < n; ++i) {
      const double Gs = Gk[k + 1] + (Gk[k] - Gk[k + 1]) * unit(gen);
      const double w = std::pow(Gs, 1.0 / e);  // 1 - r^2
      const double r = std::min(std::sqrt(std::max(0.0, 1.0 - w)), 1.0 - 1e-9);
      const double th = kTwoPi * unit(gen);
      const cplx z = std::polar(r, th);
      const EvalResult ev = eval(phi, z);
      if (!std::isfinite(std::norm(ev.derivative)) || !std::isfinite(std::norm(ev.value)))
        throw Error(ErrorCode::NonFiniteIntegrand, "symbol value or derivative overflowed");
      contrib.clear();
      visit(z, ev, contrib);
      touched.clear();
      for (const auto& [b, v] : contrib) {
        if (local[b] == 0.0) touched.push_back(b);
        local[b] += v;
      }
      for (std::size_t b : touched) {
        S[b] += local[b];
        Q[b] += local[b] * local[b];
        local[b] = 0.0;
      }
    }
  });

  BinnedEstimate est;
  est.value.assign(bins, 0.0);
  est.stderr_.assign(bins, 0.0);
  est.samples = opt.samples;
  est.seed = opt.seed;
  for (std::size_t b = 0; b < bins; ++b) {
    double v = 0.0, var = 0.0;
    for (int k = 0; k < K; ++k) {
      const double P = Gk[k] - Gk[k + 1];
      const double per = static_cast<double>(count(k));
      const double mean = sum[k][b] / per;
      const double s2 = std::max(0.0, (sq[k][b] - per * mean * mean) / (per - 1.0));
      v += P * mean;
      var += P * P * s2 / per;
    }
    est.value[b] = v;
    est.stderr_[b] = std::sqrt(var);
  }
  return est;
}

CountingMeasureReport counting_measure(const Symbol& phi, double alpha, const Region& region, const MCOptions& opt) {
  const double scale = 1.0 / (1.0 + alpha);
  auto est = stratified_disc_estimate(
      phi, alpha, 1,
      [&](cplx, const EvalResult& w, std::vector<std::pair<std::size_t, double>>& out) {
        if (region.contains(w.value)) out.emplace_back(0, scale * std::norm(w.derivative));
      },
      opt);
  CountingMeasureReport rep;
  rep.alpha = alpha;
  rep.region = region.label;
  rep.value = est.value[0];
  rep.stderr_ = est.stderr_[0];
  rep.samples = est.samples;
  rep.seed = est.seed;
  return rep;
}

std::vector<cplx> preimages(const Symbol& phi, cplx z) {
  if (phi.variant() == SymbolVariant::ScaledRotation) {
    if (phi.scale() == 0.0) throw Error(ErrorCode::InvalidParameter, "constant symbol has no isolated preimages");
    return {z / std::polar(phi.scale(), phi.angle())};
  }
  if (phi.variant() != SymbolVariant::Polynomial)
    throw Error(ErrorCode::InvalidParameter, "root counting needs a polynomial symbol");
  std::vector<cplx> c = phi.coefficients();
  const int d = static_cast<int>(c.size()) - 1;
  if (d < 1) throw Error(ErrorCode::InvalidParameter, "polynomial degree must be >= 1");
  if (d > 64) throw Error(ErrorCode::RootFindingFailed, "degree above 64 is rejected");
  c[0] -= z;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) M(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) M(i, d - 1) = -c[i] / c[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::RootFindingFailed, "companion eigenvalues did not converge");
  std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + d);

  // Replace each cluster of nearby roots by copies of its mean.
  std::vector<bool> done(d, false);
  for (int i = 0; i < d; ++i) {
    if (done[i]) continue;
    std::vector<int> members{i};
    for (int j = i + 1; j < d; ++j)
      if (!done[j] && std::abs(roots[j] - roots[i]) < 1e-8) members.push_back(j);
    cplx mean = 0.0;
    for (int j : members) mean += roots[j];
    mean /= static_cast<double>(members.size());
    for (int j : members) {
      roots[j] = mean;
      done[j] = true;
    }
  }
  return roots;
}

double nevanlinna_counting(const Symbol& phi, double alpha, cplx z, CountingWeight weight) {
  if (!(std::abs(z) < 1.0)) throw Error(ErrorCode::DomainError, "nevanlinna_counting needs |z| < 1");
  double N = 0.0;
  for (const cplx& w : preimages(phi, z)) {
    const double r = std::abs(w);
    if (r >= 1.0) continue;
    const double base = weight == CountingWeight::Distance ? 1.0 - r : 1.0 - r * r;
    N += alpha == 0.0 ? 1.0 : std::pow(base, alpha);
  }
  return N;
}

double counting_measure_by_roots(const Symbol& phi, double alpha, const Region& region, CountingWeight weight,
                                 int order, int panels) {
  const GaussRule& g = gauss_legendre(order);
  const double r_hi = std::min(region.r_hi, 1.0 - 1e-12);
  const double dr = (r_hi - region.r_lo) / panels, dt = (region.th_hi - region.th_lo) / panels;
  double acc = 0.0;
  for (int pr = 0; pr < panels; ++pr) {
    for (int pt = 0; pt < panels; ++pt) {
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const double r = region.r_lo + dr * (pr + 0.5 * (g.nodes[i] + 1.0));
        for (std::size_t j = 0; j < g.nodes.size(); ++j) {
          const double th = region.th_lo + dt * (pt + 0.5 * (g.nodes[j] + 1.0));
          const double w = g.weights[i] * g.weights[j] * 0.25 * dr * dt;
          acc += w * r * nevanlinna_counting(phi, alpha, std::polar(r, th), weight);
        }
      }
    }
  }
  return acc / kPi;  // dA = r dr dθ / π
}

GrowthDiagnostic growth_diagnostic(std::span<const double> L, std::span<const double> se) {
  GrowthDiagnostic d;
  const std::size_t n = L.size();
  if (n < 4) {
    d.note = "fewer than 4 levels";
    return d;
  }
  if (L[n - 1] == 0.0 && L[n - 2] == 0.0) {
    d.verdict = Verdict::Finite;
    d.rho = -std::numeric_limits<double>::infinity();
    d.note = "vanishing tail";
    return d;
  }
  for (std::size_t i = n - 4; i < n; ++i) {
    if (!(L[i] > 0.0)) {
      d.note = "zero level sum among the last 4 levels";
      return d;
    }
    if (!se.empty() && se[i] > 0.1 * L[i]) {
      d.note = "standard error above 10% of L_n; diagnostic refused";
      return d;
    }
  }
  auto slope = [&](auto xf) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = n - 4; i < n; ++i) {
      const double x = xf(static_cast<double>(i)), y = std::log(L[i]);
      sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    return (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
  };
  d.rho = slope([](double i) { return i; }) / std::log(2.0);
  d.sigma = slope([](double i) { return std::log(std::max(i, 1.0)); });
  if (d.rho < -0.1) {
    d.verdict = Verdict::Finite;
  } else if (d.rho > 0.1) {
    d.verdict = Verdict::Divergent;
  } else {
    d.note = "growth exponent inside the dead zone";
  }
  return d;
}

std::vector<LueckingReport> luecking_sum(const Symbol& phi, double alpha, std::span<const double> p_list, int n_max,
                                         const LueckingOptions& opt) {
  if (n_max < 3 || n_max > 12) throw Error(ErrorCode::InvalidParameter, "n_max must be in 3..12");
  for (double p : p_list)
    if (!(p >= 2.0)) throw Error(ErrorCode::InvalidParameter, "luecking_sum needs p >= 2");

  std::vector<std::size_t> offset(n_max + 2);
  for (int n = 0; n <= n_max + 1; ++n) offset[n] = (std::size_t{1} << n) - 1;
  const double scale = 1.0 / (1.0 + alpha);
  auto est = stratified_disc_estimate(
      phi, alpha, offset[n_max + 1],
      [&](cplx, const EvalResult& w, std::vector<std::pair<std::size_t, double>>& out) {
        const double r = std::abs(w.value);
        const int n = r < 0.5 ? 0 : static_cast<int>(std::floor(-std::log2(1.0 - r)));
        if (n > n_max) return;
        const std::size_t boxes = std::size_t{1} << n;
        const std::size_t j =
            std::min(boxes - 1, static_cast<std::size_t>(wrap_angle(std::arg(w.value)) / (kTwoPi / boxes)));
        out.emplace_back(offset[n] + j, scale * std::norm(w.derivative));
      },
      opt.mc);

  std::vector<std::vector<double>> hardy_boxes;
  if (alpha == 1.0 && opt.hardy)
    for (int n = 0; n <= n_max; ++n) hardy_boxes.push_back(pullback_box_measures(phi, n, opt.hardy_oversample));

  std::vector<LueckingReport> out;
  for (double p : p_list) {
    LueckingReport rep;
    rep.alpha = alpha;
    rep.p = p;
    rep.samples = est.samples;
    rep.seed = est.seed;
    for (int n = 0; n <= n_max; ++n) {
      const std::size_t boxes = std::size_t{1} << n;
      const double pref = std::exp2((2.0 + alpha) * n * p / 2.0);
      double sum = 0.0, var = 0.0;
      std::vector<double> mu(boxes), se(boxes);
      for (std::size_t j = 0; j < boxes; ++j) {
        mu[j] = est.value[offset[n] + j];
        se[j] = est.stderr_[offset[n] + j];
        if (mu[j] > 0.0) {
          sum += std::pow(mu[j], p / 2);
          const double dd = (p / 2) * std::pow(mu[j], p / 2 - 1) * se[j];
          var += dd * dd;
        }
      }
      rep.L.push_back(pref * sum);
      rep.L_stderr.push_back(pref * std::sqrt(var));
      rep.box_measures.push_back(std::move(mu));
      rep.box_stderr.push_back(std::move(se));
    }
    rep.diagnostic = growth_diagnostic(rep.L, rep.L_stderr);
    if (!hardy_boxes.empty()) {
      for (int n = 0; n <= n_max; ++n) {
        double sum = 0.0;
        for (double m : hardy_boxes[n])
          if (m > 0.0) sum += std::pow(m, p / 2);
        rep.hardy.push_back(std::exp2(n * p / 2.0) * sum);
      }
      rep.hardy_diagnostic = growth_diagnostic(rep.hardy);
    }
    out.push_back(std::move(rep));
  }
  return out;
}

namespace {

// Boundary samples whose image lies in the ring 1 - h <= |w| <= 1, as sorted arguments.
std::vector<double> ring_arguments(const Symbol& phi, double h, std::size_t G) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < G; ++k)
    if (boundary_modulus(phi, kTwoPi * (k + 0.5) / G) >= 1.0 - h) idx.push_back(k);
  std::vector<double> args(idx.size());
  parallel_for(idx.size(), [&](std::size_t i) {
    args[i] = wrap_angle(std::arg(boundary_trace(phi, kTwoPi * (idx[i] + 0.5) / G)));
  });
  std::sort(args.begin(), args.end());
  return args;
}

// Number of sorted angles within circular distance h of c.
std::size_t count_window(const std::vector<double>& args, double c, double h) {
  if (args.empty()) return 0;
  if (h >= kPi) return args.size();
  auto count = [&](double lo, double hi) {
    return static_cast<std::size_t>(std::upper_bound(args.begin(), args.end(), hi) -
                                    std::lower_bound(args.begin(), args.end(), lo));
  };
  double lo = c - h, hi = c + h;
  std::size_t n = count(std::max(lo, 0.0), std::min(hi, kTwoPi));
  if (lo < 0.0) n += count(lo + kTwoPi, kTwoPi);
  if (hi > kTwoPi) n += count(0.0, hi - kTwoPi);
  return n;
}

}  // namespace

std::vector<CompactnessRow> compactness_diagnostic(const Symbol& phi, std::span<const double> h_list) {
  std::vector<CompactnessRow> rows;
  const int n_zeta = 1 << 10;
  for (double h : h_list) {
    if (!(h > 0.0 && h <= 0.25)) throw Error(ErrorCode::InvalidParameter, "window sizes must lie in (0, 1/4]");
    const std::size_t G = std::max<std::size_t>(1 << 16, static_cast<std::size_t>(std::ceil(256.0 / h)));
    const auto args = ring_arguments(phi, h, G);
    std::size_t best = 0;
    for (int k = 0; k < n_zeta; ++k) best = std::max(best, count_window(args, kTwoPi * k / n_zeta, h));
    CompactnessRow row;
    row.h = h;
    row.sup_measure = static_cast<double>(best) / G;
    row.ratio = row.sup_measure / h;
    rows.push_back(row);
  }
  return rows;
}

std::vector<LlqpRow> llqp_ratios(const Symbol& phi, double C, std::span<const double> h_list, int n_zeta) {
  if (phi.variant() == SymbolVariant::Outer)
    throw Error(ErrorCode::InvalidParameter, "LLQP ratios need a polynomial or scaled rotation");
  auto N = [&](cplx z) {
    double s = 0.0;
    for (const cplx& w : preimages(phi, z)) {
      const double r = std::abs(w);
      if (r < 1.0 && r > 0.0) s += -std::log(r);
    }
    return s;
  };
  std::vector<LlqpRow> rows;
  for (double h : h_list) {
    const std::size_t G = std::max<std::size_t>(1 << 16, static_cast<std::size_t>(std::ceil(256.0 / h)));
    const auto args = ring_arguments(phi, std::min(1.0, C * h), G);
    LlqpRow row;
    row.h = h;
    row.ratio_min = std::numeric_limits<double>::infinity();
    row.ratio_max = 0.0;
    for (int k = 0; k < n_zeta; ++k) {
      const double c = kTwoPi * k / n_zeta;
      const double m = static_cast<double>(count_window(args, c, std::min(kPi, C * h))) / G;
      if (m <= 0.0) continue;
      double sup = 0.0;
      for (int a = 0; a < 8; ++a) {
        const double r = 1.0 - h * (a + 0.5) / 8.0;
        for (int b = 0; b < 8; ++b) sup = std::max(sup, N(std::polar(r, c - h + 2.0 * h * (b + 0.5) / 8.0)));
      }
      const double ratio = sup / m;
      row.ratio_min = std::min(row.ratio_min, ratio);
      row.ratio_max = std::max(row.ratio_max, ratio);
      ++row.windows;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string profile_csv(const LevelSetProfile& p) {
  std::ostringstream os;
  os << "s,measure\n";
  for (const auto& [s, m] : p.samples) os << num(s) << ',' << num(m) << '\n';
  return os.str();
}

std::string boxes_csv(const std::vector<std::vector<double>>& measures, const std::vector<std::vector<double>>& se,
                      int first_level) {
  std::ostringstream os;
  os << "n,j,measure,stderr\n";
  for (std::size_t i = 0; i < measures.size(); ++i)
    for (std::size_t j = 0; j < measures[i].size(); ++j)
      os << first_level + static_cast<int>(i) << ',' << j << ',' << num(measures[i][j]) << ','
         << num(i < se.size() && j < se[i].size() ? se[i][j] : 0.0) << '\n';
  return os.str();
}

}  // namespace compop
