#include "compop/boundary_set.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "compop/common.hpp"
#include "compop/errors.hpp"

namespace compop {

namespace {

void check_arcs(const std::vector<Arc>& arcs) {
  double total = 0.0;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const Arc& a = arcs[i];
    if (!(a.a >= 0.0) || !(a.a <= a.b) || !(a.b <= kTwoPi))
      throw Error(ErrorCode::InvalidParameter, "arc endpoints must satisfy 0 <= a <= b <= 2pi");
    if (i > 0 && !(arcs[i - 1].b < a.a))
      throw Error(ErrorCode::InvalidParameter, "arcs must be pairwise disjoint");
    total += a.length();
  }
  if (total > kTwoPi * (1.0 + 1e-15)) throw Error(ErrorCode::InvalidParameter, "total arc length exceeds 2pi");
}

// Union length of intervals on the circle after dilation by t on both sides.
double dilated_length(const std::vector<Arc>& arcs, double t) {
  if (arcs.empty()) return 0.0;
  std::vector<std::pair<double, double>> iv;
  iv.reserve(arcs.size());
  for (const Arc& a : arcs) iv.emplace_back(a.a - t, a.b + t);
  // intervals are sorted by start already; merge linearly
  double total = 0.0;
  double cs = iv[0].first, ce = iv[0].second;
  const double first_start = cs;
  for (std::size_t i = 1; i < iv.size(); ++i) {
    if (iv[i].first <= ce) {
      ce = std::max(ce, iv[i].second);
    } else {
      total += ce - cs;
      cs = iv[i].first;
      ce = iv[i].second;
    }
  }
  // last merged interval may wrap onto the first one
  const double wrap_overlap = std::max(0.0, ce - (first_start + kTwoPi));
  total += ce - cs - wrap_overlap;
  return std::min(total, kTwoPi);
}

}  // namespace

BoundarySet BoundarySet::from_arcs(std::vector<Arc> arcs) {
  std::sort(arcs.begin(), arcs.end(), [](const Arc& x, const Arc& y) { return x.a < y.a; });
  check_arcs(arcs);
  BoundarySet K;
  K.arcs_ = std::move(arcs);
  return K;
}

BoundarySet BoundarySet::point(double theta) {
  const double t = wrap_angle(theta);
  return from_arcs({Arc{t, t}});
}

BoundarySet BoundarySet::arc(double a, double b) { return from_arcs({Arc{a, b}}); }

BoundarySet BoundarySet::full_circle() { return from_arcs({Arc{0.0, kTwoPi}}); }

BoundarySet BoundarySet::cantor(std::vector<double> ratios) {
  Cantor c;
  c.lengths.push_back(kTwoPi);
  for (double r : ratios) {
    if (!(r > 0.0 && r < 0.5)) throw Error(ErrorCode::InvalidParameter, "Cantor ratio must lie in (0, 1/2)");
    const double prev = c.lengths.back();
    c.gaps.push_back(prev * (1.0 - 2.0 * r));
    c.lengths.push_back(prev * r);
  }
  for (std::size_t i = 1; i < c.gaps.size(); ++i)
    if (c.gaps[i] > c.gaps[i - 1])
      throw Error(ErrorCode::InvalidParameter, "Cantor gap lengths must be nonincreasing in the level");
  c.ratios = std::move(ratios);

  BoundarySet K;
  const int level = static_cast<int>(c.ratios.size());
  if (level == 0) {
    K.dimension_ = 1.0;
  } else {
    bool constant = std::all_of(c.ratios.begin(), c.ratios.end(),
                                [&](double r) { return r == c.ratios.front(); });
    if (constant) {
      K.dimension_ = std::log(2.0) / std::log(1.0 / c.ratios.front());
    } else {
      // similarity dimension of the ratio sequence: liminf log 2^n / -log(l_n / 2π)
      K.dimension_ = level * std::log(2.0) / -std::log(c.lengths.back() / kTwoPi);
    }
  }
  if (level <= kMaxMaterializedLevel) {
    std::vector<Arc> arcs{Arc{0.0, kTwoPi}};
    for (int i = 0; i < level; ++i) {
      std::vector<Arc> next;
      next.reserve(arcs.size() * 2);
      const double len = c.lengths[i + 1];
      for (const Arc& a : arcs) {
        next.push_back(Arc{a.a, a.a + len});
        next.push_back(Arc{a.b - len, a.b});
      }
      arcs = std::move(next);
    }
    K.arcs_ = std::move(arcs);
  }
  K.cantor_ = std::move(c);
  return K;
}

const std::vector<double>& BoundarySet::cantor_ratios() const {
  static const std::vector<double> none;
  return cantor_ ? cantor_->ratios : none;
}

double BoundarySet::arc_count() const {
  if (cantor_) return std::ldexp(1.0, cantor_level());
  return static_cast<double>(arcs_.size());
}

const std::vector<Arc>& BoundarySet::arcs() const {
  if (cantor_ && cantor_level() > kMaxMaterializedLevel)
    throw Error(ErrorCode::InvalidParameter, "Cantor level too deep to list arcs");
  return arcs_;
}

double BoundarySet::distance(double theta) const {
  if (cantor_) return cantor_distance(theta);
  if (arcs_.empty()) return kPi;
  const double x = wrap_angle(theta);
  auto it = std::upper_bound(arcs_.begin(), arcs_.end(), x, [](double v, const Arc& a) { return v < a.a; });
  // candidate arcs: the one starting at or before x and its successor, plus the wrap-around pair
  double best = kPi;
  auto consider = [&](const Arc& a) {
    if (x >= a.a && x <= a.b) {
      best = 0.0;
      return;
    }
    best = std::min({best, circle_distance(x, a.a), circle_distance(x, a.b)});
  };
  if (it != arcs_.begin()) consider(*(it - 1));
  if (it != arcs_.end()) consider(*it);
  consider(arcs_.front());
  consider(arcs_.back());
  return best;
}

double BoundarySet::cantor_distance(double theta) const {
  const Cantor& c = *cantor_;
  double x = wrap_angle(theta);
  double lo = 0.0;
  const int level = cantor_level();
  for (int i = 0; i < level; ++i) {
    const double child = c.lengths[i + 1];
    const double left_end = lo + child;
    const double right_start = lo + c.lengths[i] - child;
    if (x <= left_end) continue;  // stay in the left child
    if (x >= right_start) {
      lo = right_start;
      continue;
    }
    return std::min(x - left_end, right_start - x);
  }
  return 0.0;
}

double BoundarySet::neighborhood_measure(double t) const {
  if (!(t >= 0.0)) throw Error(ErrorCode::DomainError, "neighborhood radius must be >= 0");
  if (cantor_) return cantor_neighborhood(t);
  if (arcs_.empty()) return 0.0;
  if (t >= kPi) return 1.0;
  // Full cover is decided on the gaps so the value saturates at exactly 1.
  bool covered = true;
  for (std::size_t i = 0; i < arcs_.size() && covered; ++i) {
    const double next = i + 1 < arcs_.size() ? arcs_[i + 1].a : arcs_[0].a + kTwoPi;
    covered = next - arcs_[i].b <= 2.0 * t;
  }
  if (covered) return 1.0;
  return std::min(1.0, dilated_length(arcs_, t) / kTwoPi);
}

double BoundarySet::cantor_neighborhood(double t) const {
  const Cantor& c = *cantor_;
  const int level = cantor_level();
  if (level == 0) return 1.0;
  // Gaps are nonincreasing, so the levels whose gaps survive the dilation form
  // a prefix 1..L; below that every gap is filled. The two extreme arcs touch at
  // 0 ≡ 2π, which removes 2t of double counting.
  int L = 0;
  while (L < level && c.gaps[L] > 2.0 * t) ++L;
  if (L == 0) return 1.0;
  const double total = std::ldexp(1.0, L) * (c.lengths[L] + 2.0 * t) - 2.0 * t;
  return std::min(1.0, total / kTwoPi);
}

std::vector<double> BoundarySet::kinks() const {
  std::vector<double> k;
  const auto& arcs = arcs_;
  if (cantor_ && cantor_level() > kMaxMaterializedLevel)
    throw Error(ErrorCode::InvalidParameter, "Cantor level too deep to list kinks");
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    k.push_back(arcs[i].a);
    k.push_back(arcs[i].b);
    const Arc& next = arcs[(i + 1) % arcs.size()];
    double gap_end = next.a;
    if (i + 1 == arcs.size()) gap_end += kTwoPi;
    if (gap_end > arcs[i].b) k.push_back(wrap_angle(0.5 * (arcs[i].b + gap_end)));
  }
  for (double& x : k) x = wrap_angle(x);
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  return k;
}

std::string BoundarySet::describe() const {
  std::ostringstream os;
  if (cantor_) {
    os << "cantor(level=" << cantor_level() << ")";
  } else if (arcs_.empty()) {
    os << "empty";
  } else {
    os << "arcs(" << arcs_.size() << ")";
  }
  return os.str();
}

BoundarySet make_cantor_set(int level, double ratio) {
  if (level < 0) throw Error(ErrorCode::InvalidParameter, "Cantor level must be >= 0");
  if (!(ratio > 0.0 && ratio < 0.5)) throw Error(ErrorCode::InvalidParameter, "Cantor ratio must lie in (0, 1/2)");
  return BoundarySet::cantor(std::vector<double>(static_cast<std::size_t>(level), ratio));
}

std::vector<double> logpower_cantor_ratios(int levels) {
  if (levels < 0) throw Error(ErrorCode::InvalidParameter, "levels must be >= 0");
  auto m = [](int L) { return 1.0 / ((L + 1.0) * (L + 1.0) * std::log(L + std::exp(1.0))); };
  std::vector<double> r(static_cast<std::size_t>(levels));
  for (int L = 1; L <= levels; ++L) r[L - 1] = m(L) / (2.0 * m(L - 1));
  return r;
}

double neighborhood_measure(const BoundarySet& K, double t) { return K.neighborhood_measure(t); }

}  // namespace compop
