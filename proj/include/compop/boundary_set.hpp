#pragma once

#include <optional>
#include <string>
#include <vector>

namespace compop {

/// Closed angular interval [a, b] with 0 <= a <= b <= 2π; a == b is a point.
struct Arc {
  double a = 0.0;
  double b = 0.0;
  double length() const { return b - a; }
};

/// Closed subset K of the circle: either an explicit union of disjoint arcs or
/// the level-L stage of a symmetric Cantor construction on [0, 2π].
///
/// Cantor sets are kept as their ratio sequence; arcs are only materialised up
/// to kMaxMaterializedLevel, while distances and neighbourhood measures use the
/// self-similar structure and work at any level.
class BoundarySet {
 public:
  static constexpr int kMaxMaterializedLevel = 20;

  BoundarySet() = default;  // empty set
  static BoundarySet from_arcs(std::vector<Arc> arcs);
  static BoundarySet point(double theta);
  static BoundarySet arc(double a, double b);
  static BoundarySet full_circle();
  /// Cantor construction with one removal ratio per level (each in (0, 1/2)).
  /// Gap lengths must be nonincreasing in the level.
  static BoundarySet cantor(std::vector<double> ratios);

  bool empty() const { return !cantor_ && arcs_.empty(); }
  bool is_cantor() const { return cantor_.has_value(); }
  int cantor_level() const { return cantor_ ? static_cast<int>(cantor_->ratios.size()) : -1; }
  const std::vector<double>& cantor_ratios() const;
  std::optional<double> analytic_hausdorff_dimension() const { return dimension_; }

  /// Number of arcs (2^level for Cantor sets).
  double arc_count() const;
  /// Explicit arcs; throws for Cantor sets beyond kMaxMaterializedLevel.
  const std::vector<Arc>& arcs() const;

  /// Arc-length distance from e^{iθ} to K, in [0, π]; π for the empty set.
  double distance(double theta) const;
  /// Normalised Lebesgue measure of K itself.
  double measure() const { return neighborhood_measure(0.0); }
  /// Normalised measure of K_t = {d(·, K) <= t}.
  double neighborhood_measure(double t) const;

  /// Angles where θ ↦ d(θ, K) is not smooth: arc endpoints and gap midpoints.
  std::vector<double> kinks() const;

  std::string describe() const;

 private:
  struct Cantor {
    std::vector<double> ratios;
    std::vector<double> lengths;  // lengths[i] = arc length at level i
    std::vector<double> gaps;     // gaps[i] = gap created at level i+1
  };

  double cantor_distance(double theta) const;
  double cantor_neighborhood(double t) const;

  std::vector<Arc> arcs_;
  std::optional<Cantor> cantor_;
  std::optional<double> dimension_;
};

/// Constant-ratio Cantor set of the given level (2^level arcs).
BoundarySet make_cantor_set(int level, double ratio);

/// Ratio sequence whose level-L stage has total measure m_L = 1/((L+1)^2 log(L+e)),
/// so that |K_t| behaves like 1/(log^2(1/t) loglog(1/t)) as t -> 0.
std::vector<double> logpower_cantor_ratios(int levels);

/// Normalised measure of the t-neighbourhood of K (exact arc arithmetic).
double neighborhood_measure(const BoundarySet& K, double t);

}  // namespace compop
