#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "odl/phase.hpp"
#include "odl/scalar.hpp"

namespace odl {

enum class SpaceKind { Circle, Interval, Torus };

struct Space {
  SpaceKind kind = SpaceKind::Circle;
  int dim = 1;

  static Space circle() { return {SpaceKind::Circle, 1}; }
  static Space interval() { return {SpaceKind::Interval, 1}; }
  static Space torus(int n);

  /// Circle and torus coordinates are taken mod 1.
  bool is_periodic() const { return kind != SpaceKind::Interval; }
  std::string name() const;
  friend bool operator==(const Space&, const Space&) = default;
};

enum class Metric { CircleArc, IntervalAbs, TorusLInf, TorusL2 };

Metric default_metric(const Space& space);
Metric parse_metric(std::string_view name);
std::string_view to_string(Metric metric);

/// A point of S^1, [0,1] or T^n. All coordinates share one representation.
class Point {
 public:
  Point(Space space, std::vector<Rational> coords);
  Point(Space space, std::vector<double> coords);

  const Space& space() const { return space_; }
  int dim() const { return space_.dim; }
  bool is_exact() const { return std::holds_alternative<std::vector<Rational>>(coords_); }

  Scalar coord(int i) const;
  const std::vector<Rational>& exact_coords() const;
  std::vector<double> float_coords() const;

  std::string csv() const;
  friend bool operator==(const Point& a, const Point& b);

 private:
  Space space_;
  std::variant<std::vector<Rational>, std::vector<double>> coords_;
};

/// Finite ordered list of points of one space, stored flat (row-major).
class PointSet {
 public:
  static PointSet exact(Space space, std::vector<Rational> flat);
  static PointSet floating(Space space, std::vector<double> flat);
  static PointSet from_points(Space space, const std::vector<Point>& points);

  const Space& space() const { return space_; }
  int dim() const { return space_.dim; }
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  bool is_exact() const { return std::holds_alternative<std::vector<Rational>>(coords_); }
  bool deduplicated() const { return dedup_; }

  Point point(std::size_t i) const;
  std::span<const Rational> exact_coords() const;
  std::span<const double> float_coords() const;

  /// Remove duplicates (exact equality, or per-coordinate circular distance
  /// below `tol` for floats). Order of first occurrences is kept.
  PointSet deduplicate(double tol = kFloatTolerance) const;
  PointSet to_float() const;
  PointSet sorted() const;

  /// Same points regardless of order and multiplicity.
  bool same_set(const PointSet& other, double tol = kFloatTolerance) const;

  /// Set union of two sets over the same space and representation.
  PointSet merged(const PointSet& other) const;

 private:
  PointSet(Space space, std::variant<std::vector<Rational>, std::vector<double>> coords, bool dedup);

  Space space_;
  std::variant<std::vector<Rational>, std::vector<double>> coords_;
  bool dedup_ = false;
};

Scalar distance(const Point& a, const Point& b, Metric metric);

/// A gap value together with a point of the space realising it.
struct GapWitness {
  Scalar gap;
  Point farthest;
};

/// sup over y in S^1 of dist(y, A): half of the largest circular gap.
Scalar circle_gap(const PointSet& a);
GapWitness circle_gap_witness(const PointSet& a);

/// sup over y in [0,1] of dist(y, A). Edge gaps count at full length.
Scalar interval_gap(const PointSet& a);
GapWitness interval_gap_witness(const PointSet& a);

inline constexpr std::uint64_t kDefaultGridBudget = std::uint64_t(1) << 24;

/// Max over the G^n grid {j/G} of dist(grid point, A). The true gap g
/// satisfies value <= g <= value + grid_error_bound(n, G, metric).
Scalar torus_gap_upper(const PointSet& a, int resolution, Metric metric = Metric::TorusLInf,
                       std::uint64_t budget = kDefaultGridBudget);
GapWitness torus_gap_witness(const PointSet& a, int resolution, Metric metric = Metric::TorusLInf,
                             std::uint64_t budget = kDefaultGridBudget);
double grid_error_bound(int dim, int resolution, Metric metric);

/// Fast float path: grid gap of a set given as flat double coordinates.
double torus_gap_grid(std::span<const double> flat, int dim, int resolution, Metric metric,
                      std::uint64_t budget = kDefaultGridBudget);
/// Same on phase coordinates.
double torus_gap_grid_phases(std::span<const phase::Phase> flat, int dim, int resolution, Metric metric,
                             std::uint64_t budget = kDefaultGridBudget);

struct DensityCertificate {
  bool dense = false;
  Scalar gap;
  /// Point at distance `gap` from the set; set when not dense.
  std::optional<Point> farthest;
};

/// True iff the gap (exact on circle/interval, grid value on the torus) is
/// strictly below eps.
DensityCertificate is_eps_dense(const PointSet& a, const Scalar& eps, int resolution = 64,
                                std::optional<Metric> metric = std::nullopt);

/// One-sided Hausdorff semimetric: sup over b in B of dist(b, A).
Scalar semimetric_gap(const PointSet& a, const PointSet& b,
                      std::optional<Metric> metric = std::nullopt);

/// One line per point, `c_1,...,c_n`, rationals as p/q.
std::string to_csv(const PointSet& a);
PointSet parse_point_set_csv(const Space& space, std::string_view text);

}  // namespace odl
