#include "odl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "odl/error.hpp"
#include "odl/phase.hpp"

namespace odl {

namespace {

Rational frac(const Rational& x) { return x - Rational(floor_of(x)); }

double frac(double x) {
  double v = x - std::floor(x);
  return v >= 1.0 ? 0.0 : v;
}

Rational circle_arc(const Rational& a, const Rational& b) {
  Rational d = frac(Rational(a - b));
  Rational other = 1 - d;
  return d < other ? d : other;
}

double circle_arc(double a, double b) {
  double d = std::fabs(a - b);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

void check_nonempty(const PointSet& a, const char* what) {
  if (a.empty()) raise(Errc::EmptySet, std::string(what) + " of an empty set");
}

void check_space(const PointSet& a, SpaceKind kind, const char* what) {
  if (a.space().kind != kind) {
    raise(Errc::InvalidArgument, std::string(what) + " called on a set in " + a.space().name());
  }
}

std::uint64_t checked_grid_size(int dim, int resolution, std::uint64_t budget) {
  if (resolution < 2) raise(Errc::InvalidArgument, "grid resolution must be at least 2");
  long double cells = std::pow(static_cast<long double>(resolution), dim);
  if (cells > static_cast<long double>(budget)) {
    raise(Errc::ResolutionTooLarge, "grid of " + std::to_string(resolution) + "^" +
                                        std::to_string(dim) + " points exceeds budget " +
                                        std::to_string(budget));
  }
  return static_cast<std::uint64_t>(cells);
}

// Decode a flat grid index into per-axis indices.
void grid_coords(std::uint64_t index, int dim, int resolution, std::vector<int>& out) {
  out.resize(dim);
  for (int i = dim - 1; i >= 0; --i) {
    out[i] = static_cast<int>(index % resolution);
    index /= resolution;
  }
}

}  // namespace

// ---------------------------------------------------------------- Space

Space Space::torus(int n) {
  if (n < 1) raise(Errc::InvalidArgument, "torus dimension must be positive");
  return {SpaceKind::Torus, n};
}

std::string Space::name() const {
  switch (kind) {
    case SpaceKind::Circle: return "circle";
    case SpaceKind::Interval: return "interval";
    case SpaceKind::Torus: return "torus" + std::to_string(dim);
  }
  return "unknown";
}

Metric default_metric(const Space& space) {
  switch (space.kind) {
    case SpaceKind::Circle: return Metric::CircleArc;
    case SpaceKind::Interval: return Metric::IntervalAbs;
    case SpaceKind::Torus: return Metric::TorusLInf;
  }
  return Metric::CircleArc;
}

Metric parse_metric(std::string_view name) {
  if (name == "linf" || name == "TorusLInf") return Metric::TorusLInf;
  if (name == "l2" || name == "TorusL2") return Metric::TorusL2;
  if (name == "arc" || name == "CircleArc") return Metric::CircleArc;
  if (name == "abs" || name == "IntervalAbs") return Metric::IntervalAbs;
  raise(Errc::InvalidArgument, "unknown metric '" + std::string(name) + "'");
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::CircleArc: return "arc";
    case Metric::IntervalAbs: return "abs";
    case Metric::TorusLInf: return "linf";
    case Metric::TorusL2: return "l2";
  }
  return "?";
}

// ---------------------------------------------------------------- Point

Point::Point(Space space, std::vector<Rational> coords) : space_(space) {
  if (static_cast<int>(coords.size()) != space.dim) {
    raise(Errc::DimensionMismatch, "point has " + std::to_string(coords.size()) +
                                       " coordinates, space needs " + std::to_string(space.dim));
  }
  for (auto& c : coords) {
    c.canonicalize();
    if (space.is_periodic()) {
      c = frac(c);
    } else if (c < 0 || c > 1) {
      raise(Errc::OutOfDomain, "interval coordinate " + c.get_str() + " outside [0,1]");
    }
  }
  coords_ = std::move(coords);
}

Point::Point(Space space, std::vector<double> coords) : space_(space) {
  if (static_cast<int>(coords.size()) != space.dim) {
    raise(Errc::DimensionMismatch, "point has " + std::to_string(coords.size()) +
                                       " coordinates, space needs " + std::to_string(space.dim));
  }
  for (double& c : coords) {
    if (!std::isfinite(c)) raise(Errc::InvalidArgument, "non-finite coordinate");
    if (space.is_periodic()) {
      c = frac(c);
    } else if (c < 0.0 || c > 1.0) {
      raise(Errc::OutOfDomain, "interval coordinate outside [0,1]");
    }
  }
  coords_ = std::move(coords);
}

Scalar Point::coord(int i) const {
  if (is_exact()) return Scalar(std::get<std::vector<Rational>>(coords_).at(i));
  return Scalar(std::get<std::vector<double>>(coords_).at(i));
}

const std::vector<Rational>& Point::exact_coords() const {
  if (!is_exact()) raise(Errc::RequiresExact, "point has float coordinates");
  return std::get<std::vector<Rational>>(coords_);
}

std::vector<double> Point::float_coords() const {
  if (!is_exact()) return std::get<std::vector<double>>(coords_);
  std::vector<double> out;
  for (const auto& c : std::get<std::vector<Rational>>(coords_)) out.push_back(c.get_d());
  return out;
}

std::string Point::csv() const {
  std::string out;
  for (int i = 0; i < dim(); ++i) {
    if (i) out += ',';
    out += coord(i).str();
  }
  return out;
}

bool operator==(const Point& a, const Point& b) {
  if (a.space_ != b.space_) return false;
  for (int i = 0; i < a.dim(); ++i) {
    if (a.coord(i) != b.coord(i)) return false;
  }
  return true;
}

// ------------------------------------------------------------- PointSet

PointSet::PointSet(Space space, std::variant<std::vector<Rational>, std::vector<double>> coords,
                   bool dedup)
    : space_(space), coords_(std::move(coords)), dedup_(dedup) {}

PointSet PointSet::exact(Space space, std::vector<Rational> flat) {
  if (flat.size() % space.dim != 0) raise(Errc::DimensionMismatch, "flat size not a multiple of dim");
  for (auto& c : flat) {
    c.canonicalize();
    if (space.is_periodic()) {
      c = frac(c);
    } else if (c < 0 || c > 1) {
      raise(Errc::OutOfDomain, "interval coordinate " + c.get_str() + " outside [0,1]");
    }
  }
  return PointSet(space, std::move(flat), false);
}

PointSet PointSet::floating(Space space, std::vector<double> flat) {
  if (flat.size() % space.dim != 0) raise(Errc::DimensionMismatch, "flat size not a multiple of dim");
  for (double& c : flat) {
    if (!std::isfinite(c)) raise(Errc::InvalidArgument, "non-finite coordinate");
    if (space.is_periodic()) {
      c = frac(c);
    } else if (c < 0.0 || c > 1.0) {
      raise(Errc::OutOfDomain, "interval coordinate outside [0,1]");
    }
  }
  return PointSet(space, std::move(flat), false);
}

PointSet PointSet::from_points(Space space, const std::vector<Point>& points) {
  bool all_exact = std::all_of(points.begin(), points.end(), [](const Point& p) { return p.is_exact(); });
  bool any_exact = std::any_of(points.begin(), points.end(), [](const Point& p) { return p.is_exact(); });
  if (any_exact && !all_exact) {
    raise(Errc::InvalidArgument, "points mix exact and float coordinates; convert explicitly");
  }
  for (const auto& p : points) {
    if (p.space() != space) raise(Errc::DimensionMismatch, "point from a different space");
  }
  if (all_exact && !points.empty()) {
    std::vector<Rational> flat;
    for (const auto& p : points) {
      const auto& c = p.exact_coords();
      flat.insert(flat.end(), c.begin(), c.end());
    }
    return exact(space, std::move(flat));
  }
  std::vector<double> flat;
  for (const auto& p : points) {
    auto c = p.float_coords();
    flat.insert(flat.end(), c.begin(), c.end());
  }
  return floating(space, std::move(flat));
}

std::size_t PointSet::size() const {
  return std::visit([&](const auto& v) { return v.size() / space_.dim; }, coords_);
}

Point PointSet::point(std::size_t i) const {
  const std::size_t n = space_.dim;
  return std::visit(
      [&](const auto& v) {
        using T = typename std::decay_t<decltype(v)>::value_type;
        std::vector<T> c(v.begin() + i * n, v.begin() + (i + 1) * n);
        return Point(space_, std::move(c));
      },
      coords_);
}

std::span<const Rational> PointSet::exact_coords() const {
  if (!is_exact()) raise(Errc::RequiresExact, "point set has float coordinates");
  return std::get<std::vector<Rational>>(coords_);
}

std::span<const double> PointSet::float_coords() const {
  if (is_exact()) raise(Errc::InvalidArgument, "point set is exact; call to_float() first");
  return std::get<std::vector<double>>(coords_);
}

PointSet PointSet::to_float() const {
  if (!is_exact()) return *this;
  std::vector<double> flat;
  for (const auto& c : std::get<std::vector<Rational>>(coords_)) flat.push_back(c.get_d());
  PointSet out = floating(space_, std::move(flat));
  return out;
}

PointSet PointSet::deduplicate(double tol) const {
  const std::size_t n = size();
  const int d = dim();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<bool> drop(n, false);

  if (is_exact()) {
    const auto& v = std::get<std::vector<Rational>>(coords_);
    auto less = [&](std::size_t i, std::size_t j) {
      for (int k = 0; k < d; ++k) {
        int c = cmp(v[i * d + k], v[j * d + k]);
        if (c != 0) return c < 0;
      }
      return i < j;
    };
    auto equal = [&](std::size_t i, std::size_t j) {
      for (int k = 0; k < d; ++k) {
        if (v[i * d + k] != v[j * d + k]) return false;
      }
      return true;
    };
    std::sort(order.begin(), order.end(), less);
    for (std::size_t t = 1; t < n; ++t) {
      if (equal(order[t], order[t - 1])) drop[order[t]] = true;
    }
    std::vector<Rational> out;
    for (std::size_t i = 0; i < n; ++i) {
      if (!drop[i]) out.insert(out.end(), v.begin() + i * d, v.begin() + (i + 1) * d);
    }
    return PointSet(space_, std::move(out), true);
  }

  const auto& v = std::get<std::vector<double>>(coords_);
  const bool periodic = space_.is_periodic();
  auto coord_close = [&](double a, double b) {
    return (periodic ? circle_arc(a, b) : std::fabs(a - b)) <= tol;
  };
  auto close = [&](std::size_t i, std::size_t j) {
    for (int k = 0; k < d; ++k) {
      if (!coord_close(v[i * d + k], v[j * d + k])) return false;
    }
    return true;
  };
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return v[i * d] < v[j * d] || (v[i * d] == v[j * d] && i < j);
  });
  // A point is dropped when an earlier-index point lies within tol. Candidates
  // are found by a window on the first coordinate (with wrap for periodic).
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t i = order[t];
    const double x = v[i * d];
    auto check = [&](std::size_t s) {
      const std::size_t j = order[s];
      if (j < i && close(i, j)) drop[i] = true;
    };
    for (std::size_t s = t; s-- > 0 && x - v[order[s] * d] <= tol && !drop[i];) check(s);
    for (std::size_t s = t + 1; s < n && v[order[s] * d] - x <= tol && !drop[i]; ++s) check(s);
    if (periodic && !drop[i]) {
      if (x >= 1.0 - tol) {
        for (std::size_t s = 0; s < n && v[order[s] * d] <= x + tol - 1.0 && !drop[i]; ++s) check(s);
      }
      if (x <= tol) {
        for (std::size_t s = n; s-- > 0 && v[order[s] * d] >= 1.0 - tol + x && !drop[i];) check(s);
      }
    }
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!drop[i]) out.insert(out.end(), v.begin() + i * d, v.begin() + (i + 1) * d);
  }
  return PointSet(space_, std::move(out), true);
}

PointSet PointSet::sorted() const {
  const std::size_t n = size();
  const int d = dim();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  return std::visit(
      [&](const auto& v) {
        using T = typename std::decay_t<decltype(v)>::value_type;
        std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
          for (int k = 0; k < d; ++k) {
            if (v[i * d + k] < v[j * d + k]) return true;
            if (v[j * d + k] < v[i * d + k]) return false;
          }
          return false;
        });
        std::vector<T> out;
        out.reserve(v.size());
        for (std::size_t i : order) out.insert(out.end(), v.begin() + i * d, v.begin() + (i + 1) * d);
        return PointSet(space_, std::move(out), dedup_);
      },
      coords_);
}

bool PointSet::same_set(const PointSet& other, double tol) const {
  if (space_ != other.space_) return false;
  if (is_exact() && other.is_exact()) {
    PointSet a = deduplicate().sorted();
    PointSet b = other.deduplicate().sorted();
    return a.exact_coords().size() == b.exact_coords().size() &&
           std::equal(a.exact_coords().begin(), a.exact_coords().end(), b.exact_coords().begin());
  }
  // Float comparison: mutual covering within tol.
  PointSet a = to_float();
  PointSet b = other.to_float();
  const Metric m = space_.kind == SpaceKind::Torus ? Metric::TorusLInf : default_metric(space_);
  if (a.empty() || b.empty()) return a.empty() && b.empty();
  return semimetric_gap(a, b, m).to_double() <= tol && semimetric_gap(b, a, m).to_double() <= tol;
}

PointSet PointSet::merged(const PointSet& other) const {
  if (space_ != other.space_) raise(Errc::DimensionMismatch, "merging sets from different spaces");
  if (is_exact() != other.is_exact()) raise(Errc::InvalidArgument, "merging exact and float sets");
  return std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        V out = v;
        const auto& w = std::get<V>(other.coords_);
        out.insert(out.end(), w.begin(), w.end());
        return PointSet(space_, std::move(out), false).deduplicate();
      },
      coords_);
}

// --------------------------------------------------------------- metrics

Scalar distance(const Point& a, const Point& b, Metric metric) {
  if (a.space() != b.space()) raise(Errc::DimensionMismatch, "points from different spaces");
  const int n = a.dim();
  if (a.is_exact() && b.is_exact()) {
    const auto& x = a.exact_coords();
    const auto& y = b.exact_coords();
    switch (metric) {
      case Metric::IntervalAbs: return Scalar(Rational(::abs(Rational(x[0] - y[0]))));
      case Metric::CircleArc: return Scalar(circle_arc(x[0], y[0]));
      case Metric::TorusLInf: {
        Rational best = 0;
        for (int i = 0; i < n; ++i) best = std::max(best, circle_arc(x[i], y[i]));
        return Scalar(best);
      }
      case Metric::TorusL2: {
        Rational sum = 0;
        for (int i = 0; i < n; ++i) {
          Rational d = circle_arc(x[i], y[i]);
          sum += d * d;
        }
        return Scalar(std::sqrt(sum.get_d()));
      }
    }
  }
  auto x = a.float_coords();
  auto y = b.float_coords();
  switch (metric) {
    case Metric::IntervalAbs: return Scalar(std::fabs(x[0] - y[0]));
    case Metric::CircleArc: return Scalar(circle_arc(x[0], y[0]));
    case Metric::TorusLInf: {
      double best = 0;
      for (int i = 0; i < n; ++i) best = std::max(best, circle_arc(x[i], y[i]));
      return Scalar(best);
    }
    case Metric::TorusL2: {
      double sum = 0;
      for (int i = 0; i < n; ++i) {
        double d = circle_arc(x[i], y[i]);
        sum += d * d;
      }
      return Scalar(std::sqrt(sum));
    }
  }
  return Scalar(0.0);
}

// ----------------------------------------------------------- circle gap

GapWitness circle_gap_witness(const PointSet& a) {
  check_nonempty(a, "circle_gap");
  check_space(a, SpaceKind::Circle, "circle_gap");
  if (a.is_exact()) {
    std::vector<Rational> v(a.exact_coords().begin(), a.exact_coords().end());
    std::sort(v.begin(), v.end());
    Rational best = v.front() + 1 - v.back();
    Rational start = v.back();
    for (std::size_t i = 1; i < v.size(); ++i) {
      Rational g = v[i] - v[i - 1];
      if (g > best) {
        best = g;
        start = v[i - 1];
      }
    }
    Rational half = best / 2;
    return {Scalar(half), Point(Space::circle(), std::vector<Rational>{Rational(start + half)})};
  }
  std::vector<phase::Phase> p;
  p.reserve(a.size());
  for (double x : a.float_coords()) p.push_back(phase::from_double(x));
  std::sort(p.begin(), p.end());
  phase::Wide best = phase::Wide(p.front()) + phase::kFullTurn - phase::Wide(p.back());
  phase::Phase start = p.back();
  for (std::size_t i = 1; i < p.size(); ++i) {
    phase::Wide g = p[i] - p[i - 1];
    if (g > best) {
      best = g;
      start = p[i - 1];
    }
  }
  const phase::Phase mid = start + static_cast<phase::Phase>(best / 2);
  return {Scalar(std::ldexp(static_cast<double>(best), -65)),
          Point(Space::circle(), std::vector<double>{phase::to_double(mid)})};
}

Scalar circle_gap(const PointSet& a) { return circle_gap_witness(a).gap; }

// --------------------------------------------------------- interval gap

GapWitness interval_gap_witness(const PointSet& a) {
  check_nonempty(a, "interval_gap");
  check_space(a, SpaceKind::Interval, "interval_gap");
  auto solve = [](auto v, auto zero, auto one) {
    using T = decltype(zero);
    std::sort(v.begin(), v.end());
    T best = v.front() - zero;
    T where = zero;
    if (one - v.back() > best) {
      best = one - v.back();
      where = one;
    }
    for (std::size_t i = 1; i < v.size(); ++i) {
      T half = (v[i] - v[i - 1]) / 2;
      if (half > best) {
        best = half;
        where = v[i - 1] + half;
      }
    }
    return std::pair<T, T>(best, where);
  };
  if (a.is_exact()) {
    std::vector<Rational> v(a.exact_coords().begin(), a.exact_coords().end());
    auto [gap, where] = solve(v, Rational(0), Rational(1));
    return {Scalar(gap), Point(Space::interval(), std::vector<Rational>{where})};
  }
  std::vector<double> v(a.float_coords().begin(), a.float_coords().end());
  auto [gap, where] = solve(v, 0.0, 1.0);
  return {Scalar(gap), Point(Space::interval(), std::vector<double>{where})};
}

Scalar interval_gap(const PointSet& a) { return interval_gap_witness(a).gap; }

// ------------------------------------------------------------ torus gap

double grid_error_bound(int dim, int resolution, Metric metric) {
  const double half_cell = 0.5 / resolution;
  return metric == Metric::TorusL2 ? half_cell * std::sqrt(static_cast<double>(dim)) : half_cell;
}

namespace {

struct FloatGridResult {
  double gap = 0;
  std::uint64_t index = 0;
};

FloatGridResult phase_grid_scan(std::span<const phase::Phase> pts, int dim, int resolution, Metric metric,
                                std::uint64_t budget) {
  const std::uint64_t cells = checked_grid_size(dim, resolution, budget);
  const std::size_t k = pts.size() / dim;
  std::vector<phase::Phase> axis(resolution);
  for (int j = 0; j < resolution; ++j) axis[j] = phase::from_rational(Rational(j, resolution));

  std::vector<int> idx;
  std::vector<phase::Phase> g(dim);
  FloatGridResult res;
  if (metric == Metric::TorusL2) {
    double best_sq = -1;
    for (std::uint64_t c = 0; c < cells; ++c) {
      grid_coords(c, dim, resolution, idx);
      for (int i = 0; i < dim; ++i) g[i] = axis[idx[i]];
      double nearest = INFINITY;
      for (std::size_t p = 0; p < k && nearest > best_sq; ++p) {
        double s = 0;
        for (int i = 0; i < dim; ++i) {
          double d = phase::length(phase::arc_distance(g[i], pts[p * dim + i]));
          s += d * d;
        }
        nearest = std::min(nearest, s);
      }
      if (nearest > best_sq) {
        best_sq = nearest;
        res.index = c;
      }
    }
    res.gap = std::sqrt(best_sq);
    return res;
  }
  phase::Phase best = 0;
  bool have = false;
  for (std::uint64_t c = 0; c < cells; ++c) {
    grid_coords(c, dim, resolution, idx);
    for (int i = 0; i < dim; ++i) g[i] = axis[idx[i]];
    phase::Phase nearest = ~phase::Phase(0);
    // Stop scanning points once this grid point cannot beat the current max.
    for (std::size_t p = 0; p < k && (!have || nearest > best); ++p) {
      phase::Phase m = 0;
      for (int i = 0; i < dim; ++i) m = std::max(m, phase::arc_distance(g[i], pts[p * dim + i]));
      nearest = std::min(nearest, m);
    }
    if (!have || nearest > best) {
      best = nearest;
      res.index = c;
      have = true;
    }
  }
  res.gap = phase::length(best);
  return res;
}

FloatGridResult float_grid_scan(std::span<const double> flat, int dim, int resolution, Metric metric,
                                std::uint64_t budget) {
  std::vector<phase::Phase> pts(flat.size());
  for (std::size_t i = 0; i < flat.size(); ++i) pts[i] = phase::from_double(flat[i]);
  return phase_grid_scan(pts, dim, resolution, metric, budget);
}

}  // namespace

double torus_gap_grid_phases(std::span<const phase::Phase> flat, int dim, int resolution, Metric metric,
                             std::uint64_t budget) {
  if (flat.empty()) raise(Errc::EmptySet, "torus gap of an empty set");
  return phase_grid_scan(flat, dim, resolution, metric, budget).gap;
}

double torus_gap_grid(std::span<const double> flat, int dim, int resolution, Metric metric,
                      std::uint64_t budget) {
  if (flat.empty()) raise(Errc::EmptySet, "torus gap of an empty set");
  return float_grid_scan(flat, dim, resolution, metric, budget).gap;
}

GapWitness torus_gap_witness(const PointSet& a, int resolution, Metric metric, std::uint64_t budget) {
  check_nonempty(a, "torus_gap_upper");
  const int dim = a.dim();
  if (metric != Metric::TorusLInf && metric != Metric::TorusL2) {
    if (dim == 1 && a.space().is_periodic()) {
      metric = Metric::TorusLInf;  // arc distance coincides in dimension one
    } else {
      raise(Errc::InvalidArgument, "torus gap needs a torus metric");
    }
  }
  if (!a.space().is_periodic()) raise(Errc::InvalidArgument, "torus gap on a non-periodic space");

  std::vector<int> idx;
  if (a.is_exact() && metric == Metric::TorusLInf) {
    const std::uint64_t cells = checked_grid_size(dim, resolution, budget);
    const auto v = a.exact_coords();
    const std::size_t k = a.size();
    Rational best = -1;
    std::uint64_t where = 0;
    for (std::uint64_t c = 0; c < cells; ++c) {
      grid_coords(c, dim, resolution, idx);
      Rational nearest = 1;
      for (std::size_t p = 0; p < k && nearest > best; ++p) {
        Rational m = 0;
        for (int i = 0; i < dim; ++i) {
          m = std::max(m, circle_arc(Rational(idx[i], resolution), v[p * dim + i]));
        }
        nearest = std::min(nearest, m);
      }
      if (nearest > best) {
        best = nearest;
        where = c;
      }
    }
    grid_coords(where, dim, resolution, idx);
    std::vector<Rational> w;
    for (int i : idx) w.push_back(make_rational(i, resolution));
    return {Scalar(best), Point(a.space(), std::move(w))};
  }
  PointSet f = a.to_float();
  auto res = float_grid_scan(f.float_coords(), dim, resolution, metric, budget);
  grid_coords(res.index, dim, resolution, idx);
  std::vector<double> w;
  for (int i : idx) w.push_back(static_cast<double>(i) / resolution);
  return {Scalar(res.gap), Point(a.space(), std::move(w))};
}

Scalar torus_gap_upper(const PointSet& a, int resolution, Metric metric, std::uint64_t budget) {
  return torus_gap_witness(a, resolution, metric, budget).gap;
}

// ---------------------------------------------------------- eps-density

DensityCertificate is_eps_dense(const PointSet& a, const Scalar& eps, int resolution,
                                std::optional<Metric> metric) {
  if (!(eps > Scalar(Rational(0)))) raise(Errc::InvalidArgument, "eps must be positive");
  GapWitness w = [&] {
    switch (a.space().kind) {
      case SpaceKind::Circle: return circle_gap_witness(a);
      case SpaceKind::Interval: return interval_gap_witness(a);
      case SpaceKind::Torus:
        return torus_gap_witness(a, resolution, metric.value_or(Metric::TorusLInf));
    }
    raise(Errc::InvalidArgument, "unknown space");
  }();
  DensityCertificate cert;
  cert.gap = w.gap;
  cert.dense = w.gap < eps;
  if (!cert.dense) cert.farthest = w.farthest;
  return cert;
}

// ------------------------------------------------------------ semimetric

Scalar semimetric_gap(const PointSet& a, const PointSet& b, std::optional<Metric> metric_opt) {
  check_nonempty(a, "semimetric_gap");
  if (a.space() != b.space()) raise(Errc::DimensionMismatch, "sets from different spaces");
  if (b.empty()) return a.is_exact() ? Scalar(Rational(0)) : Scalar(0.0);
  const Metric metric = metric_opt.value_or(default_metric(a.space()));
  const bool exact = a.is_exact() && b.is_exact();

  if (a.dim() == 1 && metric != Metric::TorusL2) {
    const bool periodic = a.space().is_periodic();
    if (exact) {
      std::vector<Rational> sa(a.exact_coords().begin(), a.exact_coords().end());
      std::sort(sa.begin(), sa.end());
      Rational worst = 0;
      for (const Rational& y : b.exact_coords()) {
        auto it = std::lower_bound(sa.begin(), sa.end(), y);
        const Rational& hi = it == sa.end() ? sa.front() : *it;
        const Rational& lo = it == sa.begin() ? sa.back() : *std::prev(it);
        Rational d;
        if (periodic) {
          d = std::min(circle_arc(hi, y), circle_arc(lo, y));
        } else {
          d = std::min(::abs(Rational(hi - y)), ::abs(Rational(lo - y)));
        }
        worst = std::max(worst, d);
      }
      return Scalar(worst);
    }
    PointSet fa = a.to_float();
    PointSet fb = b.to_float();
    if (periodic) {
      std::vector<phase::Phase> sa;
      for (double x : fa.float_coords()) sa.push_back(phase::from_double(x));
      std::sort(sa.begin(), sa.end());
      phase::Phase worst = 0;
      for (double yd : fb.float_coords()) {
        const phase::Phase y = phase::from_double(yd);
        auto it = std::lower_bound(sa.begin(), sa.end(), y);
        const phase::Phase hi = it == sa.end() ? sa.front() : *it;
        const phase::Phase lo = it == sa.begin() ? sa.back() : *std::prev(it);
        worst = std::max(worst, std::min(phase::arc_distance(hi, y), phase::arc_distance(lo, y)));
      }
      return Scalar(phase::length(worst));
    }
    std::vector<double> sa(fa.float_coords().begin(), fa.float_coords().end());
    std::sort(sa.begin(), sa.end());
    double worst = 0;
    for (double y : fb.float_coords()) {
      auto it = std::lower_bound(sa.begin(), sa.end(), y);
      double d = INFINITY;
      if (it != sa.end()) d = std::min(d, *it - y);
      if (it != sa.begin()) d = std::min(d, y - *std::prev(it));
      worst = std::max(worst, d);
    }
    return Scalar(worst);
  }

  // General dimension: direct scan.
  Scalar worst = exact ? Scalar(Rational(0)) : Scalar(0.0);
  for (std::size_t j = 0; j < b.size(); ++j) {
    const Point y = b.point(j);
    std::optional<Scalar> nearest;
    for (std::size_t i = 0; i < a.size(); ++i) {
      Scalar d = distance(a.point(i), y, metric);
      if (!nearest || d < *nearest) nearest = d;
    }
    if (*nearest > worst) worst = *nearest;
  }
  return worst;
}

// ------------------------------------------------------------------- CSV

std::string to_csv(const PointSet& a) {
  std::string out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out += a.point(i).csv();
    out += '\n';
  }
  return out;
}

PointSet parse_point_set_csv(const Space& space, std::string_view text) {
  std::vector<Scalar> values;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string field;
    int count = 0;
    while (std::getline(fields, field, ',')) {
      values.push_back(Scalar::parse(field));
      ++count;
    }
    if (count != space.dim) {
      raise(Errc::DimensionMismatch, "line " + std::to_string(line_no) + " has " +
                                         std::to_string(count) + " fields, expected " +
                                         std::to_string(space.dim));
    }
  }
  // Any float literal turns the whole set into floats.
  const bool exact = std::all_of(values.begin(), values.end(), [](const Scalar& s) { return s.is_exact(); });
  if (exact) {
    std::vector<Rational> flat;
    for (const auto& s : values) flat.push_back(s.rational());
    return PointSet::exact(space, std::move(flat));
  }
  std::vector<double> flat;
  for (const auto& s : values) flat.push_back(s.to_double());
  return PointSet::floating(space, std::move(flat));
}

}  // namespace odl
