#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "odl/geometry.hpp"
#include "odl/phase.hpp"
#include "odl/quadratic.hpp"

namespace odl {

/// Rotation x -> x + alpha mod 1, alpha stored reduced into [0, 1).
class Rotation {
 public:
  explicit Rotation(const Scalar& alpha) : alpha_(alpha.circle_reduce()) {}

  const Scalar& alpha() const { return alpha_; }
  Scalar apply(const Scalar& x, std::uint64_t times = 1) const;
  std::string describe() const { return "rotation alpha=" + alpha_.str(); }

 private:
  Scalar alpha_;
};

struct ProfileRecord {
  std::uint64_t n = 0;
  Scalar gap;
  Scalar scaled;  // n * gap
};

struct DensityProfile {
  std::vector<ProfileRecord> records;
  std::string space;
  std::string map;
  std::string set;

  /// CSV `n,gap,scaled`.
  std::string to_csv() const;
  bool gap_nonincreasing() const;
  /// Minimum scaled value over records with lo <= n <= hi.
  std::optional<Scalar> min_scaled(std::uint64_t lo = 0, std::uint64_t hi = UINT64_MAX) const;
  const ProfileRecord* find(std::uint64_t n) const;
};

/// ceil(ratio^j) for j = 0, 1, ..., deduplicated, capped at n_max, with
/// n_max itself appended.
std::vector<std::uint64_t> geometric_schedule(std::uint64_t n_max, double ratio = 1.25);
/// 1, 2, ..., n_max.
std::vector<std::uint64_t> dense_schedule(std::uint64_t n_max);

inline constexpr std::size_t kDefaultSizeCap = std::size_t(1) << 26;

/// {x + k alpha : x in A, 0 <= k < n}, deduplicated. Exact when alpha and A
/// are exact.
PointSet orbit_union(const Rotation& t, const PointSet& a, std::uint64_t n,
                     std::size_t size_cap = kDefaultSizeCap);

/// (n, circle_gap(orbit_union(t, a, n)), n * gap) at every scheduled n.
DensityProfile qd_profile(const Rotation& t, const PointSet& a, const std::vector<std::uint64_t>& schedule,
                          std::size_t size_cap = kDefaultSizeCap);

/// Largest circular gap of a growing set of phases, updated per insertion.
class GapTracker {
 public:
  void insert(phase::Phase p);
  std::size_t size() const { return points_.size(); }
  /// 2^64 when the set has one point.
  phase::Wide max_gap() const;

 private:
  std::set<phase::Phase> points_;
  std::multiset<phase::Wide> gaps_;
};

/// Half largest gap (in units of 1) of {b + k alpha : b in base, k < n} for
/// each scheduled n, computed on phases.
std::vector<double> phase_orbit_gaps(phase::Phase alpha, const std::vector<phase::Phase>& base,
                                     const std::vector<std::uint64_t>& schedule,
                                     std::size_t size_cap = kDefaultSizeCap);

/// Distinct consecutive-gap lengths of {k alpha : 0 <= k < n} on phases.
std::vector<phase::Wide> orbit_gap_lengths(phase::Phase alpha, std::uint64_t n);

/// Exact covering radius of {i alpha mod 1 : 0 <= i < n}.
QuadraticNumber orbit_gap_exact(const QuadraticNumber& alpha, std::uint64_t n);

/// Nearest phase to x, exactly rounded.
phase::Phase phase_of(const QuadraticNumber& x);

/// {m x mod 1}, deduplicated.
PointSet dilate(const PointSet& a, std::uint64_t m);

struct DilationResult {
  std::optional<std::uint64_t> m;  // least m with gap < eps
  std::uint64_t best_m = 0;        // least m attaining the smallest gap seen
  Scalar best_gap;
};

DilationResult glasner_min_dilation(const PointSet& a, const Scalar& eps, std::uint64_t n_max,
                                    int workers = 1);

/// Fraction of m in [1, n_max] with circle_gap(dilate(a, m)) < eps.
double dilation_density_fraction(const PointSet& a, const Scalar& eps, std::uint64_t n_max,
                                 int workers = 1);

/// Exact check of E_n^{-1}(E_n X) = union over k < n of (X + k/n).
bool preimage_identity_check(const PointSet& x, std::uint64_t n);

/// Admissibility of q_next after q_prev, with log of the smallest admissible
/// q_next used to detect unreachable depths.
struct GrowthRule {
  std::string name;
  std::function<bool(const Integer& prev, const Integer& next)> admits;
  std::function<long double(const Integer& prev)> log_threshold;

  /// q_next >= q_prev^2.
  static GrowthRule square();
  /// log log log q_next >= q_prev.
  static GrowthRule triple_exp();
};

struct CounterexampleSet {
  QuadraticNumber alpha;
  std::vector<int> indices;               // convergent indices n_k, increasing
  std::vector<Integer> q;                 // q_{n_k}
  std::vector<QuadraticNumber> distances;  // fractional parts of q_{n_k} alpha, decreasing
  std::string growth_rule;

  /// The distances together with 0, as floats.
  PointSet points() const;
  /// CSV `k,q,a,b,d` with the point a + b sqrt(d); the trailing 0 is omitted.
  std::string to_csv() const;
};

inline constexpr int kDefaultMaxConvergentIndex = 4000;

CounterexampleSet build_counterexample(const QuadraticNumber& alpha, const GrowthRule& rule, int depth,
                                       int max_index = kDefaultMaxConvergentIndex);

/// Profile of the counterexample set under rotation by its own alpha.
DensityProfile counterexample_profile(const CounterexampleSet& set, const std::vector<std::uint64_t>& schedule);

/// Profile of semimetric_gap(orbit_union(a1), orbit_union(a2)).
DensityProfile qd_pair_profile(const Rotation& t, const PointSet& a1, const PointSet& a2,
                               const std::vector<std::uint64_t>& schedule,
                               std::size_t size_cap = kDefaultSizeCap);

}  // namespace odl
