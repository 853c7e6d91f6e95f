#pragma once

#include <cstdint>
#include <vector>

#include "odl/circle_dyn.hpp"
#include "odl/geometry.hpp"

namespace odl {

/// Nondegenerate 3-interval exchange P on [0,1]:
///   x + 1 - alpha          on [0, alpha)
///   x + 1 - alpha - beta   on [alpha, beta)
///   x - beta               on [beta, 1]
class ThreeIET {
 public:
  ThreeIET(Scalar alpha, Scalar beta);

  const Scalar& alpha() const { return alpha_; }
  const Scalar& beta() const { return beta_; }
  bool is_exact() const { return alpha_.is_exact() && beta_.is_exact(); }

  Scalar apply(const Scalar& x) const;
  bool is_discontinuity(const Scalar& x) const { return x == alpha_ || x == beta_; }
  std::string describe() const { return "3-IET alpha=" + alpha_.str() + " beta=" + beta_.str(); }

 private:
  Scalar alpha_, beta_;
};

/// Rotation by 1 - alpha on [0, 1 + beta - alpha).
struct SuspensionRotation {
  Scalar length;
  Scalar rot;

  static SuspensionRotation of(const ThreeIET& p);
  Scalar step(const Scalar& y) const;
};

inline constexpr int kMaxReturnSteps = 10;

struct ReturnResult {
  Scalar value;
  int steps = 0;
  bool hit_discontinuity = false;  // some visited point is alpha or beta
};

/// Iterate y -> y + rot mod length from x until y lands in [0, 1).
ReturnResult first_return(const SuspensionRotation& s, const Scalar& x, const ThreeIET* p = nullptr);

struct IetProfile {
  DensityProfile profile;
  /// Orbit points equal to a discontinuity (exact runs only).
  std::uint64_t discontinuity_hits = 0;
  /// Exact runs: length of the longest periodic orbit among the starting points.
  std::optional<std::uint64_t> period;
};

/// (n, interval_gap(union_{k<n} P^k A), n * gap) at each scheduled n.
IetProfile iet_qd_profile(const ThreeIET& p, const PointSet& a, const std::vector<std::uint64_t>& schedule,
                          std::size_t size_cap = kDefaultSizeCap);

/// Points of union_{k<n} T^k X (T the suspension rotation) lying in [0, 1).
std::vector<Scalar> suspension_orbit_in_unit(const SuspensionRotation& s, const PointSet& x, std::uint64_t n);

/// union_{k<n} P^k X as a list of points (duplicates removed for exact input).
std::vector<Scalar> iet_orbit_union(const ThreeIET& p, const PointSet& x, std::uint64_t n);

}  // namespace odl
