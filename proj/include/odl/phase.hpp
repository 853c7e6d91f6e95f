#pragma once

// 64-bit fixed-point representation of the circle R/Z.
//
// A phase p stands for p / 2^64. Addition and multiplication by integers
// wrap modulo 2^64, which is exactly reduction modulo 1, so rotation,
// dilation and integer-matrix actions are exact on phases. Doubles in
// [2^-11, 1) convert without rounding.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "odl/scalar.hpp"

namespace odl::phase {

using Phase = std::uint64_t;
using Wide = unsigned __int128;

inline constexpr Wide kFullTurn = Wide(1) << 64;

/// Round x (any finite real) to the nearest phase after reduction mod 1.
inline Phase from_double(double x) {
  long double r = static_cast<long double>(x) - std::floor(static_cast<long double>(x));
  long double scaled = std::ldexp(r, 64);
  scaled = std::nearbyint(scaled);
  if (scaled >= std::ldexp(1.0L, 64)) return 0;
  return static_cast<Phase>(scaled);
}

Phase from_rational(const Rational& x);

inline Phase from_scalar(const Scalar& x) {
  return x.is_exact() ? from_rational(x.rational()) : from_double(x.to_double());
}

/// Exact value p / 2^64.
Rational to_rational(Phase p);

inline double to_double(Phase p) {
  double v = std::ldexp(static_cast<double>(p), -64);
  return v >= 1.0 ? 0.0 : v;
}

/// Length of an arc given in phase units (as a fraction of the circle).
inline double length(Wide arc) { return std::ldexp(static_cast<double>(arc), -64); }

/// Circular distance in phase units, at most 2^63.
inline Phase arc_distance(Phase a, Phase b) {
  const Phase d = a - b;
  return std::min<Phase>(d, Phase(0) - d);
}

/// Largest gap between circularly consecutive phases; input must be sorted
/// and nonempty. A set of identical phases has gap 2^64.
inline Wide max_gap_sorted(std::span<const Phase> sorted) {
  Wide best = Wide(sorted.front()) + kFullTurn - Wide(sorted.back());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    best = std::max<Wide>(best, Wide(sorted[i] - sorted[i - 1]));
  }
  return best;
}

/// Half of the largest gap, as a double: the covering radius of the set.
inline double circle_gap(std::vector<Phase>& points) {
  std::sort(points.begin(), points.end());
  return std::ldexp(static_cast<double>(max_gap_sorted(points)), -65);
}

}  // namespace odl::phase
