#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "odl/quadratic.hpp"
#include "odl/scalar.hpp"

namespace odl {

/// Float expansions refuse depths beyond this.
inline constexpr int kMaxFloatDepth = 40;
/// Float expansions stop once |alpha - p_k/q_k| drops below this.
inline constexpr double kFloatResidual = 1e-14;

/// [a0; a1, ..., aK] with a_k >= 1 for k >= 1.
struct ContinuedFraction {
  enum class Source { ExactRational, Float, Quadratic, Coefficients };

  Integer a0 = 0;
  std::vector<Integer> coeffs;
  Source source = Source::Coefficients;
  /// Set when the expansion ended because the input ran out (rational input).
  bool terminated = false;
  /// Set when a float expansion stopped early at the residual floor.
  bool precision_limited = false;

  std::size_t depth() const { return coeffs.size(); }
  /// Coefficient a_k for 0 <= k <= depth().
  const Integer& at(std::size_t k) const { return k == 0 ? a0 : coeffs.at(k - 1); }
  Rational evaluate() const;
  std::string str() const;
};

ContinuedFraction from_coefficients(Integer a0, std::vector<Integer> coeffs);

/// Exact rationals expand to termination or depth K; floats expand the exact
/// dyadic value of the double with the limits above.
ContinuedFraction expand(const Scalar& alpha, int depth);
/// Exact expansion of a quadratic irrational to depth K.
ContinuedFraction expand(const QuadraticNumber& alpha, int depth);

/// Row k holds a_k, the convergent p_k/q_k and ||q_k alpha||.
template <class Dist>
struct ConvergentRow {
  int k = 0;
  Integer a, p, q;
  Dist dist;
};

template <class Dist>
struct BasicConvergentTable {
  std::vector<ConvergentRow<Dist>> rows;

  std::size_t size() const { return rows.size(); }
  const ConvergentRow<Dist>& operator[](std::size_t k) const { return rows.at(k); }
};

using ConvergentTable = BasicConvergentTable<Scalar>;
using QuadraticConvergentTable = BasicConvergentTable<QuadraticNumber>;

/// Distances are exact for rational alpha; for float alpha they are computed
/// exactly from the dyadic value and rounded once.
ConvergentTable convergents(const ContinuedFraction& cf, const Scalar& alpha);
QuadraticConvergentTable convergents(const ContinuedFraction& cf, const QuadraticNumber& alpha);

/// ||x||: distance from x to the nearest integer.
Rational dist_to_int(const Rational& x);

/// CSV `k,p,q,dist`.
std::string to_csv(const ConvergentTable& table);
std::string to_csv(const QuadraticConvergentTable& table);

/// Coprime pairs (p, q), q in `moduli`, 0 <= p <= q, with
/// |q·frac(alpha) - p| <= bound(q), i.e. |alpha - p/q| <= bound(q)/q.
std::vector<std::pair<Integer, Integer>> approx_search(
    const Scalar& alpha, const std::vector<Integer>& moduli,
    const std::function<Scalar(const Integer&)>& bound);

}  // namespace odl
