#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>
#include <variant>

namespace odl {

using Integer = mpz_class;
using Rational = mpq_class;

/// Tolerance used for float equality (deduplication, set comparison).
inline constexpr double kFloatTolerance = 1e-12;

/// Exact conversion of a finite double to the dyadic rational it denotes.
Rational exact_from_double(double x);

/// Rational in lowest terms built from numerator and denominator.
Rational make_rational(const Integer& num, const Integer& den);

Integer floor_of(const Rational& x);

/// A coordinate or parameter value: either an exact rational or a finite
/// double. Mixing representations in arithmetic yields a double; converting
/// a double into an exact value always goes through `exact_from_double`.
class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  explicit Scalar(Rational value);
  explicit Scalar(double value);

  static Scalar exact(long num, long den = 1);
  static Scalar exact(const Integer& num, const Integer& den);

  /// "p/q" or an integer literal parse as exact; anything with a decimal
  /// point or exponent parses as a double.
  static Scalar parse(std::string_view text);

  bool is_exact() const noexcept { return std::holds_alternative<Rational>(value_); }

  /// Throws Errc::RequiresExact for float scalars.
  const Rational& rational() const;
  double to_double() const;

  Scalar to_float() const { return Scalar(to_double()); }
  /// Exact dyadic value for doubles, identity for rationals.
  Rational to_exact() const;

  /// Reduction into [0, 1).
  Scalar circle_reduce() const;
  Scalar abs() const;
  bool is_zero() const;

  /// "p/q" (or "p" when q = 1) for exact values, %.17g for doubles.
  std::string str() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar operator-() const;

  /// Exact comparison when both sides are exact, otherwise the exact value
  /// of the double is compared, so ordering is always a total order.
  friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b);
  friend bool operator==(const Scalar& a, const Scalar& b);

 private:
  std::variant<Rational, double> value_;
};

}  // namespace odl
