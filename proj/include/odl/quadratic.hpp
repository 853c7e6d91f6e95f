#pragma once

#include <string>

#include "odl/scalar.hpp"

namespace odl {

/// Exact element A + B·√d of a real quadratic field, with A, B rational and
/// d a positive non-square integer. Values with B = 0 are plain rationals.
class QuadraticNumber {
 public:
  QuadraticNumber(Rational a, Rational b, Integer d);
  /// Rational value embedded in Q(√d).
  QuadraticNumber(Rational a, Integer d) : QuadraticNumber(std::move(a), Rational(0), std::move(d)) {}

  /// (√5 − 1)/2, the fractional part of the golden ratio.
  static QuadraticNumber golden();
  /// √2 − 1.
  static QuadraticNumber silver();

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  const Integer& d() const { return d_; }
  bool is_rational() const { return b_ == 0; }

  int sign() const;
  Integer floor() const;
  /// Value in [0, 1).
  QuadraticNumber frac() const;
  /// Distance to the nearest integer.
  QuadraticNumber dist_to_int() const;
  QuadraticNumber abs() const;
  QuadraticNumber conjugate() const { return {a_, -b_, d_}; }
  /// Rational norm (A + B√d)(A − B√d).
  Rational norm() const { return a_ * a_ - b_ * b_ * d_; }
  QuadraticNumber reciprocal() const;

  /// Accurate to a few ulps even under cancellation (uses the conjugate).
  double to_double() const;
  /// `A,B,d` with A and B rendered as p/q.
  std::string str() const;

  friend QuadraticNumber operator+(const QuadraticNumber& x, const QuadraticNumber& y);
  friend QuadraticNumber operator-(const QuadraticNumber& x, const QuadraticNumber& y);
  friend QuadraticNumber operator*(const QuadraticNumber& x, const QuadraticNumber& y);
  friend QuadraticNumber operator*(const Rational& s, const QuadraticNumber& x);
  friend QuadraticNumber operator/(const QuadraticNumber& x, const QuadraticNumber& y);
  QuadraticNumber operator-() const { return {-a_, -b_, d_}; }

  friend int cmp(const QuadraticNumber& x, const QuadraticNumber& y);
  friend bool operator==(const QuadraticNumber& x, const QuadraticNumber& y) { return cmp(x, y) == 0; }
  friend bool operator<(const QuadraticNumber& x, const QuadraticNumber& y) { return cmp(x, y) < 0; }
  friend bool operator>(const QuadraticNumber& x, const QuadraticNumber& y) { return cmp(x, y) > 0; }
  friend bool operator<=(const QuadraticNumber& x, const QuadraticNumber& y) { return cmp(x, y) <= 0; }
  friend bool operator>=(const QuadraticNumber& x, const QuadraticNumber& y) { return cmp(x, y) >= 0; }

 private:
  Rational a_, b_;
  Integer d_;
};

Integer isqrt(const Integer& n);

}  // namespace odl
