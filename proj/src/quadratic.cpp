#include "odl/quadratic.hpp"

#include <algorithm>
#include <cmath>

#include "odl/error.hpp"

namespace odl {

namespace {

void same_field(const QuadraticNumber& x, const QuadraticNumber& y) {
  if (x.d() != y.d() && !x.is_rational() && !y.is_rational()) {
    raise(Errc::InvalidArgument, "quadratic numbers from different fields");
  }
}

Integer field_of(const QuadraticNumber& x, const QuadraticNumber& y) {
  return x.is_rational() ? y.d() : x.d();
}

std::size_t bit_size(const Rational& x) {
  return mpz_sizeinbase(x.get_num_mpz_t(), 2) + mpz_sizeinbase(x.get_den_mpz_t(), 2);
}

// Relative accuracy of about `bits` bits even when A and B·√d nearly cancel:
// then A + B√d = norm / (A − B√d) and the denominator does not cancel.
mpf_class approximate(const QuadraticNumber& x, std::size_t bits) {
  const std::size_t prec = bits + 2 * std::max(bit_size(x.a()), bit_size(x.b())) + 64;
  mpf_class a(0, prec), y(0, prec), root(x.d(), prec);
  a = mpf_class(x.a(), prec);
  mpf_sqrt(root.get_mpf_t(), root.get_mpf_t());
  y = mpf_class(x.b(), prec) * root;
  if ((sgn(a) >= 0) == (sgn(y) >= 0)) return mpf_class(a + y, prec);
  mpf_class n(x.norm(), prec);
  return mpf_class(n / (a - y), prec);
}

}  // namespace

Integer isqrt(const Integer& n) {
  if (n < 0) raise(Errc::InvalidArgument, "isqrt of a negative number");
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

QuadraticNumber::QuadraticNumber(Rational a, Rational b, Integer d)
    : a_(std::move(a)), b_(std::move(b)), d_(std::move(d)) {
  a_.canonicalize();
  b_.canonicalize();
  if (d_ <= 0) raise(Errc::InvalidArgument, "quadratic field needs d > 0");
  if (b_ != 0 && mpz_perfect_square_p(d_.get_mpz_t())) {
    raise(Errc::InvalidArgument, "d = " + d_.get_str() + " is a perfect square");
  }
}

QuadraticNumber QuadraticNumber::golden() { return {Rational(-1, 2), Rational(1, 2), 5}; }
QuadraticNumber QuadraticNumber::silver() { return {Rational(-1), Rational(1), 2}; }

int QuadraticNumber::sign() const {
  const int sa = sgn(a_);
  const int sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // Mixed signs: compare A^2 with B^2 d.
  const int c = cmp(Rational(a_ * a_), Rational(b_ * b_ * d_));
  return c > 0 ? sa : sb;
}

Integer QuadraticNumber::floor() const {
  if (is_rational()) return floor_of(a_);
  mpf_class approx = approximate(*this, 64);
  mpf_floor(approx.get_mpf_t(), approx.get_mpf_t());
  Integer n(approx);
  // Correct the estimate with exact comparisons.
  while ((*this - QuadraticNumber(Rational(n), d_)).sign() < 0) n -= 1;
  while ((*this - QuadraticNumber(Rational(n + 1), d_)).sign() >= 0) n += 1;
  return n;
}

QuadraticNumber QuadraticNumber::frac() const { return *this - QuadraticNumber(Rational(floor()), d_); }

QuadraticNumber QuadraticNumber::dist_to_int() const {
  QuadraticNumber f = frac();
  QuadraticNumber g = QuadraticNumber(Rational(1), d_) - f;
  return f <= g ? f : g;
}

QuadraticNumber QuadraticNumber::abs() const { return sign() < 0 ? -*this : *this; }

QuadraticNumber QuadraticNumber::reciprocal() const {
  const Rational n = norm();
  if (n == 0) raise(Errc::InvalidArgument, "reciprocal of zero");
  return {a_ / n, -b_ / n, d_};
}

double QuadraticNumber::to_double() const {
  if (is_rational()) return a_.get_d();
  return approximate(*this, 64).get_d();
}

std::string QuadraticNumber::str() const { return a_.get_str() + "," + b_.get_str() + "," + d_.get_str(); }

QuadraticNumber operator+(const QuadraticNumber& x, const QuadraticNumber& y) {
  same_field(x, y);
  return {x.a_ + y.a_, x.b_ + y.b_, field_of(x, y)};
}

QuadraticNumber operator-(const QuadraticNumber& x, const QuadraticNumber& y) {
  same_field(x, y);
  return {x.a_ - y.a_, x.b_ - y.b_, field_of(x, y)};
}

QuadraticNumber operator*(const QuadraticNumber& x, const QuadraticNumber& y) {
  same_field(x, y);
  const Integer d = field_of(x, y);
  return {x.a_ * y.a_ + x.b_ * y.b_ * d, x.a_ * y.b_ + x.b_ * y.a_, d};
}

QuadraticNumber operator*(const Rational& s, const QuadraticNumber& x) {
  return {s * x.a_, s * x.b_, x.d_};
}

QuadraticNumber operator/(const QuadraticNumber& x, const QuadraticNumber& y) {
  return x * y.reciprocal();
}

int cmp(const QuadraticNumber& x, const QuadraticNumber& y) { return (x - y).sign(); }

}  // namespace odl
