#include "odl/scalar.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "odl/error.hpp"

namespace odl {

Rational exact_from_double(double x) {
  if (!std::isfinite(x)) raise(Errc::InvalidArgument, "non-finite double");
  Rational r;
  mpq_set_d(r.get_mpq_t(), x);  // exact for every finite double
  return r;
}

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) raise(Errc::InvalidArgument, "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Integer floor_of(const Rational& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Scalar::Scalar(Rational value) : value_(std::move(value)) {
  std::get<Rational>(value_).canonicalize();
}

Scalar::Scalar(double value) : value_(value) {
  if (!std::isfinite(value)) raise(Errc::InvalidArgument, "float scalars must be finite");
}

Scalar Scalar::exact(long num, long den) { return Scalar(make_rational(num, den)); }

Scalar Scalar::exact(const Integer& num, const Integer& den) {
  return Scalar(make_rational(num, den));
}

Scalar Scalar::parse(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) raise(Errc::InvalidArgument, "empty scalar literal");

  const bool looks_float = s.find_first_of(".eEn") != std::string::npos;
  if (!looks_float) {
    Rational r;
    if (r.set_str(s, 10) != 0) raise(Errc::InvalidArgument, "bad rational literal '" + s + "'");
    if (r.get_den() == 0) raise(Errc::InvalidArgument, "zero denominator in '" + s + "'");
    return Scalar(r);
  }
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    raise(Errc::InvalidArgument, "bad float literal '" + s + "'");
  }
  if (used != s.size()) raise(Errc::InvalidArgument, "trailing characters in '" + s + "'");
  return Scalar(v);
}

const Rational& Scalar::rational() const {
  if (!is_exact()) raise(Errc::RequiresExact, "exact rational required, got float " + str());
  return std::get<Rational>(value_);
}

double Scalar::to_double() const {
  if (is_exact()) return std::get<Rational>(value_).get_d();
  return std::get<double>(value_);
}

Rational Scalar::to_exact() const {
  if (is_exact()) return std::get<Rational>(value_);
  return exact_from_double(std::get<double>(value_));
}

Scalar Scalar::circle_reduce() const {
  if (is_exact()) {
    const Rational& r = std::get<Rational>(value_);
    return Scalar(Rational(r - Rational(floor_of(r))));
  }
  double v = std::get<double>(value_);
  v -= std::floor(v);
  if (v >= 1.0) v = 0.0;  // floor rounding on tiny negatives
  return Scalar(v);
}

Scalar Scalar::abs() const {
  if (is_exact()) return Scalar(Rational(::abs(std::get<Rational>(value_))));
  return Scalar(std::fabs(std::get<double>(value_)));
}

bool Scalar::is_zero() const {
  if (is_exact()) return std::get<Rational>(value_) == 0;
  return std::get<double>(value_) == 0.0;
}

std::string Scalar::str() const {
  if (is_exact()) return std::get<Rational>(value_).get_str();
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(value_));
  return buf;
}

namespace {

template <class Op, class FOp>
Scalar combine(const Scalar& a, const Scalar& b, Op exact_op, FOp float_op) {
  if (a.is_exact() && b.is_exact()) return Scalar(Rational(exact_op(a.rational(), b.rational())));
  return Scalar(float_op(a.to_double(), b.to_double()));
}

}  // namespace

Scalar operator+(const Scalar& a, const Scalar& b) {
  return combine(a, b, [](const Rational& x, const Rational& y) { return Rational(x + y); },
                 [](double x, double y) { return x + y; });
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  return combine(a, b, [](const Rational& x, const Rational& y) { return Rational(x - y); },
                 [](double x, double y) { return x - y; });
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  return combine(a, b, [](const Rational& x, const Rational& y) { return Rational(x * y); },
                 [](double x, double y) { return x * y; });
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (b.is_zero()) raise(Errc::InvalidArgument, "division by zero");
  return combine(a, b, [](const Rational& x, const Rational& y) { return Rational(x / y); },
                 [](double x, double y) { return x / y; });
}

Scalar Scalar::operator-() const {
  if (is_exact()) return Scalar(Rational(-std::get<Rational>(value_)));
  return Scalar(-std::get<double>(value_));
}

std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) {
  const int c = cmp(a.to_exact(), b.to_exact());
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool operator==(const Scalar& a, const Scalar& b) { return (a <=> b) == 0; }

}  // namespace odl
