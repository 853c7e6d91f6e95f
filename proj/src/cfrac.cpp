#include "odl/cfrac.hpp"

#include <cmath>

#include "odl/error.hpp"

namespace odl {

namespace {

void check_depth(int depth) {
  if (depth < 1) raise(Errc::InvalidArgument, "continued fraction depth must be at least 1");
}

template <class Dist, class DistFn>
BasicConvergentTable<Dist> build_table(const ContinuedFraction& cf, DistFn dist) {
  BasicConvergentTable<Dist> table;
  Integer p_prev = 1, q_prev = 0;  // p_{-1}, q_{-1}
  Integer p = cf.a0, q = 1;
  table.rows.push_back({0, cf.a0, p, q, dist(p, q)});
  for (std::size_t k = 1; k <= cf.depth(); ++k) {
    const Integer& a = cf.at(k);
    Integer p_next = a * p + p_prev;
    Integer q_next = a * q + q_prev;
    p_prev = std::move(p);
    q_prev = std::move(q);
    p = std::move(p_next);
    q = std::move(q_next);
    table.rows.push_back({static_cast<int>(k), a, p, q, dist(p, q)});
  }
  return table;
}

}  // namespace

Rational ContinuedFraction::evaluate() const {
  if (coeffs.empty()) return Rational(a0);
  Rational x(coeffs.back());
  for (std::size_t i = coeffs.size() - 1; i-- > 0;) x = coeffs[i] + 1 / x;
  x = a0 + 1 / x;
  x.canonicalize();
  return x;
}

std::string ContinuedFraction::str() const {
  std::string out = "[" + a0.get_str();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    out += i == 0 ? "; " : ", ";
    out += coeffs[i].get_str();
  }
  return out + "]";
}

ContinuedFraction from_coefficients(Integer a0, std::vector<Integer> coeffs) {
  for (const auto& a : coeffs) {
    if (a < 1) raise(Errc::InvalidArgument, "partial quotients must be positive");
  }
  ContinuedFraction cf;
  cf.a0 = std::move(a0);
  cf.coeffs = std::move(coeffs);
  cf.source = ContinuedFraction::Source::Coefficients;
  return cf;
}

ContinuedFraction expand(const Scalar& alpha, int depth) {
  check_depth(depth);
  ContinuedFraction cf;
  const bool is_float = !alpha.is_exact();
  if (is_float && depth > kMaxFloatDepth) {
    raise(Errc::DepthPrecisionExceeded, "float continued fractions are limited to depth " +
                                            std::to_string(kMaxFloatDepth));
  }
  cf.source = is_float ? ContinuedFraction::Source::Float : ContinuedFraction::Source::ExactRational;
  const Rational value = alpha.to_exact();

  Integer num = value.get_num();
  Integer den = value.get_den();
  Integer a;
  mpz_fdiv_qr(a.get_mpz_t(), num.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  cf.a0 = a;
  Integer p_prev = 1, q_prev = 0, p = a, q = 1;
  while (static_cast<int>(cf.coeffs.size()) < depth) {
    if (num == 0) {
      cf.terminated = true;
      break;
    }
    if (is_float) {
      const Rational residual = ::abs(Rational(value - Rational(p, q)));
      if (residual < Rational(kFloatResidual)) {
        cf.precision_limited = true;
        break;
      }
    }
    // value = ... + num/den; next complete quotient is den/num.
    std::swap(num, den);
    mpz_fdiv_qr(a.get_mpz_t(), num.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    cf.coeffs.push_back(a);
    Integer pn = a * p + p_prev, qn = a * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = pn;
    q = qn;
  }
  if (!cf.terminated && num == 0) cf.terminated = true;
  return cf;
}

ContinuedFraction expand(const QuadraticNumber& alpha, int depth) {
  check_depth(depth);
  if (alpha.is_rational()) {
    ContinuedFraction cf = expand(Scalar(alpha.a()), depth);
    cf.source = ContinuedFraction::Source::Quadratic;
    return cf;
  }
  // alpha = (P + sqrt(D)) / Q with Q | (D - P^2).
  const Integer den = lcm(Integer(alpha.a().get_den()), Integer(alpha.b().get_den()));
  Integer P = alpha.a().get_num() * (den / alpha.a().get_den());
  Integer b = alpha.b().get_num() * (den / alpha.b().get_den());
  Integer Q = den;
  if (b < 0) {
    b = -b;
    P = -P;
    Q = -Q;
  }
  Integer D = b * b * alpha.d();
  if (((D - P * P) % Q) != 0) {
    const Integer absQ = ::abs(Q);
    P *= absQ;
    D *= Q * Q;
    Q *= absQ;
  }
  const Integer s = isqrt(D);

  ContinuedFraction cf;
  cf.source = ContinuedFraction::Source::Quadratic;
  for (int k = 0; k <= depth; ++k) {
    Integer a;
    Integer top = Q > 0 ? Integer(P + s) : Integer(P + s + 1);
    mpz_fdiv_q(a.get_mpz_t(), top.get_mpz_t(), Q.get_mpz_t());
    if (k == 0) {
      cf.a0 = a;
    } else {
      cf.coeffs.push_back(a);
    }
    P = a * Q - P;
    Q = (D - P * P) / Q;
  }
  return cf;
}

Rational dist_to_int(const Rational& x) {
  Rational f = x - Rational(floor_of(x));
  Rational g = 1 - f;
  return f <= g ? f : g;
}

ConvergentTable convergents(const ContinuedFraction& cf, const Scalar& alpha) {
  const Rational value = alpha.to_exact();
  const bool exact = alpha.is_exact();
  return build_table<Scalar>(cf, [&](const Integer& p, const Integer& q) {
    (void)p;
    Rational d = dist_to_int(Rational(q * value));
    return exact ? Scalar(d) : Scalar(d.get_d());
  });
}

QuadraticConvergentTable convergents(const ContinuedFraction& cf, const QuadraticNumber& alpha) {
  return build_table<QuadraticNumber>(cf, [&](const Integer& p, const Integer& q) {
    (void)p;
    return (Rational(q) * alpha).dist_to_int();
  });
}

namespace {

template <class Table, class Render>
std::string table_csv(const Table& table, Render render) {
  std::string out = "k,p,q,dist\n";
  for (const auto& row : table.rows) {
    out += std::to_string(row.k) + "," + row.p.get_str() + "," + row.q.get_str() + "," +
           render(row.dist) + "\n";
  }
  return out;
}

}  // namespace

std::string to_csv(const ConvergentTable& table) {
  return table_csv(table, [](const Scalar& s) { return s.str(); });
}

std::string to_csv(const QuadraticConvergentTable& table) {
  return table_csv(table, [](const QuadraticNumber& x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x.to_double());
    return std::string(buf);
  });
}

std::vector<std::pair<Integer, Integer>> approx_search(
    const Scalar& alpha, const std::vector<Integer>& moduli,
    const std::function<Scalar(const Integer&)>& bound) {
  if (moduli.empty()) raise(Errc::InvalidArgument, "approx_search needs at least one modulus");
  const Scalar x = alpha.circle_reduce();
  const Rational xv = x.to_exact();
  std::vector<std::pair<Integer, Integer>> out;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    const Integer& q = moduli[i];
    if (q < 1) raise(Errc::InvalidArgument, "moduli must be positive");
    if (i > 0 && !(moduli[i - 1] < q)) raise(Errc::InvalidArgument, "moduli must be increasing");
    const Scalar b = bound(q);
    if (!(b > Scalar(Rational(0)))) raise(Errc::InvalidArgument, "bound must be positive");
    // Only p within bound(q) + 1 of q·alpha can qualify.
    const Rational centre = q * xv;
    const Rational reach = b.to_exact() + 1;
    Integer lo = floor_of(Rational(centre - reach));
    Integer hi = floor_of(Rational(centre + reach)) + 1;
    if (lo < 0) lo = 0;
    if (hi > q) hi = q;
    for (Integer p = lo; p <= hi; ++p) {
      if (gcd(p, q) != 1) continue;
      const Scalar err(Rational(::abs(Rational(centre - p))));
      if (err <= b) out.emplace_back(p, q);
    }
  }
  return out;
}

}  // namespace odl
