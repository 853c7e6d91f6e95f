#include "odl/phase.hpp"

namespace odl::phase {

Phase from_rational(const Rational& x) {
  // round(frac(x) * 2^64) computed exactly
  Integer num = x.get_num();
  const Integer& den = x.get_den();
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  Integer scaled = r;
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 64);
  // round half up: floor((2*scaled + den) / (2*den))
  Integer twice = 2 * scaled + den;
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), twice.get_mpz_t(), Integer(2 * den).get_mpz_t());
  Integer low;
  mpz_fdiv_r_2exp(low.get_mpz_t(), q.get_mpz_t(), 64);
  Phase out = 0;
  mpz_export(&out, nullptr, -1, sizeof(Phase), 0, 0, low.get_mpz_t());
  return out;
}

Rational to_rational(Phase p) {
  Integer num;
  mpz_import(num.get_mpz_t(), 1, -1, sizeof(Phase), 0, 0, &p);
  Integer den = 1;
  den <<= 64;
  return make_rational(num, den);
}

}  // namespace odl::phase
