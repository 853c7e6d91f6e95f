#include <gtest/gtest.h>

#include <cmath>

#include "odl/cfrac.hpp"
#include "odl/error.hpp"
#include "odl/rng.hpp"
#include "oracles.hpp"

using namespace odl;

TEST(Expand, FiveSevenths) {
  const auto cf = expand(Scalar::exact(5, 7), 20);
  const auto euclid = oracle::euclid(Rational(5, 7), 20);
  ASSERT_EQ(cf.depth() + 1, euclid.size());
  for (std::size_t k = 0; k <= cf.depth(); ++k) EXPECT_EQ(cf.at(k), euclid[k]);
  EXPECT_EQ(cf.str(), "[0; 1, 2, 2]");
  EXPECT_TRUE(cf.terminated);
}

TEST(Expand, Half) {
  const auto cf = expand(Scalar::exact(1, 2), 5);
  ASSERT_EQ(cf.depth(), 1u);
  EXPECT_EQ(cf.at(1), 2);
}

TEST(Expand, GoldenExactAndFloat) {
  const auto exact = expand(QuadraticNumber::golden(), 30);
  ASSERT_EQ(exact.depth(), 30u);
  for (std::size_t k = 1; k <= 30; ++k) EXPECT_EQ(exact.at(k), 1) << k;
  const auto fl = expand(Scalar((std::sqrt(5.0) - 1) / 2), 30);
  ASSERT_GE(fl.depth(), 30u);
  for (std::size_t k = 1; k <= 30; ++k) EXPECT_EQ(fl.at(k), 1) << k;
}

TEST(Expand, FloatDepthRefused) {
  try {
    expand(Scalar(0.3), kMaxFloatDepth + 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DepthPrecisionExceeded);
  }
}

TEST(Expand, RoundTripExact) {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto x = make_rational(rng.uniform_int(1, 100000), rng.uniform_int(100001, 10000000));
    const auto cf = expand(Scalar(x), 200);
    EXPECT_TRUE(cf.terminated);
    EXPECT_EQ(cf.evaluate(), x);
    EXPECT_EQ(from_coefficients(cf.a0, cf.coeffs).evaluate(), x);
  }
}

TEST(Convergents, GoldenFibonacci) {
  const auto alpha = QuadraticNumber::golden();
  const auto table = convergents(expand(alpha, 25), alpha);
  const auto fib = oracle::fibonacci(26);
  for (std::size_t k = 0; k < table.size(); ++k) EXPECT_EQ(table[k].q, fib[k]) << k;
}

TEST(Convergents, FinalIsInput) {
  const auto x = Scalar::exact(5, 7);
  const auto table = convergents(expand(x, 10), x);
  const auto& last = table[table.size() - 1];
  EXPECT_EQ(make_rational(last.p, last.q), Rational(5, 7));
  EXPECT_TRUE(last.dist.is_zero());
}

TEST(Convergents, RecurrenceAndCoprimality) {
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    const Rational x = rng.dyadic(120);
    const auto cf = expand(Scalar(x), 30);
    const auto table = convergents(cf, Scalar(x));
    for (std::size_t k = 0; k < table.size(); ++k) {
      Integer g;
      mpz_gcd(g.get_mpz_t(), table[k].p.get_mpz_t(), table[k].q.get_mpz_t());
      EXPECT_EQ(g, 1);
      EXPECT_EQ(table[k].dist.rational(), oracle::dist_int(Rational(table[k].q) * x));
      if (k >= 2) {
        EXPECT_EQ(table[k].p, table[k].a * table[k - 1].p + table[k - 2].p);
        EXPECT_EQ(table[k].q, table[k].a * table[k - 1].q + table[k - 2].q);
        EXPECT_GT(table[k].q, table[k - 1].q);
      }
    }
  }
}

TEST(Convergents, SandwichAndAlternation) {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const Rational x = rng.dyadic(200);
    const auto cf = expand(Scalar(x), 17);
    const auto table = convergents(cf, Scalar(x));
    for (std::size_t k = 1; k + 1 < table.size() && k <= 15; ++k) {
      const Rational d = table[k].dist.rational();
      const Rational lo = make_rational(1, table[k + 1].q + table[k].q);
      const Rational hi = make_rational(1, table[k + 1].a * table[k].q);
      EXPECT_LT(lo, d);
      EXPECT_LT(d, hi);
      const Rational diff = x - make_rational(table[k].p, table[k].q);
      EXPECT_GT(k % 2 == 0 ? diff : Rational(-diff), 0);
    }
  }
}

TEST(Convergents, QuadraticDistancesExact) {
  for (const auto& alpha : {QuadraticNumber::golden(), QuadraticNumber::silver()}) {
    const auto table = convergents(expand(alpha, 20), alpha);
    for (std::size_t k = 1; k + 1 < table.size(); ++k) {
      const auto& d = table[k].dist;
      EXPECT_EQ(d, (Rational(table[k].q) * alpha).dist_to_int());
      EXPECT_GT(d, QuadraticNumber(make_rational(1, table[k + 1].q + table[k].q), alpha.d()));
      EXPECT_LT(d, QuadraticNumber(make_rational(1, table[k + 1].a * table[k].q), alpha.d()));
    }
  }
}

TEST(ApproxSearch, Examples) {
  const auto frac = Scalar::exact(22, 7).circle_reduce();
  const auto hits = approx_search(frac, {Integer(7)}, [](const Integer&) { return Scalar::exact(1, 2); });
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].first, 1);
  EXPECT_EQ(hits[0].second, 7);

  const auto half = approx_search(Scalar::exact(1, 2), {Integer(3)}, [](const Integer& q) {
    const double qd = q.get_d();
    return Scalar(1.0 / (qd * qd * std::log(qd)));
  });
  EXPECT_TRUE(half.empty());
}

TEST(ApproxSearch, ConvergentsAlwaysQualify) {
  Rng rng(6);
  for (int t = 0; t < 10; ++t) {
    const Scalar alpha(rng.uniform());
    const auto table = convergents(expand(alpha, 12), alpha);
    for (std::size_t k = 1; k < table.size(); ++k) {
      const auto hits = approx_search(alpha, {table[k].q}, [](const Integer& q) { return Scalar(1.0 / q.get_d()); });
      EXPECT_FALSE(hits.empty()) << k;
    }
  }
}

TEST(ApproxSearch, MatchesExhaustiveScan) {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const Rational alpha = rng.dyadic(40);
    std::vector<Integer> moduli;
    for (long q = 2; q <= 60; ++q) moduli.push_back(q);
    auto bound = [](const Integer& q) { return Scalar(make_rational(1, q)); };
    const auto hits = approx_search(Scalar(alpha), moduli, bound);
    std::size_t expected = 0;
    for (long q = 2; q <= 60; ++q)
      for (long p = 0; p <= q; ++p)
        if (std::gcd(p, q) == 1 && abs(Rational(q) * alpha - p) <= make_rational(1, q)) ++expected;
    EXPECT_EQ(hits.size(), expected);
  }
}

TEST(Cfrac, CsvSchema) {
  const auto x = Scalar::exact(5, 7);
  const auto csv = to_csv(convergents(expand(x, 10), x));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "k,p,q,dist");
}
