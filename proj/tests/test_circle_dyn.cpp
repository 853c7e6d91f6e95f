#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "odl/cfrac.hpp"
#include "odl/circle_dyn.hpp"
#include "odl/error.hpp"
#include "odl/rng.hpp"
#include "oracles.hpp"

using namespace odl;

namespace {

PointSet circle(std::initializer_list<std::pair<long, long>> fr) {
  std::vector<Rational> v;
  for (auto [p, q] : fr) v.push_back(make_rational(p, q));
  return PointSet::exact(Space::circle(), v);
}

// Largest gap of {i alpha : i < n}, n >= 3, from the convergent table.
QuadraticNumber three_distance_max_gap(const QuadraticNumber& alpha, std::uint64_t n) {
  const auto table = convergents(expand(alpha, 60), alpha);
  std::size_t k = 1;
  while (k + 1 < table.size() && table[k + 1].q + table[k].q <= n) ++k;
  const Integer r = (Integer(std::to_string(n)) - table[k - 1].q) / table[k].q;
  return table[k - 1].dist - Rational(Integer(r - 1)) * table[k].dist;
}

}  // namespace

TEST(OrbitUnion, Examples) {
  EXPECT_TRUE(orbit_union(Rotation(Scalar::exact(1, 4)), circle({{0, 1}}), 4)
                  .same_set(circle({{0, 1}, {1, 4}, {1, 2}, {3, 4}})));
  EXPECT_TRUE(orbit_union(Rotation(Scalar::exact(1, 2)), circle({{0, 1}, {1, 8}}), 2)
                  .same_set(circle({{0, 1}, {1, 8}, {1, 2}, {5, 8}})));
}

TEST(OrbitUnion, GoldenMatchesThreeDistance) {
  const auto golden = QuadraticNumber::golden();
  const std::uint64_t n = 10000;
  const auto orbit = orbit_union(Rotation(Scalar(golden.to_double())), PointSet::floating(Space::circle(), {0.0}), n);
  EXPECT_EQ(orbit.size(), n);
  const double expected = three_distance_max_gap(golden, n).to_double() / 2;
  EXPECT_NEAR(circle_gap(orbit).to_double(), expected, 1e-12);
  EXPECT_EQ(orbit_gap_exact(golden, n), three_distance_max_gap(golden, n) * QuadraticNumber(Rational(1, 2), golden.d()));
}

TEST(OrbitUnion, SizeBudget) {
  try {
    orbit_union(Rotation(Scalar(0.1234)), PointSet::floating(Space::circle(), {0.0, 0.5}), 1000, 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SizeBudgetExceeded);
  }
}

TEST(OrbitUnion, ExactAgainstRationalOracle) {
  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    const Rational alpha = rng.dyadic(30);
    std::vector<Rational> base{rng.dyadic(10), rng.dyadic(12)};
    const std::uint64_t n = 1 + rng.pick(200);
    const auto orbit = orbit_union(Rotation(Scalar(alpha)), PointSet::exact(Space::circle(), base), n);
    std::vector<Rational> all;
    for (const auto& b : base)
      for (std::uint64_t i = 0; i < n; ++i) all.push_back(oracle::frac(b + Rational(i) * alpha));
    EXPECT_EQ(circle_gap(orbit).rational(), oracle::circle_cover(all));
  }
}

TEST(ThreeDistance, AtMostThreeGapLengths) {
  Rng rng(9);
  for (int t = 0; t < 200; ++t) {
    const phase::Phase alpha = rng.next();
    const std::uint64_t n = 1 + rng.pick(10000);
    EXPECT_LE(orbit_gap_lengths(alpha, n).size(), 3u);
  }
  for (int t = 0; t < 30; ++t) {
    const Rational alpha = rng.dyadic(40);
    const std::uint64_t n = 2 + rng.pick(300);
    std::vector<Rational> pts;
    for (std::uint64_t i = 0; i < n; ++i) pts.push_back(oracle::frac(Rational(i) * alpha));
    std::sort(pts.begin(), pts.end());
    std::set<Rational> lengths{pts.front() + 1 - pts.back()};
    for (std::size_t i = 1; i < pts.size(); ++i) lengths.insert(pts[i] - pts[i - 1]);
    EXPECT_LE(lengths.size(), 3u);
    EXPECT_EQ(orbit_gap_lengths(phase::from_rational(alpha), n).size(), lengths.size());
  }
}

TEST(OrbitGap, FullGapBoundsConvergentDistance) {
  for (const auto& alpha : {QuadraticNumber::golden(), QuadraticNumber::silver()}) {
    const auto table = convergents(expand(alpha, 14), alpha);
    for (std::size_t k = 1; k <= 12; ++k) {
      const std::uint64_t n = table[k + 1].q.get_ui();
      const auto half = orbit_gap_exact(alpha, n);
      // Two-distance structure at n = q_{k+1}: largest gap ||q_k a|| + ||q_{k+1} a||.
      EXPECT_EQ(half + half, table[k].dist + table[k + 1].dist);
      EXPECT_GE(half + half, table[k].dist);
    }
  }
}

TEST(QdProfile, Examples) {
  const auto prof = qd_profile(Rotation(Scalar::exact(1, 3)), circle({{0, 1}}), {1, 2, 3});
  ASSERT_EQ(prof.records.size(), 3u);
  EXPECT_EQ(prof.records[0].gap, Scalar::exact(1, 2));
  EXPECT_EQ(prof.records[2].gap, Scalar::exact(1, 6));
  EXPECT_EQ(prof.records[2].scaled, Scalar::exact(1, 2));
  const auto a = circle({{1, 5}, {1, 2}, {7, 9}});
  const auto one = qd_profile(Rotation(Scalar(0.3)), a, {1});
  EXPECT_NEAR(one.records[0].gap.to_double(), circle_gap(a).to_double(), 1e-15);
  EXPECT_NEAR(one.records[0].scaled.to_double(), circle_gap(a).to_double(), 1e-15);
}

TEST(QdProfile, NonincreasingAndScaled) {
  Rng rng(10);
  for (int t = 0; t < 20; ++t) {
    const Scalar alpha(rng.uniform());
    const auto prof = qd_profile(Rotation(alpha), PointSet::floating(Space::circle(), {0.0, rng.uniform()}),
                                 geometric_schedule(5000));
    EXPECT_TRUE(prof.gap_nonincreasing());
    for (const auto& r : prof.records)
      EXPECT_NEAR(r.scaled.to_double(), double(r.n) * r.gap.to_double(), 1e-12 * double(r.n));
  }
}

TEST(QdProfile, PhaseKernelMatchesExactOracle) {
  Rng rng(12);
  for (int t = 0; t < 10; ++t) {
    const double alpha = rng.uniform();
    const auto sched = geometric_schedule(400);
    const auto gaps = phase_orbit_gaps(phase::from_double(alpha), {0, phase::from_double(0.25)}, sched);
    const Rational ea = exact_from_double(alpha);
    for (std::size_t i = 0; i < sched.size(); ++i) {
      std::vector<Rational> pts;
      for (std::uint64_t j = 0; j < sched[i]; ++j) {
        pts.push_back(oracle::frac(Rational(j) * ea));
        pts.push_back(oracle::frac(Rational(1, 4) + Rational(j) * ea));
      }
      EXPECT_NEAR(gaps[i], oracle::circle_cover(pts).get_d(), 1e-15);
    }
  }
}

TEST(Schedule, Geometric) {
  const auto s = geometric_schedule(100);
  EXPECT_EQ(s.front(), 1u);
  EXPECT_EQ(s.back(), 100u);
  EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
  EXPECT_EQ(std::adjacent_find(s.begin(), s.end()), s.end());
}

TEST(Dilate, Examples) {
  EXPECT_TRUE(dilate(circle({{0, 1}, {1, 2}}), 2).same_set(circle({{0, 1}})));
  EXPECT_TRUE(dilate(circle({{1, 7}, {2, 7}}), 7).same_set(circle({{0, 1}})));
  EXPECT_TRUE(dilate(PointSet::floating(Space::circle(), {0.1, 0.25, 0.6}), 3)
                  .same_set(PointSet::floating(Space::circle(), {0.3, 0.75, 0.8}), 1e-12));
}

TEST(Dilate, SemigroupAction) {
  Rng rng(13);
  for (int t = 0; t < 100; ++t) {
    std::vector<Rational> v;
    for (int i = 0; i < 5; ++i) v.push_back(make_rational(rng.uniform_int(0, 200), rng.uniform_int(1, 201)));
    const auto a = PointSet::exact(Space::circle(), v);
    const std::uint64_t p = 1 + rng.pick(30), q = 1 + rng.pick(30);
    EXPECT_TRUE(dilate(dilate(a, p), q).same_set(dilate(a, p * q)));
  }
}

TEST(Glasner, AlreadyDense) {
  std::vector<Rational> v;
  for (long j = 0; j < 10; ++j) v.push_back(make_rational(j, 10));
  const auto r = glasner_min_dilation(PointSet::exact(Space::circle(), v), Scalar(0.06), 100);
  ASSERT_TRUE(r.m.has_value());
  EXPECT_EQ(*r.m, 1u);
}

TEST(Glasner, TwoPointsNeverDense) {
  const auto r = glasner_min_dilation(circle({{0, 1}, {1, 2}}), Scalar(0.2), 500);
  EXPECT_FALSE(r.m.has_value());
  EXPECT_EQ(r.best_gap, Scalar::exact(1, 4));
}

TEST(Glasner, MatchesExhaustiveScan) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Rng rng(seed, "glasner-test", 0);
    const Rational alpha = rng.dyadic(53);
    std::vector<Rational> v;
    for (int j = 0; j < 25; ++j) v.push_back(oracle::frac(Rational(j) * alpha));
    const auto a = PointSet::exact(Space::circle(), v);
    const Rational eps(1, 20);
    std::optional<std::uint64_t> expected;
    for (std::uint64_t m = 1; m <= 5000 && !expected; ++m) {
      std::vector<Rational> d;
      for (const auto& x : v) d.push_back(oracle::frac(Rational(Integer(std::to_string(m))) * x));
      if (oracle::circle_cover(d) < eps) expected = m;
    }
    const auto r = glasner_min_dilation(a, Scalar(eps), 5000, 2);
    EXPECT_EQ(r.m, expected);
    const auto f = glasner_min_dilation(a.to_float(), Scalar(0.05), 5000);
    EXPECT_EQ(f.m, expected);
  }
}

TEST(DilationDensity, Examples) {
  std::vector<Rational> v;
  for (long j = 0; j < 100; ++j) v.push_back(make_rational(j, 100));
  EXPECT_GE(dilation_density_fraction(PointSet::exact(Space::circle(), v), Scalar(0.02), 100), 0.01);
  EXPECT_EQ(dilation_density_fraction(circle({{0, 1}, {1, 2}}), Scalar(0.1), 300), 0.0);
}

TEST(PreimageIdentity, Examples) {
  EXPECT_TRUE(preimage_identity_check(circle({{0, 1}}), 3));
  EXPECT_TRUE(preimage_identity_check(circle({{1, 6}}), 2));
  try {
    preimage_identity_check(PointSet::floating(Space::circle(), {0.5}), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::RequiresExact);
  }
}

TEST(PreimageIdentity, RandomRationalSets) {
  Rng rng(14);
  for (int t = 0; t < 100; ++t) {
    std::vector<Rational> v;
    const int k = 1 + static_cast<int>(rng.pick(6));
    for (int i = 0; i < k; ++i) v.push_back(make_rational(rng.uniform_int(0, 99), rng.uniform_int(1, 100)));
    EXPECT_TRUE(preimage_identity_check(PointSet::exact(Space::circle(), v), 1 + rng.pick(50)));
  }
}

TEST(Counterexample, GoldenSquareRule) {
  const auto golden = QuadraticNumber::golden();
  const auto set = build_counterexample(golden, GrowthRule::square(), 4);
  EXPECT_EQ(set.indices, (std::vector<int>{0, 2, 4, 8}));
  const auto fib = oracle::fibonacci(10);
  for (std::size_t i = 0; i < set.q.size(); ++i) EXPECT_EQ(set.q[i], fib[set.indices[i]]);
  for (std::size_t i = 1; i < set.q.size(); ++i) {
    EXPECT_GE(set.q[i], set.q[i - 1] * set.q[i - 1]);
    EXPECT_LT(set.distances[i], set.distances[i - 1]);
  }
  EXPECT_EQ(set.points().size(), 5u);
}

TEST(Counterexample, DepthOne) {
  const auto set = build_counterexample(QuadraticNumber::silver(), GrowthRule::square(), 1);
  EXPECT_EQ(set.points().size(), 2u);
}

TEST(Counterexample, TripleExponentialUnreachable) {
  EXPECT_NO_THROW(build_counterexample(QuadraticNumber::golden(), GrowthRule::triple_exp(), 2));
  try {
    build_counterexample(QuadraticNumber::golden(), GrowthRule::triple_exp(), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DepthUnreachable);
  }
}

TEST(PairProfile, Examples) {
  const auto a = circle({{1, 5}, {1, 3}});
  const auto same = qd_pair_profile(Rotation(Scalar(0.37)), a, a, {1, 5, 20});
  for (const auto& r : same.records) EXPECT_TRUE(r.gap.is_zero());
  const auto half = qd_pair_profile(Rotation(Scalar::exact(1, 2)), circle({{0, 1}}), circle({{1, 2}}), {2});
  EXPECT_TRUE(half.records[0].gap.is_zero());
}

TEST(Rotation, ExactStaysExact) {
  const Rotation t(Scalar::exact(3, 7));
  const Scalar y = t.apply(Scalar::exact(5, 7), 3);
  EXPECT_TRUE(y.is_exact());
  EXPECT_EQ(y, Scalar::exact(0));
}

TEST(Profile, CsvSchema) {
  const auto prof = qd_profile(Rotation(Scalar::exact(1, 3)), circle({{0, 1}}), {1, 3});
  EXPECT_EQ(prof.to_csv(), "n,gap,scaled\n1,1/2,1/2\n3,1/6,1/2\n");
}
