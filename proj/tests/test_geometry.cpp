#include <gtest/gtest.h>

#include "odl/error.hpp"
#include "odl/geometry.hpp"
#include "odl/rng.hpp"
#include "oracles.hpp"

using namespace odl;

namespace {

PointSet circle(std::initializer_list<std::pair<long, long>> fr) {
  std::vector<Rational> v;
  for (auto [p, q] : fr) v.push_back(make_rational(p, q));
  return PointSet::exact(Space::circle(), v);
}

PointSet interval(std::initializer_list<std::pair<long, long>> fr) {
  std::vector<Rational> v;
  for (auto [p, q] : fr) v.push_back(make_rational(p, q));
  return PointSet::exact(Space::interval(), v);
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::Unsupported;
}

}  // namespace

TEST(CircleGap, SinglePoint) { EXPECT_EQ(circle_gap(circle({{0, 1}})), Scalar::exact(1, 2)); }

TEST(CircleGap, QuarterLattice) {
  EXPECT_EQ(circle_gap(circle({{0, 1}, {1, 4}, {1, 2}, {3, 4}})), Scalar::exact(1, 8));
}

TEST(CircleGap, ThreePointsAgainstDenseGrid) {
  const auto a = circle({{0, 1}, {1, 2}, {1, 3}});
  EXPECT_EQ(circle_gap(a), Scalar::exact(1, 4));
  const double grid = oracle::circle_grid_gap({0.0, 0.5, 1.0 / 3}, 1'000'000);
  EXPECT_NEAR(grid, 0.25, 1e-6);
}

TEST(CircleGap, WitnessIsFarthest) {
  const auto w = circle_gap_witness(circle({{0, 1}, {1, 2}, {1, 3}}));
  EXPECT_EQ(w.gap, Scalar::exact(1, 4));
  EXPECT_EQ(w.farthest.coord(0), Scalar::exact(3, 4));
}

TEST(CircleGap, EquallySpaced) {
  for (long k = 1; k <= 100; ++k) {
    std::vector<Rational> v;
    for (long j = 0; j < k; ++j) v.push_back(make_rational(j, k));
    EXPECT_EQ(circle_gap(PointSet::exact(Space::circle(), v)), Scalar::exact(1, 2 * k)) << k;
  }
}

TEST(CircleGap, EmptySetRejected) {
  EXPECT_EQ(code_of([] { circle_gap(PointSet::exact(Space::circle(), {})); }), Errc::EmptySet);
  EXPECT_EQ(code_of([] { interval_gap(PointSet::exact(Space::interval(), {})); }), Errc::EmptySet);
}

TEST(CircleGap, FloatMatchesDenseGrid) {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> v;
    for (int i = 0; i < 7; ++i) v.push_back(rng.uniform());
    const double g = circle_gap(PointSet::floating(Space::circle(), v)).to_double();
    const double grid = oracle::circle_grid_gap(v, 200'000);
    EXPECT_LE(grid, g + 1e-12);
    EXPECT_LE(g - grid, 1.0 / 400'000 + 1e-12);
  }
}

TEST(IntervalGap, Examples) {
  EXPECT_EQ(interval_gap(interval({{0, 1}, {1, 1}})), Scalar::exact(1, 2));
  EXPECT_EQ(interval_gap(interval({{1, 2}})), Scalar::exact(1, 2));
  EXPECT_EQ(interval_gap(interval({{0, 1}, {1, 4}, {1, 1}})), Scalar::exact(3, 8));
  EXPECT_NEAR(oracle::interval_grid_gap({0, 0.25, 1}, 1'000'000), 0.375, 1e-6);
  EXPECT_EQ(interval_gap(interval({{0, 1}})), Scalar::exact(1, 1));
}

TEST(IntervalGap, FloatMatchesDenseGrid) {
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> v;
    for (int i = 0; i < 5; ++i) v.push_back(rng.uniform());
    const double g = interval_gap(PointSet::floating(Space::interval(), v)).to_double();
    const double grid = oracle::interval_grid_gap(v, 200'000);
    EXPECT_LE(grid, g + 1e-12);
    EXPECT_LE(g - grid, 1.0 / 400'000 + 1e-12);
  }
}

TEST(TorusGap, Origin) {
  const auto a = PointSet::exact(Space::torus(2), {0, 0});
  EXPECT_EQ(torus_gap_upper(a, 4), Scalar::exact(1, 2));
}

TEST(TorusGap, QuarterLattice) {
  std::vector<Rational> v;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      v.push_back(make_rational(i, 4));
      v.push_back(make_rational(j, 4));
    }
  EXPECT_EQ(torus_gap_upper(PointSet::exact(Space::torus(2), v), 8), Scalar::exact(1, 8));
}

TEST(TorusGap, RandomRationalAgainstMonteCarlo) {
  Rng rng(5);
  std::vector<Rational> v;
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 10; ++i) {
    const auto x = make_rational(rng.uniform_int(0, 96), 97);
    const auto y = make_rational(rng.uniform_int(0, 88), 89);
    v.push_back(x);
    v.push_back(y);
    pts.push_back({x.get_d(), y.get_d()});
  }
  const double g = torus_gap_upper(PointSet::exact(Space::torus(2), v), 64).to_double();
  const double mc = oracle::torus_mc_gap(pts, 1'000'000, 99);
  EXPECT_NEAR(g, mc, 1.0 / 128);
}

TEST(TorusGap, NestedGridSandwich) {
  Rng rng(21);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v;
    const int k = 3 + static_cast<int>(rng.pick(10));
    for (int i = 0; i < 2 * k; ++i) v.push_back(rng.uniform());
    const auto a = PointSet::floating(Space::torus(2), v);
    for (int g : {16, 32, 64}) {
      const double coarse = torus_gap_upper(a, g).to_double();
      const double fine = torus_gap_upper(a, 2 * g).to_double();
      EXPECT_LE(coarse, fine + 1e-15);
      EXPECT_LE(fine - coarse, 1.0 / (2 * g) + 1e-15);
      EXPECT_EQ(grid_error_bound(2, g, Metric::TorusLInf), 1.0 / (2 * g));
    }
  }
}

TEST(TorusGap, ResolutionBudget) {
  const auto a = PointSet::exact(Space::torus(3), {0, 0, 0});
  EXPECT_EQ(code_of([&] { torus_gap_upper(a, 1024, Metric::TorusLInf, 1 << 20); }), Errc::ResolutionTooLarge);
}

TEST(IsEpsDense, Circle) {
  const auto a = circle({{0, 1}, {1, 2}});
  EXPECT_TRUE(is_eps_dense(a, Scalar(0.3)).dense);
  const auto c = is_eps_dense(a, Scalar::exact(1, 4));
  EXPECT_FALSE(c.dense);
  ASSERT_TRUE(c.farthest.has_value());
  EXPECT_EQ(c.gap, Scalar::exact(1, 4));
}

TEST(IsEpsDense, TorusDiagonalPair) {
  const auto a = PointSet::exact(Space::torus(2), {0, 0, make_rational(1, 2), make_rational(1, 2)});
  const auto c = is_eps_dense(a, Scalar(0.3), 32, Metric::TorusLInf);
  // (1/2, 0) is at L-infinity distance 1/2 from both points.
  EXPECT_EQ(c.gap, Scalar::exact(1, 2));
  EXPECT_FALSE(c.dense);
  EXPECT_EQ(distance(*c.farthest, a.point(0), Metric::TorusLInf), Scalar::exact(1, 2));
}

TEST(Semimetric, Examples) {
  const auto a = circle({{0, 1}, {1, 3}, {2, 3}});
  EXPECT_EQ(semimetric_gap(a, a), Scalar::exact(0));
  EXPECT_EQ(semimetric_gap(circle({{0, 1}}), circle({{0, 1}, {1, 2}})), Scalar::exact(1, 2));
  EXPECT_EQ(semimetric_gap(a, circle({{1, 6}})), Scalar::exact(1, 6));
}

TEST(Semimetric, GridConvergesToGap) {
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    std::vector<Rational> v;
    for (int i = 0; i < 6; ++i) v.push_back(rng.dyadic(20));
    const auto a = PointSet::exact(Space::circle(), v);
    const Scalar gap = circle_gap(a);
    for (long g : {64L, 256L, 1024L}) {
      std::vector<Rational> y;
      for (long j = 0; j < g; ++j) y.push_back(make_rational(j, g));
      const Scalar s = semimetric_gap(a, PointSet::exact(Space::circle(), y));
      EXPECT_LE(s, gap);
      EXPECT_LE((gap - s).to_double(), 1.0 / g);
    }
  }
}

TEST(Semimetric, RestrictionToSubinterval) {
  // C inside X = [0, 1 + l]; covering Y = [0, 1] is no harder than covering X.
  Rng rng(41);
  for (int t = 0; t < 100; ++t) {
    const Rational len = 1 + rng.dyadic(10);
    std::vector<Rational> c;
    const int k = 1 + static_cast<int>(rng.pick(8));
    for (int i = 0; i < k; ++i) c.push_back(rng.dyadic(16) * len);
    std::sort(c.begin(), c.end());
    Rational gap_x = std::max(Rational(c.front()), Rational(len - c.back()));
    for (std::size_t i = 1; i < c.size(); ++i) gap_x = std::max(gap_x, Rational((c[i] - c[i - 1]) / 2));
    // Scaled copy of C in [0, 1] covers Y = [0, 1/len] as a subset of [0, 1].
    std::vector<Rational> scaled;
    for (auto& x : c) scaled.push_back(x / len);
    std::vector<Rational> ygrid;
    for (int j = 0; j <= 256; ++j) ygrid.push_back(make_rational(j, 256) / len);
    const Scalar gap_y = semimetric_gap(PointSet::exact(Space::interval(), scaled),
                                        PointSet::exact(Space::interval(), ygrid));
    EXPECT_LE(gap_y.rational() * len, gap_x);
  }
}

TEST(Monotonicity, SupersetNeverWorse) {
  Rng rng(51);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v;
    for (int i = 0; i < 12; ++i) v.push_back(rng.uniform());
    std::vector<double> sub(v.begin(), v.begin() + 5);
    EXPECT_LE(circle_gap(PointSet::floating(Space::circle(), v)), circle_gap(PointSet::floating(Space::circle(), sub)));
    EXPECT_LE(interval_gap(PointSet::floating(Space::interval(), v)),
              interval_gap(PointSet::floating(Space::interval(), sub)));
    std::vector<double> tv(v.begin(), v.begin() + 12), ts(v.begin(), v.begin() + 6);
    EXPECT_LE(torus_gap_upper(PointSet::floating(Space::torus(2), tv), 32),
              torus_gap_upper(PointSet::floating(Space::torus(2), ts), 32));
  }
}

TEST(PointSet, DeduplicateAndCsv) {
  const auto a = PointSet::floating(Space::circle(), {0.25, 0.25 + 1e-14, 0.5});
  EXPECT_EQ(a.deduplicate().size(), 2u);
  EXPECT_TRUE(a.deduplicate().deduplicated());
  const auto e = circle({{1, 3}, {2, 6}, {1, 2}});
  EXPECT_EQ(e.deduplicate().size(), 2u);
  const auto t = PointSet::exact(Space::torus(2), {make_rational(1, 3), 0, make_rational(1, 2), make_rational(3, 4)});
  EXPECT_EQ(to_csv(t), "1/3,0\n1/2,3/4\n");
  EXPECT_TRUE(parse_point_set_csv(Space::torus(2), to_csv(t)).same_set(t));
}

TEST(PointSet, MetricInvariants) {
  Rng rng(61);
  for (int t = 0; t < 200; ++t) {
    const Point x(Space::torus(2), std::vector<double>{rng.uniform(), rng.uniform()});
    const Point y(Space::torus(2), std::vector<double>{rng.uniform(), rng.uniform()});
    const double linf = distance(x, y, Metric::TorusLInf).to_double();
    const double l2 = distance(x, y, Metric::TorusL2).to_double();
    EXPECT_LE(linf, 0.5);
    EXPECT_LE(linf, l2 + 1e-15);
    EXPECT_LE(l2, std::sqrt(2.0) * linf + 1e-15);
  }
}
