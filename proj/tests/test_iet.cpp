#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "odl/error.hpp"
#include "odl/iet.hpp"
#include "odl/rng.hpp"
#include "oracles.hpp"

using namespace odl;

namespace {

Scalar q(long p, long d) { return Scalar::exact(p, d); }

// Random exact parameters 0 < alpha < beta < 1 with a small common denominator.
ThreeIET random_rational_iet(Rng& rng) {
  const long den = rng.uniform_int(5, 60);
  const long a = rng.uniform_int(1, den - 2);
  const long b = rng.uniform_int(a + 1, den - 1);
  return ThreeIET(q(a, den), q(b, den));
}

}  // namespace

TEST(ThreeIet, ApplyExamples) {
  const ThreeIET p(q(3, 10), q(7, 10));
  EXPECT_EQ(p.apply(q(1, 10)), q(4, 5));
  EXPECT_EQ(p.apply(q(1, 2)), q(1, 2));
  EXPECT_EQ(p.apply(q(9, 10)), q(1, 5));
  EXPECT_EQ(p.apply(q(1, 1)), q(3, 10));
  const ThreeIET f(Scalar(0.3), Scalar(0.7));
  EXPECT_NEAR(f.apply(Scalar(0.1)).to_double(), 0.8, 1e-15);
  EXPECT_NEAR(f.apply(Scalar(0.5)).to_double(), 0.5, 1e-15);
  EXPECT_NEAR(f.apply(Scalar(0.9)).to_double(), 0.2, 1e-15);
}

TEST(ThreeIet, Errors) {
  const ThreeIET p(q(3, 10), q(7, 10));
  for (const auto& x : {q(-1, 10), q(11, 10)}) {
    try {
      p.apply(x);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::OutOfDomain);
    }
  }
  try {
    ThreeIET(q(1, 2), q(1, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidArgument);
  }
}

TEST(FirstReturn, Examples) {
  const ThreeIET p(q(3, 10), q(7, 10));
  const auto s = SuspensionRotation::of(p);
  EXPECT_EQ(s.length, q(7, 5));
  const auto one = first_return(s, q(1, 5));
  EXPECT_EQ(one.value, q(9, 10));
  EXPECT_EQ(one.steps, 1);
  const auto two = first_return(s, q(1, 2));
  EXPECT_EQ(two.value, q(1, 2));
  EXPECT_EQ(two.steps, 2);
  EXPECT_TRUE(first_return(s, q(3, 10), &p).hit_discontinuity);
}

TEST(FirstReturn, EqualsApplyOnFloats) {
  Rng rng(20);
  for (int t = 0; t < 100; ++t) {
    double a = rng.uniform(), b = rng.uniform();
    if (a > b) std::swap(a, b);
    if (a == 0 || a == b) continue;
    const ThreeIET p{Scalar(a), Scalar(b)};
    const auto s = SuspensionRotation::of(p);
    for (int i = 0; i < 100; ++i) {
      const Scalar x(rng.uniform());
      const auto r = first_return(s, x);
      EXPECT_LE(r.steps, 2);
      EXPECT_NEAR(r.value.to_double(), p.apply(x).to_double(), 1e-12);
    }
  }
}

TEST(FirstReturn, EqualsApplyExactly) {
  Rng rng(21);
  for (int t = 0; t < 100; ++t) {
    const auto p = random_rational_iet(rng);
    const auto s = SuspensionRotation::of(p);
    const long den = rng.uniform_int(2, 97);
    for (long j = 0; j <= den; ++j) EXPECT_EQ(first_return(s, q(j, den)).value, p.apply(q(j, den)));
    EXPECT_EQ(first_return(s, p.alpha()).value, p.apply(p.alpha()));
    EXPECT_EQ(first_return(s, p.beta()).value, p.apply(p.beta()));
  }
}

TEST(ThreeIet, BranchImagesTileTheInterval) {
  Rng rng(22);
  for (int t = 0; t < 100; ++t) {
    const auto p = random_rational_iet(rng);
    const Rational a = p.alpha().rational(), b = p.beta().rational();
    // Image of each half-open branch [l, r) is [P(l), P(l) + r - l).
    std::vector<std::pair<Rational, Rational>> images{
        {p.apply(q(0, 1)).rational(), a}, {p.apply(p.alpha()).rational(), b - a}, {p.apply(p.beta()).rational(), 1 - b}};
    std::sort(images.begin(), images.end());
    Rational cursor = 0, total = 0;
    for (const auto& [start, len] : images) {
      EXPECT_EQ(start, cursor);
      cursor += len;
      total += len;
    }
    EXPECT_EQ(total, 1);
    // Injective on a fine grid of each open branch.
    std::set<Rational> seen;
    const long den = 3 * mpz_get_si(a.get_den_mpz_t()) * mpz_get_si(b.get_den_mpz_t());
    for (long j = 0; j < den; ++j) EXPECT_TRUE(seen.insert(p.apply(q(j, den)).rational()).second);
  }
}

TEST(ThreeIet, SuspensionOrbitRestrictsIntoIetOrbit) {
  Rng rng(23);
  for (int t = 0; t < 100; ++t) {
    const auto p = random_rational_iet(rng);
    const auto s = SuspensionRotation::of(p);
    std::vector<Rational> x;
    const long den = rng.uniform_int(2, 40);
    for (int i = 0; i < 3; ++i) x.push_back(make_rational(rng.uniform_int(0, den), den));
    const auto xs = PointSet::exact(Space::interval(), x);
    const std::uint64_t n = 1 + rng.pick(40);
    const auto lhs = suspension_orbit_in_unit(s, xs, n);
    const auto rhs = iet_orbit_union(p, xs, n);
    std::set<Rational> r;
    for (const auto& v : rhs) r.insert(v.rational());
    for (const auto& v : lhs) EXPECT_TRUE(r.count(v.rational())) << v.str() << " a=" << p.alpha().str() << " b=" << p.beta().str() << " n=" << n << " x=" << x[0] << "," << x[1] << "," << x[2];
  }
}

TEST(IetProfile, SinglePointAtZero) {
  const ThreeIET p(q(1, 3), q(1, 2));
  const auto prof = iet_qd_profile(p, PointSet::exact(Space::interval(), {0}), {1});
  EXPECT_EQ(prof.profile.records[0].gap, q(1, 1));
  EXPECT_EQ(prof.profile.records[0].scaled, q(1, 1));
}

TEST(IetProfile, RationalOrbitIsPeriodic) {
  const ThreeIET p(q(1, 5), q(3, 5));
  const auto a = PointSet::exact(Space::interval(), {make_rational(1, 10)});
  const auto prof = iet_qd_profile(p, a, dense_schedule(40));
  ASSERT_TRUE(prof.period.has_value());
  const std::uint64_t period = *prof.period;
  // Brute-force period of the exact orbit.
  Scalar x = q(1, 10);
  std::uint64_t k = 0;
  do {
    x = p.apply(x);
    ++k;
  } while (x != q(1, 10));
  EXPECT_EQ(period, k);
  const auto& recs = prof.profile.records;
  for (std::size_t i = period; i < recs.size(); ++i) EXPECT_EQ(recs[i].gap, recs[period - 1].gap);
}

TEST(IetProfile, FloatMatchesExactOrbitGap) {
  Rng rng(24);
  for (int t = 0; t < 10; ++t) {
    double a = rng.uniform(), b = rng.uniform();
    if (a > b) std::swap(a, b);
    const ThreeIET pf{Scalar(a), Scalar(b)};
    const ThreeIET pe{Scalar(exact_from_double(a)), Scalar(exact_from_double(b))};
    const auto sched = geometric_schedule(300);
    const auto ff = iet_qd_profile(pf, PointSet::floating(Space::interval(), {0.0, 0.5}), sched);
    const auto fe = iet_qd_profile(pe, PointSet::exact(Space::interval(), {0, Rational(1, 2)}), sched);
    ASSERT_EQ(ff.profile.records.size(), fe.profile.records.size());
    for (std::size_t i = 0; i < sched.size(); ++i)
      EXPECT_NEAR(ff.profile.records[i].gap.to_double(), fe.profile.records[i].gap.to_double(), 1e-12);
    EXPECT_TRUE(ff.profile.gap_nonincreasing());
  }
}
