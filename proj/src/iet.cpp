#include "odl/iet.hpp"

#include <algorithm>
#include <set>

#include "odl/error.hpp"

namespace odl {

namespace {

const Scalar kZero(Rational(0));
const Scalar kOne(Rational(1));

void check_unit(const Scalar& x) {
  if (x < kZero || x > kOne) raise(Errc::OutOfDomain, "point " + x.str() + " outside [0,1]");
}

Rational interval_gap_sorted(const std::set<Rational>& s) {
  Rational best = *s.begin();
  if (1 - *s.rbegin() > best) best = 1 - *s.rbegin();
  for (auto it = std::next(s.begin()); it != s.end(); ++it) {
    Rational half = (*it - *std::prev(it)) / 2;
    if (half > best) best = half;
  }
  return best;
}

double interval_gap_sorted(const std::vector<double>& v) {
  double best = std::max(v.front(), 1.0 - v.back());
  for (std::size_t i = 1; i < v.size(); ++i) best = std::max(best, (v[i] - v[i - 1]) / 2);
  return best;
}

}  // namespace

ThreeIET::ThreeIET(Scalar alpha, Scalar beta) : alpha_(std::move(alpha)), beta_(std::move(beta)) {
  if (!(kZero < alpha_ && alpha_ < beta_ && beta_ < kOne)) {
    raise(Errc::InvalidArgument, "3-IET needs 0 < alpha < beta < 1, got alpha=" + alpha_.str() +
                                     " beta=" + beta_.str());
  }
}

Scalar ThreeIET::apply(const Scalar& x) const {
  check_unit(x);
  if (x < alpha_) return x + kOne - alpha_;
  if (x < beta_) return x + kOne - alpha_ - beta_;
  return x - beta_;
}

SuspensionRotation SuspensionRotation::of(const ThreeIET& p) {
  return {kOne + p.beta() - p.alpha(), kOne - p.alpha()};
}

Scalar SuspensionRotation::step(const Scalar& y) const {
  Scalar z = y + rot;
  if (z >= length) z = z - length;
  return z;
}

ReturnResult first_return(const SuspensionRotation& s, const Scalar& x, const ThreeIET* p) {
  check_unit(x);
  ReturnResult r;
  r.hit_discontinuity = p != nullptr && p->is_discontinuity(x);
  Scalar y = x;
  do {
    y = s.step(y);
    if (++r.steps > kMaxReturnSteps) {
      raise(Errc::NonReturn, "no return to [0,1) from " + x.str() + " within " +
                                 std::to_string(kMaxReturnSteps) + " steps");
    }
  } while (!(y < kOne));
  r.value = y;
  return r;
}

std::vector<Scalar> iet_orbit_union(const ThreeIET& p, const PointSet& x, std::uint64_t n) {
  if (x.space().kind != SpaceKind::Interval) raise(Errc::InvalidArgument, "IET orbits live on [0,1]");
  std::vector<Scalar> out;
  if (x.is_exact() && p.is_exact()) {
    std::set<Rational> s;
    for (const auto& v : x.exact_coords()) {
      Scalar y(v);
      for (std::uint64_t k = 0; k < n; ++k) {
        if (k > 0 && y.rational() == v) break;
        s.insert(y.rational());
        y = p.apply(y);
      }
    }
    for (const auto& v : s) out.emplace_back(v);
    return out;
  }
  PointSet f = x.to_float();
  for (double v : f.float_coords()) {
    Scalar y(v);
    for (std::uint64_t k = 0; k < n; ++k) {
      out.push_back(y);
      y = p.apply(y);
    }
  }
  return out;
}

std::vector<Scalar> suspension_orbit_in_unit(const SuspensionRotation& s, const PointSet& x, std::uint64_t n) {
  std::vector<Scalar> out;
  const bool exact = x.is_exact() && s.length.is_exact();
  for (std::size_t i = 0; i < x.size(); ++i) {
    Scalar y = x.point(i).coord(0);
    if (!exact) y = y.to_float();
    for (std::uint64_t k = 0; k < n; ++k) {
      if (y < kOne) out.push_back(y);
      y = s.step(y);
    }
  }
  return out;
}

IetProfile iet_qd_profile(const ThreeIET& p, const PointSet& a, const std::vector<std::uint64_t>& schedule,
                          std::size_t size_cap) {
  if (a.space().kind != SpaceKind::Interval) raise(Errc::InvalidArgument, "iet_qd_profile needs a set on [0,1]");
  if (a.empty()) raise(Errc::EmptySet, "iet_qd_profile of an empty set");
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (schedule[i] <= schedule[i - 1]) raise(Errc::InvalidArgument, "schedule must be increasing");
  }
  if (!schedule.empty() && schedule.front() == 0) raise(Errc::InvalidArgument, "schedule entries must be positive");
  IetProfile out;
  out.profile.space = "interval";
  out.profile.map = p.describe();
  out.profile.set = std::to_string(a.size()) + " points";
  if (schedule.empty()) return out;
  const std::uint64_t n_max = schedule.back();
  if (static_cast<long double>(a.size()) * n_max > static_cast<long double>(size_cap)) {
    raise(Errc::SizeBudgetExceeded, "IET orbit union exceeds cap " + std::to_string(size_cap));
  }

  if (a.is_exact() && p.is_exact()) {
    // Orbits of rational points under a rational IET are periodic; each
    // starting point is advanced until it returns to itself.
    struct Orbit {
      Scalar start, current;
      bool closed = false;
      std::uint64_t length = 0;
    };
    std::vector<Orbit> orbits;
    for (const auto& v : a.exact_coords()) orbits.push_back({Scalar(v), Scalar(v)});
    std::set<Rational> s;
    std::uint64_t done = 0;
    for (std::uint64_t n : schedule) {
      for (; done < n; ++done) {
        for (auto& o : orbits) {
          if (o.closed) continue;
          if (done > 0 && o.current == o.start) {
            o.closed = true;
            o.length = done;
            continue;
          }
          s.insert(o.current.rational());
          if (p.is_discontinuity(o.current)) ++out.discontinuity_hits;
          o.current = p.apply(o.current);
        }
      }
      const Rational gap = interval_gap_sorted(s);
      out.profile.records.push_back({n, Scalar(gap), Scalar(Rational(gap * Integer(std::to_string(n))))});
    }
    bool all_closed = true;
    std::uint64_t longest = 0;
    for (const auto& o : orbits) {
      all_closed = all_closed && o.closed;
      longest = std::max(longest, o.length);
    }
    if (all_closed) out.period = longest;
    return out;
  }

  PointSet f = a.to_float();
  std::vector<double> current(f.float_coords().begin(), f.float_coords().end());
  const Scalar alpha = p.alpha().to_float(), beta = p.beta().to_float();
  const double al = alpha.to_double(), be = beta.to_double();
  std::vector<double> sorted;
  sorted.reserve(current.size() * n_max);
  std::uint64_t done = 0;
  for (std::uint64_t n : schedule) {
    const std::size_t mid = sorted.size();
    for (; done < n; ++done) {
      for (double& y : current) {
        sorted.push_back(y);
        if (y == al || y == be) ++out.discontinuity_hits;
        // Same branch arithmetic as ThreeIET::apply, without Scalar overhead.
        if (y < al) {
          y = y + 1.0 - al;
        } else if (y < be) {
          y = y + 1.0 - al - be;
        } else {
          y = y - be;
        }
      }
    }
    std::sort(sorted.begin() + mid, sorted.end());
    std::inplace_merge(sorted.begin(), sorted.begin() + mid, sorted.end());
    const double gap = interval_gap_sorted(sorted);
    out.profile.records.push_back({n, Scalar(gap), Scalar(static_cast<double>(n) * gap)});
  }
  return out;
}

}  // namespace odl
