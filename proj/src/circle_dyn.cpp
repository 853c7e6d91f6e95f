#include "odl/circle_dyn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "odl/cfrac.hpp"
#include "odl/error.hpp"
#include "odl/parallel.hpp"

namespace odl {

namespace {

Rational frac(const Rational& x) { return x - Rational(floor_of(x)); }

void require_circle(const PointSet& a, const char* what) {
  if (a.space().kind != SpaceKind::Circle) {
    raise(Errc::InvalidArgument, std::string(what) + " needs a set on the circle");
  }
}

void check_schedule(const std::vector<std::uint64_t>& schedule) {
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] == 0) raise(Errc::InvalidArgument, "schedule entries must be positive");
    if (i > 0 && schedule[i] <= schedule[i - 1]) raise(Errc::InvalidArgument, "schedule must be increasing");
  }
}

void check_size(std::size_t base, std::uint64_t steps, std::size_t cap) {
  const long double total = static_cast<long double>(base) * static_cast<long double>(steps);
  if (total > static_cast<long double>(cap)) {
    raise(Errc::SizeBudgetExceeded, "orbit union of " + std::to_string(base) + " x " +
                                        std::to_string(steps) + " points exceeds cap " +
                                        std::to_string(cap));
  }
}

std::vector<phase::Phase> phases_of(const PointSet& a) {
  std::vector<phase::Phase> out;
  out.reserve(a.size());
  if (a.is_exact()) {
    for (const auto& x : a.exact_coords()) out.push_back(phase::from_rational(x));
  } else {
    for (double x : a.float_coords()) out.push_back(phase::from_double(x));
  }
  return out;
}

PointSet float_set_from_phases(std::vector<phase::Phase> p) {
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  std::vector<double> flat;
  flat.reserve(p.size());
  for (phase::Phase x : p) flat.push_back(phase::to_double(x));
  return PointSet::floating(Space::circle(), std::move(flat)).deduplicate();
}

Rational exact_circle_gap(const std::set<Rational>& s) {
  Rational best = *s.begin() + 1 - *s.rbegin();
  for (auto it = std::next(s.begin()); it != s.end(); ++it) {
    Rational g = *it - *std::prev(it);
    if (g > best) best = g;
  }
  return best / 2;
}

double half_gap(phase::Wide g) { return std::ldexp(static_cast<double>(g), -65); }

long double log_of(const Integer& q) {
  if (q <= 0) return -std::numeric_limits<long double>::infinity();
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, q.get_mpz_t());
  return std::log(static_cast<long double>(mant)) + static_cast<long double>(exp) * std::log(2.0L);
}

// Threshold T with: half gap < eps  iff  max gap (phase units) < T.
phase::Wide gap_threshold(const Scalar& eps) {
  const Rational scaled = eps.to_exact() * Rational(Integer(1) << 65);
  Integer t;
  mpz_cdiv_q(t.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  const Integer cap = (Integer(1) << 65) + 1;
  if (t > cap) t = cap;
  if (t < 0) t = 0;
  phase::Wide out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, t.get_mpz_t());
  return out;
}

DensityProfile make_profile(std::string map, std::string set) {
  DensityProfile p;
  p.space = "circle";
  p.map = std::move(map);
  p.set = std::move(set);
  return p;
}

}  // namespace

// --------------------------------------------------------------- rotation

Scalar Rotation::apply(const Scalar& x, std::uint64_t times) const {
  if (x.is_exact() && alpha_.is_exact()) {
    return Scalar(frac(Rational(x.rational() + Rational(Integer(std::to_string(times))) * alpha_.rational())));
  }
  const phase::Phase p = phase::from_scalar(x) + times * phase::from_scalar(alpha_);
  return Scalar(phase::to_double(p));
}

// ---------------------------------------------------------------- profile

std::string DensityProfile::to_csv() const {
  std::string out = "n,gap,scaled\n";
  for (const auto& r : records) {
    out += std::to_string(r.n) + "," + r.gap.str() + "," + r.scaled.str() + "\n";
  }
  return out;
}

bool DensityProfile::gap_nonincreasing() const {
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].gap > records[i - 1].gap) return false;
  }
  return true;
}

std::optional<Scalar> DensityProfile::min_scaled(std::uint64_t lo, std::uint64_t hi) const {
  std::optional<Scalar> best;
  for (const auto& r : records) {
    if (r.n < lo || r.n > hi) continue;
    if (!best || r.scaled < *best) best = r.scaled;
  }
  return best;
}

const ProfileRecord* DensityProfile::find(std::uint64_t n) const {
  for (const auto& r : records) {
    if (r.n == n) return &r;
  }
  return nullptr;
}

std::vector<std::uint64_t> geometric_schedule(std::uint64_t n_max, double ratio) {
  if (n_max < 1) raise(Errc::InvalidArgument, "schedule needs n_max >= 1");
  if (!(ratio > 1.0)) raise(Errc::InvalidArgument, "geometric ratio must exceed 1");
  std::vector<std::uint64_t> out;
  for (int j = 0;; ++j) {
    const long double v = std::ceil(std::pow(static_cast<long double>(ratio), j) - 1e-12L);
    if (v > static_cast<long double>(n_max)) break;
    const auto n = static_cast<std::uint64_t>(v);
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  if (out.back() != n_max) out.push_back(n_max);
  return out;
}

std::vector<std::uint64_t> dense_schedule(std::uint64_t n_max) {
  std::vector<std::uint64_t> out(n_max);
  for (std::uint64_t i = 0; i < n_max; ++i) out[i] = i + 1;
  return out;
}

// ------------------------------------------------------------ orbit union

PointSet orbit_union(const Rotation& t, const PointSet& a, std::uint64_t n, std::size_t size_cap) {
  require_circle(a, "orbit_union");
  if (n < 1) raise(Errc::InvalidArgument, "orbit_union needs n >= 1");
  if (a.empty()) return a;
  if (a.is_exact() && t.alpha().is_exact()) {
    const Rational& alpha = t.alpha().rational();
    // The orbit of a rational rotation repeats after den(alpha) steps.
    const Integer period = alpha.get_den();
    const std::uint64_t steps = period < Integer(std::to_string(n)) ? period.get_ui() : n;
    check_size(a.size(), steps, size_cap);
    std::set<Rational> s;
    for (const auto& x : a.exact_coords()) {
      Rational y = x;
      for (std::uint64_t k = 0; k < steps; ++k) {
        s.insert(y);
        y = frac(Rational(y + alpha));
      }
    }
    return PointSet::exact(Space::circle(), std::vector<Rational>(s.begin(), s.end()));
  }
  check_size(a.size(), n, size_cap);
  const phase::Phase alpha = phase::from_scalar(t.alpha());
  std::vector<phase::Phase> base = phases_of(a);
  std::vector<phase::Phase> pts;
  pts.reserve(base.size() * n);
  for (std::uint64_t k = 0; k < n; ++k) {
    for (phase::Phase b : base) pts.push_back(b + k * alpha);
  }
  return float_set_from_phases(std::move(pts));
}

void GapTracker::insert(phase::Phase p) {
  if (points_.empty()) {
    points_.insert(p);
    gaps_.insert(phase::kFullTurn);
    return;
  }
  auto [it, fresh] = points_.insert(p);
  if (!fresh) return;
  auto next = std::next(it);
  const phase::Phase succ = next == points_.end() ? *points_.begin() : *next;
  const phase::Phase pred = it == points_.begin() ? *points_.rbegin() : *std::prev(it);
  const phase::Wide old = pred == succ ? phase::kFullTurn : phase::Wide(phase::Phase(succ - pred));
  gaps_.erase(gaps_.find(old));
  gaps_.insert(phase::Wide(phase::Phase(p - pred)));
  gaps_.insert(phase::Wide(phase::Phase(succ - p)));
}

phase::Wide GapTracker::max_gap() const {
  if (gaps_.empty()) raise(Errc::EmptySet, "gap of an empty tracker");
  return *gaps_.rbegin();
}

std::vector<double> phase_orbit_gaps(phase::Phase alpha, const std::vector<phase::Phase>& base,
                                     const std::vector<std::uint64_t>& schedule, std::size_t size_cap) {
  check_schedule(schedule);
  if (base.empty()) raise(Errc::EmptySet, "orbit of an empty set");
  std::vector<double> out;
  if (schedule.empty()) return out;
  const std::uint64_t n_max = schedule.back();
  check_size(base.size(), n_max, size_cap);

  // Insertion into a tracker costs a tree update per point; re-merging a
  // sorted array costs its full length per schedule entry.
  long double merge_cost = 0;
  for (std::uint64_t n : schedule) merge_cost += static_cast<long double>(n) * base.size();
  const long double tracker_cost = 24.0L * n_max * base.size();

  if (tracker_cost < merge_cost) {
    GapTracker tracker;
    std::uint64_t done = 0;
    for (std::uint64_t n : schedule) {
      for (; done < n; ++done) {
        const phase::Phase shift = done * alpha;
        for (phase::Phase b : base) tracker.insert(b + shift);
      }
      out.push_back(half_gap(tracker.max_gap()));
    }
    return out;
  }

  std::vector<phase::Phase> sorted;
  sorted.reserve(base.size() * n_max);
  std::uint64_t done = 0;
  for (std::uint64_t n : schedule) {
    const std::size_t mid = sorted.size();
    for (; done < n; ++done) {
      const phase::Phase shift = done * alpha;
      for (phase::Phase b : base) sorted.push_back(b + shift);
    }
    std::sort(sorted.begin() + mid, sorted.end());
    std::inplace_merge(sorted.begin(), sorted.begin() + mid, sorted.end());
    out.push_back(half_gap(phase::max_gap_sorted(sorted)));
  }
  return out;
}

DensityProfile qd_profile(const Rotation& t, const PointSet& a, const std::vector<std::uint64_t>& schedule,
                          std::size_t size_cap) {
  require_circle(a, "qd_profile");
  check_schedule(schedule);
  if (a.empty()) raise(Errc::EmptySet, "qd_profile of an empty set");
  DensityProfile profile = make_profile(t.describe(), std::to_string(a.size()) + " points");

  if (a.is_exact() && t.alpha().is_exact()) {
    const Rational& alpha = t.alpha().rational();
    const Integer period = alpha.get_den();
    std::set<Rational> s;
    std::vector<Rational> frontier(a.exact_coords().begin(), a.exact_coords().end());
    Integer done = 0;
    for (std::uint64_t n : schedule) {
      Integer target(std::to_string(n));
      if (target > period) target = period;
      check_size(a.size(), target.get_ui(), size_cap);
      for (; done < target; ++done) {
        for (auto& y : frontier) {
          s.insert(y);
          y = frac(Rational(y + alpha));
        }
      }
      const Rational gap = exact_circle_gap(s);
      profile.records.push_back({n, Scalar(gap), Scalar(Rational(gap * Integer(std::to_string(n))))});
    }
    return profile;
  }

  const auto gaps = phase_orbit_gaps(phase::from_scalar(t.alpha()), phases_of(a), schedule, size_cap);
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const double n = static_cast<double>(schedule[i]);
    profile.records.push_back({schedule[i], Scalar(gaps[i]), Scalar(n * gaps[i])});
  }
  return profile;
}

std::vector<phase::Wide> orbit_gap_lengths(phase::Phase alpha, std::uint64_t n) {
  if (n < 1) raise(Errc::InvalidArgument, "orbit needs n >= 1");
  std::vector<phase::Phase> pts(n);
  for (std::uint64_t k = 0; k < n; ++k) pts[k] = k * alpha;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<phase::Wide> lengths;
  lengths.push_back(phase::Wide(pts.front()) + phase::kFullTurn - phase::Wide(pts.back()));
  for (std::size_t i = 1; i < pts.size(); ++i) lengths.push_back(pts[i] - pts[i - 1]);
  std::sort(lengths.begin(), lengths.end());
  lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
  return lengths;
}

namespace {

// sign(u + v sqrt(d)) for integers.
int quad_sign(const Integer& u, const Integer& v, const Integer& d) {
  const int su = sgn(u), sv = sgn(v);
  if (sv == 0) return su;
  if (su == 0 || su == sv) return sv;
  return cmp(Integer(u * u), Integer(v * v * d)) > 0 ? su : sv;
}

}  // namespace

QuadraticNumber orbit_gap_exact(const QuadraticNumber& alpha, std::uint64_t n) {
  if (n < 1) raise(Errc::InvalidArgument, "orbit needs n >= 1");
  const Integer& d = alpha.d();
  const Integer c = lcm(Integer(alpha.a().get_den()), Integer(alpha.b().get_den()));
  const Integer a = alpha.a().get_num() * (c / alpha.a().get_den());
  const Integer b = alpha.b().get_num() * (c / alpha.b().get_den());

  // Point i is (u_i + v_i sqrt(d)) / c with value frac(i alpha).
  struct Pt {
    Integer u, v;
  };
  std::vector<Pt> pts;
  pts.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const Integer ii(std::to_string(i));
    const Integer f = (Rational(ii) * alpha).floor();
    pts.push_back({ii * a - f * c, ii * b});
  }
  std::sort(pts.begin(), pts.end(), [&](const Pt& x, const Pt& y) {
    return quad_sign(Integer(x.u - y.u), Integer(x.v - y.v), d) < 0;
  });
  Integer best_u = pts.front().u + c - pts.back().u;
  Integer best_v = pts.front().v - pts.back().v;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    Integer gu = pts[i].u - pts[i - 1].u;
    Integer gv = pts[i].v - pts[i - 1].v;
    if (quad_sign(Integer(gu - best_u), Integer(gv - best_v), d) > 0) {
      best_u = std::move(gu);
      best_v = std::move(gv);
    }
  }
  return QuadraticNumber(Rational(best_u, 2 * c), Rational(best_v, 2 * c), d);
}

phase::Phase phase_of(const QuadraticNumber& x) {
  const QuadraticNumber scaled =
      Rational(Integer(1) << 64) * x.frac() + QuadraticNumber(Rational(1, 2), x.d());
  Integer r = scaled.floor();
  mpz_fdiv_r_2exp(r.get_mpz_t(), r.get_mpz_t(), 64);
  phase::Phase out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, r.get_mpz_t());
  return out;
}

// ---------------------------------------------------------------- dilation

PointSet dilate(const PointSet& a, std::uint64_t m) {
  require_circle(a, "dilate");
  if (m < 1) raise(Errc::InvalidArgument, "dilation factor must be positive");
  if (a.is_exact()) {
    const Rational factor(Integer(std::to_string(m)));
    std::vector<Rational> out;
    out.reserve(a.size());
    for (const auto& x : a.exact_coords()) out.push_back(frac(Rational(factor * x)));
    return PointSet::exact(Space::circle(), std::move(out)).deduplicate();
  }
  std::vector<phase::Phase> p = phases_of(a);
  for (auto& x : p) x *= m;
  return float_set_from_phases(std::move(p));
}

namespace {

// success[m-1] and gap per m over [first, last].
struct DilationScan {
  std::vector<bool> success;
  std::vector<Scalar> gap;
};

DilationScan scan_dilations(const PointSet& a, const Scalar& eps, std::uint64_t first, std::uint64_t last,
                            int workers) {
  const std::size_t count = last - first + 1;
  DilationScan scan;
  scan.success.assign(count, false);
  scan.gap.assign(count, Scalar());
  std::vector<char> ok(count, 0);
  if (a.is_exact()) {
    std::vector<Rational> gaps(count);
    parallel_for(count, workers, [&](std::size_t i) {
      const Scalar g = circle_gap(dilate(a, first + i));
      gaps[i] = g.rational();
      ok[i] = g < eps;
    });
    for (std::size_t i = 0; i < count; ++i) scan.gap[i] = Scalar(gaps[i]);
  } else {
    const std::vector<phase::Phase> base = phases_of(a);
    const phase::Wide threshold = gap_threshold(eps);
    std::vector<phase::Wide> gaps(count);
    parallel_for(count, workers, [&](std::size_t i) {
      std::vector<phase::Phase> p(base);
      const std::uint64_t m = first + i;
      for (auto& x : p) x *= m;
      std::sort(p.begin(), p.end());
      gaps[i] = phase::max_gap_sorted(p);
      ok[i] = gaps[i] < threshold;
    });
    for (std::size_t i = 0; i < count; ++i) scan.gap[i] = Scalar(half_gap(gaps[i]));
  }
  for (std::size_t i = 0; i < count; ++i) scan.success[i] = ok[i] != 0;
  return scan;
}

void check_dilation_args(const PointSet& a, const Scalar& eps, std::uint64_t n_max) {
  require_circle(a, "dilation search");
  if (a.empty()) raise(Errc::EmptySet, "dilation search on an empty set");
  if (!(eps > Scalar(Rational(0)))) raise(Errc::InvalidArgument, "eps must be positive");
  if (n_max < 1) raise(Errc::InvalidArgument, "n_max must be positive");
}

constexpr std::uint64_t kDilationBlock = 1024;

}  // namespace

DilationResult glasner_min_dilation(const PointSet& a, const Scalar& eps, std::uint64_t n_max, int workers) {
  check_dilation_args(a, eps, n_max);
  DilationResult result;
  bool have_best = false;
  for (std::uint64_t first = 1; first <= n_max; first += kDilationBlock) {
    const std::uint64_t last = std::min(n_max, first + kDilationBlock - 1);
    const DilationScan scan = scan_dilations(a, eps, first, last, workers);
    for (std::size_t i = 0; i < scan.gap.size(); ++i) {
      const std::uint64_t m = first + i;
      if (!have_best || scan.gap[i] < result.best_gap) {
        result.best_gap = scan.gap[i];
        result.best_m = m;
        have_best = true;
      }
      if (scan.success[i]) {
        result.m = m;
        return result;
      }
    }
  }
  return result;
}

double dilation_density_fraction(const PointSet& a, const Scalar& eps, std::uint64_t n_max, int workers) {
  check_dilation_args(a, eps, n_max);
  std::uint64_t hits = 0;
  for (std::uint64_t first = 1; first <= n_max; first += kDilationBlock) {
    const std::uint64_t last = std::min(n_max, first + kDilationBlock - 1);
    const DilationScan scan = scan_dilations(a, eps, first, last, workers);
    hits += std::count(scan.success.begin(), scan.success.end(), true);
  }
  return static_cast<double>(hits) / static_cast<double>(n_max);
}

bool preimage_identity_check(const PointSet& x, std::uint64_t n) {
  require_circle(x, "preimage_identity_check");
  if (!x.is_exact()) raise(Errc::RequiresExact, "preimage identity needs exact rational points");
  if (n < 1) raise(Errc::InvalidArgument, "n must be positive");
  const Rational nn(Integer(std::to_string(n)));
  std::set<Rational> image;
  for (const auto& v : x.exact_coords()) image.insert(frac(Rational(nn * v)));
  std::set<Rational> preimage;
  for (const auto& y : image) {
    for (std::uint64_t k = 0; k < n; ++k) preimage.insert(Rational((y + Integer(std::to_string(k))) / nn));
  }
  std::set<Rational> rotated;
  for (const auto& v : x.exact_coords()) {
    for (std::uint64_t k = 0; k < n; ++k) rotated.insert(frac(Rational(v + Rational(Integer(std::to_string(k))) / nn)));
  }
  return preimage == rotated;
}

// ---------------------------------------------------------- counterexample

GrowthRule GrowthRule::square() {
  return {"square: q_next >= q_prev^2",
          [](const Integer& prev, const Integer& next) { return next >= prev * prev; },
          [](const Integer& prev) { return 2 * log_of(prev); }};
}

GrowthRule GrowthRule::triple_exp() {
  auto threshold = [](const Integer& prev) {
    if (prev > 64) return std::numeric_limits<long double>::infinity();
    return std::exp(std::exp(static_cast<long double>(prev.get_d())));
  };
  return {"triple-exp: log log log q_next >= q_prev",
          [threshold](const Integer& prev, const Integer& next) { return log_of(next) >= threshold(prev); },
          threshold};
}

PointSet CounterexampleSet::points() const {
  std::vector<double> flat;
  for (const auto& x : distances) flat.push_back(x.to_double());
  flat.push_back(0.0);
  return PointSet::floating(Space::circle(), std::move(flat));
}

std::string CounterexampleSet::to_csv() const {
  std::string out = "k,q,a,b,d\n";
  for (std::size_t i = 0; i < indices.size(); ++i) {
    out += std::to_string(indices[i]) + "," + q[i].get_str() + "," + distances[i].str() + "\n";
  }
  return out;
}

CounterexampleSet build_counterexample(const QuadraticNumber& alpha, const GrowthRule& rule, int depth,
                                       int max_index) {
  if (alpha.is_rational()) raise(Errc::InvalidArgument, "counterexample needs an irrational alpha");
  if (depth < 1) raise(Errc::InvalidArgument, "depth must be at least 1");
  if (max_index < 1) raise(Errc::InvalidArgument, "max_index must be positive");
  const ContinuedFraction cf = expand(alpha, max_index);

  std::vector<Integer> ps, qs;
  {
    Integer p_prev = 1, q_prev = 0, p = cf.a0, q = 1;
    ps.push_back(p);
    qs.push_back(q);
    for (std::size_t k = 1; k <= cf.depth(); ++k) {
      Integer pn = cf.at(k) * p + p_prev, qn = cf.at(k) * q + q_prev;
      p_prev = p;
      q_prev = q;
      p = pn;
      q = qn;
      ps.push_back(p);
      qs.push_back(q);
    }
  }
  const long double log_q_max = log_of(qs.back());

  CounterexampleSet set{alpha, {}, {}, {}, rule.name};
  int idx = 0;
  while (static_cast<int>(set.indices.size()) < depth) {
    if (!set.indices.empty()) {
      const long double need = rule.log_threshold(set.q.back());
      if (!std::isfinite(need) || need > log_q_max) {
        raise(Errc::DepthUnreachable, "rule '" + rule.name + "' needs log q >= " + std::to_string(static_cast<double>(need)) +
                                          " after q = " + set.q.back().get_str() + "; convergents stop at index " +
                                          std::to_string(max_index));
      }
    }
    bool placed = false;
    for (; idx <= max_index; ++idx) {
      if (!set.indices.empty() && !rule.admits(set.q.back(), qs[idx])) continue;
      QuadraticNumber x = Rational(qs[idx]) * alpha - QuadraticNumber(Rational(ps[idx]), alpha.d());
      if (x.sign() < 0) x = x + QuadraticNumber(Rational(1), alpha.d());
      if (x.sign() <= 0) continue;
      if (!set.distances.empty() && !(x < set.distances.back())) continue;
      set.indices.push_back(idx);
      set.q.push_back(qs[idx]);
      set.distances.push_back(x);
      ++idx;
      placed = true;
      break;
    }
    if (!placed) {
      raise(Errc::DepthUnreachable, "no admissible convergent up to index " + std::to_string(max_index) +
                                        " for depth " + std::to_string(set.indices.size() + 1));
    }
  }
  return set;
}

DensityProfile counterexample_profile(const CounterexampleSet& set, const std::vector<std::uint64_t>& schedule) {
  std::vector<phase::Phase> base;
  for (const auto& x : set.distances) base.push_back(phase_of(x));
  base.push_back(0);
  const auto gaps = phase_orbit_gaps(phase_of(set.alpha), base, schedule);
  DensityProfile profile = make_profile("rotation alpha=" + set.alpha.str(), "counterexample (" + set.growth_rule + ")");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    profile.records.push_back({schedule[i], Scalar(gaps[i]), Scalar(static_cast<double>(schedule[i]) * gaps[i])});
  }
  return profile;
}

// ------------------------------------------------------------------ pairs

DensityProfile qd_pair_profile(const Rotation& t, const PointSet& a1, const PointSet& a2,
                               const std::vector<std::uint64_t>& schedule, std::size_t size_cap) {
  require_circle(a1, "qd_pair_profile");
  require_circle(a2, "qd_pair_profile");
  check_schedule(schedule);
  if (a1.empty()) raise(Errc::EmptySet, "qd_pair_profile needs a nonempty covering set");
  DensityProfile profile = make_profile(t.describe(), std::to_string(a1.size()) + " vs " + std::to_string(a2.size()) + " points");

  if (a1.is_exact() && a2.is_exact() && t.alpha().is_exact()) {
    for (std::uint64_t n : schedule) {
      const Scalar g = semimetric_gap(orbit_union(t, a1, n, size_cap), orbit_union(t, a2, n, size_cap));
      profile.records.push_back({n, g, Scalar(Rational(g.rational() * Integer(std::to_string(n))))});
    }
    return profile;
  }

  const phase::Phase alpha = phase::from_scalar(t.alpha());
  const auto b1 = phases_of(a1);
  const auto b2 = phases_of(a2);
  if (!schedule.empty()) {
    check_size(std::max(b1.size(), b2.size()), schedule.back(), size_cap);
  }
  std::vector<phase::Phase> u1, u2;
  std::uint64_t done = 0;
  for (std::uint64_t n : schedule) {
    const std::size_t mid = u1.size();
    for (; done < n; ++done) {
      const phase::Phase shift = done * alpha;
      for (phase::Phase b : b1) u1.push_back(b + shift);
      for (phase::Phase b : b2) u2.push_back(b + shift);
    }
    std::sort(u1.begin() + mid, u1.end());
    std::inplace_merge(u1.begin(), u1.begin() + mid, u1.end());
    phase::Phase worst = 0;
    for (phase::Phase y : u2) {
      auto it = std::lower_bound(u1.begin(), u1.end(), y);
      const phase::Phase hi = it == u1.end() ? u1.front() : *it;
      const phase::Phase lo = it == u1.begin() ? u1.back() : *std::prev(it);
      worst = std::max(worst, std::min(phase::arc_distance(hi, y), phase::arc_distance(lo, y)));
    }
    const double g = phase::length(worst);
    profile.records.push_back({n, Scalar(g), Scalar(static_cast<double>(n) * g)});
  }
  return profile;
}

}  // namespace odl
