#include "odl/torus_group.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "odl/error.hpp"
#include "odl/parallel.hpp"

namespace odl {

namespace {

Rational frac(const Rational& x) { return x - Rational(floor_of(x)); }

phase::Phase wrap64(const Integer& x) {
  Integer r;
  mpz_fdiv_r_2exp(r.get_mpz_t(), x.get_mpz_t(), 64);
  phase::Phase out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, r.get_mpz_t());
  return out;
}

void check_same_dim(const IntMatrix& a, const IntMatrix& b) {
  if (a.dim() != b.dim()) raise(Errc::DimensionMismatch, "matrix dimensions differ");
}

Eigen::MatrixXd to_eigen(const IntMatrix& m) {
  const int n = m.dim();
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = m(i, j).get_d();
  }
  return out;
}

}  // namespace

// -------------------------------------------------------------- IntMatrix

IntMatrix::IntMatrix(int n, std::vector<Integer> entries) : n_(n), e_(std::move(entries)) {
  if (n < 1 || e_.size() != static_cast<std::size_t>(n) * n) {
    raise(Errc::DimensionMismatch, "matrix needs n*n entries");
  }
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  n_ = static_cast<int>(rows.size());
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n_) raise(Errc::DimensionMismatch, "matrix must be square");
    for (long v : row) e_.emplace_back(v);
  }
  if (n_ < 1) raise(Errc::DimensionMismatch, "empty matrix");
}

IntMatrix IntMatrix::identity(int n) {
  std::vector<Integer> e(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i) * n + i] = 1;
  return IntMatrix(n, std::move(e));
}

IntMatrix IntMatrix::elementary(int n, int i, int j, long s) {
  if (i == j || i < 0 || j < 0 || i >= n || j >= n) raise(Errc::InvalidArgument, "elementary needs i != j in range");
  IntMatrix m = identity(n);
  m.e_[static_cast<std::size_t>(i) * n + j] = s;
  return m;
}

IntMatrix IntMatrix::companion(const std::vector<long>& c) {
  const int n = static_cast<int>(c.size());
  std::vector<Integer> e(static_cast<std::size_t>(n) * n, 0);
  for (int i = 1; i < n; ++i) e[static_cast<std::size_t>(i) * n + (i - 1)] = 1;
  for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i) * n + (n - 1)] = -c[i];
  return IntMatrix(n, std::move(e));
}

Integer IntMatrix::det() const {
  // Bareiss fraction-free elimination.
  std::vector<Integer> a = e_;
  const int n = n_;
  auto at = [&](int i, int j) -> Integer& { return a[static_cast<std::size_t>(i) * n + j]; };
  Integer prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (at(k, k) == 0) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i) {
        if (at(i, k) != 0) {
          swap = i;
          break;
        }
      }
      if (swap < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(swap, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
      }
    }
    prev = at(k, k);
  }
  return sign * at(n - 1, n - 1);
}

IntMatrix IntMatrix::inverse() const {
  const int n = n_;
  std::vector<Rational> a(static_cast<std::size_t>(n) * 2 * n, 0);
  auto at = [&](int i, int j) -> Rational& { return a[static_cast<std::size_t>(i) * 2 * n + j]; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) at(i, j) = (*this)(i, j);
    at(i, n + i) = 1;
  }
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i) {
      if (at(i, c) != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) raise(Errc::InvalidArgument, "singular matrix");
    if (piv != c) {
      for (int j = 0; j < 2 * n; ++j) std::swap(at(c, j), at(piv, j));
    }
    const Rational inv = 1 / at(c, c);
    for (int j = 0; j < 2 * n; ++j) at(c, j) *= inv;
    for (int i = 0; i < n; ++i) {
      if (i == c || at(i, c) == 0) continue;
      const Rational f = at(i, c);
      for (int j = 0; j < 2 * n; ++j) at(i, j) -= f * at(c, j);
    }
  }
  std::vector<Integer> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      at(i, n + j).canonicalize();
      if (at(i, n + j).get_den() != 1) raise(Errc::InvalidArgument, "matrix is not unimodular");
      out.push_back(at(i, n + j).get_num());
    }
  }
  return IntMatrix(n, std::move(out));
}

IntMatrix IntMatrix::pow(long e) const {
  IntMatrix base = e < 0 ? inverse() : *this;
  unsigned long k = e < 0 ? static_cast<unsigned long>(-(e + 1)) + 1 : static_cast<unsigned long>(e);
  IntMatrix result = identity(n_);
  while (k) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

Integer IntMatrix::max_abs_entry() const {
  Integer best = 0;
  for (const auto& v : e_) {
    if (::abs(v) > best) best = ::abs(v);
  }
  return best;
}

std::vector<phase::Phase> IntMatrix::phase_entries() const {
  std::vector<phase::Phase> out;
  out.reserve(e_.size());
  for (const auto& v : e_) out.push_back(wrap64(v));
  return out;
}

std::vector<double> IntMatrix::to_double() const {
  std::vector<double> out;
  for (const auto& v : e_) out.push_back(v.get_d());
  return out;
}

std::string IntMatrix::key() const {
  std::string out = std::to_string(n_) + ":";
  for (const auto& v : e_) {
    out += v.get_str(16);
    out += ',';
  }
  return out;
}

std::string IntMatrix::str() const {
  std::string out;
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (i) out += ' ';
    out += e_[i].get_str();
  }
  return out;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  check_same_dim(a, b);
  const int n = a.n_;
  std::vector<Integer> e(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const Integer& aik = a(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < n; ++j) e[static_cast<std::size_t>(i) * n + j] += aik * b(k, j);
    }
  }
  return IntMatrix(n, std::move(e));
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  check_same_dim(a, b);
  std::vector<Integer> e(a.e_.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = a.e_[i] - b.e_[i];
  return IntMatrix(a.n_, std::move(e));
}

std::vector<IntMatrix> default_generators(int n) {
  if (n < 2) raise(Errc::InvalidArgument, "SL(n,Z) generators need n >= 2");
  if (n == 2) {
    const IntMatrix s{{0, -1}, {1, 0}};
    const IntMatrix t{{1, 1}, {0, 1}};
    return {s, t, s.inverse(), t.inverse()};
  }
  std::vector<IntMatrix> out;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      out.push_back(IntMatrix::elementary(n, i, j, 1));
      out.push_back(IntMatrix::elementary(n, i, j, -1));
    }
  }
  return out;
}

// ------------------------------------------------------------------ action

std::vector<phase::Phase> act_phases(const IntMatrix& gamma, std::span<const phase::Phase> flat) {
  const int n = gamma.dim();
  if (flat.size() % n != 0) raise(Errc::DimensionMismatch, "phase vector does not match matrix dimension");
  const std::vector<phase::Phase> g = gamma.phase_entries();
  std::vector<phase::Phase> out(flat.size());
  for (std::size_t p = 0; p < flat.size(); p += n) {
    for (int i = 0; i < n; ++i) {
      phase::Phase s = 0;
      for (int j = 0; j < n; ++j) s += g[static_cast<std::size_t>(i) * n + j] * flat[p + j];
      out[p + i] = s;
    }
  }
  return out;
}

Point act(const IntMatrix& gamma, const Point& x) {
  if (x.dim() != gamma.dim() || !x.space().is_periodic()) {
    raise(Errc::DimensionMismatch, "matrix of size " + std::to_string(gamma.dim()) + " acting on " + x.space().name());
  }
  const int n = gamma.dim();
  if (x.is_exact()) {
    const auto& c = x.exact_coords();
    std::vector<Rational> out(n);
    for (int i = 0; i < n; ++i) {
      Rational s = 0;
      for (int j = 0; j < n; ++j) s += gamma(i, j) * c[j];
      out[i] = frac(s);
    }
    return Point(x.space(), std::move(out));
  }
  std::vector<phase::Phase> p;
  for (double v : x.float_coords()) p.push_back(phase::from_double(v));
  const auto q = act_phases(gamma, p);
  std::vector<double> out;
  for (auto v : q) out.push_back(phase::to_double(v));
  return Point(x.space(), std::move(out));
}

PointSet act(const IntMatrix& gamma, const PointSet& a) {
  if (a.dim() != gamma.dim() || !a.space().is_periodic()) raise(Errc::DimensionMismatch, "matrix/set dimension mismatch");
  std::vector<Point> pts;
  pts.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) pts.push_back(act(gamma, a.point(i)));
  return PointSet::from_points(a.space(), pts);
}

// -------------------------------------------------------------------- ball

std::string GroupBall::to_text() const {
  std::string out;
  for (const auto& m : elements) out += m.str() + "\n";
  return out;
}

GroupBall enumerate_ball(const std::vector<IntMatrix>& generators, int radius, std::size_t budget,
                         const Integer& entry_cap) {
  if (generators.empty()) raise(Errc::InvalidArgument, "ball needs at least one generator");
  if (radius < 0) raise(Errc::InvalidArgument, "radius must be nonnegative");
  if (budget < 1) raise(Errc::InvalidArgument, "budget must be positive");
  const int n = generators.front().dim();
  for (const auto& g : generators) {
    if (g.dim() != n) raise(Errc::DimensionMismatch, "generators of different sizes");
    if (!g.is_sl()) raise(Errc::InvalidArgument, "generator has determinant " + g.det().get_str());
  }
  GroupBall ball;
  ball.generators = generators;
  ball.radius = radius;
  ball.elements.push_back(IntMatrix::identity(n));
  ball.word_length.push_back(0);
  std::unordered_set<std::string> seen{ball.elements.front().key()};
  std::vector<std::size_t> frontier{0};
  for (int r = 1; r <= radius; ++r) {
    std::vector<std::size_t> next;
    for (std::size_t idx : frontier) {
      for (const auto& g : generators) {
        IntMatrix m = ball.elements[idx] * g;
        if (!seen.insert(m.key()).second) continue;
        if (ball.elements.size() >= budget) {
          ball.truncated = true;
          return ball;
        }
        if (m.max_abs_entry() > entry_cap) ++ball.large_entries;
        next.push_back(ball.elements.size());
        ball.elements.push_back(std::move(m));
        ball.word_length.push_back(r);
      }
    }
    frontier = std::move(next);
  }
  return ball;
}

SearchResult search_eps_dense(const PointSet& a, const Scalar& eps, const GroupBall& ball, int resolution,
                              Metric metric, int workers) {
  if (a.empty()) raise(Errc::EmptySet, "search on an empty set");
  if (!(eps > Scalar(Rational(0)))) raise(Errc::InvalidArgument, "eps must be positive");
  if (ball.elements.empty()) raise(Errc::InvalidArgument, "empty ball");
  if (a.dim() != ball.elements.front().dim()) raise(Errc::DimensionMismatch, "ball and set dimensions differ");
  std::vector<phase::Phase> base;
  {
    const PointSet f = a.to_float();
    for (double v : f.float_coords()) base.push_back(phase::from_double(v));
  }
  const int dim = a.dim();
  SearchResult result;
  bool have_best = false;
  constexpr std::size_t kBlock = 64;
  for (std::size_t first = 0; first < ball.size(); first += kBlock) {
    const std::size_t count = std::min(kBlock, ball.size() - first);
    std::vector<double> gaps(count);
    parallel_for(count, workers, [&](std::size_t i) {
      const auto img = act_phases(ball.elements[first + i], base);
      gaps[i] = torus_gap_grid_phases(img, dim, resolution, metric);
    });
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t idx = first + i;
      ++result.checked;
      const Scalar g(gaps[i]);
      if (!have_best || g < result.gap) {
        have_best = true;
        result.gap = g;
        result.index = idx;
      }
      if (g < eps) {
        result.found = true;
        result.index = idx;
        result.gap = g;
        result.word_length = ball.word_length[idx];
        result.gamma = ball.elements[idx];
        return result;
      }
    }
  }
  result.word_length = ball.word_length[result.index];
  result.gamma = ball.elements[result.index];
  return result;
}

std::string search_csv_row(std::size_t k, const Scalar& eps, int radius, const SearchResult& r) {
  return std::to_string(k) + "," + eps.str() + "," + std::to_string(radius) + "," + (r.found ? "1" : "0") + "," +
         std::to_string(r.word_length) + "," + r.gap.str();
}

// ------------------------------------------------------------ pair stats

std::optional<Integer> rational_difference_order(const Point& x, const Point& y) {
  if (!x.is_exact() || !y.is_exact()) raise(Errc::RequiresExact, "difference order needs exact points");
  if (x.space() != y.space()) raise(Errc::DimensionMismatch, "points from different spaces");
  Integer q = 1;
  for (int i = 0; i < x.dim(); ++i) {
    const Rational d = frac(Rational(x.exact_coords()[i] - y.exact_coords()[i]));
    q = lcm(q, Integer(d.get_den()));
  }
  return q;
}

bool PairStats::bound_holds() const {
  for (std::size_t m = 1; m <= H.size(); ++m) {
    const long double bound = static_cast<long double>(k) * std::pow(static_cast<long double>(m), dim + 1);
    if (static_cast<long double>(H[m - 1]) > bound) return false;
  }
  return true;
}

PairStats pair_stats(const PointSet& a, std::size_t m_max) {
  if (!a.is_exact()) raise(Errc::RequiresExact, "pair statistics need exact rational points");
  if (!a.space().is_periodic()) raise(Errc::InvalidArgument, "pair statistics live on a torus or circle");
  PairStats s;
  s.k = a.size();
  s.dim = a.dim();
  std::vector<std::uint64_t> order_count(m_max + 1, 0);
  for (std::size_t i = 0; i < s.k; ++i) {
    for (std::size_t j = 0; j < s.k; ++j) {
      const Integer q = *rational_difference_order(a.point(i), a.point(j));
      if (q <= static_cast<unsigned long>(m_max)) ++order_count[q.get_ui()];
    }
  }
  s.h.assign(m_max, 0);
  s.H.assign(m_max, 0);
  for (std::size_t q = 1; q <= m_max; ++q) {
    if (!order_count[q]) continue;
    for (std::size_t m = q; m <= m_max; m += q) s.h[m - 1] += order_count[q];
  }
  std::uint64_t run = 0;
  for (std::size_t m = 0; m < m_max; ++m) {
    run += s.h[m];
    s.H[m] = run;
  }
  return s;
}

// ------------------------------------------------------------------- walks

namespace {

using Vec = std::vector<std::int64_t>;

struct ModMatrix {
  int n;
  std::vector<std::int64_t> e;
};

ModMatrix reduce(const IntMatrix& m, std::int64_t q) {
  ModMatrix out{m.dim(), {}};
  for (const auto& v : m.entries()) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), Integer(q).get_mpz_t());
    out.e.push_back(r.get_si());
  }
  return out;
}

void apply_mod(const ModMatrix& m, const Vec& v, Vec& out, std::int64_t q) {
  for (int i = 0; i < m.n; ++i) {
    __int128 s = 0;
    for (int j = 0; j < m.n; ++j) s += static_cast<__int128>(m.e[static_cast<std::size_t>(i) * m.n + j]) * v[j];
    out[i] = static_cast<std::int64_t>(s % q);
  }
}

std::uint64_t encode(const Vec& v, std::int64_t q) {
  std::uint64_t idx = 0;
  for (auto it = v.rbegin(); it != v.rend(); ++it) idx = idx * q + static_cast<std::uint64_t>(*it);
  return idx;
}

constexpr long double kMaxResidueSpace = 1 << 26;

}  // namespace

std::vector<Vec> orbit_closure(const Vec& v, std::int64_t q, const std::vector<IntMatrix>& generators) {
  if (q < 1) raise(Errc::InvalidArgument, "modulus must be positive");
  const int n = static_cast<int>(v.size());
  if (std::pow(static_cast<long double>(q), n) > kMaxResidueSpace) {
    raise(Errc::BudgetExceeded, "residue space " + std::to_string(q) + "^" + std::to_string(n) + " too large");
  }
  std::vector<ModMatrix> gens;
  for (const auto& g : generators) {
    if (g.dim() != n) raise(Errc::DimensionMismatch, "generator size differs from point dimension");
    gens.push_back(reduce(g, q));
  }
  std::vector<Vec> orbit{v};
  std::unordered_set<std::uint64_t> seen{encode(v, q)};
  Vec tmp(n);
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    for (const auto& g : gens) {
      apply_mod(g, orbit[i], tmp, q);
      if (seen.insert(encode(tmp, q)).second) orbit.push_back(tmp);
    }
  }
  return orbit;
}

WalkReport walk_equidistribution(const Point& x, const std::vector<IntMatrix>& generators,
                                 const std::vector<double>& weights, std::uint64_t steps, Rng& rng,
                                 const std::vector<std::uint64_t>& checkpoints) {
  if (!x.is_exact()) raise(Errc::RequiresExact, "walk equidistribution needs a rational point");
  if (generators.empty()) raise(Errc::InvalidArgument, "walk needs generators");
  if (weights.size() != generators.size()) raise(Errc::InvalidArgument, "one weight per generator required");
  for (double w : weights) {
    if (!(w > 0)) raise(Errc::InvalidArgument, "walk weights must be strictly positive");
  }
  if (steps < 1) raise(Errc::InvalidArgument, "walk needs at least one step");
  const int n = x.dim();
  Integer qi = 1;
  for (const auto& c : x.exact_coords()) qi = lcm(qi, Integer(c.get_den()));
  if (!qi.fits_slong_p()) raise(Errc::BudgetExceeded, "denominator too large");
  const std::int64_t q = qi.get_si();

  Vec start(n);
  for (int i = 0; i < n; ++i) start[i] = Integer(x.exact_coords()[i] * qi).get_si() % q;

  WalkReport report;
  report.denominator = qi;
  report.steps = steps;
  report.orbit = orbit_closure(start, q, generators);
  report.orbit_size = report.orbit.size();

  std::vector<ModMatrix> inverses;
  for (const auto& g : generators) inverses.push_back(reduce(g.inverse(), q));
  std::vector<double> cumulative(weights.size());
  std::partial_sum(weights.begin(), weights.end(), cumulative.begin());
  const double total = cumulative.back();

  std::vector<std::uint64_t> index_of;
  std::unordered_map<std::uint64_t, std::size_t> slot;
  for (std::size_t i = 0; i < report.orbit.size(); ++i) slot.emplace(encode(report.orbit[i], q), i);
  report.visits.assign(report.orbit.size(), 0);

  std::vector<std::uint64_t> marks = checkpoints;
  std::sort(marks.begin(), marks.end());
  std::size_t next_mark = 0;
  const double uniform = 1.0 / static_cast<double>(report.orbit_size);
  auto tv_now = [&](std::uint64_t t) {
    double s = 0;
    for (std::uint64_t v : report.visits) s += std::fabs(static_cast<double>(v) / static_cast<double>(t) - uniform);
    return 0.5 * s;
  };

  Vec y = start, tmp(n);
  for (std::uint64_t t = 1; t <= steps; ++t) {
    const double u = rng.uniform() * total;
    const std::size_t g = std::min<std::size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin(), generators.size() - 1);
    apply_mod(inverses[g], y, tmp, q);
    std::swap(y, tmp);
    ++report.visits[slot.at(encode(y, q))];
    while (next_mark < marks.size() && marks[next_mark] == t) {
      report.tv_at.emplace_back(t, tv_now(t));
      ++next_mark;
    }
  }
  report.tv = tv_now(steps);
  return report;
}

// --------------------------------------------------------------- lyapunov

double AbelianAction::chi_at(std::size_t i, const std::vector<std::int64_t>& n) const {
  if (n.size() != rank()) raise(Errc::DimensionMismatch, "frequency vector does not match rank");
  double s = 0;
  for (std::size_t j = 0; j < n.size(); ++j) s += chi.at(i)[j] * static_cast<double>(n[j]);
  return s;
}

IntMatrix AbelianAction::element(const std::vector<std::int64_t>& n) const {
  if (n.size() != rank()) raise(Errc::DimensionMismatch, "frequency vector does not match rank");
  IntMatrix m = IntMatrix::identity(dim);
  for (std::size_t j = 0; j < n.size(); ++j) {
    if (n[j] != 0) m = m * gens[j].pow(n[j]);
  }
  return m;
}

AbelianAction lyapunov_data(const std::vector<IntMatrix>& gens) {
  if (gens.empty()) raise(Errc::InvalidArgument, "action needs at least one generator");
  const int n = gens.front().dim();
  for (const auto& g : gens) {
    if (g.dim() != n) raise(Errc::DimensionMismatch, "generators of different sizes");
    const Integer d = g.det();
    if (d != 1 && d != -1) raise(Errc::InvalidArgument, "generator is not unimodular");
  }
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      if (!(gens[i] * gens[j] == gens[j] * gens[i])) {
        raise(Errc::NotCommuting, "generators " + std::to_string(i) + " and " + std::to_string(j) + " do not commute");
      }
    }
  }
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  for (std::size_t j = 0; j < gens.size(); ++j) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(gens[j]), false);
    for (int i = 0; i < n; ++i) {
      const std::complex<double> lam = es.eigenvalues()[i];
      for (int order = 1; order <= 12; ++order) {
        for (int r = 0; r < order; ++r) {
          const std::complex<double> root = std::polar(1.0, kTwoPi * r / order);
          if (std::abs(lam - root) < kLyapunovTolerance) {
            raise(Errc::NotErgodic, "generator " + std::to_string(j) + " has an eigenvalue near a root of unity of order " +
                                        std::to_string(order));
          }
        }
      }
    }
  }

  // A generic combination separates the common eigenvectors.
  Eigen::MatrixXd combo = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t j = 0; j < gens.size(); ++j) combo += std::sqrt(2.0 + 3.0 * j) * to_eigen(gens[j]);
  Eigen::EigenSolver<Eigen::MatrixXd> es(combo, true);
  const Eigen::VectorXcd mu = es.eigenvalues();
  const double scale = std::max(1.0, mu.cwiseAbs().maxCoeff());
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (std::abs(mu[a] - mu[b]) < 1e-7 * scale) {
        raise(Errc::Unsupported, "common eigenvectors are not separated by the generic combination");
      }
    }
  }

  AbelianAction action;
  action.dim = n;
  action.gens = gens;
  struct Direction {
    std::vector<std::complex<double>> v, lambda;
    std::vector<double> chi;
  };
  std::vector<Direction> dirs;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXcd v = es.eigenvectors().col(i);
    // Fix the complex phase so the largest component is real and positive.
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    v *= std::conj(v[big]) / std::abs(v[big]);
    v.normalize();
    Direction d;
    for (int r = 0; r < n; ++r) d.v.push_back(v[r]);
    for (const auto& g : gens) {
      const Eigen::MatrixXcd gm = to_eigen(g).cast<std::complex<double>>();
      const Eigen::VectorXcd gv = gm * v;
      const std::complex<double> lam = v.dot(gv);  // v is unit
      const double residual = (gv - lam * v).norm();
      if (residual > 1e-6 * std::max(1.0, gm.norm())) {
        raise(Errc::Unsupported, "generator is not diagonal in the common eigenbasis");
      }
      d.lambda.push_back(lam);
      d.chi.push_back(std::log(std::abs(lam)));
    }
    dirs.push_back(std::move(d));
  }
  std::sort(dirs.begin(), dirs.end(), [](const Direction& a, const Direction& b) {
    for (std::size_t j = 0; j < a.chi.size(); ++j) {
      if (a.chi[j] != b.chi[j]) return a.chi[j] > b.chi[j];
    }
    return false;
  });
  for (auto& d : dirs) {
    action.eigenvectors.push_back(d.v);
    action.lambda.push_back(d.lambda);
    action.chi.push_back(d.chi);
  }

  // Nonzero, distinct, and with distinct kernels (pairwise non-proportional).
  bool general = true;
  auto norm = [](const std::vector<double>& c) {
    double s = 0;
    for (double x : c) s += x * x;
    return std::sqrt(s);
  };
  for (std::size_t a = 0; a < action.chi.size() && general; ++a) {
    if (norm(action.chi[a]) < kLyapunovTolerance) general = false;
    for (std::size_t b = a + 1; b < action.chi.size() && general; ++b) {
      const auto& x = action.chi[a];
      const auto& y = action.chi[b];
      double wedge = 0;
      for (std::size_t p = 0; p < x.size(); ++p) {
        for (std::size_t r = p + 1; r < x.size(); ++r) wedge = std::max(wedge, std::fabs(x[p] * y[r] - x[r] * y[p]));
      }
      if (wedge <= kLyapunovTolerance * std::max(1.0, norm(x) * norm(y))) general = false;
    }
  }
  action.general_position = general;
  return action;
}

std::vector<std::vector<std::int64_t>> box_order(std::size_t rank, int box_radius) {
  if (rank < 1) raise(Errc::InvalidArgument, "rank must be positive");
  if (box_radius < 0) raise(Errc::InvalidArgument, "box radius must be nonnegative");
  const long double count = std::pow(2.0L * box_radius + 1, rank);
  if (count > 1e7L) raise(Errc::BudgetExceeded, "search box too large");
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> v(rank, -box_radius);
  while (true) {
    if (std::any_of(v.begin(), v.end(), [](std::int64_t x) { return x != 0; })) out.push_back(v);
    std::size_t i = 0;
    while (i < rank && v[i] == box_radius) v[i++] = -box_radius;
    if (i == rank) break;
    ++v[i];
  }
  auto inf = [](const std::vector<std::int64_t>& x) {
    std::int64_t m = 0;
    for (auto c : x) m = std::max<std::int64_t>(m, std::llabs(c));
    return m;
  };
  auto l1 = [](const std::vector<std::int64_t>& x) {
    std::int64_t s = 0;
    for (auto c : x) s += std::llabs(c);
    return s;
  };
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    const auto ia = inf(a), ib = inf(b);
    if (ia != ib) return ia < ib;
    const auto la = l1(a), lb = l1(b);
    if (la != lb) return la < lb;
    return a > b;
  });
  return out;
}

std::optional<std::vector<std::int64_t>> chi_density_search(const AbelianAction& action, std::size_t chi_index,
                                                            double eps, int box_radius) {
  if (chi_index >= action.chi.size()) raise(Errc::InvalidArgument, "no Lyapunov functional " + std::to_string(chi_index));
  if (!(eps > 0)) raise(Errc::InvalidArgument, "eps must be positive");
  for (const auto& n : box_order(action.rank(), box_radius)) {
    if (std::fabs(action.chi_at(chi_index, n)) <= eps) return n;
  }
  return std::nullopt;
}

PointSet LeafSet::points() const {
  const std::size_t n = x0.size();
  if (v.size() != n || n == 0) raise(Errc::DimensionMismatch, "leaf base point and direction differ in size");
  std::vector<double> flat;
  flat.reserve(n * params.size());
  for (double p : params) {
    for (std::size_t i = 0; i < n; ++i) flat.push_back(x0[i] + p * v[i]);
  }
  return PointSet::floating(Space::torus(static_cast<int>(n)), std::move(flat));
}

SubordinateResult subordinate_search_eps_dense(const AbelianAction& action, std::size_t chi_index,
                                               const LeafSet& leaf, double eps, int box_radius, int resolution,
                                               const Integer& entry_cap) {
  if (chi_index >= action.chi.size()) raise(Errc::InvalidArgument, "no Lyapunov functional " + std::to_string(chi_index));
  if (static_cast<int>(leaf.v.size()) != action.dim) raise(Errc::DimensionMismatch, "leaf direction has wrong size");
  if (leaf.params.empty()) raise(Errc::EmptySet, "leaf set has no points");
  if (!(eps > 0)) raise(Errc::InvalidArgument, "eps must be positive");

  // v must be parallel to the real eigenvector of chi_index.
  const auto& e = action.eigenvectors[chi_index];
  for (const auto& lam : action.lambda[chi_index]) {
    if (std::fabs(lam.imag()) > kLyapunovTolerance) raise(Errc::LeafMismatch, "chosen exponent has a complex eigenvalue");
  }
  double dot = 0, vn = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    dot += e[i].real() * leaf.v[i];
    vn += leaf.v[i] * leaf.v[i];
  }
  vn = std::sqrt(vn);
  if (vn == 0 || std::fabs(std::fabs(dot) / vn - 1.0) > 1e-8) {
    raise(Errc::LeafMismatch, "set is not on a leaf of the chosen Lyapunov direction");
  }

  const PointSet pts = leaf.points();
  std::vector<phase::Phase> base;
  for (double x : pts.float_coords()) base.push_back(phase::from_double(x));

  SubordinateResult result;
  std::vector<std::vector<std::int64_t>> order{std::vector<std::int64_t>(action.rank(), 0)};
  for (auto& n : box_order(action.rank(), box_radius)) order.push_back(std::move(n));
  bool have_best = false;
  for (const auto& n : order) {
    const IntMatrix g = action.element(n);
    if (g.max_abs_entry() > entry_cap) {
      ++result.skipped;
      continue;
    }
    ++result.checked;
    const double gap = torus_gap_grid_phases(act_phases(g, base), action.dim, resolution, Metric::TorusLInf);
    if (!have_best || gap < result.best_gap) {
      have_best = true;
      result.best_gap = gap;
      result.best_n = n;
    }
    if (gap < eps) {
      result.n = n;
      return result;
    }
  }
  return result;
}

}  // namespace odl
