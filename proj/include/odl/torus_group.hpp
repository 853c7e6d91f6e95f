#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "odl/geometry.hpp"
#include "odl/phase.hpp"
#include "odl/rng.hpp"

namespace odl {

/// Square integer matrix with exact entries, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(int n, std::vector<Integer> entries);
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(int n);
  /// E_ij(s): identity plus s at (i, j), i != j.
  static IntMatrix elementary(int n, int i, int j, long s);
  /// Companion matrix of x^n + c[n-1] x^{n-1} + ... + c[0].
  static IntMatrix companion(const std::vector<long>& c);

  int dim() const { return n_; }
  const Integer& operator()(int i, int j) const { return e_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<Integer>& entries() const { return e_; }

  Integer det() const;
  bool is_sl() const { return det() == 1; }
  /// Inverse of a unimodular matrix; throws InvalidArgument otherwise.
  IntMatrix inverse() const;
  /// Negative exponents use the inverse.
  IntMatrix pow(long e) const;
  Integer max_abs_entry() const;
  /// Entries reduced mod 2^64 for the phase action.
  std::vector<phase::Phase> phase_entries() const;
  std::vector<double> to_double() const;

  /// Canonical key for deduplication.
  std::string key() const;
  /// Row-major integers separated by spaces.
  std::string str() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) { return a.n_ == b.n_ && a.e_ == b.e_; }

 private:
  int n_ = 0;
  std::vector<Integer> e_;
};

/// S, T and inverses for n = 2; E_ij(+1), E_ij(-1) for n >= 3.
std::vector<IntMatrix> default_generators(int n);

/// gamma x mod Z^n; exact on rational points, exact on phases for floats.
Point act(const IntMatrix& gamma, const Point& x);
PointSet act(const IntMatrix& gamma, const PointSet& a);
/// gamma acting on flat phase coordinates.
std::vector<phase::Phase> act_phases(const IntMatrix& gamma, std::span<const phase::Phase> flat);

struct GroupBall {
  std::vector<IntMatrix> generators;
  int radius = 0;
  std::vector<IntMatrix> elements;  // BFS order, identity first
  std::vector<int> word_length;
  /// Budget stopped the enumeration before radius was completed.
  bool truncated = false;
  /// Elements whose max |entry| exceeds entry_cap (kept, counted).
  std::size_t large_entries = 0;

  std::size_t size() const { return elements.size(); }
  /// One matrix per line, row-major integers.
  std::string to_text() const;
};

inline constexpr std::size_t kDefaultBallBudget = 1'000'000;

GroupBall enumerate_ball(const std::vector<IntMatrix>& generators, int radius,
                         std::size_t budget = kDefaultBallBudget, const Integer& entry_cap = Integer(1) << 40);

struct SearchResult {
  bool found = false;
  std::size_t index = 0;  // ball index of the first success, or of the best element
  int word_length = 0;
  IntMatrix gamma;
  Scalar gap;
  std::size_t checked = 0;
};

/// First ball element (BFS order) whose image of A has grid gap < eps; the
/// best element seen when none qualifies.
SearchResult search_eps_dense(const PointSet& a, const Scalar& eps, const GroupBall& ball, int resolution,
                              Metric metric = Metric::TorusLInf, int workers = 1);

/// CSV `k,eps,radius,found,word_length,gap`.
std::string search_csv_row(std::size_t k, const Scalar& eps, int radius, const SearchResult& r);

/// Least q >= 1 with q (x - y) in Z^n.
std::optional<Integer> rational_difference_order(const Point& x, const Point& y);

struct PairStats {
  std::size_t k = 0;
  int dim = 0;
  std::vector<std::uint64_t> h;  // h[m-1] = h_m
  std::vector<std::uint64_t> H;  // H[m-1] = h_1 + ... + h_m

  std::uint64_t h_at(std::size_t m) const { return h.at(m - 1); }
  std::uint64_t H_at(std::size_t m) const { return H.at(m - 1); }
  /// H_m <= k m^{n+1} for every computed m.
  bool bound_holds() const;
};

PairStats pair_stats(const PointSet& a, std::size_t m_max);

struct WalkReport {
  std::size_t orbit_size = 0;
  Integer denominator;
  std::uint64_t steps = 0;
  double tv = 0;
  /// TV at each requested checkpoint (Cesaro horizon).
  std::vector<std::pair<std::uint64_t, double>> tv_at;
  /// Visits per orbit element, orbit listed in closure order.
  std::vector<std::vector<std::int64_t>> orbit;
  std::vector<std::uint64_t> visits;
};

/// Cesaro average of the walk y_k = g_k^{-1} y_{k-1}, g_k drawn from
/// `generators` with probabilities proportional to `weights`, against the
/// uniform measure on the exact orbit of x.
WalkReport walk_equidistribution(const Point& x, const std::vector<IntMatrix>& generators,
                                 const std::vector<double>& weights, std::uint64_t steps, Rng& rng,
                                 const std::vector<std::uint64_t>& checkpoints = {});

/// Exact orbit of the residue vector v mod q under the generators.
std::vector<std::vector<std::int64_t>> orbit_closure(const std::vector<std::int64_t>& v, std::int64_t q,
                                                     const std::vector<IntMatrix>& generators);

struct AbelianAction {
  int dim = 0;
  std::vector<IntMatrix> gens;
  /// lambda[i][j]: eigenvalue of gens[j] on common eigenvector i.
  std::vector<std::vector<std::complex<double>>> lambda;
  /// chi[i][j] = log |lambda[i][j]|.
  std::vector<std::vector<double>> chi;
  /// Unit common eigenvectors (real parts for real eigenvalues).
  std::vector<std::vector<std::complex<double>>> eigenvectors;
  bool general_position = false;

  std::size_t rank() const { return gens.size(); }
  double chi_at(std::size_t i, const std::vector<std::int64_t>& n) const;
  IntMatrix element(const std::vector<std::int64_t>& n) const;
};

inline constexpr double kLyapunovTolerance = 1e-9;

AbelianAction lyapunov_data(const std::vector<IntMatrix>& gens);

/// Nonzero n in the box with |chi_i(n)| <= eps, scanning by increasing
/// |n|_inf, then |n|_1, then descending lexicographic order.
std::optional<std::vector<std::int64_t>> chi_density_search(const AbelianAction& action, std::size_t chi_index,
                                                            double eps, int box_radius);

/// Box vectors in search order (zero excluded).
std::vector<std::vector<std::int64_t>> box_order(std::size_t rank, int box_radius);

/// Points x0 + p_j v mod Z^n along one leaf direction v.
struct LeafSet {
  std::vector<double> x0;
  std::vector<double> v;
  std::vector<double> params;

  PointSet points() const;
};

struct SubordinateResult {
  std::optional<std::vector<std::int64_t>> n;
  std::vector<std::int64_t> best_n;
  double best_gap = 1;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // elements over the entry cap
};

/// n = 0 first, then box_order; the first n with grid gap of alpha(n) A below eps.
SubordinateResult subordinate_search_eps_dense(const AbelianAction& action, std::size_t chi_index,
                                               const LeafSet& leaf, double eps, int box_radius, int resolution,
                                               const Integer& entry_cap = Integer(1) << 40);

}  // namespace odl
