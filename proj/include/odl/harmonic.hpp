#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include "odl/rng.hpp"
#include "odl/scalar.hpp"

namespace odl {

using FrequencyVector = std::vector<std::int64_t>;

/// |m| = sum |m_i|.
std::int64_t norm1(const FrequencyVector& m);
std::int64_t norm_inf(const FrequencyVector& m);
Integer gcd_of(const FrequencyVector& m);

/// Prime factorization by trial division, primes ascending.
std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t q);

/// Coefficients of the q-th cyclotomic polynomial, constant term first.
const std::vector<std::int64_t>& cyclotomic(std::uint64_t q);

struct RamanujanValue {
  std::complex<double> value;
  Integer integer;  // the (verified real, integral) value
  bool exact = false;
};

inline constexpr std::uint64_t kExactRamanujanLimit = 1000;

/// Literal sum of e(<m,k>/q) over k in [1,q]^n with gcd(k_1..k_n, q) = 1.
/// Residue counts come from a dynamic program over (partial residue, partial
/// gcd); the sum of roots of unity is reduced modulo Phi_q when q <= 1000 and
/// summed in long double otherwise.
RamanujanValue ramanujan_bruteforce(const FrequencyVector& m, std::uint64_t q);

/// Product over p^r || q of the prime-power values selected by g = gcd(m).
Integer ramanujan_formula(const FrequencyVector& m, std::uint64_t q);

/// Brute-force values for one q, cached under sign changes and permutations
/// of m (both are bijections of the primitive residue vectors).
class RamanujanCache {
 public:
  explicit RamanujanCache(std::uint64_t q) : q_(q) {}
  Integer value(const FrequencyVector& m);

 private:
  std::uint64_t q_;
  std::map<FrequencyVector, Integer> cache_;
};

/// #{k in [1,q]^n : gcd(k, q) = 1} = q^n prod (1 - p^-n).
Integer jordan_count(int n, std::uint64_t q);
Integer jordan_count_bruteforce(int n, std::uint64_t q);

struct RamanujanReport {
  std::uint64_t checked = 0;
  std::uint64_t mismatches = 0;
  std::uint64_t bound_violations = 0;
  /// CSV `q,m...,c_brute,c_formula,bound`; empty unless rows were requested.
  std::string csv;
};

/// Every q <= q_max and nonzero m with |m_i| <= m_bound in dimension n.
RamanujanReport ramanujan_verify(std::uint64_t q_max, int n, std::int64_t m_bound, bool with_rows = false,
                                 int workers = 1);

/// Smooth bump on T^n: product of the 1-D profile exp(-1/(1-(x/a)^2)) on
/// |x| < a with a = min(eps/2, eps/sqrt(n)), so the support lies in the
/// open L2 ball of radius eps around 0. Normalized so the grid quadrature
/// of each factor is 1.
class BumpFunction {
 public:
  double eps() const { return eps_; }
  int dim() const { return n_; }
  int grid() const { return grid_; }
  double half_width() const { return a_; }
  /// Normalized 1-D samples at j / grid, j in [0, grid).
  const std::vector<double>& samples() const { return samples_; }

  double value(const std::vector<double>& x) const;
  /// Sample at grid index vector j.
  double sample(const std::vector<int>& j) const;
  /// Grid quadrature of the n-D samples.
  double integral() const;
  /// Grid quadrature of g^2.
  double l2_mass() const;
  /// Integral of the normalized profile over R^n by tanh-sinh quadrature.
  double continuous_integral() const;
  /// 1-D coefficient of one factor.
  std::complex<double> coeff_1d(std::int64_t k) const;

 private:
  friend BumpFunction build_bump(double eps, int n, int grid);
  friend std::complex<double> fourier_coeff(const BumpFunction& g, const FrequencyVector& m);

  double eps_ = 0;
  int n_ = 0;
  int grid_ = 0;
  double a_ = 0;
  double scale_ = 1;  // 1 / (grid quadrature of the raw profile)
  std::vector<double> samples_;
  std::vector<int> support_;  // grid indices with nonzero samples

  struct Cache {
    std::shared_mutex mutex;
    std::map<FrequencyVector, std::complex<double>> coeffs;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

inline constexpr int kMinSupportSamples = 32;

BumpFunction build_bump(double eps, int n, int grid);

/// Direct n-D quadrature of g(x) e(-<m,x>); memoized, safe for concurrent calls.
std::complex<double> fourier_coeff(const BumpFunction& g, const FrequencyVector& m);

struct DecayRow {
  std::int64_t norm = 0;
  double abs_coeff = 0;     // max |g^(m)| over |m| = norm
  double decay_ratio = 0;   // abs_coeff * exp(sqrt(eps * norm))
};

/// Rows for |m| = 0..m_max. The n-D maxima use products of 1-D coefficients.
std::vector<DecayRow> bump_decay(const BumpFunction& g, std::int64_t m_max);
/// CSV `m_norm,abs_coeff,decay_ratio`.
std::string decay_csv(const std::vector<DecayRow>& rows);

struct AdmissibleSequence {
  std::int64_t k = 0;
  int n = 1;
  double r = 2;
  std::vector<std::uint64_t> s;  // s[0] = s_2

  /// cap_b = min(k b^{n+1}, k^2).
  long double cap(std::uint64_t b) const;
  void validate() const;
};

/// Uniform draw of each s_b from the capacity left after S_{b-1}, over
/// b = 2 .. (first b with k b^{n+1} >= k^2) + 8.
AdmissibleSequence random_admissible(std::int64_t k, int n, double r, Rng& rng);

struct AbelTail {
  long double lhs = 0;        // sum s_b b^-r
  long double majorant = 0;   // sum_{2<=b<=k^{1/(n+1)}} k b^{n-r} + 2 k^{2-r/(n+1)}
  long double rigorous = 0;   // r sum_{2<=b<=k^{1/(n+1)}} k b^{n-r} + k^{2-r/(n+1)}
  bool holds() const { return lhs <= majorant; }
  bool rigorous_holds() const { return lhs <= rigorous; }
};

AbelTail abel_tail_bound(const AdmissibleSequence& seq);

}  // namespace odl
