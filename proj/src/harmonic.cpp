#include "odl/harmonic.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include "odl/error.hpp"
#include "odl/parallel.hpp"

namespace odl {

namespace {

constexpr long double kTwoPi = 6.283185307179586476925286766559005768L;

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

std::vector<std::uint64_t> divisors(std::uint64_t q) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 1; d * d <= q; ++d) {
    if (q % d) continue;
    out.push_back(d);
    if (d * d != q) out.push_back(q / d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

constexpr std::uint64_t kMaxBruteModulus = 20000;

// counts[r] = #{k in [1,q]^n : gcd(k, q) = 1, <m,k> = r mod q}.
std::vector<std::uint64_t> primitive_residue_counts(const FrequencyVector& m, std::uint64_t q) {
  if (m.empty()) raise(Errc::DimensionMismatch, "frequency vector is empty");
  if (q < 1) raise(Errc::InvalidArgument, "q must be positive");
  if (q > kMaxBruteModulus) raise(Errc::BudgetExceeded, "brute-force Ramanujan sum limited to q <= 20000");
  if (std::pow(static_cast<long double>(q), m.size()) >= 0x1.0p63L) {
    raise(Errc::BudgetExceeded, "residue count would overflow");
  }
  const auto divs = divisors(q);
  const std::size_t nd = divs.size();
  std::vector<std::uint32_t> index_of(q + 1, 0);
  for (std::size_t i = 0; i < nd; ++i) index_of[divs[i]] = static_cast<std::uint32_t>(i);
  // next[g * q + k]: index of gcd(divs[g], k), k = 0 standing for k = q.
  std::vector<std::uint32_t> next(nd * q);
  for (std::size_t g = 0; g < nd; ++g) {
    for (std::uint64_t k = 0; k < q; ++k) next[g * q + k] = index_of[std::gcd(divs[g], k)];
  }

  std::vector<std::uint64_t> h(nd * q, 0), t(nd * q);
  h[(nd - 1) * q + 0] = 1;  // empty gcd is q
  for (std::int64_t mi_signed : m) {
    const std::uint64_t mi = static_cast<std::uint64_t>(((mi_signed % static_cast<std::int64_t>(q)) + q) % q);
    std::fill(t.begin(), t.end(), 0);
    for (std::size_t g = 0; g < nd; ++g) {
      const std::uint64_t* row = &h[g * q];
      if (std::all_of(row, row + q, [](std::uint64_t v) { return v == 0; })) continue;
      for (std::uint64_t k = 0; k < q; ++k) {
        const std::uint64_t shift = static_cast<std::uint64_t>((static_cast<unsigned __int128>(mi) * k) % q);
        std::uint64_t* out = &t[next[g * q + k] * q];
        for (std::uint64_t r = 0; r + shift < q; ++r) out[r + shift] += row[r];
        for (std::uint64_t r = q - shift; r < q && shift; ++r) out[r + shift - q] += row[r];
      }
    }
    std::swap(h, t);
  }
  return {h.begin(), h.begin() + static_cast<std::ptrdiff_t>(q)};
}

// Value of sum counts[r] x^r at a primitive q-th root of unity, via the
// remainder modulo Phi_q, which must be a constant.
Integer reduce_cyclotomic(const std::vector<std::uint64_t>& counts, std::uint64_t q) {
  const auto& phi = cyclotomic(q);
  const std::size_t deg = phi.size() - 1;
  std::vector<Integer> c(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) c[i] = Integer(static_cast<unsigned long>(counts[i]));
  for (std::size_t top = c.size(); top-- > deg;) {
    if (c[top] == 0) continue;
    const Integer lead = c[top];
    for (std::size_t j = 0; j <= deg; ++j) {
      if (phi[j]) c[top - deg + j] -= lead * static_cast<long>(phi[j]);
    }
  }
  for (std::size_t i = 1; i < std::min(deg, c.size()); ++i) {
    if (c[i] != 0) raise(Errc::Unsupported, "root-of-unity sum is not rational");
  }
  return c.empty() ? Integer(0) : c[0];
}

}  // namespace

std::int64_t norm1(const FrequencyVector& m) {
  std::int64_t s = 0;
  for (auto v : m) s += std::llabs(v);
  return s;
}

std::int64_t norm_inf(const FrequencyVector& m) {
  std::int64_t s = 0;
  for (auto v : m) s = std::max<std::int64_t>(s, std::llabs(v));
  return s;
}

Integer gcd_of(const FrequencyVector& m) {
  Integer g = 0;
  for (auto v : m) g = gcd(g, Integer(static_cast<long>(v)));
  return g;
}

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t q) {
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t p = 2; p * p <= q; ++p) {
    if (q % p) continue;
    int r = 0;
    while (q % p == 0) {
      q /= p;
      ++r;
    }
    out.emplace_back(p, r);
  }
  if (q > 1) out.emplace_back(q, 1);
  return out;
}

const std::vector<std::int64_t>& cyclotomic(std::uint64_t q) {
  static std::mutex mutex;
  static std::map<std::uint64_t, std::vector<std::int64_t>> cache;
  if (q < 1) raise(Errc::InvalidArgument, "cyclotomic index must be positive");
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(q); it != cache.end()) return it->second;
  }
  // Phi_q = (x^q - 1) / prod_{d | q, d < q} Phi_d.
  std::vector<std::int64_t> num(q + 1, 0);
  num[0] = -1;
  num[q] = 1;
  for (std::uint64_t d : divisors(q)) {
    if (d == q) continue;
    const auto& den = cyclotomic(d);
    const std::size_t dd = den.size() - 1;
    std::vector<std::int64_t> quo(num.size() - dd, 0);
    for (std::size_t top = num.size(); top-- > dd;) {
      const std::int64_t c = num[top];
      quo[top - dd] = c;
      if (!c) continue;
      for (std::size_t j = 0; j <= dd; ++j) num[top - dd + j] -= c * den[j];
    }
    num = std::move(quo);
  }
  std::lock_guard lock(mutex);
  return cache.emplace(q, std::move(num)).first->second;
}

RamanujanValue ramanujan_bruteforce(const FrequencyVector& m, std::uint64_t q) {
  const auto counts = primitive_residue_counts(m, q);
  RamanujanValue out;
  if (q <= kExactRamanujanLimit) {
    out.integer = reduce_cyclotomic(counts, q);
    out.exact = true;
    out.value = {out.integer.get_d(), 0.0};
    return out;
  }
  long double re = 0, im = 0, total = 0;
  for (std::uint64_t r = 0; r < q; ++r) {
    if (!counts[r]) continue;
    const long double angle = kTwoPi * static_cast<long double>(r) / static_cast<long double>(q);
    re += static_cast<long double>(counts[r]) * std::cos(angle);
    im += static_cast<long double>(counts[r]) * std::sin(angle);
    total += static_cast<long double>(counts[r]);
  }
  const long double scale = std::max<long double>(1, total);
  if (std::fabs(im) > 1e-9L * scale) raise(Errc::Unsupported, "Ramanujan sum not real within tolerance");
  const long double rounded = std::nearbyint(re);
  if (std::fabs(re - rounded) > 1e-9L * scale) raise(Errc::Unsupported, "Ramanujan sum not integral within tolerance");
  out.value = {static_cast<double>(re), static_cast<double>(im)};
  out.integer = Integer(static_cast<double>(rounded));
  return out;
}

Integer ramanujan_formula(const FrequencyVector& m, std::uint64_t q) {
  if (m.empty()) raise(Errc::DimensionMismatch, "frequency vector is empty");
  if (std::all_of(m.begin(), m.end(), [](std::int64_t v) { return v == 0; })) {
    raise(Errc::ZeroFrequency, "formula needs m != 0");
  }
  if (q < 1) raise(Errc::InvalidArgument, "q must be positive");
  const Integer g = gcd_of(m);
  const unsigned n = static_cast<unsigned>(m.size());
  Integer value = 1;
  for (const auto& [p, r] : factorize(q)) {
    Integer pr, pr1, lower, pn;
    mpz_ui_pow_ui(pr.get_mpz_t(), p, r);
    mpz_ui_pow_ui(pr1.get_mpz_t(), p, r - 1);
    mpz_ui_pow_ui(lower.get_mpz_t(), p, (r - 1) * n);
    mpz_ui_pow_ui(pn.get_mpz_t(), p, n);
    if (g % pr == 0) {
      value *= lower * (pn - 1);
    } else if (g % pr1 == 0) {
      value *= -lower;
    } else {
      return 0;
    }
  }
  return value;
}

Integer RamanujanCache::value(const FrequencyVector& m) {
  FrequencyVector key(m.size());
  const std::int64_t q = static_cast<std::int64_t>(q_);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const std::int64_t r = ((m[i] % q) + q) % q;
    key[i] = std::min(r, q - r == q ? 0 : q - r);
  }
  std::sort(key.begin(), key.end());
  auto it = cache_.find(key);
  if (it == cache_.end()) it = cache_.emplace(key, ramanujan_bruteforce(key, q_).integer).first;
  return it->second;
}

Integer jordan_count(int n, std::uint64_t q) {
  if (n < 1) raise(Errc::InvalidArgument, "dimension must be positive");
  if (q < 1) raise(Errc::InvalidArgument, "q must be positive");
  Integer value = 1;
  for (const auto& [p, r] : factorize(q)) {
    Integer lower, pn;
    mpz_ui_pow_ui(lower.get_mpz_t(), p, static_cast<unsigned long>(r - 1) * n);
    mpz_ui_pow_ui(pn.get_mpz_t(), p, n);
    value *= lower * (pn - 1);
  }
  return value;
}

Integer jordan_count_bruteforce(int n, std::uint64_t q) {
  if (n < 1) raise(Errc::InvalidArgument, "dimension must be positive");
  const auto counts = primitive_residue_counts(FrequencyVector(n, 0), q);
  return Integer(static_cast<unsigned long>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0})));
}

RamanujanReport ramanujan_verify(std::uint64_t q_max, int n, std::int64_t m_bound, bool with_rows, int workers) {
  if (q_max < 1 || n < 1 || m_bound < 1) raise(Errc::InvalidArgument, "q_max, n and m_bound must be positive");
  if (std::pow(2.0L * m_bound + 1, n) > 1e7L) raise(Errc::BudgetExceeded, "frequency box too large");
  std::vector<FrequencyVector> ms;
  FrequencyVector v(n, -m_bound);
  while (true) {
    if (std::any_of(v.begin(), v.end(), [](std::int64_t x) { return x != 0; })) ms.push_back(v);
    int i = n - 1;
    while (i >= 0 && v[i] == m_bound) v[i--] = -m_bound;
    if (i < 0) break;
    ++v[i];
  }
  std::vector<RamanujanReport> per_q(q_max);
  parallel_for(q_max, workers, [&](std::size_t idx) {
    const std::uint64_t q = idx + 1;
    RamanujanCache brute(q);
    RamanujanReport& rep = per_q[idx];
    for (const auto& m : ms) {
      const Integer b = brute.value(m);
      const Integer f = ramanujan_formula(m, q);
      Integer bound;
      mpz_pow_ui(bound.get_mpz_t(), gcd_of(m).get_mpz_t(), n);
      ++rep.checked;
      if (b != f) ++rep.mismatches;
      if (::abs(b) > bound) ++rep.bound_violations;
      if (with_rows) {
        rep.csv += std::to_string(q);
        for (auto x : m) rep.csv += "," + std::to_string(x);
        rep.csv += "," + b.get_str() + "," + f.get_str() + "," + bound.get_str() + "\n";
      }
    }
  });
  RamanujanReport total;
  if (with_rows) {
    total.csv = "q";
    for (int i = 1; i <= n; ++i) total.csv += ",m" + std::to_string(i);
    total.csv += ",c_brute,c_formula,bound\n";
  }
  for (auto& r : per_q) {
    total.checked += r.checked;
    total.mismatches += r.mismatches;
    total.bound_violations += r.bound_violations;
    total.csv += r.csv;
  }
  return total;
}

// ------------------------------------------------------------------- bump

namespace {

double raw_profile(double x, double a) {
  const double t = x / a;
  if (!(std::fabs(t) < 1)) return 0.0;
  return std::exp(-1.0 / (1.0 - t * t));
}

double signed_coord(double x) {
  x -= std::floor(x);
  return x > 0.5 ? x - 1.0 : x;
}

}  // namespace

BumpFunction build_bump(double eps, int n, int grid) {
  if (!(eps > 0 && eps < 1)) raise(Errc::InvalidArgument, "bump eps must lie in (0, 1)");
  if (n < 1) raise(Errc::InvalidArgument, "bump dimension must be positive");
  if (grid < 1) raise(Errc::InvalidArgument, "bump grid must be positive");
  BumpFunction g;
  g.eps_ = eps;
  g.n_ = n;
  g.grid_ = grid;
  g.a_ = std::min(eps / 2, eps / std::sqrt(static_cast<double>(n)));
  g.samples_.assign(grid, 0.0);
  long double sum = 0;
  for (int j = 0; j < grid; ++j) {
    const double v = raw_profile(signed_coord(static_cast<double>(j) / grid), g.a_);
    g.samples_[j] = v;
    if (v > 0) g.support_.push_back(j);
    sum += v;
  }
  if (static_cast<int>(g.support_.size()) < kMinSupportSamples) {
    raise(Errc::GridTooCoarse, "only " + std::to_string(g.support_.size()) + " samples inside the support; need " +
                                   std::to_string(kMinSupportSamples));
  }
  g.scale_ = static_cast<double>(grid / sum);
  for (auto& v : g.samples_) v *= g.scale_;
  return g;
}

double BumpFunction::value(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n_) raise(Errc::DimensionMismatch, "bump evaluated at wrong dimension");
  double v = 1;
  for (double xi : x) v *= raw_profile(signed_coord(xi), a_) * scale_;
  return v;
}

double BumpFunction::sample(const std::vector<int>& j) const {
  if (static_cast<int>(j.size()) != n_) raise(Errc::DimensionMismatch, "grid index has wrong dimension");
  double v = 1;
  for (int ji : j) v *= samples_[((ji % grid_) + grid_) % grid_];
  return v;
}

double BumpFunction::integral() const {
  long double s = 0;
  for (double v : samples_) s += v;
  return static_cast<double>(std::pow(s / grid_, n_));
}

double BumpFunction::l2_mass() const {
  long double s = 0;
  for (double v : samples_) s += static_cast<long double>(v) * v;
  return static_cast<double>(std::pow(s / grid_, n_));
}

double BumpFunction::continuous_integral() const {
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double a = a_;
  const double one = integrator.integrate([a](double x) { return raw_profile(x, a); }, -a, a);
  return std::pow(one * scale_, n_);
}

std::complex<double> BumpFunction::coeff_1d(std::int64_t k) const {
  if (4 * std::llabs(k) > grid_) raise(Errc::AliasingRisk, "grid below 4 |m|_inf");
  long double re = 0, im = 0;
  for (int j : support_) {
    const std::int64_t t = ((k * j) % grid_ + grid_) % grid_;
    const long double angle = -kTwoPi * static_cast<long double>(t) / grid_;
    re += samples_[j] * std::cos(angle);
    im += samples_[j] * std::sin(angle);
  }
  return {static_cast<double>(re / grid_), static_cast<double>(im / grid_)};
}

std::complex<double> fourier_coeff(const BumpFunction& g, const FrequencyVector& m) {
  if (static_cast<int>(m.size()) != g.n_) raise(Errc::DimensionMismatch, "frequency dimension differs from bump");
  if (4 * norm_inf(m) > g.grid_) raise(Errc::AliasingRisk, "grid below 4 |m|_inf");
  {
    std::shared_lock lock(g.cache_->mutex);
    if (auto it = g.cache_->coeffs.find(m); it != g.cache_->coeffs.end()) return it->second;
  }
  const int grid = g.grid_;
  std::vector<long double> cos_t(grid), sin_t(grid);
  for (int t = 0; t < grid; ++t) {
    cos_t[t] = std::cos(kTwoPi * t / grid);
    sin_t[t] = -std::sin(kTwoPi * t / grid);
  }
  const std::size_t s = g.support_.size();
  std::vector<std::size_t> idx(g.n_, 0);
  long double re = 0, im = 0;
  while (true) {
    double v = 1;
    std::int64_t t = 0;
    for (int i = 0; i < g.n_; ++i) {
      const int j = g.support_[idx[i]];
      v *= g.samples_[j];
      t += m[i] * j;
    }
    t = ((t % grid) + grid) % grid;
    re += v * cos_t[t];
    im += v * sin_t[t];
    int i = 0;
    while (i < g.n_ && ++idx[i] == s) idx[i++] = 0;
    if (i == g.n_) break;
  }
  const long double norm = std::pow(static_cast<long double>(grid), g.n_);
  const std::complex<double> c(static_cast<double>(re / norm), static_cast<double>(im / norm));
  std::unique_lock lock(g.cache_->mutex);
  return g.cache_->coeffs.emplace(m, c).first->second;
}

std::vector<DecayRow> bump_decay(const BumpFunction& g, std::int64_t m_max) {
  if (m_max < 0) raise(Errc::InvalidArgument, "m_max must be nonnegative");
  std::vector<double> one(m_max + 1);
  for (std::int64_t k = 0; k <= m_max; ++k) one[k] = std::abs(g.coeff_1d(k));
  // best[t]: max of prod |c(m_i)| over |m|_1 = t, built one axis at a time.
  std::vector<double> best = one;
  for (int axis = 1; axis < g.dim(); ++axis) {
    std::vector<double> next(m_max + 1, 0.0);
    for (std::int64_t t = 0; t <= m_max; ++t) {
      for (std::int64_t u = 0; u <= t; ++u) next[t] = std::max(next[t], best[t - u] * one[u]);
    }
    best = std::move(next);
  }
  std::vector<DecayRow> rows;
  for (std::int64_t t = 0; t <= m_max; ++t) {
    rows.push_back({t, best[t], best[t] * std::exp(std::sqrt(g.eps() * static_cast<double>(t)))});
  }
  return rows;
}

std::string decay_csv(const std::vector<DecayRow>& rows) {
  std::string out = "m_norm,abs_coeff,decay_ratio\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g\n", static_cast<long long>(r.norm), r.abs_coeff, r.decay_ratio);
    out += buf;
  }
  return out;
}

// ------------------------------------------------------------- abel tail

long double AdmissibleSequence::cap(std::uint64_t b) const {
  const long double kk = static_cast<long double>(k);
  return std::min(kk * std::pow(static_cast<long double>(b), n + 1), kk * kk);
}

void AdmissibleSequence::validate() const {
  if (k < 1 || n < 1) raise(Errc::InvalidArgument, "k and n must be positive");
  if (!(r > 1)) raise(Errc::InvalidArgument, "r must exceed 1");
  long double partial = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    partial += static_cast<long double>(s[i]);
    if (partial > cap(i + 2)) {
      raise(Errc::InadmissibleSequence, "S_" + std::to_string(i + 2) + " exceeds min(k b^(n+1), k^2)");
    }
  }
}

AdmissibleSequence random_admissible(std::int64_t k, int n, double r, Rng& rng) {
  AdmissibleSequence seq{k, n, r, {}};
  std::uint64_t b_end = 2;
  while (seq.cap(b_end) < static_cast<long double>(k) * k) ++b_end;
  b_end += 8;
  long double partial = 0;
  for (std::uint64_t b = 2; b <= b_end; ++b) {
    const auto room = static_cast<std::int64_t>(seq.cap(b) - partial);
    const auto v = static_cast<std::uint64_t>(rng.uniform_int(0, room));
    seq.s.push_back(v);
    partial += static_cast<long double>(v);
  }
  seq.validate();
  return seq;
}

AbelTail abel_tail_bound(const AdmissibleSequence& seq) {
  seq.validate();
  AbelTail out;
  const long double r = seq.r;
  for (std::size_t i = 0; i < seq.s.size(); ++i) {
    out.lhs += static_cast<long double>(seq.s[i]) * std::pow(static_cast<long double>(i + 2), -r);
  }
  // B = floor(k^{1/(n+1)}) computed exactly on integers.
  std::uint64_t big_b = 1;
  while (ipow(big_b + 1, seq.n + 1) <= static_cast<std::uint64_t>(seq.k)) ++big_b;
  const long double kk = static_cast<long double>(seq.k);
  long double head = 0;
  for (std::uint64_t b = 2; b <= big_b; ++b) head += kk * std::pow(static_cast<long double>(b), seq.n - r);
  const long double tail = std::pow(kk, 2 - r / (seq.n + 1));
  out.majorant = head + 2 * tail;
  out.rigorous = r * head + tail;
  return out;
}

}  // namespace odl
