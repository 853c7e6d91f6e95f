#include "odl/experiments.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "odl/cfrac.hpp"
#include "odl/circle_dyn.hpp"
#include "odl/error.hpp"
#include "odl/harmonic.hpp"
#include "odl/iet.hpp"
#include "odl/parallel.hpp"
#include "odl/rng.hpp"
#include "odl/torus_group.hpp"

namespace odl {

namespace {

// ---------------------------------------------------------------- helpers

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  const std::string t(trim(s));
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (errno || *end) return std::nullopt;
  return v;
}

std::optional<double> parse_real(std::string_view s) {
  const std::string t(trim(s));
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (*end || !std::isfinite(v)) {
    try {
      return Scalar::parse(t).to_double();
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  return v;
}

std::optional<bool> parse_bool(std::string_view s) {
  const std::string_view t = trim(s);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  return std::nullopt;
}

[[noreturn]] void config_error(std::string_view where, const std::string& what) {
  raise(Errc::ConfigError, std::string(where) + ": " + what);
}

void check_value(const ParamSpec& spec, const std::string& value, std::string_view where) {
  bool ok = true;
  switch (spec.kind) {
    case ParamKind::Integer: ok = parse_int(value).has_value(); break;
    case ParamKind::Real: ok = parse_real(value).has_value(); break;
    case ParamKind::Bool: ok = parse_bool(value).has_value(); break;
    case ParamKind::Scalar:
      try {
        Scalar::parse(value);
      } catch (const Error&) {
        ok = false;
      }
      break;
    case ParamKind::Text: break;
  }
  if (!ok) config_error(where, "key '" + spec.key + "' has malformed value '" + value + "'");
}

// ----------------------------------------------------------------- schema

using K = ParamKind;

const std::map<std::string, std::vector<ParamSpec>, std::less<>>& schemas() {
  static const std::map<std::string, std::vector<ParamSpec>, std::less<>> table = {
      {"gap",
       {{"space", K::Text, "circle"},
        {"dim", K::Integer, "1"},
        {"points", K::Text, "0;1/4;1/2;3/4"},
        {"metric", K::Text, "default"},
        {"resolution", K::Integer, "64"}}},
      {"glasner-dilation",
       {{"sets", K::Integer, "20"},
        {"set_size", K::Integer, "25"},
        {"eps", K::Scalar, "1/20"},
        {"n_max", K::Integer, "5000"},
        {"density_n_max", K::Integer, "2000"}}},
      {"rotation-qd",
       {{"alphas", K::Integer, "50"},
        {"alpha", K::Text, "random"},
        {"set_terms", K::Integer, "30"},
        {"n_max", K::Integer, "100000"},
        {"ratio", K::Real, "1.25"},
        {"reference_n", K::Integer, "100"}}},
      {"rotation-counterexample",
       {{"alpha", K::Text, "golden"},
        {"rule", K::Text, "square"},
        {"depth", K::Integer, "4"},
        {"n_max", K::Integer, "10000"},
        {"schedule", K::Text, "geometric"},
        {"ratio", K::Real, "1.25"}}},
      {"pair-qd",
       {{"alphas", K::Integer, "20"},
        {"alpha", K::Text, "random"},
        {"set_size", K::Integer, "10"},
        {"n_max", K::Integer, "10000"},
        {"ratio", K::Real, "1.25"},
        {"reference_n", K::Integer, "10"}}},
      {"iet-qd",
       {{"pairs", K::Integer, "50"},
        {"alpha", K::Text, "random"},
        {"beta", K::Text, "random"},
        {"set_terms", K::Integer, "20"},
        {"n_max", K::Integer, "10000"},
        {"ratio", K::Real, "1.25"},
        {"reference_n", K::Integer, "100"}}},
      {"sl-search",
       {{"sets", K::Integer, "10"},
        {"set_size", K::Integer, "10"},
        {"dim", K::Integer, "2"},
        {"eps", K::Scalar, "0.2"},
        {"radius", K::Integer, "8"},
        {"resolution", K::Integer, "64"},
        {"metric", K::Text, "linf"}}},
      {"walk-equi",
       {{"point", K::Text, "1/5,2/5"},
        {"steps", K::Integer, "100000"},
        {"checkpoints", K::Text, "1000,10000,100000"},
        {"weights", K::Text, "uniform"}}},
      {"abelian-search",
       {{"generators", K::Text, "default"},
        {"chi_index", K::Integer, "0"},
        {"chi_eps", K::Real, "0.05"},
        {"chi_box", K::Integer, "50"},
        {"eps", K::Real, "0.25"},
        {"box_radius", K::Integer, "4"},
        {"resolution", K::Integer, "32"},
        {"leaf_points", K::Integer, "200"}}},
      {"ramanujan-verify",
       {{"q_max", K::Integer, "100"},
        {"dim", K::Integer, "1"},
        {"m_bound", K::Integer, "10"},
        {"rows", K::Bool, "true"},
        {"c0_q_max", K::Integer, "10000"}}},
      {"bump-decay",
       {{"eps", K::Real, "0.1"},
        {"dim", K::Integer, "1"},
        {"grid", K::Integer, "4096"},
        {"m_max", K::Integer, "200"}}},
  };
  return table;
}

// ------------------------------------------------------------ set builders

Space parse_space(const std::string& name, int dim) {
  if (name == "circle") return Space::circle();
  if (name == "interval") return Space::interval();
  if (name == "torus") return Space::torus(dim);
  raise(Errc::ConfigError, "unknown space '" + name + "'");
}

PointSet random_circle_set(Rng& rng, std::size_t k) {
  std::vector<double> flat(k);
  for (auto& x : flat) x = rng.uniform();
  return PointSet::floating(Space::circle(), std::move(flat));
}

PointSet random_torus_set(Rng& rng, std::size_t k, int dim) {
  std::vector<double> flat(k * dim);
  for (auto& x : flat) x = rng.uniform();
  return PointSet::floating(Space::torus(dim), std::move(flat));
}

std::vector<std::uint64_t> schedule_with(std::uint64_t n_max, double ratio, std::uint64_t extra) {
  auto s = geometric_schedule(n_max, ratio);
  if (extra >= 1 && extra <= n_max && !std::binary_search(s.begin(), s.end(), extra)) {
    s.insert(std::upper_bound(s.begin(), s.end(), extra), extra);
  }
  return s;
}

std::uint64_t positive(const ExperimentConfig& c, const std::string& key) {
  const auto v = c.integer(key);
  if (v < 1) raise(Errc::ConfigError, "key '" + key + "' must be positive");
  return static_cast<std::uint64_t>(v);
}

void add(RunReport& r, std::string key, std::string value) { r.summary.emplace_back(std::move(key), std::move(value)); }

// ------------------------------------------------------------ experiments

void run_gap(const ExperimentConfig& c, RunReport& r) {
  const Space space = parse_space(c.text("space"), static_cast<int>(c.integer("dim")));
  const PointSet a = parse_points(space, c.text("points"));
  GapWitness w = [&] {
    if (space.kind == SpaceKind::Circle) return circle_gap_witness(a);
    if (space.kind == SpaceKind::Interval) return interval_gap_witness(a);
    const Metric m = c.text("metric") == "default" ? default_metric(space) : parse_metric(c.text("metric"));
    return torus_gap_witness(a, static_cast<int>(c.integer("resolution")), m);
  }();
  std::string witness;
  for (int i = 0; i < w.farthest.dim(); ++i) witness += (i ? " " : "") + w.farthest.coord(i).str();
  r.csv = "space,points,gap,witness\n" + space.name() + "," + std::to_string(a.size()) + "," + w.gap.str() + "," +
          witness + "\n";
  add(r, "gap", w.gap.str());
  add(r, "exact", w.gap.is_exact() ? "true" : "false");
}

void run_glasner(const ExperimentConfig& c, RunReport& r) {
  const std::uint64_t sets = positive(c, "sets"), k = positive(c, "set_size");
  const std::uint64_t n_max = positive(c, "n_max"), dens = positive(c, "density_n_max");
  const Scalar eps = c.scalar("eps");
  r.csv = "trial,found,m,best_m,best_gap,density_fraction\n";
  std::uint64_t found = 0;
  double fraction_sum = 0;
  for (std::uint64_t t = 0; t < sets; ++t) {
    Rng rng(c.seed, "glasner-dilation", t);
    const PointSet a = random_circle_set(rng, k);
    const DilationResult d = glasner_min_dilation(a, eps, n_max, c.workers);
    const double frac = dilation_density_fraction(a, eps, dens, c.workers);
    found += d.m.has_value();
    fraction_sum += frac;
    r.csv += std::to_string(t) + "," + (d.m ? "1" : "0") + "," + (d.m ? std::to_string(*d.m) : "") + "," +
             std::to_string(d.best_m) + "," + d.best_gap.str() + "," + fmt(frac) + "\n";
  }
  add(r, "success_rate", fmt(static_cast<double>(found) / static_cast<double>(sets)));
  add(r, "mean_density_fraction", fmt(fraction_sum / static_cast<double>(sets)));
}

Scalar trial_alpha(const ExperimentConfig& c, const std::string& key, Rng& rng) {
  const std::string& v = c.text(key);
  if (v == "random") return Scalar(rng.uniform());
  return Scalar::parse(v);
}

void run_rotation_qd(const ExperimentConfig& c, RunReport& r, const Budget& budget) {
  const bool random = c.text("alpha") == "random";
  const std::uint64_t trials = random ? positive(c, "alphas") : 1;
  const std::uint64_t ref = positive(c, "reference_n");
  const auto schedule = schedule_with(positive(c, "n_max"), c.real("ratio"), ref);
  const PointSet a = dyadic_tail_set(static_cast<int>(c.integer("set_terms")));
  std::vector<std::string> rows(trials);
  std::vector<int> below(trials), monotone(trials);
  parallel_for(trials, c.workers, [&](std::size_t t) {
    Rng rng(c.seed, "rotation-qd", t);
    const Scalar alpha = trial_alpha(c, "alpha", rng);
    const DensityProfile p = qd_profile(Rotation(alpha), a, schedule, budget.orbit_points());
    for (const auto& rec : p.records) {
      rows[t] += std::to_string(t) + "," + alpha.str() + "," + std::to_string(rec.n) + "," + rec.gap.str() + "," +
                 rec.scaled.str() + "\n";
    }
    below[t] = *p.min_scaled() < p.find(ref)->scaled;
    monotone[t] = p.gap_nonincreasing();
  });
  r.csv = "trial,alpha,n,gap,scaled\n";
  for (const auto& s : rows) r.csv += s;
  const auto count = [](const std::vector<int>& v) { return std::count(v.begin(), v.end(), 1); };
  add(r, "fraction_min_below_reference", fmt(static_cast<double>(count(below)) / static_cast<double>(trials)));
  add(r, "fraction_nonincreasing", fmt(static_cast<double>(count(monotone)) / static_cast<double>(trials)));
}

GrowthRule parse_rule(const std::string& name) {
  if (name == "square") return GrowthRule::square();
  if (name == "triple-exp") return GrowthRule::triple_exp();
  raise(Errc::ConfigError, "unknown growth rule '" + name + "'");
}

std::vector<std::uint64_t> counterexample_schedule(const ExperimentConfig& c) {
  const std::uint64_t n_max = positive(c, "n_max");
  if (c.text("schedule") == "dense") return dense_schedule(n_max);
  if (c.text("schedule") == "geometric") return geometric_schedule(n_max, c.real("ratio"));
  raise(Errc::ConfigError, "schedule must be geometric or dense");
}

void window_summary(RunReport& r, const DensityProfile& p) {
  const auto all = p.min_scaled();
  const auto low = p.min_scaled(1, 100);
  const auto high = p.min_scaled(1000, 10000);
  if (all) add(r, "min_scaled", all->str());
  if (low) add(r, "min_scaled_1_100", low->str());
  if (high) add(r, "min_scaled_1000_10000", high->str());
  if (low && high && !low->is_zero()) add(r, "window_ratio", fmt(high->to_double() / low->to_double()));
}

void run_counterexample(const ExperimentConfig& c, RunReport& r) {
  const CounterexampleSet set =
      build_counterexample(parse_quadratic(c.text("alpha")), parse_rule(c.text("rule")), static_cast<int>(c.integer("depth")));
  const DensityProfile p = counterexample_profile(set, counterexample_schedule(c));
  r.csv = p.to_csv();
  add(r, "growth_rule", set.growth_rule);
  std::string idx;
  for (std::size_t i = 0; i < set.indices.size(); ++i) {
    idx += (i ? " " : "") + std::to_string(set.indices[i]);
    add(r, "point." + std::to_string(i), set.distances[i].str());
  }
  add(r, "indices", idx);
  window_summary(r, p);
}

void run_pair_qd(const ExperimentConfig& c, RunReport& r, const Budget& budget) {
  const bool random = c.text("alpha") == "random";
  const std::uint64_t trials = random ? positive(c, "alphas") : 1;
  const std::uint64_t ref = positive(c, "reference_n");
  const std::uint64_t k = positive(c, "set_size");
  const auto schedule = schedule_with(positive(c, "n_max"), c.real("ratio"), ref);
  std::vector<std::string> rows(trials);
  std::vector<int> hit(trials);
  parallel_for(trials, c.workers, [&](std::size_t t) {
    Rng rng(c.seed, "pair-qd", t);
    const Scalar alpha = trial_alpha(c, "alpha", rng);
    const PointSet a1 = random_circle_set(rng, k), a2 = random_circle_set(rng, k);
    const DensityProfile p = qd_pair_profile(Rotation(alpha), a1, a2, schedule, budget.orbit_points());
    for (const auto& rec : p.records) {
      rows[t] += std::to_string(t) + "," + alpha.str() + "," + std::to_string(rec.n) + "," + rec.gap.str() + "," +
                 rec.scaled.str() + "\n";
    }
    hit[t] = *p.min_scaled() < Scalar(0.1) * p.find(ref)->scaled;
  });
  r.csv = "trial,alpha,n,gap,scaled\n";
  for (const auto& s : rows) r.csv += s;
  add(r, "fraction_min_below_tenth_of_reference",
      fmt(static_cast<double>(std::count(hit.begin(), hit.end(), 1)) / static_cast<double>(trials)));
}

ThreeIET trial_iet(const ExperimentConfig& c, Rng& rng) {
  if (c.text("alpha") != "random" || c.text("beta") != "random") {
    if (c.text("alpha") == "random" || c.text("beta") == "random") {
      raise(Errc::ConfigError, "alpha and beta must both be random or both be given");
    }
    return ThreeIET(Scalar::parse(c.text("alpha")), Scalar::parse(c.text("beta")));
  }
  while (true) {
    double u = rng.uniform(), v = rng.uniform();
    if (u > v) std::swap(u, v);
    if (u > 0 && u < v) return ThreeIET(Scalar(u), Scalar(v));
  }
}

void run_iet_qd(const ExperimentConfig& c, RunReport& r, const Budget& budget) {
  const bool random = c.text("alpha") == "random";
  const std::uint64_t trials = random ? positive(c, "pairs") : 1;
  const std::uint64_t ref = positive(c, "reference_n");
  const auto schedule = schedule_with(positive(c, "n_max"), c.real("ratio"), ref);
  const PointSet a = dyadic_tail_set(static_cast<int>(c.integer("set_terms")), Space::interval());
  std::vector<std::string> rows(trials);
  std::vector<int> below(trials);
  std::vector<std::uint64_t> hits(trials);
  parallel_for(trials, c.workers, [&](std::size_t t) {
    Rng rng(c.seed, "iet-qd", t);
    const ThreeIET p = trial_iet(c, rng);
    const PointSet start = p.is_exact() ? a : a.to_float();
    const IetProfile prof = iet_qd_profile(p, start, schedule, budget.orbit_points());
    for (const auto& rec : prof.profile.records) {
      rows[t] += std::to_string(t) + "," + p.alpha().str() + "," + p.beta().str() + "," + std::to_string(rec.n) + "," +
                 rec.gap.str() + "," + rec.scaled.str() + "\n";
    }
    below[t] = *prof.profile.min_scaled() < prof.profile.find(ref)->scaled;
    hits[t] = prof.discontinuity_hits;
  });
  r.csv = "trial,alpha,beta,n,gap,scaled\n";
  for (const auto& s : rows) r.csv += s;
  add(r, "fraction_min_below_reference",
      fmt(static_cast<double>(std::count(below.begin(), below.end(), 1)) / static_cast<double>(trials)));
  std::uint64_t total_hits = 0;
  for (auto h : hits) total_hits += h;
  add(r, "discontinuity_hits", std::to_string(total_hits));
}

void run_sl_search(const ExperimentConfig& c, RunReport& r, const Budget& budget) {
  const int dim = static_cast<int>(c.integer("dim"));
  const std::uint64_t sets = positive(c, "sets"), k = positive(c, "set_size");
  const int radius = static_cast<int>(c.integer("radius"));
  const Scalar eps = c.scalar("eps");
  const GroupBall ball = enumerate_ball(default_generators(dim), radius, budget.ball_elements(dim));
  if (ball.truncated) {
    raise(Errc::BudgetExceeded, "ball of radius " + std::to_string(radius) + " exceeds the memory budget after " +
                                    std::to_string(ball.size()) + " elements");
  }
  const Metric metric = parse_metric(c.text("metric"));
  r.csv = "k,eps,radius,found,word_length,gap\n";
  std::uint64_t found = 0;
  for (std::uint64_t t = 0; t < sets; ++t) {
    Rng rng(c.seed, "sl-search", t);
    const PointSet a = random_torus_set(rng, k, dim);
    const SearchResult s = search_eps_dense(a, eps, ball, static_cast<int>(c.integer("resolution")), metric, c.workers);
    found += s.found;
    r.csv += search_csv_row(t, eps, radius, s) + "\n";
  }
  add(r, "ball_size", std::to_string(ball.size()));
  add(r, "large_entries", std::to_string(ball.large_entries));
  add(r, "success_rate", fmt(static_cast<double>(found) / static_cast<double>(sets)));
}

void run_walk(const ExperimentConfig& c, RunReport& r) {
  const auto coords = split(c.text("point"), ',');
  const PointSet x = parse_points(Space::torus(static_cast<int>(coords.size())), c.text("point"));
  if (!x.is_exact()) raise(Errc::ConfigError, "walk point must be rational");
  const auto gens = default_generators(x.dim());
  std::vector<double> weights(gens.size(), 1.0);
  if (c.text("weights") != "uniform") {
    weights.clear();
    for (const auto& w : split(c.text("weights"), ',')) {
      const auto v = parse_real(w);
      if (!v) raise(Errc::ConfigError, "weights must be numbers");
      weights.push_back(*v);
    }
  }
  std::vector<std::uint64_t> marks;
  for (const auto& m : split(c.text("checkpoints"), ',')) {
    const auto v = parse_int(m);
    if (!v || *v < 1) raise(Errc::ConfigError, "checkpoints must be positive integers");
    marks.push_back(static_cast<std::uint64_t>(*v));
  }
  Rng rng(c.seed, "walk-equi", 0);
  const WalkReport w = walk_equidistribution(x.point(0), gens, weights, positive(c, "steps"), rng, marks);
  r.csv = "steps,tv\n";
  for (const auto& [t, tv] : w.tv_at) r.csv += std::to_string(t) + "," + fmt(tv) + "\n";
  add(r, "orbit_size", std::to_string(w.orbit_size));
  add(r, "denominator", w.denominator.get_str());
  add(r, "tv", fmt(w.tv));
}

std::vector<IntMatrix> parse_generators(const std::string& text) {
  if (text == "default") {
    const IntMatrix cm = IntMatrix::companion({1, -2, -1});
    const IntMatrix id = IntMatrix::identity(3);
    return {cm * cm, (cm - id) * (cm - id)};
  }
  std::vector<IntMatrix> out;
  for (const auto& m : split(text, '|')) {
    std::vector<Integer> e;
    std::istringstream in(m);
    std::string tok;
    while (in >> tok) {
      const auto v = parse_int(tok);
      if (!v) raise(Errc::ConfigError, "matrix entry '" + tok + "' is not an integer");
      e.emplace_back(static_cast<long>(*v));
    }
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(e.size()))));
    if (n * n != static_cast<int>(e.size()) || n < 1) raise(Errc::ConfigError, "matrix needs n^2 entries");
    out.emplace_back(n, std::move(e));
  }
  return out;
}

void run_abelian(const ExperimentConfig& c, RunReport& r) {
  const AbelianAction act = lyapunov_data(parse_generators(c.text("generators")));
  const auto chi_index = static_cast<std::size_t>(c.integer("chi_index"));
  for (std::size_t i = 0; i < act.chi.size(); ++i) {
    std::string row;
    for (std::size_t j = 0; j < act.chi[i].size(); ++j) row += (j ? " " : "") + fmt(act.chi[i][j]);
    add(r, "chi." + std::to_string(i), row);
  }
  add(r, "general_position", act.general_position ? "true" : "false");
  const auto vec_str = [](const std::vector<std::int64_t>& n) {
    std::string s;
    for (std::size_t i = 0; i < n.size(); ++i) s += (i ? " " : "") + std::to_string(n[i]);
    return s;
  };
  r.csv = "search,found,n,value,checked,skipped\n";
  const auto hit = chi_density_search(act, chi_index, c.real("chi_eps"), static_cast<int>(c.integer("chi_box")));
  r.csv += std::string("chi,") + (hit ? "1," + vec_str(*hit) + "," + fmt(act.chi_at(chi_index, *hit)) : "0,,") + ",,\n";

  Rng rng(c.seed, "abelian-search", 0);
  LeafSet leaf;
  for (int i = 0; i < act.dim; ++i) {
    leaf.x0.push_back(rng.uniform());
    leaf.v.push_back(act.eigenvectors[chi_index][i].real());
  }
  for (std::int64_t j = 0; j < c.integer("leaf_points"); ++j) leaf.params.push_back(rng.uniform(-0.05, 0.05));
  const SubordinateResult s = subordinate_search_eps_dense(act, chi_index, leaf, c.real("eps"),
                                                           static_cast<int>(c.integer("box_radius")),
                                                           static_cast<int>(c.integer("resolution")));
  r.csv += std::string("subordinate,") + (s.n ? "1," + vec_str(*s.n) : "0," + vec_str(s.best_n)) + "," +
           fmt(s.best_gap) + "," + std::to_string(s.checked) + "," + std::to_string(s.skipped) + "\n";
}

void run_ramanujan(const ExperimentConfig& c, RunReport& r) {
  const int n = static_cast<int>(positive(c, "dim"));
  const RamanujanReport rep =
      ramanujan_verify(positive(c, "q_max"), n, static_cast<std::int64_t>(positive(c, "m_bound")), c.boolean("rows"), c.workers);
  r.csv = rep.csv;
  add(r, "checked", std::to_string(rep.checked));
  add(r, "mismatches", std::to_string(rep.mismatches));
  add(r, "bound_violations", std::to_string(rep.bound_violations));
  // Smallest phi_q / q^{n-1} over q <= c0_q_max.
  const std::uint64_t qmax = positive(c, "c0_q_max");
  Rational best = -1;
  std::uint64_t arg = 1;
  for (std::uint64_t q = 1; q <= qmax; ++q) {
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), q, n - 1);
    const Rational ratio = make_rational(jordan_count(n, q), den);
    if (best < 0 || ratio < best) {
      best = ratio;
      arg = q;
    }
  }
  add(r, "c0_min_ratio", fmt(best.get_d()));
  add(r, "c0_argmin_q", std::to_string(arg));
}

void run_bump(const ExperimentConfig& c, RunReport& r) {
  const double eps = c.real("eps");
  const BumpFunction g = build_bump(eps, static_cast<int>(positive(c, "dim")), static_cast<int>(positive(c, "grid")));
  const auto rows = bump_decay(g, c.integer("m_max"));
  r.csv = decay_csv(rows);
  double worst = 0;
  for (const auto& row : rows) worst = std::max(worst, row.decay_ratio);
  add(r, "integral", fmt(g.integral()));
  add(r, "continuous_integral", fmt(g.continuous_integral()));
  add(r, "coeff_0", fmt(std::abs(fourier_coeff(g, FrequencyVector(g.dim(), 0)))));
  add(r, "l2_mass", fmt(g.l2_mass()));
  add(r, "max_decay_ratio", fmt(worst));
}

// ------------------------------------------------------------ calibration

Rational frac_q(const Rational& x) { return x - Rational(floor_of(x)); }

// Half the largest circular gap, computed by sorting.
Rational oracle_circle_gap(std::vector<Rational> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  Rational best = pts.front() + 1 - pts.back();
  for (std::size_t i = 1; i < pts.size(); ++i) best = std::max(best, Rational(pts[i] - pts[i - 1]));
  return best / 2;
}

void calibrate_rotation_qd(const ExperimentConfig& c, RunReport& r) {
  const bool random = c.text("alpha") == "random";
  const std::uint64_t trials = random ? positive(c, "alphas") : 1;
  const std::uint64_t ref = positive(c, "reference_n");
  const PointSet a = dyadic_tail_set(static_cast<int>(c.integer("set_terms")));
  std::vector<std::string> rows(trials);
  parallel_for(trials, c.workers, [&](std::size_t t) {
    Rng rng(c.seed, "rotation-qd", t);
    const Scalar alpha = trial_alpha(c, "alpha", rng);
    const Rational al = alpha.to_exact();
    std::vector<Rational> pts;
    for (const auto& x : a.exact_coords()) {
      for (std::uint64_t k = 0; k < ref; ++k) pts.push_back(frac_q(Rational(x + Rational(static_cast<unsigned long>(k)) * al)));
    }
    const Rational scaled = oracle_circle_gap(std::move(pts)) * Rational(static_cast<unsigned long>(ref));
    rows[t] = std::to_string(t) + "," + alpha.str() + "," + fmt(scaled.get_d()) + "\n";
  });
  r.csv = "trial,alpha,threshold\n";
  for (const auto& s : rows) r.csv += s;
  add(r, "oracle", "exact rational orbit sort at reference_n; threshold = reference_n * gap");
}

void calibrate_iet_qd(const ExperimentConfig& c, RunReport& r) {
  const bool random = c.text("alpha") == "random";
  const std::uint64_t trials = random ? positive(c, "pairs") : 1;
  const std::uint64_t ref = positive(c, "reference_n");
  const PointSet a = dyadic_tail_set(static_cast<int>(c.integer("set_terms")), Space::interval());
  std::vector<std::string> rows(trials);
  parallel_for(trials, c.workers, [&](std::size_t t) {
    Rng rng(c.seed, "iet-qd", t);
    const ThreeIET p = trial_iet(c, rng);
    const Rational al = p.alpha().to_exact(), be = p.beta().to_exact();
    std::vector<Rational> pts;
    for (const auto& x0 : a.exact_coords()) {
      Rational x = x0;
      for (std::uint64_t k = 0; k < ref; ++k) {
        pts.push_back(x);
        if (x < al) {
          x += 1 - al;
        } else if (x < be) {
          x += 1 - al - be;
        } else {
          x -= be;
        }
      }
    }
    std::sort(pts.begin(), pts.end());
    Rational gap = std::max(pts.front(), Rational(1 - pts.back()));
    for (std::size_t i = 1; i < pts.size(); ++i) gap = std::max(gap, Rational((pts[i] - pts[i - 1]) / 2));
    rows[t] = std::to_string(t) + "," + p.alpha().str() + "," + p.beta().str() + "," +
              fmt(Rational(gap * Rational(static_cast<unsigned long>(ref))).get_d()) + "\n";
  });
  r.csv = "trial,alpha,beta,threshold\n";
  for (const auto& s : rows) r.csv += s;
  add(r, "oracle", "exact rational three-branch iteration at reference_n; threshold = reference_n * gap");
}

void calibrate_glasner(const ExperimentConfig& c, RunReport& r, const Budget& budget) {
  const std::uint64_t sets = positive(c, "sets"), k = positive(c, "set_size");
  const std::uint64_t n_max = positive(c, "n_max"), dens = positive(c, "density_n_max");
  if (sets * k * n_max > budget.bytes / 8) raise(Errc::OracleBudgetExceeded, "exhaustive dilation scan too large");
  const Rational eps = c.scalar("eps").to_exact();
  std::vector<std::string> rows(sets);
  parallel_for(sets, c.workers, [&](std::size_t t) {
    Rng rng(c.seed, "glasner-dilation", t);
    const PointSet a = random_circle_set(rng, k);
    std::vector<Rational> xs;
    for (double x : a.float_coords()) xs.push_back(exact_from_double(x));
    std::optional<std::uint64_t> first;
    Rational best = 1;
    std::uint64_t best_m = 1;
    for (std::uint64_t m = 1; m <= n_max; ++m) {
      std::vector<Rational> pts;
      for (const auto& x : xs) pts.push_back(frac_q(Rational(x * Rational(static_cast<unsigned long>(m)))));
      const Rational g = oracle_circle_gap(std::move(pts));
      if (g < best) {
        best = g;
        best_m = m;
      }
      if (g < eps && !first) first = m;
    }
    rows[t] = std::to_string(t) + "," + (first ? std::to_string(*first) : "") + "," + std::to_string(best_m) + "," +
              fmt(best.get_d()) + "\n";
  });
  r.csv = "trial,min_m,best_m,best_gap\n";
  for (const auto& s : rows) r.csv += s;
  const double p = spacing_probability(static_cast<int>(k), 2 * eps).get_d();
  const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(sets * dens));
  add(r, "oracle", "exhaustive exact scan of m in [1, n_max]");
  add(r, "density_probability", fmt(p));
  add(r, "density_threshold", fmt(p - 3 * sigma));
}

void calibrate_counterexample(const ExperimentConfig& c, RunReport& r) {
  const QuadraticNumber alpha = parse_quadratic(c.text("alpha"));
  const CounterexampleSet set = build_counterexample(alpha, parse_rule(c.text("rule")), static_cast<int>(c.integer("depth")));
  const auto schedule = counterexample_schedule(c);
  const std::uint64_t n_max = schedule.back();
  std::vector<QuadraticNumber> base = set.distances;
  base.emplace_back(Rational(0), alpha.d());
  if (static_cast<long double>(schedule.size()) * n_max * base.size() > 5e7L) {
    raise(Errc::OracleBudgetExceeded, "exact counterexample profile too large");
  }
  struct Entry {
    QuadraticNumber x;
    std::uint64_t k;
  };
  std::vector<Entry> all;
  for (const auto& b : base) {
    QuadraticNumber y = b;
    for (std::uint64_t k = 0; k < n_max; ++k) {
      all.push_back({y, k});
      y = (y + alpha).frac();
    }
  }
  std::sort(all.begin(), all.end(), [](const Entry& u, const Entry& v) { return u.x < v.x; });
  DensityProfile p;
  for (std::uint64_t n : schedule) {
    std::optional<QuadraticNumber> first, prev, best;
    for (const auto& e : all) {
      if (e.k >= n) continue;
      if (prev) {
        const QuadraticNumber d = e.x - *prev;
        if (!best || d > *best) best = d;
      } else {
        first = e.x;
      }
      prev = e.x;
    }
    const QuadraticNumber wrap = *first + QuadraticNumber(Rational(1), alpha.d()) - *prev;
    if (!best || wrap > *best) best = wrap;
    const double gap = best->to_double() / 2;
    p.records.push_back({n, Scalar(gap), Scalar(gap * static_cast<double>(n))});
  }
  r.csv = p.to_csv();
  add(r, "oracle", "exact quadratic-field orbit sort");
  add(r, "growth_rule", set.growth_rule);
  window_summary(r, p);
}

void calibrate_bump(const ExperimentConfig& c, RunReport& r) {
  const double eps = c.real("eps");
  const int n = static_cast<int>(positive(c, "dim"));
  const BumpFunction g = build_bump(eps, n, static_cast<int>(positive(c, "grid")));
  // Independent of the grid: tanh-sinh of the squared normalized profile.
  const double a = g.half_width();
  const double scale = 1.0 / boost::math::quadrature::tanh_sinh<double>().integrate(
                                 [a](double x) {
                                   const double t = x / a;
                                   return std::fabs(t) < 1 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0;
                                 },
                                 -a, a);
  const double sq = boost::math::quadrature::tanh_sinh<double>().integrate(
      [a, scale](double x) {
        const double t = x / a;
        const double v = std::fabs(t) < 1 ? scale * std::exp(-1.0 / (1.0 - t * t)) : 0.0;
        return v * v;
      },
      -a, a);
  const double l2 = std::pow(sq, n);
  r.csv = "eps,dim,l2_mass,l2_const\n" + fmt(eps) + "," + std::to_string(n) + "," + fmt(l2) + "," +
          fmt(l2 * std::pow(eps, n)) + "\n";
  add(r, "oracle", "tanh-sinh quadrature of g^2; l2_const = eps^n * integral of g^2");
}

}  // namespace

// ------------------------------------------------------------ public API

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"gap",        "glasner-dilation", "rotation-qd",    "rotation-counterexample",
                                                 "pair-qd",    "iet-qd",           "sl-search",      "walk-equi",
                                                 "abelian-search", "ramanujan-verify", "bump-decay"};
  return names;
}

const std::vector<ParamSpec>& experiment_params(std::string_view experiment) {
  const auto it = schemas().find(experiment);
  if (it == schemas().end()) raise(Errc::ConfigError, "unknown experiment '" + std::string(experiment) + "'");
  return it->second;
}

const std::string& ExperimentConfig::text(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end()) raise(Errc::ConfigError, "experiment " + experiment + " has no key '" + key + "'");
  return it->second;
}

std::int64_t ExperimentConfig::integer(const std::string& key) const {
  const auto v = parse_int(text(key));
  if (!v) raise(Errc::ConfigError, "key '" + key + "' is not an integer");
  return *v;
}

double ExperimentConfig::real(const std::string& key) const {
  const auto v = parse_real(text(key));
  if (!v) raise(Errc::ConfigError, "key '" + key + "' is not a number");
  return *v;
}

Scalar ExperimentConfig::scalar(const std::string& key) const {
  try {
    return Scalar::parse(text(key));
  } catch (const Error&) {
    raise(Errc::ConfigError, "key '" + key + "' is not a scalar");
  }
}

bool ExperimentConfig::boolean(const std::string& key) const {
  const auto v = parse_bool(text(key));
  if (!v) raise(Errc::ConfigError, "key '" + key + "' is not a boolean");
  return *v;
}

ExperimentConfig default_config(std::string_view experiment) {
  ExperimentConfig c;
  c.experiment = std::string(experiment);
  for (const auto& spec : experiment_params(experiment)) c.params[spec.key] = spec.default_value;
  return c;
}

ExperimentConfig parse_config(std::string_view text, std::string_view experiment, std::string_view source) {
  ExperimentConfig c = default_config(experiment);
  const auto& schema = experiment_params(experiment);
  std::string section = "run";
  std::set<std::string> seen;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') config_error(where, "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "run" && section != experiment) config_error(where, "unexpected section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) config_error(where, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) config_error(where, "empty key");
    if (!seen.insert(section + "." + key).second) config_error(where, "duplicate key '" + key + "'");
    if (section == "run") {
      if (key == "seed") {
        const auto v = parse_int(value);
        if (!v || *v < 0) config_error(where, "key 'seed' must be a nonnegative integer");
        c.seed = static_cast<std::uint64_t>(*v);
      } else if (key == "workers") {
        const auto v = parse_int(value);
        if (!v || *v < 1) config_error(where, "key 'workers' must be a positive integer");
        c.workers = static_cast<int>(*v);
      } else if (key == "output") {
        c.output_path = value;
      } else if (key == "experiment") {
        if (value != experiment) config_error(where, "config is for experiment '" + value + "'");
      } else {
        config_error(where, "unknown key '" + key + "' in [run]");
      }
      continue;
    }
    const auto spec = std::find_if(schema.begin(), schema.end(), [&](const ParamSpec& s) { return s.key == key; });
    if (spec == schema.end()) config_error(where, "unknown key '" + key + "' for experiment " + std::string(experiment));
    check_value(*spec, value, where);
    c.params[key] = value;
  }
  return c;
}

ExperimentConfig load_config(const std::string& path, std::string_view experiment) {
  std::ifstream in(path);
  if (!in) raise(Errc::ConfigError, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), experiment, path);
}

Budget Budget::from_env() {
  Budget b;
  if (const char* v = std::getenv("ODL_BUDGET_MB")) {
    const auto mb = parse_int(v);
    if (!mb || *mb < 1) raise(Errc::ConfigError, "ODL_BUDGET_MB must be a positive integer");
    b.bytes = static_cast<std::uint64_t>(*mb) << 20;
  }
  return b;
}

std::size_t Budget::orbit_points() const { return static_cast<std::size_t>(bytes / 16); }

std::size_t Budget::ball_elements(int dim) const {
  return static_cast<std::size_t>(bytes / (static_cast<std::uint64_t>(dim) * dim * 32 + 160));
}

std::string RunReport::render() const {
  std::string out = "# odl version: " + std::string(kVersion) + "\n";
  out += "# experiment: " + config.experiment + "\n";
  out += "# seed: " + std::to_string(config.seed) + "\n";
  out += "# workers: " + std::to_string(config.workers) + "\n";
  for (const auto& [k, v] : config.params) out += "# config." + k + ": " + v + "\n";
  for (const auto& [k, v] : summary) out += "# " + k + ": " + v + "\n";
  return out + csv;
}

const std::string* RunReport::find(std::string_view key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return &v;
  }
  return nullptr;
}

RunReport run(const ExperimentConfig& config, const Budget& budget) {
  RunReport r;
  r.config = config;
  const auto t0 = std::chrono::steady_clock::now();
  const std::string& e = config.experiment;
  try {
    if (e == "gap") run_gap(config, r);
    else if (e == "glasner-dilation") run_glasner(config, r);
    else if (e == "rotation-qd") run_rotation_qd(config, r, budget);
    else if (e == "rotation-counterexample") run_counterexample(config, r);
    else if (e == "pair-qd") run_pair_qd(config, r, budget);
    else if (e == "iet-qd") run_iet_qd(config, r, budget);
    else if (e == "sl-search") run_sl_search(config, r, budget);
    else if (e == "walk-equi") run_walk(config, r);
    else if (e == "abelian-search") run_abelian(config, r);
    else if (e == "ramanujan-verify") run_ramanujan(config, r);
    else if (e == "bump-decay") run_bump(config, r);
    else raise(Errc::ConfigError, "unknown experiment '" + e + "'");
  } catch (const Error& err) {
    if (err.code() == Errc::ConfigError) throw;
    throw Error(err.code(), "experiment " + e + ": " + err.what());
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

RunReport calibrate(const ExperimentConfig& config, const Budget& budget) {
  RunReport r;
  r.config = config;
  const auto t0 = std::chrono::steady_clock::now();
  const std::string& e = config.experiment;
  add(r, "fixture", "calibration");
  if (e == "rotation-qd") calibrate_rotation_qd(config, r);
  else if (e == "iet-qd") calibrate_iet_qd(config, r);
  else if (e == "glasner-dilation") calibrate_glasner(config, r, budget);
  else if (e == "rotation-counterexample") calibrate_counterexample(config, r);
  else if (e == "bump-decay") calibrate_bump(config, r);
  else raise(Errc::ConfigError, "experiment " + e + " has no calibration (its results are computed exactly or need no threshold)");
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

PointSet parse_points(const Space& space, std::string_view text) {
  std::vector<Scalar> coords;
  bool exact = true;
  for (const auto& p : split(text, ';')) {
    if (p.empty()) continue;
    const auto cs = split(p, ',');
    if (static_cast<int>(cs.size()) != space.dim) {
      raise(Errc::ConfigError, "point '" + p + "' has " + std::to_string(cs.size()) + " coordinates, space " +
                                   space.name() + " needs " + std::to_string(space.dim));
    }
    for (const auto& x : cs) {
      Scalar s;
      try {
        s = Scalar::parse(x);
      } catch (const Error&) {
        raise(Errc::ConfigError, "malformed coordinate '" + x + "'");
      }
      exact = exact && s.is_exact();
      coords.push_back(s);
    }
  }
  if (exact) {
    std::vector<Rational> flat;
    for (const auto& s : coords) flat.push_back(s.rational());
    return PointSet::exact(space, std::move(flat));
  }
  std::vector<double> flat;
  for (const auto& s : coords) flat.push_back(s.to_double());
  return PointSet::floating(space, std::move(flat));
}

QuadraticNumber parse_quadratic(std::string_view text) {
  const std::string t(trim(text));
  if (t == "golden") return QuadraticNumber::golden();
  if (t == "silver") return QuadraticNumber::silver();
  const auto parts = split(t, ',');
  if (parts.size() != 3) raise(Errc::ConfigError, "quadratic number must be golden, silver or A,B,d");
  try {
    return QuadraticNumber(Scalar::parse(parts[0]).rational(), Scalar::parse(parts[1]).rational(),
                           Integer(parts[2]));
  } catch (const std::exception& e) {
    raise(Errc::ConfigError, "malformed quadratic number '" + t + "': " + e.what());
  }
}

PointSet dyadic_tail_set(int terms, const Space& space) {
  if (terms < 0) raise(Errc::ConfigError, "set_terms must be nonnegative");
  std::vector<Rational> flat{Rational(0)};
  for (int j = 1; j <= terms; ++j) {
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, j);
    flat.push_back(make_rational(1, den));
  }
  return PointSet::exact(space, std::move(flat));
}

Rational spacing_probability(int k, const Rational& s) {
  if (k < 1 || s <= 0) raise(Errc::InvalidArgument, "spacing probability needs k >= 1 and s > 0");
  Rational total = 0;
  Integer binom = 1;
  for (int j = 0; j <= k; ++j) {
    const Rational base = 1 - Rational(j) * s;
    if (base <= 0) break;
    Rational term = 1;
    for (int e = 0; e < k - 1; ++e) term *= base;
    total += (j % 2 ? -1 : 1) * Rational(binom) * term;
    binom = binom * (k - j) / (j + 1);
  }
  return total;
}

}  // namespace odl
