#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "odl/geometry.hpp"
#include "odl/quadratic.hpp"
#include "odl/scalar.hpp"

namespace odl {

inline constexpr std::string_view kVersion = "0.1.0";

enum class ParamKind { Integer, Real, Scalar, Text, Bool };

struct ParamSpec {
  std::string key;
  ParamKind kind;
  std::string default_value;
};

/// Experiment names in CLI order.
const std::vector<std::string>& experiment_names();
/// Parameter schema of one experiment; throws ConfigError for unknown names.
const std::vector<ParamSpec>& experiment_params(std::string_view experiment);

/// Fully resolved configuration: every schema key has a value.
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string output_path;  // empty means stdout
  std::map<std::string, std::string> params;

  const std::string& text(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  double real(const std::string& key) const;
  Scalar scalar(const std::string& key) const;
  bool boolean(const std::string& key) const;
};

/// INI text with an optional [run] section (seed, workers, output,
/// experiment) and one section named after the experiment. Keys outside any
/// section belong to [run]. Unknown sections, unknown keys, duplicates and
/// malformed values raise ConfigError before anything runs.
ExperimentConfig parse_config(std::string_view text, std::string_view experiment,
                              std::string_view source = "<config>");
ExperimentConfig load_config(const std::string& path, std::string_view experiment);
/// Defaults only.
ExperimentConfig default_config(std::string_view experiment);

/// Memory budget from ODL_BUDGET_MB (default 1024).
struct Budget {
  std::uint64_t bytes = std::uint64_t(1024) << 20;

  static Budget from_env();
  /// Orbit-union size cap, in points.
  std::size_t orbit_points() const;
  /// Group-ball element cap.
  std::size_t ball_elements(int dim) const;
};

struct RunReport {
  ExperimentConfig config;
  std::vector<std::pair<std::string, std::string>> summary;
  std::string csv;
  double wall_seconds = 0;  // never rendered

  /// `# key: value` header (version, experiment, seed, resolved config,
  /// summary) followed by the CSV body.
  std::string render() const;
  const std::string* find(std::string_view key) const;
};

RunReport run(const ExperimentConfig& config, const Budget& budget = Budget::from_env());

/// Runs the oracle of a calibratable experiment and returns the fixture
/// (same rendering as a report). Throws ConfigError for experiments without
/// a calibration and OracleBudgetExceeded when the oracle is too large.
RunReport calibrate(const ExperimentConfig& config, const Budget& budget = Budget::from_env());

// Helpers shared with the tests.

/// `p1;p2;...` with each point `c1,c2,...`; any float literal makes the set float.
PointSet parse_points(const Space& space, std::string_view text);
/// `golden`, `silver` or `A,B,d`.
QuadraticNumber parse_quadratic(std::string_view text);
/// {0} together with {2^-j : 1 <= j <= terms}, exact.
PointSet dyadic_tail_set(int terms, const Space& space = Space::circle());
/// P(max spacing of k iid uniform points on the circle < s), exact.
Rational spacing_probability(int k, const Rational& s);

}  // namespace odl
