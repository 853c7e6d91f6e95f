#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "odl/error.hpp"
#include "odl/experiments.hpp"

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config, "INI config file (defaults when omitted)")->check(CLI::ExistingFile);
  cmd->add_option("--seed", opt.seed, "override the config seed");
  cmd->add_option("--out", opt.out, "output path (stdout when omitted)");
}

odl::ExperimentConfig resolve(const std::string& experiment, const Options& opt) {
  odl::ExperimentConfig c = opt.config.empty() ? odl::default_config(experiment) : odl::load_config(opt.config, experiment);
  if (opt.seed) c.seed = *opt.seed;
  if (!opt.out.empty()) c.output_path = opt.out;
  return c;
}

void emit(const odl::RunReport& report) {
  const std::string text = report.render();
  if (report.config.output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(report.config.output_path, std::ios::binary);
    if (!out) odl::raise(odl::Errc::ConfigError, "cannot write '" + report.config.output_path + "'");
    out << text;
  }
  std::fprintf(stderr, "wall time: %.3f s\n", report.wall_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orbit density experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(odl::kVersion));

  Options opt;
  std::string chosen;
  for (const auto& name : odl::experiment_names()) {
    auto* cmd = app.add_subcommand(name, "run the " + name + " experiment");
    add_common(cmd, opt);
    cmd->callback([&chosen, name] { chosen = name; });
  }
  std::string calib_target;
  auto* calib = app.add_subcommand("calibrate", "run an experiment's oracle and write its fixture");
  calib->add_option("experiment", calib_target, "experiment to calibrate")->required();
  add_common(calib, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (calib->parsed()) {
      emit(odl::calibrate(resolve(calib_target, opt)));
    } else {
      emit(odl::run(resolve(chosen, opt)));
    }
  } catch (const odl::Error& e) {
    std::cerr << "odl: " << e.what() << "\n";
    if (e.code() == odl::Errc::ConfigError) return 2;
    if (e.is_budget_error()) return 3;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "odl: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
