#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "odl/error.hpp"
#include "odl/experiments.hpp"
#include "oracles.hpp"

using namespace odl;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::Unsupported;
}

std::string config_error(std::string_view text, std::string_view exp) {
  try {
    parse_config(text, exp, "test.ini");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ConfigError);
    return e.what();
  }
  ADD_FAILURE() << "config accepted";
  return {};
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / ("odl_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

void write_file(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(ODL_CLI_PATH) + " " + args + " 2>/dev/null >/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, DefaultsResolveEverySchemaKey) {
  for (const auto& name : experiment_names()) {
    const auto cfg = default_config(name);
    EXPECT_EQ(cfg.params.size(), experiment_params(name).size()) << name;
  }
}

TEST(Config, SectionsAndOverrides) {
  const auto cfg = parse_config("seed = 7\n[run]\nworkers = 2\n[gap]\n; comment\npoints = 0;1/2\n", "gap");
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_EQ(cfg.workers, 2);
  EXPECT_EQ(cfg.text("points"), "0;1/2");
  EXPECT_EQ(cfg.text("space"), "circle");
}

TEST(Config, FailClosed) {
  EXPECT_NE(config_error("[gap]\nbogus = 1\n", "gap").find("test.ini:2"), std::string::npos);
  EXPECT_NE(config_error("[gap]\nresolution = 8\nresolution = 9\n", "gap").find("resolution"), std::string::npos);
  config_error("[rotation-qd]\nalphas = 3\n", "gap");
  config_error("[gap]\nresolution = many\n", "gap");
  config_error("[run]\nseed = -1\n", "gap");
  config_error("[run]\ncolour = red\n", "gap");
  config_error("[gap\n", "gap");
  config_error("just text\n", "gap");
  EXPECT_EQ(code_of([] { default_config("nope"); }), Errc::ConfigError);
}

TEST(Run, GapExample) {
  auto cfg = default_config("gap");
  cfg.params["points"] = "0;1/4;1/2;3/4";
  const auto rep = run(cfg);
  ASSERT_NE(rep.find("gap"), nullptr);
  EXPECT_EQ(*rep.find("gap"), "1/8");
  const auto fl = [&] {
    auto c = cfg;
    c.params["points"] = "0.0;0.25;0.5;0.75";
    return run(c);
  }();
  EXPECT_DOUBLE_EQ(std::stod(*fl.find("gap")), 0.125);
}

TEST(Run, RamanujanVerifyHasNoMismatches) {
  auto cfg = default_config("ramanujan-verify");
  cfg.params["c0_q_max"] = "200";
  const auto rep = run(cfg);
  EXPECT_EQ(*rep.find("mismatches"), "0");
  EXPECT_EQ(*rep.find("bound_violations"), "0");
}

TEST(Run, HeaderEchoesProvenance) {
  auto cfg = default_config("gap");
  cfg.seed = 42;
  const auto text = run(cfg).render();
  EXPECT_EQ(text.rfind("# odl version: 0.1.0\n# experiment: gap\n# seed: 42\n", 0), 0u);
  for (const auto& p : experiment_params("gap"))
    EXPECT_NE(text.find("# config." + p.key + ": "), std::string::npos) << p.key;
}

TEST(Run, DeterministicReruns) {
  std::vector<ExperimentConfig> cfgs;
  auto rot = default_config("rotation-qd");
  rot.params["alphas"] = "5";
  rot.params["n_max"] = "3000";
  cfgs.push_back(rot);
  auto iet = default_config("iet-qd");
  iet.params["pairs"] = "5";
  iet.params["n_max"] = "2000";
  cfgs.push_back(iet);
  auto gl = default_config("glasner-dilation");
  gl.params["sets"] = "3";
  gl.params["n_max"] = "500";
  gl.params["density_n_max"] = "200";
  cfgs.push_back(gl);
  for (const auto& c : cfgs) {
    const auto a = run(c).render();
    const auto b = run(c).render();
    EXPECT_EQ(a, b) << c.experiment;
    auto parallel = c;
    parallel.workers = 3;
    auto body = [](const std::string& s) { return s.substr(s.find("# config.")); };
    EXPECT_EQ(body(run(parallel).render()), body(a)) << c.experiment;
  }
}

TEST(Run, SeedsChangeSampledExperiments) {
  auto a = default_config("rotation-qd");
  a.params["alphas"] = "2";
  a.params["n_max"] = "100";
  auto b = a;
  b.seed = 2;
  EXPECT_NE(run(a).csv, run(b).csv);
}

TEST(Run, BudgetErrorsAreFlagged) {
  auto cfg = default_config("sl-search");
  cfg.params["radius"] = "12";
  cfg.params["sets"] = "1";
  Budget tiny;
  tiny.bytes = 1 << 16;
  try {
    run(cfg, tiny);
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.is_budget_error());
  }
}

TEST(Calibrate, RefusesExactExperiments) {
  EXPECT_EQ(code_of([] { calibrate(default_config("gap")); }), Errc::ConfigError);
  EXPECT_EQ(code_of([] { calibrate(default_config("ramanujan-verify")); }), Errc::ConfigError);
}

TEST(Calibrate, GlasnerOracleTable) {
  auto cfg = default_config("glasner-dilation");
  cfg.params["sets"] = "2";
  const auto fx = calibrate(cfg);
  const auto committed = oracle::read_fixture(std::string(ODL_FIXTURE_DIR) + "/glasner-dilation.csv");
  std::stringstream ss(fx.csv);
  std::string line;
  std::getline(ss, line);
  for (int t = 0; t < 2; ++t) {
    std::getline(ss, line);
    std::string joined;
    for (std::size_t i = 0; i < committed.rows[t].size(); ++i) joined += (i ? "," : "") + committed.rows[t][i];
    EXPECT_EQ(line, joined);
  }
}

TEST(Helpers, ParseAndSpacing) {
  const auto pts = parse_points(Space::torus(2), "0,1/2;1/3,0.25");
  EXPECT_EQ(pts.size(), 2u);
  EXPECT_FALSE(pts.is_exact());
  EXPECT_EQ(parse_quadratic("golden"), QuadraticNumber::golden());
  EXPECT_EQ(parse_quadratic("0,1,2"), QuadraticNumber(0, 1, 2));
  EXPECT_EQ(dyadic_tail_set(3).size(), 4u);
  EXPECT_EQ(spacing_probability(1, Rational(1, 2)), 0);
  // Two points: max spacing < s iff the second lies within the arc (1-s, s) of the first.
  EXPECT_EQ(spacing_probability(2, Rational(3, 4)), Rational(1, 2));
}

TEST(Cli, ExitCodes) {
  const auto dir = temp_dir();
  write_file(dir / "ok.ini", "[gap]\npoints = 0;1/4;1/2;3/4\n");
  write_file(dir / "bad.ini", "[gap]\nbogus = 1\n");
  EXPECT_EQ(run_cli("gap --config " + (dir / "ok.ini").string() + " --out " + (dir / "out.csv").string()), 0);
  EXPECT_NE(read_file(dir / "out.csv").find("circle,4,1/8,"), std::string::npos);
  EXPECT_EQ(run_cli("gap --config " + (dir / "bad.ini").string()), 2);
  EXPECT_EQ(run_cli("no-such-experiment"), 2);
  EXPECT_EQ(run_cli("calibrate gap"), 2);
  write_file(dir / "big.ini", "[sl-search]\nradius = 14\nsets = 1\n");
  EXPECT_EQ(run_cli("sl-search --config " + (dir / "big.ini").string(), "ODL_BUDGET_MB=1"), 3);
  EXPECT_EQ(run_cli("gap --config " + (dir / "ok.ini").string(), "ODL_BUDGET_MB=zero"), 2);
  std::filesystem::remove_all(dir);
}

TEST(Cli, DoubleRunIsByteIdentical) {
  const auto dir = temp_dir();
  write_file(dir / "rot.ini", "[rotation-qd]\nalphas = 4\nn_max = 2000\n");
  write_file(dir / "iet.ini", "[iet-qd]\npairs = 4\nn_max = 2000\n");
  write_file(dir / "walk.ini", "[walk-equi]\nsteps = 20000\ncheckpoints = 1000,20000\n");
  for (const auto& [exp, file] : std::vector<std::pair<std::string, std::string>>{
           {"rotation-qd", "rot.ini"}, {"iet-qd", "iet.ini"}, {"walk-equi", "walk.ini"}}) {
    const auto a = dir / (exp + ".a"), b = dir / (exp + ".b");
    ASSERT_EQ(run_cli(exp + " --config " + (dir / file).string() + " --seed 9 --out " + a.string()), 0);
    ASSERT_EQ(run_cli(exp + " --config " + (dir / file).string() + " --seed 9 --out " + b.string()), 0);
    EXPECT_EQ(read_file(a), read_file(b)) << exp;
    EXPECT_NE(read_file(a).find("# seed: 9\n"), std::string::npos);
  }
  std::filesystem::remove_all(dir);
}
