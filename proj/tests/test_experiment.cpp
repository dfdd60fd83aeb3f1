#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dgkit/error.hpp"
#include "dgkit/experiment.hpp"
#include "dgkit/radial_analysis.hpp"

using namespace dgkit;
using nlohmann::json;

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dgkit_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json radial_config() {
  return json::parse(R"({
    "experiment": "radial_decomposition",
    "eps_schedule": [8e-3, 4e-3, 2e-3, 1e-3],
    "radial": {"source": "synthetic", "radii": [1.0, 0.5]}
  })");
}

const CheckResult* find_check(const RunResult& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("defaults round trip through json") {
  for (auto k : {ExperimentKind::gamma_limit, ExperimentKind::eta_sweep, ExperimentKind::dirac,
                 ExperimentKind::radial_decomposition, ExperimentKind::profile_checks}) {
    const ExperimentConfig d = ExperimentConfig::defaults(k);
    CHECK(d.experiment == k);
    const ExperimentConfig back = ExperimentConfig::from_json(json::parse(d.to_json().dump()));
    CHECK(back.to_json() == d.to_json());
    CHECK(back.hash() == d.hash());
    CHECK(d.hash().size() == 16);
  }
  const ExperimentConfig g = ExperimentConfig::defaults(ExperimentKind::gamma_limit);
  CHECK(g.eps_schedule == std::vector<double>{0.1, 0.05, 0.025, 0.0125});
  const ExperimentConfig e = ExperimentConfig::defaults(ExperimentKind::eta_sweep);
  CHECK(e.surface.kind == "torus");
  CHECK(e.L_values == std::vector<double>{4.0, 8.0, 16.0, 32.0});
  CHECK(ExperimentConfig::defaults(ExperimentKind::dirac).eps_schedule.size() == 7);
}

TEST_CASE("partial json takes experiment defaults") {
  const ExperimentConfig c = ExperimentConfig::from_json(json::parse(R"({"experiment": "eta_sweep"})"));
  CHECK(c.to_json() == ExperimentConfig::defaults(ExperimentKind::eta_sweep).to_json());
}

TEST_CASE("validation lists every offending field") {
  const json bad = json::parse(R"({
    "experiment": "gamma_limit",
    "eps_schedule": [0.1, 0.2, 0.05, 0.01],
    "lambda": -1,
    "potential": {"name": "quartic_bowl"},
    "quadrature": {"order": "eight"},
    "surprise": 1
  })");
  try {
    ExperimentConfig::from_json(bad);
    FAIL("expected config_error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config_error);
    const std::string msg = e.what();
    for (const char* field : {"eps_schedule", "lambda", "potential.name", "quadrature.order", "surprise"}) {
      CAPTURE(field);
      CHECK(msg.find(field) != std::string::npos);
    }
  }
  CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse(R"({"experiment": "nope"})")), Error);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse("[1, 2]")), Error);
  CHECK_THROWS_AS(ExperimentConfig::from_file("/nonexistent/dgkit.json"), Error);
}

TEST_CASE("hash ignores the output directory") {
  json a = radial_config();
  json b = radial_config();
  a["output_dir"] = "one";
  b["output_dir"] = "two";
  CHECK(ExperimentConfig::from_json(a).hash() == ExperimentConfig::from_json(b).hash());
  b["lambda"] = 2.0;
  CHECK(ExperimentConfig::from_json(a).hash() != ExperimentConfig::from_json(b).hash());
}

TEST_CASE("output directory resolution") {
  ExperimentConfig c = ExperimentConfig::from_json(radial_config());
  c.output_dir = "from_config";
  RunOptions opt;
  ::unsetenv("DGKIT_OUTPUT_DIR");
  CHECK(resolve_output_dir(c, opt) == "from_config");
  ::setenv("DGKIT_OUTPUT_DIR", "from_env", 1);
  CHECK(resolve_output_dir(c, opt) == "from_env");
  opt.output_dir = "from_options";
  CHECK(resolve_output_dir(c, opt) == "from_options");
  ::unsetenv("DGKIT_OUTPUT_DIR");
}

TEST_CASE("runs are deterministic and stamped with the config hash") {
  const ExperimentConfig c = ExperimentConfig::from_json(radial_config());
  const fs::path d1 = scratch_dir("det1"), d2 = scratch_dir("det2");
  RunOptions o1;
  o1.output_dir = d1.string();
  o1.emit_plots = true;
  RunOptions o2 = o1;
  o2.output_dir = d2.string();
  o2.threads = 3;
  const RunResult r1 = run_experiment(c, o1);
  const RunResult r2 = run_experiment(c, o2);
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  REQUIRE(r1.artifacts.size() == r2.artifacts.size());
  REQUIRE(!r1.artifacts.empty());
  bool saw_csv = false;
  for (std::size_t i = 0; i < r1.artifacts.size(); ++i) {
    const fs::path a = r1.artifacts[i], b = r2.artifacts[i];
    CHECK(a.filename() == b.filename());
    CHECK(a.filename().string().find(c.hash()) != std::string::npos);
    CHECK(slurp(a.string()) == slurp(b.string()));
    if (a.extension() == ".csv") {
      saw_csv = true;
      std::ifstream in(a);
      std::string first;
      std::getline(in, first);
      CHECK(first.rfind("# dgkit experiment=radial_decomposition config_hash=" + c.hash(), 0) == 0);
    }
  }
  CHECK(saw_csv);
  CHECK(r1.summary.find("PASS") != std::string::npos);
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("fatal and warning checks") {
  const fs::path dir = scratch_dir("policy");
  const auto prof = OptimalProfile::solve(std::make_shared<const Potential>(Potential::double_well()));
  const std::vector<double> schedule{8e-3, 4e-3, 2e-3, 1e-3};
  json files = json::array();
  for (double eps : schedule) {
    std::vector<double> radii{1.0, 0.5};
    if (eps < 1.5e-3) radii = {1.0};
    const fs::path p = dir / ("field_" + std::to_string(files.size()) + ".csv");
    RadialField::synthetic_shells(*prof, radii, eps, 2, 0.05, 1.3, 0.05 * eps).write_csv(p.string());
    files.push_back(p.string());
  }
  json j = radial_config();
  j["radial"] = {{"source", "csv"}, {"csv_files", files}};

  RunOptions opt;
  opt.output_dir = (dir / "out").string();
  const RunResult fatal = run_experiment(ExperimentConfig::from_json(j), opt);
  const CheckResult* c = find_check(fatal, "crossing_count_stable");
  REQUIRE(c != nullptr);
  CHECK_FALSE(c->passed);
  CHECK(c->fatal);
  CHECK(fatal.exit_code == 3);
  CHECK(fatal.summary.find("FAIL crossing_count_stable") != std::string::npos);

  j["checks"] = {{"default", "fatal"}, {"overrides", {{"crossing_count_stable", "warning"}}}};
  const RunResult warned = run_experiment(ExperimentConfig::from_json(j), opt);
  c = find_check(warned, "crossing_count_stable");
  REQUIRE(c != nullptr);
  CHECK_FALSE(c->passed);
  CHECK_FALSE(c->fatal);
  const bool other_fatal_failed = std::any_of(warned.checks.begin(), warned.checks.end(),
                                              [](const CheckResult& r) { return r.fatal && !r.passed; });
  CHECK(warned.exit_code == (other_fatal_failed ? 3 : 0));

  j["checks"] = {{"default", "warning"}};
  CHECK(run_experiment(ExperimentConfig::from_json(j), opt).exit_code == 0);
  fs::remove_all(dir);
}
