#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace dgkit {

enum class ExperimentKind { gamma_limit, eta_sweep, dirac, radial_decomposition, profile_checks };

const char* experiment_name(ExperimentKind k);

struct PotentialSpec {
  std::string name = "double_well";  // builtin name, ignored when csv is set
  std::string csv;
  double scale = 1.0;
};

struct SurfaceSpec {
  std::string kind = "sphere";  // sphere, torus, concentric_spheres
  double radius = 1.0;
  int n = 2;
  double major = 2.0, minor = 0.5;
  std::vector<double> radii;
  bool innermost_inside = true;
};

struct EtaSpec {
  std::string kind = "zero";  // zero, eta_L, tabulated
  std::string csv;
  std::string L_rule = "log";
  double L_const = 4.0;
  std::vector<std::string> fallback;  // rules tried in order after an admissibility failure
  std::string admissibility = "lemma_bound";  // lemma_bound, integration
};

struct QuadratureSpec {
  double panel_width = 0.5;
  int order = 8;
  int surface_resolution = 256;
};

struct ProfileSpec {
  double step = 1e-3;
  double half_width = 0.0;  // 0: automatic
};

struct DiracSpec {
  int n = 2;
  double gap_factor = 8.0;
  int k_cap = 3;
  std::vector<double> probes{0.5, 0.1};
  std::string L_rule = "eighth_log";
};

struct RadialSpec {
  std::string source = "synthetic";  // synthetic, recovery, csv
  std::vector<double> radii{1.0, 0.5};
  int n = 2;
  double r0 = 0.1;
  double r_lo = 0.05, r_hi = 1.3;
  double grid_step = 0.05;  // in units of eps
  std::vector<std::string> csv_files;  // one per schedule entry
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::gamma_limit;
  PotentialSpec potential;
  SurfaceSpec surface;
  std::vector<double> eps_schedule;
  double lambda = 1.0;
  EtaSpec eta;
  std::vector<double> L_values;
  DiracSpec dirac;
  RadialSpec radial;
  QuadratureSpec quadrature;
  ProfileSpec profile;
  int t_grid_points = 21;
  std::string output_dir = "dgkit_out";
  std::string check_default = "fatal";  // fatal or warning
  std::map<std::string, std::string> check_overrides;

  // Fills experiment-specific defaults for fields the JSON left out.
  static ExperimentConfig defaults(ExperimentKind k);
  // Throws config_error listing every offending field.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_file(const std::string& path);
  nlohmann::ordered_json to_json() const;
  // Hash of the normalized config without the output directory.
  std::string hash() const;
};

struct RunOptions {
  int threads = 1;
  double quad_refine = 1.0;
  bool emit_plots = false;
  std::string output_dir;  // overrides config and environment when nonempty
};

struct CheckResult {
  std::string name;
  bool passed = false;
  bool fatal = true;
  std::string detail;
};

struct RunResult {
  int exit_code = 0;  // 0 ok, 3 fatal check failed
  std::vector<CheckResult> checks;
  std::vector<std::string> artifacts;
  std::string summary;
};

// Output directory: options, then DGKIT_OUTPUT_DIR, then the config.
std::string resolve_output_dir(const ExperimentConfig& cfg, const RunOptions& opt);

RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {});

}  // namespace dgkit
