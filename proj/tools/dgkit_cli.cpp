#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "dgkit/dgkit.h"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_runtime = 1;
constexpr int exit_usage = 2;

int report(dg_status st) {
  std::fprintf(stderr, "error (%s): %s\n", dg_status_name(st), dg_last_error());
  return st == DG_CONFIG_ERROR || st == DG_INVALID_ARGUMENT ? exit_usage : exit_runtime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dgkit experiment driver"};
  app.set_version_flag("--version", std::string(dg_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  int threads = 1;
  double quad_refine = 1.0;
  bool emit_plots = false;
  auto* run = app.add_subcommand("run", "Run an experiment config and write artifacts");
  run->add_option("config", config_path, "JSON config path")->required();
  run->add_flag("--emit-plots", emit_plots, "Write plot-ready long-format CSV");
  run->add_option("--quad-refine", quad_refine, "Quadrature refinement factor")->check(CLI::Range(1.0, 64.0));
  run->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1, 256));
  run->add_option("--output-dir", output_dir, "Output directory (overrides DGKIT_OUTPUT_DIR and the config)");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Validate a config and print its normalized form");
  validate->add_option("config", validate_path, "JSON config path")->required();

  std::string experiment;
  auto* defaults = app.add_subcommand("defaults", "Print the default config of an experiment");
  defaults->add_option("experiment", experiment, "gamma_limit, eta_sweep, dirac, radial_decomposition or profile_checks")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  if (*defaults || *validate) {
    dg_config* cfg = nullptr;
    const dg_status st = *defaults ? dg_config_default(experiment.c_str(), &cfg)
                                   : dg_config_from_file(validate_path.c_str(), &cfg);
    if (st != DG_OK) return report(st);
    if (*validate) std::printf("config valid, hash %s\n", dg_config_hash(cfg));
    std::printf("%s\n", dg_config_json(cfg));
    dg_config_free(cfg);
    return exit_ok;
  }

  dg_config* cfg = nullptr;
  dg_status st = dg_config_from_file(config_path.c_str(), &cfg);
  if (st != DG_OK) return report(st);
  dg_run_options opt;
  dg_run_options_default(&opt);
  opt.threads = threads;
  opt.quad_refine = quad_refine;
  opt.emit_plots = emit_plots ? 1 : 0;
  opt.output_dir = output_dir.empty() ? nullptr : output_dir.c_str();
  dg_run_result* res = nullptr;
  st = dg_run_experiment(cfg, &opt, &res);
  dg_config_free(cfg);
  if (st != DG_OK) return report(st);
  std::fputs(dg_run_result_summary(res), stdout);
  const int code = dg_run_result_exit_code(res);
  dg_run_result_free(res);
  return code;
}
