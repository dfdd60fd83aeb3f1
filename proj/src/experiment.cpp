#include "dgkit/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dgkit/corollary.hpp"
#include "dgkit/error.hpp"
#include "dgkit/eta_design.hpp"
#include "dgkit/functionals.hpp"
#include "dgkit/geometry.hpp"
#include "dgkit/numerics.hpp"
#include "dgkit/potential.hpp"
#include "dgkit/profile.hpp"
#include "dgkit/radial_analysis.hpp"
#include "dgkit/recovery.hpp"

namespace dgkit {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

ExperimentKind parse_kind(const std::string& s) {
  if (s == "gamma_limit") return ExperimentKind::gamma_limit;
  if (s == "eta_sweep") return ExperimentKind::eta_sweep;
  if (s == "dirac") return ExperimentKind::dirac;
  if (s == "radial_decomposition") return ExperimentKind::radial_decomposition;
  if (s == "profile_checks") return ExperimentKind::profile_checks;
  fail(ErrorCode::config_error, "experiment: unknown kind '" + s +
                                    "' (expected gamma_limit, eta_sweep, dirac, radial_decomposition or profile_checks)");
}

// Reads optional fields into existing defaults and records type errors and unknown keys.
class Reader {
 public:
  Reader(const json& j, std::string prefix, std::vector<std::string>& errors)
      : j_(j), prefix_(std::move(prefix)), errors_(errors) {
    if (!j_.is_object()) errors_.push_back(prefix_.empty() ? "config: expected an object" : prefix_ + ": expected an object");
  }

  template <class T>
  void get(const std::string& key, T& out) {
    seen_.push_back(key);
    if (!j_.is_object() || !j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const std::exception&) {
      errors_.push_back(path(key) + ": wrong type");
    }
  }

  const json* child(const std::string& key) {
    seen_.push_back(key);
    if (!j_.is_object() || !j_.contains(key)) return nullptr;
    return &j_.at(key);
  }

  std::string path(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

  void finish() {
    if (!j_.is_object()) return;
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end()) {
        errors_.push_back(path(it.key()) + ": unknown field");
      }
    }
  }

 private:
  const json& j_;
  std::string prefix_;
  std::vector<std::string>& errors_;
  std::vector<std::string> seen_;
};

bool valid_rule(const std::string& r) {
  return r == "constant" || r == "log" || r == "max4_log" || r == "half_log" || r == "eighth_log";
}

void validate(const ExperimentConfig& c, std::vector<std::string>& errs) {
  const auto& s = c.eps_schedule;
  if (c.experiment != ExperimentKind::eta_sweep && c.experiment != ExperimentKind::profile_checks) {
    if (s.empty()) errs.push_back("eps_schedule: must not be empty");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!(s[i] > 0.0 && s[i] < 1.0)) errs.push_back("eps_schedule[" + std::to_string(i) + "]: must lie in (0, 1)");
      if (i > 0 && !(s[i] < s[i - 1])) errs.push_back("eps_schedule[" + std::to_string(i) + "]: must be decreasing");
    }
    if (c.experiment == ExperimentKind::gamma_limit && s.size() < 4) {
      errs.push_back("eps_schedule: gamma_limit needs at least 4 entries");
    }
  }
  if (!(c.lambda > 0.0)) errs.push_back("lambda: must be positive");
  if (c.potential.csv.empty()) {
    if (c.potential.name != "double_well" && c.potential.name != "cosine") {
      errs.push_back("potential.name: unknown builtin '" + c.potential.name + "'");
    }
  }
  if (!(c.potential.scale > 0.0)) errs.push_back("potential.scale: must be positive");
  const SurfaceSpec& sf = c.surface;
  if (sf.kind == "sphere") {
    if (!(sf.radius > 0.0)) errs.push_back("surface.radius: must be positive");
    if (sf.n != 2 && sf.n != 3) errs.push_back("surface.n: must be 2 or 3");
  } else if (sf.kind == "torus") {
    if (!(sf.major > sf.minor && sf.minor > 0.0)) errs.push_back("surface: torus needs major > minor > 0");
  } else if (sf.kind == "concentric_spheres") {
    if (sf.radii.empty()) errs.push_back("surface.radii: must not be empty");
    for (double r : sf.radii) {
      if (!(r > 0.0)) errs.push_back("surface.radii: radii must be positive");
    }
    if (sf.n != 2 && sf.n != 3) errs.push_back("surface.n: must be 2 or 3");
  } else {
    errs.push_back("surface.kind: unknown kind '" + sf.kind + "'");
  }
  const EtaSpec& e = c.eta;
  if (e.kind != "zero" && e.kind != "eta_L" && e.kind != "tabulated") {
    errs.push_back("eta.kind: unknown kind '" + e.kind + "'");
  }
  if (e.kind == "tabulated" && e.csv.empty()) errs.push_back("eta.csv: required for tabulated eta");
  if (!valid_rule(e.L_rule)) errs.push_back("eta.L_rule: unknown rule '" + e.L_rule + "'");
  for (const std::string& r : e.fallback) {
    if (!valid_rule(r)) errs.push_back("eta.fallback: unknown rule '" + r + "'");
  }
  if (!(e.L_const >= 1.0)) errs.push_back("eta.L_const: must be at least 1");
  if (e.admissibility != "lemma_bound" && e.admissibility != "integration") {
    errs.push_back("eta.admissibility: expected lemma_bound or integration");
  }
  if (c.experiment == ExperimentKind::eta_sweep) {
    if (c.L_values.size() < 2) errs.push_back("L_values: eta_sweep needs at least two values");
    for (double L : c.L_values) {
      if (!(L >= 1.0)) errs.push_back("L_values: entries must be at least 1");
    }
  }
  if (c.dirac.n != 2 && c.dirac.n != 3) errs.push_back("dirac.n: must be 2 or 3");
  if (c.dirac.k_cap < 1) errs.push_back("dirac.k_cap: must be at least 1");
  if (!(c.dirac.gap_factor > 0.0)) errs.push_back("dirac.gap_factor: must be positive");
  for (double p : c.dirac.probes) {
    if (!(p > 0.0)) errs.push_back("dirac.probes: entries must be positive");
  }
  if (!valid_rule(c.dirac.L_rule)) errs.push_back("dirac.L_rule: unknown rule '" + c.dirac.L_rule + "'");
  const RadialSpec& r = c.radial;
  if (r.source != "synthetic" && r.source != "recovery" && r.source != "csv") {
    errs.push_back("radial.source: expected synthetic, recovery or csv");
  }
  if (r.n != 2 && r.n != 3) errs.push_back("radial.n: must be 2 or 3");
  if (!(r.r0 > 0.0)) errs.push_back("radial.r0: must be positive");
  if (!(r.r_lo > 0.0 && r.r_hi > r.r_lo)) errs.push_back("radial: need 0 < r_lo < r_hi");
  if (!(r.grid_step > 0.0)) errs.push_back("radial.grid_step: must be positive");
  if (r.source != "csv" && r.radii.empty()) errs.push_back("radial.radii: must not be empty");
  if (c.experiment == ExperimentKind::radial_decomposition && r.source == "csv" &&
      r.csv_files.size() != c.eps_schedule.size()) {
    errs.push_back("radial.csv_files: need one file per eps_schedule entry");
  }
  if (!(c.quadrature.panel_width > 0.0)) errs.push_back("quadrature.panel_width: must be positive");
  if (c.quadrature.order < 2 || c.quadrature.order > 64) errs.push_back("quadrature.order: must lie in [2, 64]");
  if (c.quadrature.surface_resolution < 4) errs.push_back("quadrature.surface_resolution: must be at least 4");
  if (!(c.profile.step > 0.0 && c.profile.step <= 1e-2)) errs.push_back("profile.step: must lie in (0, 0.01]");
  if (c.profile.half_width != 0.0 && c.profile.half_width < 10.0) {
    errs.push_back("profile.half_width: must be 0 (automatic) or at least 10");
  }
  if (c.t_grid_points < 1) errs.push_back("t_grid_points: must be positive");
  if (c.output_dir.empty()) errs.push_back("output_dir: must not be empty");
  if (c.check_default != "fatal" && c.check_default != "warning") {
    errs.push_back("checks.default: expected fatal or warning");
  }
  for (const auto& [k, v] : c.check_overrides) {
    if (v != "fatal" && v != "warning") errs.push_back("checks.overrides." + k + ": expected fatal or warning");
  }
}

}  // namespace

const char* experiment_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::gamma_limit: return "gamma_limit";
    case ExperimentKind::eta_sweep: return "eta_sweep";
    case ExperimentKind::dirac: return "dirac";
    case ExperimentKind::radial_decomposition: return "radial_decomposition";
    case ExperimentKind::profile_checks: return "profile_checks";
  }
  return "unknown";
}

ExperimentConfig ExperimentConfig::defaults(ExperimentKind k) {
  ExperimentConfig c;
  c.experiment = k;
  switch (k) {
    case ExperimentKind::gamma_limit:
      c.eps_schedule = {0.1, 0.05, 0.025, 0.0125};
      break;
    case ExperimentKind::eta_sweep:
      c.surface.kind = "torus";
      c.surface.n = 3;
      c.L_values = {4.0, 8.0, 16.0, 32.0};
      break;
    case ExperimentKind::dirac:
      c.eps_schedule = {1e-5, 1e-7, 1e-9, 1e-12, 1e-16, 1e-24, 1e-32};
      break;
    case ExperimentKind::radial_decomposition:
      c.eps_schedule = {8e-3, 4e-3, 2e-3, 1e-3};
      break;
    case ExperimentKind::profile_checks:
      break;
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  std::vector<std::string> errs;
  if (!j.is_object() || !j.contains("experiment") || !j.at("experiment").is_string()) {
    fail(ErrorCode::config_error, "config: field 'experiment' (string) is required");
  }
  ExperimentConfig c = defaults(parse_kind(j.at("experiment").get<std::string>()));
  Reader top(j, "", errs);
  std::string kind_name;
  top.get("experiment", kind_name);
  if (const json* p = top.child("potential")) {
    Reader r(*p, "potential", errs);
    r.get("name", c.potential.name);
    r.get("csv", c.potential.csv);
    r.get("scale", c.potential.scale);
    r.finish();
  }
  if (const json* p = top.child("surface")) {
    const bool had_n = p->is_object() && p->contains("n");
    Reader r(*p, "surface", errs);
    r.get("kind", c.surface.kind);
    r.get("radius", c.surface.radius);
    r.get("n", c.surface.n);
    r.get("major", c.surface.major);
    r.get("minor", c.surface.minor);
    r.get("radii", c.surface.radii);
    r.get("innermost_inside", c.surface.innermost_inside);
    r.finish();
    if (c.surface.kind == "torus" && !had_n) c.surface.n = 3;
  }
  top.get("eps_schedule", c.eps_schedule);
  top.get("lambda", c.lambda);
  if (const json* p = top.child("eta")) {
    Reader r(*p, "eta", errs);
    r.get("kind", c.eta.kind);
    r.get("csv", c.eta.csv);
    r.get("L_rule", c.eta.L_rule);
    r.get("L_const", c.eta.L_const);
    r.get("fallback", c.eta.fallback);
    r.get("admissibility", c.eta.admissibility);
    r.finish();
  }
  top.get("L_values", c.L_values);
  if (const json* p = top.child("dirac")) {
    Reader r(*p, "dirac", errs);
    r.get("n", c.dirac.n);
    r.get("gap_factor", c.dirac.gap_factor);
    r.get("k_cap", c.dirac.k_cap);
    r.get("probes", c.dirac.probes);
    r.get("L_rule", c.dirac.L_rule);
    r.finish();
  }
  if (const json* p = top.child("radial")) {
    Reader r(*p, "radial", errs);
    r.get("source", c.radial.source);
    r.get("radii", c.radial.radii);
    r.get("n", c.radial.n);
    r.get("r0", c.radial.r0);
    r.get("r_lo", c.radial.r_lo);
    r.get("r_hi", c.radial.r_hi);
    r.get("grid_step", c.radial.grid_step);
    r.get("csv_files", c.radial.csv_files);
    r.finish();
  }
  if (const json* p = top.child("quadrature")) {
    Reader r(*p, "quadrature", errs);
    r.get("panel_width", c.quadrature.panel_width);
    r.get("order", c.quadrature.order);
    r.get("surface_resolution", c.quadrature.surface_resolution);
    r.finish();
  }
  if (const json* p = top.child("profile")) {
    Reader r(*p, "profile", errs);
    r.get("step", c.profile.step);
    r.get("half_width", c.profile.half_width);
    r.finish();
  }
  top.get("t_grid_points", c.t_grid_points);
  top.get("output_dir", c.output_dir);
  if (const json* p = top.child("checks")) {
    Reader r(*p, "checks", errs);
    r.get("default", c.check_default);
    r.get("overrides", c.check_overrides);
    r.finish();
  }
  top.finish();
  validate(c, errs);
  if (!errs.empty()) {
    std::string msg = "config validation failed:";
    for (const std::string& e : errs) msg += "\n  - " + e;
    fail(ErrorCode::config_error, msg);
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::io_error, "cannot read config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const std::exception& e) {
    fail(ErrorCode::config_error, "config '" + path + "': " + e.what());
  }
  return from_json(j);
}

ojson ExperimentConfig::to_json() const {
  ojson j;
  j["experiment"] = experiment_name(experiment);
  j["potential"] = {{"name", potential.name}, {"csv", potential.csv}, {"scale", potential.scale}};
  j["surface"] = {{"kind", surface.kind},   {"radius", surface.radius}, {"n", surface.n},
                  {"major", surface.major}, {"minor", surface.minor},   {"radii", surface.radii},
                  {"innermost_inside", surface.innermost_inside}};
  j["eps_schedule"] = eps_schedule;
  j["lambda"] = lambda;
  j["eta"] = {{"kind", eta.kind},         {"csv", eta.csv},           {"L_rule", eta.L_rule},
              {"L_const", eta.L_const},   {"fallback", eta.fallback}, {"admissibility", eta.admissibility}};
  j["L_values"] = L_values;
  j["dirac"] = {{"n", dirac.n},
                {"gap_factor", dirac.gap_factor},
                {"k_cap", dirac.k_cap},
                {"probes", dirac.probes},
                {"L_rule", dirac.L_rule}};
  j["radial"] = {{"source", radial.source}, {"radii", radial.radii}, {"n", radial.n},
                 {"r0", radial.r0},         {"r_lo", radial.r_lo},   {"r_hi", radial.r_hi},
                 {"grid_step", radial.grid_step}, {"csv_files", radial.csv_files}};
  j["quadrature"] = {{"panel_width", quadrature.panel_width},
                     {"order", quadrature.order},
                     {"surface_resolution", quadrature.surface_resolution}};
  j["profile"] = {{"step", profile.step}, {"half_width", profile.half_width}};
  j["t_grid_points"] = t_grid_points;
  j["output_dir"] = output_dir;
  ojson ov = ojson::object();
  for (const auto& [k, v] : check_overrides) ov[k] = v;
  j["checks"] = {{"default", check_default}, {"overrides", ov}};
  return j;
}

std::string ExperimentConfig::hash() const {
  ojson j = to_json();
  j.erase("output_dir");
  return fnv1a_hex(j.dump());
}

std::string resolve_output_dir(const ExperimentConfig& cfg, const RunOptions& opt) {
  if (!opt.output_dir.empty()) return opt.output_dir;
  if (const char* env = std::getenv("DGKIT_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return cfg.output_dir;
}

namespace {

struct Context {
  const ExperimentConfig& cfg;
  RunOptions opt;
  std::string dir;
  std::string hash;
  std::string header;
  QuadSpec quad;
  RunResult result;
  ojson summary;
  std::vector<std::array<std::string, 3>> plot;  // series, x, y

  Context(const ExperimentConfig& c, const RunOptions& o) : cfg(c), opt(o) {
    dir = resolve_output_dir(c, o);
    hash = c.hash();
    header = std::string("dgkit experiment=") + experiment_name(c.experiment) + " config_hash=" + hash;
    const double f = std::max(1.0, o.quad_refine);
    quad.panel_width = c.quadrature.panel_width / f;
    quad.order = c.quadrature.order;
    quad.surface_resolution = static_cast<int>(std::lround(c.quadrature.surface_resolution * f));
    summary["experiment"] = experiment_name(c.experiment);
    summary["config_hash"] = hash;
    summary["config"] = c.to_json();
    summary["quad_refine"] = f;
  }

  std::string path(const std::string& suffix) const {
    return (std::filesystem::path(dir) / (std::string(experiment_name(cfg.experiment)) + "_" + hash + suffix)).string();
  }

  void check(const std::string& name, bool passed, const std::string& detail) {
    CheckResult c;
    c.name = name;
    c.passed = passed;
    const auto it = cfg.check_overrides.find(name);
    const std::string policy = it != cfg.check_overrides.end() ? it->second : cfg.check_default;
    c.fatal = policy == "fatal";
    c.detail = detail;
    result.checks.push_back(c);
  }

  void add_plot(const std::string& series, double x, double y) { plot.push_back({series, fmt(x), fmt(y)}); }

  void artifact(const std::string& p) { result.artifacts.push_back(p); }
};

std::shared_ptr<const Potential> build_potential(const PotentialSpec& s) {
  Potential p = s.csv.empty() ? Potential::builtin(s.name) : Potential::from_csv(s.csv);
  if (s.scale != 1.0) p = p.scaled(s.scale);
  return std::make_shared<const Potential>(std::move(p));
}

std::shared_ptr<const Hypersurface> build_surface(const SurfaceSpec& s) {
  if (s.kind == "torus") return std::make_shared<const Hypersurface>(Hypersurface::torus(s.major, s.minor));
  if (s.kind == "concentric_spheres") {
    return std::make_shared<const Hypersurface>(Hypersurface::concentric_spheres(s.radii, s.n, s.innermost_inside));
  }
  return std::make_shared<const Hypersurface>(Hypersurface::sphere(s.radius, s.n));
}

std::vector<double> surface_t_grid(const Hypersurface& surf, int points) {
  std::vector<double> t;
  if (surf.is_radial()) {
    for (const Shell& sh : surf.shells()) t.push_back(sh.orientation * (surf.dim() - 1) / sh.radius);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
  }
  const auto [lo, hi] = surf.curvature_range();
  const int m = std::max(points, 2);
  for (int i = 0; i < m; ++i) t.push_back(lo + (hi - lo) * i / (m - 1));
  return t;
}

AdmissibilityPolicy parse_policy(const std::string& s) {
  return s == "integration" ? AdmissibilityPolicy::integration : AdmissibilityPolicy::lemma_bound;
}

std::shared_ptr<const OptimalProfile> build_profile(const ExperimentConfig& cfg) {
  return OptimalProfile::solve(build_potential(cfg.potential), cfg.profile.half_width, cfg.profile.step);
}

void write_plot(Context& ctx) {
  if (!ctx.opt.emit_plots) return;
  const std::string p = ctx.path("_plot.csv");
  std::ofstream out(p);
  require(static_cast<bool>(out), ErrorCode::io_error, "cannot write '" + p + "'");
  out << "# " << ctx.header << '\n' << "series,x,y\n";
  for (const auto& row : ctx.plot) out << row[0] << ',' << row[1] << ',' << row[2] << '\n';
  ctx.artifact(p);
}

ojson extrap_json(const Extrapolation& e) { return {{"limit", e.limit}, {"order", e.order}, {"fitted", e.fitted}}; }

bool nonincreasing_to_floor(const std::vector<double>& err, double floor) {
  for (std::size_t i = 1; i < err.size(); ++i) {
    if (err[i] <= floor && err[i - 1] <= floor) continue;
    if (!(err[i] < err[i - 1])) return false;
  }
  return true;
}

void run_gamma_limit(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const auto prof = build_profile(cfg);
  const auto surf = build_surface(cfg.surface);
  const auto t_grid = surface_t_grid(*surf, cfg.t_grid_points);
  const double t_max = std::max(std::abs(t_grid.front()), std::abs(t_grid.back()));
  const double sigma = prof->sigma();
  const double target_E = sigma * surf->area();
  const AdmissibilityPolicy policy = parse_policy(cfg.eta.admissibility);
  std::shared_ptr<const PerturbationEta> fixed_eta;
  if (cfg.eta.kind == "zero") fixed_eta = std::make_shared<const ZeroEta>();
  if (cfg.eta.kind == "tabulated") fixed_eta = TabulatedEta::from_csv(cfg.eta.csv);

  std::vector<std::string> rules{cfg.eta.L_rule};
  if (cfg.eta.kind == "eta_L") rules.insert(rules.end(), cfg.eta.fallback.begin(), cfg.eta.fallback.end());
  ojson attempts = ojson::array();
  StudyResult study;
  std::string used_rule;
  std::vector<double> Ls;
  bool done = false;
  std::string last_error;
  for (const std::string& rule_name : rules) {
    const LRule rule = parse_l_rule(rule_name);
    Ls.clear();
    for (double e : cfg.eps_schedule) {
      Ls.push_back(cfg.eta.kind == "eta_L" ? coupled_L(rule, e, cfg.eta.L_const, sigma, t_max) : 0.0);
    }
    auto builder = [&](double eps) {
      std::shared_ptr<const PerturbationEta> eta = fixed_eta;
      if (!eta) eta = build_eta_L(coupled_L(rule, eps, cfg.eta.L_const, sigma, t_max), *surf, prof);
      const auto fam = PerturbedProfileFamily::solve(prof, eta, eps, t_grid, policy);
      return std::make_shared<const RecoveryField>(surf, fam);
    };
    std::vector<double> h;
    if (cfg.eta.kind == "eta_L" && rule != LRule::constant) {
      for (double L : Ls) h.push_back(1.0 / L);
    }
    try {
      study = convergence_study(builder, cfg.eps_schedule, cfg.lambda, ctx.quad, ctx.opt.threads, h);
      attempts.push_back({{"L_rule", rule_name}, {"status", "ok"}});
      used_rule = rule_name;
      done = true;
      break;
    } catch (const Error& err) {
      const bool admissibility = err.code() == ErrorCode::admissibility_violation ||
                                 err.code() == ErrorCode::integration_failure;
      attempts.push_back({{"L_rule", rule_name}, {"status", error_code_name(err.code())}, {"message", err.what()}});
      last_error = err.what();
      if (!admissibility || cfg.eta.kind != "eta_L") throw;
    }
  }
  ctx.summary["L_rule_attempts"] = attempts;
  if (!done) {
    ctx.summary["L_rule_used"] = nullptr;
    ctx.check("admissible_schedule", false, "no L rule admissible along the schedule: " + last_error);
    return;
  }
  ctx.summary["L_rule_used"] = cfg.eta.kind == "eta_L" ? ojson(used_rule) : ojson(nullptr);
  ctx.summary["extrapolation_variable"] = cfg.eta.kind == "eta_L" ? "1/L" : "eps";

  const std::string csv = ctx.path(".csv");
  {
    std::ofstream out(csv);
    require(static_cast<bool>(out), ErrorCode::io_error, "cannot write '" + csv + "'");
    out << "# " << ctx.header << '\n';
    out << "eps,L,E,G,G_hat,DG,mu_total,xi_total,xi_abs,E_on_A,E_on_B,G_on_A,G_on_B,lambda\n";
    for (std::size_t i = 0; i < study.rows.size(); ++i) {
      const EnergyReport& r = study.rows[i];
      out << fmt(r.eps) << ',' << fmt(Ls[i]) << ',' << fmt(r.E) << ',' << fmt(r.G) << ',' << fmt(r.G_hat) << ','
          << fmt(r.DG) << ',' << fmt(r.mu_total) << ',' << fmt(r.xi_total) << ',' << fmt(r.xi_abs) << ','
          << fmt(r.E_on_A) << ',' << fmt(r.E_on_B) << ',' << fmt(r.G_on_A) << ',' << fmt(r.G_on_B) << ','
          << fmt(r.lambda) << '\n';
      for (const auto& [name, v] : {std::pair{"E", r.E}, {"G", r.G}, {"G_hat", r.G_hat}, {"DG", r.DG}}) {
        ctx.add_plot(name, r.eps, v);
      }
    }
  }
  ctx.artifact(csv);
  const StudySummary& s = study.summary;
  ctx.summary["extrapolated_limits"] = {{"E", extrap_json(s.E)},
                                        {"G", extrap_json(s.G)},
                                        {"DG", extrap_json(s.DG)},
                                        {"G_hat", extrap_json(s.G_hat)}};
  ctx.summary["fitted_orders"] = {{"E", s.E.order}, {"G", s.G.order}, {"DG", s.DG.order}, {"G_hat", s.G_hat.order}};
  ctx.summary["targets"] = {{"E", target_E}, {"DG", cfg.lambda * target_E}};
  ctx.summary["cutoff"] = "quintic smoothstep on each unit ramp";

  std::vector<double> err;
  for (const EnergyReport& r : study.rows) err.push_back(std::abs(r.E - target_E));
  ctx.check("E_error_decreasing", nonincreasing_to_floor(err, 1e-12 * target_E),
            "|E - sigma |Sigma|| = " + short_fmt(err.front()) + " -> " + short_fmt(err.back()));
  const double relE = std::abs(s.E.limit - target_E) / target_E;
  ctx.check("E_limit_within_1pct", relE <= 0.01,
            "extrapolated E = " + fmt(s.E.limit) + ", target " + fmt(target_E) + ", rel " + short_fmt(relE));
  if (cfg.eta.kind == "zero") {
    const double twoF0 = 2.0 * F(ZeroEta(), *surf, *prof, {ctx.quad.panel_width, ctx.quad.order, ctx.quad.surface_resolution});
    const double relG = std::abs(s.G.limit - twoF0) / twoF0;
    ctx.summary["targets"]["G"] = twoF0;
    ctx.check("G_limit_matches_2F0", s.G.limit > 0.0 && relG <= 0.10,
              "extrapolated G = " + fmt(s.G.limit) + ", 2 F(0) = " + fmt(twoF0) + ", rel " + short_fmt(relG));
  } else {
    const double relDG = std::abs(s.DG.limit - cfg.lambda * target_E) / (cfg.lambda * target_E);
    ctx.check("G_decreasing", s.G_decreasing,
              "G = " + short_fmt(study.rows.front().G) + " -> " + short_fmt(study.rows.back().G));
    ctx.check("DG_limit_within_5pct", relDG <= 0.05,
              "extrapolated DG = " + fmt(s.DG.limit) + ", target " + fmt(cfg.lambda * target_E) + ", rel " +
                  short_fmt(relDG));
    ctx.check("G_hat_increasing", s.G_hat_increasing,
              "G_hat = " + short_fmt(study.rows.front().G_hat) + " -> " + short_fmt(study.rows.back().G_hat));
  }
  std::vector<double> ratio;
  for (const EnergyReport& r : study.rows) ratio.push_back(r.E > 0.0 ? r.xi_abs / r.E : 0.0);
  ctx.check("equipartition_monotone", s.equipartition_monotone,
            "|xi| / E = " + short_fmt(ratio.front()) + " -> " + short_fmt(ratio.back()));

  std::string table = "eps          L          E              G              G_hat          DG\n";
  for (std::size_t i = 0; i < study.rows.size(); ++i) {
    const EnergyReport& r = study.rows[i];
    char buf[200];
    std::snprintf(buf, sizeof buf, "%-12.4g %-10.4g %-14.10g %-14.8g %-14.6g %-14.10g\n", r.eps, Ls[i], r.E, r.G,
                  r.G_hat, r.DG);
    table += buf;
  }
  ctx.result.summary += table;

  if (ctx.opt.emit_plots) {
    const double eps = cfg.eps_schedule.back();
    std::shared_ptr<const PerturbationEta> eta = fixed_eta;
    if (!eta) eta = build_eta_L(Ls.back(), *surf, prof);
    const RecoveryField f(surf, PerturbedProfileFamily::solve(prof, eta, eps, t_grid, policy));
    const std::string slice = ctx.path("_slice.csv");
    if (surf->kind() == SurfaceKind::torus) {
      export_torus_slice(f, 64, 201, slice);
    } else {
      const double w = eps * (f.theta().outer() + 2.0);
      const auto& sh = surf->shells();
      double lo = sh.front().radius, hi = sh.front().radius;
      for (const Shell& s : sh) {
        lo = std::min(lo, s.radius);
        hi = std::max(hi, s.radius);
      }
      export_radial_slice(f, std::max(1e-6, lo - w), hi + w, 2001, slice);
    }
    ctx.artifact(slice);
  }
}

void run_eta_sweep(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const auto prof = build_profile(cfg);
  const auto surf = build_surface(cfg.surface);
  const QuadratureOptions q{ctx.quad.panel_width, ctx.quad.order, ctx.quad.surface_resolution};
  const auto rows = eta_sweep(cfg.L_values, *surf, prof, q, ctx.opt.threads);
  const std::string csv = ctx.path(".csv");
  {
    std::ofstream out(csv);
    require(static_cast<bool>(out), ErrorCode::io_error, "cannot write '" + csv + "'");
    out << "# " << ctx.header << '\n' << "L,F,F_hat,F_hat_decomposed,bound,overflow\n";
    for (const SweepRow& r : rows) {
      out << fmt(r.L) << ',' << fmt(r.F) << ',' << fmt(r.F_hat) << ',' << fmt(r.F_hat_decomposed) << ','
          << fmt(r.bound) << ',' << (r.overflow ? 1 : 0) << '\n';
      ctx.add_plot("F", r.L, r.F);
      ctx.add_plot("F_hat", r.L, r.F_hat);
      ctx.add_plot("bound", r.L, r.bound);
    }
  }
  ctx.artifact(csv);
  std::vector<double> L, Fv;
  bool dec = true, below = true, inc = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    L.push_back(rows[i].L);
    Fv.push_back(rows[i].F);
    below = below && rows[i].F < rows[i].bound;
    if (i > 0) {
      dec = dec && rows[i].F < rows[i - 1].F;
      inc = inc && rows[i].F_hat > rows[i - 1].F_hat;
    }
  }
  const double slope = loglog_slope(L, Fv);
  ctx.summary["fitted_exponent"] = slope;
  ctx.summary["tail_constant"] = prof->tail_constant();
  ctx.check("F_decreasing", dec, "F = " + short_fmt(Fv.front()) + " -> " + short_fmt(Fv.back()));
  ctx.check("F_exponent_in_range", slope >= -1.3 && slope <= -0.7, "fitted exponent " + short_fmt(slope));
  ctx.check("F_below_bound", below, "every F below 2L int 4H^2 [C^2 exp(-2L/C) + sigma/L]^2");
  ctx.check("F_hat_increasing", inc,
            "F_hat = " + short_fmt(rows.front().F_hat) + " -> " + short_fmt(rows.back().F_hat));
  std::string table = "L          F              F_hat          bound\n";
  for (const SweepRow& r : rows) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-10.4g %-14.8g %-14.6g %-14.8g\n", r.L, r.F, r.F_hat, r.bound);
    table += buf;
  }
  ctx.result.summary += table;
}

void run_dirac(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const auto prof = build_profile(cfg);
  DiracOptions o;
  o.k_rule.gap_factor = cfg.dirac.gap_factor;
  o.k_rule.k_cap = cfg.dirac.k_cap;
  o.l_rule = parse_l_rule(cfg.dirac.L_rule);
  o.L_const = cfg.eta.L_const;
  o.lambda = cfg.lambda;
  o.quad = ctx.quad;
  o.threads = ctx.opt.threads;
  const DiracStudy st = dirac_study(prof, cfg.dirac.n, cfg.eps_schedule, cfg.dirac.probes, o);
  const std::string csv = ctx.path(".csv");
  write_dirac_csv(st, csv, ctx.header);
  ctx.artifact(csv);
  for (const DiracRow& r : st.rows) {
    ctx.add_plot("E", r.eps, r.report.E);
    ctx.add_plot("G", r.eps, r.report.G);
    for (std::size_t p = 0; p < st.probes.size(); ++p) ctx.add_plot("mu_out_" + fmt(st.probes[p]), r.eps, r.mu_out[p]);
  }
  double worst = 0.0;
  for (int k = 1; k <= 6; ++k) {
    for (int n : {2, 3}) {
      double s = 0.0;
      for (double r : nested_radii(k, n)) s += sphere_area(n) * std::pow(r, n - 1);
      worst = std::max(worst, std::abs(s - 1.0));
    }
  }
  ctx.summary["radii_identity_max_error"] = worst;
  ctx.summary["k_rule"] = {{"gap_factor", cfg.dirac.gap_factor}, {"k_cap", cfg.dirac.k_cap}};
  ctx.summary["max_E_plus_G"] = st.summary.max_E_plus_G;
  ctx.check("radii_identity", worst <= 1e-12, "max |sum omega r^(n-1) - 1| = " + short_fmt(worst));
  const double r_max = nested_radii(cfg.dirac.k_cap, cfg.dirac.n).back();
  double mu_in = 1.0, mu_out = 0.0;
  for (std::size_t p = 0; p < st.probes.size(); ++p) {
    if (st.probes[p] <= r_max) continue;
    mu_in = std::min(mu_in, st.rows.back().mu_in[p]);
    mu_out = std::max(mu_out, st.rows.back().mu_out[p]);
  }
  ctx.summary["tail_mu_in_min"] = mu_in;
  ctx.summary["tail_exterior_max"] = mu_out;
  ctx.check("mu_in_ball_tail", mu_in >= 0.99, "min mu(B_r) at the tail = " + fmt(mu_in));
  ctx.check("exterior_mass_tail", mu_out <= 0.01, "max exterior mass at the tail = " + short_fmt(mu_out));
  ctx.check("exterior_mass_nonincreasing", st.summary.exterior_nonincreasing, "exterior mass per probe");
  ctx.check("G_decreasing_tail", st.summary.G_decreasing_tail,
            "G over the rows with k = " + std::to_string(st.rows.back().k));
  ctx.check("E_plus_G_finite", std::isfinite(st.summary.max_E_plus_G),
            "max(E + G) over the schedule = " + short_fmt(st.summary.max_E_plus_G));
  std::string table = "eps          k  L          E              G              mu_total\n";
  for (const DiracRow& r : st.rows) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-12.4g %-2d %-10.4g %-14.10g %-14.8g %-14.10g\n", r.eps, r.k, r.L, r.report.E,
                  r.report.G, r.report.mu_total);
    table += buf;
  }
  ctx.result.summary += table;
}

void run_radial(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const RadialSpec& rs = cfg.radial;
  const auto prof = build_profile(cfg);
  RadialBuilder builder;
  std::vector<double> expected = rs.radii;
  std::sort(expected.begin(), expected.end(), std::greater<>());
  if (rs.source == "synthetic") {
    builder = [&](double eps) {
      return std::make_shared<const RadialField>(
          RadialField::synthetic_shells(*prof, rs.radii, eps, rs.n, rs.r_lo, rs.r_hi, rs.grid_step * eps));
    };
  } else if (rs.source == "recovery") {
    const bool innermost_inside = expected.size() % 2 == 1;
    const auto surf =
        std::make_shared<const Hypersurface>(Hypersurface::concentric_spheres(expected, rs.n, innermost_inside));
    const auto t_grid = surface_t_grid(*surf, cfg.t_grid_points);
    builder = [&, surf, t_grid](double eps) {
      const auto fam = PerturbedProfileFamily::solve(prof, std::make_shared<const ZeroEta>(), eps, t_grid);
      const RecoveryField f(surf, fam);
      const auto count = static_cast<std::size_t>(std::ceil((rs.r_hi - rs.r_lo) / (rs.grid_step * eps))) + 1;
      return std::make_shared<const RadialField>(RadialField::sample_recovery(f, rs.r_lo, rs.r_hi, count));
    };
  } else {
    expected.clear();
    builder = [&](double eps) {
      const auto it = std::find(cfg.eps_schedule.begin(), cfg.eps_schedule.end(), eps);
      const auto idx = static_cast<std::size_t>(it - cfg.eps_schedule.begin());
      return std::make_shared<const RadialField>(
          RadialField::from_csv(rs.csv_files.at(idx), eps, rs.n, prof->potential_ptr()));
    };
  }
  const InterfaceDecomposition dec = decompose(builder, *prof, cfg.eps_schedule, rs.r0, default_window,
                                               ctx.opt.threads);
  const std::string js = ctx.path("_decomposition.json");
  {
    std::ofstream out(js);
    require(static_cast<bool>(out), ErrorCode::io_error, "cannot write '" + js + "'");
    ojson j = ojson::parse(dec.to_json());
    j["config_hash"] = ctx.hash;
    out << j.dump(2) << '\n';
  }
  ctx.artifact(js);
  const std::string csv = ctx.path(".csv");
  {
    std::ofstream out(csv);
    require(static_cast<bool>(out), ErrorCode::io_error, "cannot write '" + csv + "'");
    out << "# " << ctx.header << '\n' << "eps,m,crossings,total_mass,residual_mass,discrepancy_mass,max_match_c1\n";
    for (const EpsDecomposition& e : dec.per_eps) {
      const double c1 = e.match_c1.empty() ? 0.0 : *std::max_element(e.match_c1.begin(), e.match_c1.end());
      out << fmt(e.eps) << ',' << fmt(e.m) << ',' << e.crossings.size() << ',' << fmt(e.total_mass) << ','
          << fmt(e.residual_mass) << ',' << fmt(e.discrepancy_mass) << ',' << fmt(c1) << '\n';
      for (std::size_t i = 0; i < e.masses.size(); ++i) ctx.add_plot("mass_" + std::to_string(i), e.eps, e.masses[i]);
      ctx.add_plot("residual_mass", e.eps, e.residual_mass);
      ctx.add_plot("discrepancy_mass", e.eps, e.discrepancy_mass);
    }
  }
  ctx.artifact(csv);
  const double sigma = prof->sigma();
  const double eps = cfg.eps_schedule.back();
  ctx.check("crossing_count_stable", dec.stable, dec.stable ? "eventually constant" : dec.instability);
  if (!expected.empty()) {
    bool radii_ok = dec.radii.size() == expected.size();
    bool mass_ok = radii_ok;
    double worst_r = 0.0, worst_m = 0.0;
    for (std::size_t i = 0; radii_ok && i < expected.size(); ++i) {
      worst_r = std::max(worst_r, std::abs(dec.radii[i] - expected[i]));
      const double target = sphere_area(rs.n) * sigma * std::pow(expected[i], rs.n - 1);
      worst_m = std::max(worst_m, std::abs(dec.masses[i] - target) / target);
    }
    radii_ok = radii_ok && worst_r <= 10.0 * eps;
    mass_ok = mass_ok && worst_m <= 0.02;
    ctx.check("radii_recovered", radii_ok, "max |dr| = " + short_fmt(worst_r) + " (limit " + short_fmt(10 * eps) + ")");
    ctx.check("masses_within_2pct", mass_ok, "max relative mass error " + short_fmt(worst_m));
  }
  ctx.check("residual_mass_small", dec.residual_mass <= 0.01, "residual fraction " + short_fmt(dec.residual_mass));
  ctx.check("discrepancy_mass_small", dec.discrepancy_mass <= 0.01,
            "discrepancy fraction " + short_fmt(dec.discrepancy_mass));
  double c1 = 0.0;
  for (double v : dec.per_eps.back().match_c1) c1 = std::max(c1, v);
  ctx.check("match_c1_small", c1 <= 1e-4, "max C1 match distance " + short_fmt(c1));
  ctx.summary["radii"] = dec.radii;
  ctx.summary["masses"] = dec.masses;
  ctx.summary["residual_mass"] = dec.residual_mass;
  ctx.summary["discrepancy_mass"] = dec.discrepancy_mass;
  std::string table = "eps          m          crossings  residual       discrepancy\n";
  for (const EpsDecomposition& e : dec.per_eps) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-12.4g %-10.4g %-10zu %-14.6g %-14.6g\n", e.eps, e.m, e.crossings.size(),
                  e.residual_mass, e.discrepancy_mass);
    table += buf;
  }
  ctx.result.summary += table;
}

void run_profile_checks(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const auto pot = build_potential(cfg.potential);
  const auto prof = OptimalProfile::solve(pot, cfg.profile.half_width, cfg.profile.step);
  const PotentialReport rep = verify_assumptions(*pot);
  const double sig = prof->sigma();
  ojson vals;
  vals["sigma"] = sig;
  vals["assumptions"] = ojson::parse(rep.to_json());
  const bool builtin = cfg.potential.csv.empty() && cfg.potential.scale == 1.0;
  if (builtin) {
    const double exact = cfg.potential.name == "cosine" ? 8.0 * std::numbers::sqrt2 : 8.0 / 3.0;
    ctx.check("sigma_closed_form", std::abs(sig - exact) <= 1e-8 * exact, "sigma = " + fmt(sig) + ", exact " + fmt(exact));
    double err = 0.0;
    for (int i = 0; i <= 20000; ++i) {
      const double s = -10.0 + 20.0 * i / 20000.0;
      const double ref = cfg.potential.name == "cosine" ? 4.0 * std::atan(std::exp(s / std::numbers::sqrt2))
                                                         : std::tanh(s);
      err = std::max(err, std::abs(prof->value(s) - ref));
    }
    vals["profile_oracle_error"] = err;
    ctx.check("profile_oracle", err <= 1e-6, "sup |q0 - closed form| on [-10, 10] = " + short_fmt(err));
  }
  const double kink_err = std::abs(prof->kink_energy() - 0.5 * sig);
  vals["kink_energy"] = prof->kink_energy();
  ctx.check("kink_energy", kink_err <= 1e-7, "|kink - sigma/2| = " + short_fmt(kink_err));
  vals["ode_residual"] = prof->ode_residual();
  ctx.check("ode_residual", prof->ode_residual() <= 1e-8, "max |q0' - sqrt(W(q0))| = " + short_fmt(prof->ode_residual()));
  const double C = prof->tail_constant();
  bool tails = std::isfinite(C) && C >= 1.0;
  for (std::size_t i = 0; tails && i < prof->table().size(); ++i) {
    const double s = prof->table().node(i);
    const ProfilePoint pt = prof->table().at_node(i);
    const double bound = C * std::exp(-std::abs(s) / C);
    tails = pt.offset <= bound && std::abs(pt.dq) <= bound && std::abs(pt.ddq) <= bound;
  }
  vals["tail_constant"] = C;
  ctx.check("tail_bound", tails, "|q0 - well|, |q0'|, |q0''| <= C exp(-|s|/C) with C = " + short_fmt(C));
  ctx.check("assumptions", rep.flags.w1 && rep.flags.w2 && rep.flags.w3,
            std::string("W1 ") + (rep.flags.w1 ? "ok" : "fail") + ", W2 " + (rep.flags.w2 ? "ok" : "fail") +
                ", W3 " + (rep.flags.w3 ? "ok" : "fail"));

  const auto surf = build_surface(cfg.surface);
  const auto eta = build_eta_L(8.0, *surf, prof);
  const double eps0 = compute_eps0(*eta, *prof);
  const auto [hlo, hhi] = surf->curvature_range();
  std::vector<double> t_grid;
  const int m = std::max(cfg.t_grid_points, 2);
  for (int i = 0; i < m; ++i) t_grid.push_back((hlo - 1.0) + (hhi - hlo + 2.0) * i / (m - 1));
  const auto fam = PerturbedProfileFamily::solve(prof, eta, eps0 / 10.0, t_grid, AdmissibilityPolicy::lemma_bound,
                                                 0.0, ctx.opt.threads);
  const double r1 = fam->identity_residual_first();
  const double r2 = fam->identity_residual_second_fd();
  vals["eps0"] = eps0;
  vals["identity_residual_first"] = r1;
  vals["identity_residual_second"] = r2;
  ctx.check("identity_first", r1 <= 1e-7, "sup |q_s^2 - W(q) + eps eta| = " + short_fmt(r1));
  ctx.check("identity_second", r2 <= 1e-5, "sup |2 q_ss - W'(q) + eps eta_s / q_s| = " + short_fmt(r2));
  // Sup norms at eps0 / 10 sit below double resolution, so the limit sequence uses L = 1 at eps = 1e-2 / 2^k.
  const auto eta1 = build_eta_L(1.0, *surf, prof);
  std::vector<std::shared_ptr<const PerturbedProfileFamily>> fams;
  for (int k = 0; k < 4; ++k) {
    fams.push_back(PerturbedProfileFamily::solve(prof, eta1, 1e-2 / std::pow(2.0, k), t_grid,
                                                 AdmissibilityPolicy::integration, 0.0, ctx.opt.threads));
  }
  const FamilyLimitReport lim = verify_family_limits(fams);
  ctx.check("family_limits", lim.monotone && lim.ratios_ok,
            lim.violations.empty() ? "sup norms decrease with halving ratios at most 0.7" : lim.violations.front());
  vals["family_limits"] = {{"eps", lim.eps},       {"sup_q", lim.sup_q},     {"sup_dq", lim.sup_dq},
                           {"sup_dt", lim.sup_dt}, {"sup_dtt", lim.sup_dtt}, {"notes", lim.notes}};
  ctx.summary["values"] = vals;
  for (std::size_t i = 0; i < prof->table().size(); i += 100) {
    const ProfilePoint pt = prof->table().at_node(i);
    ctx.add_plot("q0", prof->table().node(i), pt.q);
    ctx.add_plot("dq0", prof->table().node(i), pt.dq);
  }
  const std::string csv = ctx.path(".csv");
  export_profile_csv(*prof, csv, 10);
  ctx.artifact(csv);
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opt) {
  require(opt.threads >= 1, ErrorCode::invalid_argument, "run: threads must be at least 1");
  require(opt.quad_refine >= 1.0, ErrorCode::invalid_argument, "run: quad refine factor must be at least 1");
  Context ctx(cfg, opt);
  std::error_code ec;
  std::filesystem::create_directories(ctx.dir, ec);
  require(!ec, ErrorCode::io_error, "cannot create output directory '" + ctx.dir + "': " + ec.message());
  switch (cfg.experiment) {
    case ExperimentKind::gamma_limit: run_gamma_limit(ctx); break;
    case ExperimentKind::eta_sweep: run_eta_sweep(ctx); break;
    case ExperimentKind::dirac: run_dirac(ctx); break;
    case ExperimentKind::radial_decomposition: run_radial(ctx); break;
    case ExperimentKind::profile_checks: run_profile_checks(ctx); break;
  }
  write_plot(ctx);
  ojson checks = ojson::array();
  int failed_fatal = 0;
  std::string lines;
  for (const CheckResult& c : ctx.result.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"fatal", c.fatal}, {"detail", c.detail}});
    if (!c.passed && c.fatal) ++failed_fatal;
    lines += std::string(c.passed ? "PASS " : (c.fatal ? "FAIL " : "WARN ")) + c.name + ": " + c.detail + "\n";
  }
  ctx.summary["checks"] = checks;
  const std::string js = ctx.path("_summary.json");
  {
    std::ofstream out(js);
    require(static_cast<bool>(out), ErrorCode::io_error, "cannot write '" + js + "'");
    out << ctx.summary.dump(2) << '\n';
  }
  ctx.artifact(js);
  ctx.result.exit_code = failed_fatal > 0 ? 3 : 0;
  ctx.result.summary = std::string(experiment_name(cfg.experiment)) + " (config " + ctx.hash + ")\n" +
                       ctx.result.summary + lines;
  for (const std::string& a : ctx.result.artifacts) ctx.result.summary += "wrote " + a + "\n";
  return ctx.result;
}

}  // namespace dgkit
