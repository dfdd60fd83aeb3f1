#include "dgkit/dgkit.h"

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "dgkit/corollary.hpp"
#include "dgkit/error.hpp"
#include "dgkit/eta_design.hpp"
#include "dgkit/experiment.hpp"
#include "dgkit/functionals.hpp"
#include "dgkit/geometry.hpp"
#include "dgkit/potential.hpp"
#include "dgkit/profile.hpp"
#include "dgkit/recovery.hpp"

struct dg_potential {
  std::shared_ptr<const dgkit::Potential> p;
};
struct dg_profile {
  std::shared_ptr<const dgkit::OptimalProfile> p;
};
struct dg_surface {
  std::shared_ptr<const dgkit::Hypersurface> s;
};
struct dg_eta {
  std::shared_ptr<const dgkit::PerturbationEta> e;
};
struct dg_family {
  std::shared_ptr<const dgkit::PerturbedProfileFamily> f;
};
struct dg_field {
  std::shared_ptr<const dgkit::RecoveryField> f;
};
struct dg_config {
  dgkit::ExperimentConfig cfg;
  std::string json;
  std::string hash;
};
struct dg_run_result {
  dgkit::RunResult r;
};

namespace {

thread_local std::string last_error;

dg_status set_error(dg_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class F>
dg_status guarded(F&& fn) {
  last_error.clear();
  try {
    fn();
    return DG_OK;
  } catch (const dgkit::Error& e) {
    return set_error(static_cast<dg_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::exception& e) {
    return set_error(DG_INTERNAL_ERROR, e.what());
  } catch (...) {
    return set_error(DG_INTERNAL_ERROR, "unknown exception");
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) dgkit::fail(dgkit::ErrorCode::invalid_argument, std::string(what) + " must not be NULL");
}

dgkit::QuadSpec quad_of(const dg_quadrature* q) {
  dgkit::QuadSpec s;
  if (q != nullptr) {
    s.panel_width = q->panel_width;
    s.order = q->order;
    s.surface_resolution = q->surface_resolution;
  }
  return s;
}

dg_config* wrap_config(dgkit::ExperimentConfig c) {
  auto* out = new dg_config{std::move(c), {}, {}};
  out->json = out->cfg.to_json().dump(2);
  out->hash = out->cfg.hash();
  return out;
}

}  // namespace

extern "C" {

const char* dg_version(void) { return "1.0.0"; }

const char* dg_status_name(dg_status status) {
  switch (status) {
    case DG_OK: return "ok";
    case DG_BUFFER_TOO_SMALL: return "buffer_too_small";
    default:
      if (status >= DG_INVALID_ARGUMENT && status <= DG_INTERNAL_ERROR) {
        return dgkit::error_code_name(static_cast<dgkit::ErrorCode>(static_cast<int>(status)));
      }
      return "unknown";
  }
}

const char* dg_last_error(void) { return last_error.c_str(); }

dg_status dg_potential_builtin(const char* name, dg_potential** out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    *out = new dg_potential{std::make_shared<const dgkit::Potential>(dgkit::Potential::builtin(name))};
  });
}

dg_status dg_potential_from_csv(const char* path, dg_potential** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new dg_potential{std::make_shared<const dgkit::Potential>(dgkit::Potential::from_csv(path))};
  });
}

void dg_potential_free(dg_potential* p) { delete p; }

dg_status dg_potential_eval(const dg_potential* p, double u, double* w, double* dw, double* ddw) {
  return guarded([&] {
    need(p, "potential");
    if (w) *w = p->p->w(u);
    if (dw) *dw = p->p->dw(u);
    if (ddw) *ddw = p->p->ddw(u);
  });
}

dg_status dg_potential_wells(const dg_potential* p, double* a, double* b) {
  return guarded([&] {
    need(p, "potential");
    if (a) *a = p->p->a();
    if (b) *b = p->p->b();
  });
}

dg_status dg_potential_sigma(const dg_potential* p, double* out) {
  return guarded([&] {
    need(p, "potential");
    need(out, "out");
    *out = dgkit::sigma(*p->p);
  });
}

dg_status dg_potential_check(const dg_potential* p, int* w1, int* w2, int* w3) {
  return guarded([&] {
    need(p, "potential");
    const dgkit::PotentialReport r = dgkit::verify_assumptions(*p->p);
    if (w1) *w1 = r.flags.w1 ? 1 : 0;
    if (w2) *w2 = r.flags.w2 ? 1 : 0;
    if (w3) *w3 = r.flags.w3 ? 1 : 0;
  });
}

dg_status dg_profile_solve(const dg_potential* p, double s_max, double step, dg_profile** out) {
  return guarded([&] {
    need(p, "potential");
    need(out, "out");
    *out = new dg_profile{dgkit::OptimalProfile::solve(p->p, s_max, step)};
  });
}

void dg_profile_free(dg_profile* prof) { delete prof; }

dg_status dg_profile_eval(const dg_profile* prof, double s, double* q, double* dq, double* ddq) {
  return guarded([&] {
    need(prof, "profile");
    const dgkit::ProfilePoint pt = prof->p->eval(s);
    if (q) *q = pt.q;
    if (dq) *dq = pt.dq;
    if (ddq) *ddq = pt.ddq;
  });
}

dg_status dg_profile_sigma(const dg_profile* prof, double* out) {
  return guarded([&] {
    need(prof, "profile");
    need(out, "out");
    *out = prof->p->sigma();
  });
}

dg_status dg_profile_kink_energy(const dg_profile* prof, double* out) {
  return guarded([&] {
    need(prof, "profile");
    need(out, "out");
    *out = prof->p->kink_energy();
  });
}

dg_status dg_profile_tail_constant(const dg_profile* prof, double* out) {
  return guarded([&] {
    need(prof, "profile");
    need(out, "out");
    *out = prof->p->tail_constant();
  });
}

dg_status dg_surface_sphere(double radius, int n, dg_surface** out) {
  return guarded([&] {
    need(out, "out");
    *out = new dg_surface{std::make_shared<const dgkit::Hypersurface>(dgkit::Hypersurface::sphere(radius, n))};
  });
}

dg_status dg_surface_concentric(const double* radii, size_t count, int n, int innermost_inside, dg_surface** out) {
  return guarded([&] {
    need(radii, "radii");
    need(out, "out");
    std::vector<double> r(radii, radii + count);
    *out = new dg_surface{std::make_shared<const dgkit::Hypersurface>(
        dgkit::Hypersurface::concentric_spheres(std::move(r), n, innermost_inside != 0))};
  });
}

dg_status dg_surface_torus(double major, double minor, dg_surface** out) {
  return guarded([&] {
    need(out, "out");
    *out = new dg_surface{std::make_shared<const dgkit::Hypersurface>(dgkit::Hypersurface::torus(major, minor))};
  });
}

void dg_surface_free(dg_surface* s) { delete s; }

dg_status dg_surface_dim(const dg_surface* s, int* out) {
  return guarded([&] {
    need(s, "surface");
    need(out, "out");
    *out = s->s->dim();
  });
}

dg_status dg_surface_area(const dg_surface* s, double* out) {
  return guarded([&] {
    need(s, "surface");
    need(out, "out");
    *out = s->s->area();
  });
}

dg_status dg_surface_signed_distance(const dg_surface* s, const double* x, size_t dim, double* out) {
  return guarded([&] {
    need(s, "surface");
    need(x, "x");
    need(out, "out");
    *out = s->s->signed_distance(std::span<const double>(x, dim));
  });
}

dg_status dg_surface_curvature_range(const dg_surface* s, double* h_min, double* h_max) {
  return guarded([&] {
    need(s, "surface");
    const auto [lo, hi] = s->s->curvature_range();
    if (h_min) *h_min = lo;
    if (h_max) *h_max = hi;
  });
}

dg_status dg_eta_zero(dg_eta** out) {
  return guarded([&] {
    need(out, "out");
    *out = new dg_eta{std::make_shared<const dgkit::ZeroEta>()};
  });
}

dg_status dg_eta_L(double L, const dg_surface* s, const dg_profile* prof, dg_eta** out) {
  return guarded([&] {
    need(s, "surface");
    need(prof, "profile");
    need(out, "out");
    *out = new dg_eta{dgkit::build_eta_L(L, *s->s, prof->p)};
  });
}

dg_status dg_eta_from_csv(const char* path, dg_eta** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new dg_eta{dgkit::TabulatedEta::from_csv(path)};
  });
}

void dg_eta_free(dg_eta* eta) { delete eta; }

dg_status dg_eta_eval(const dg_eta* eta, double t, double s, double* value, double* d_s) {
  return guarded([&] {
    need(eta, "eta");
    if (value) *value = eta->e->eval(t, s);
    if (d_s) *d_s = eta->e->d_s(t, s);
  });
}

dg_status dg_eta_eps0(const dg_eta* eta, const dg_profile* prof, double* out) {
  return guarded([&] {
    need(eta, "eta");
    need(prof, "profile");
    need(out, "out");
    *out = dgkit::compute_eps0(*eta->e, *prof->p);
  });
}

dg_status dg_eta_F(const dg_eta* eta, const dg_surface* s, const dg_profile* prof, double* out) {
  return guarded([&] {
    need(eta, "eta");
    need(s, "surface");
    need(prof, "profile");
    need(out, "out");
    *out = dgkit::F(*eta->e, *s->s, *prof->p);
  });
}

dg_status dg_eta_F_hat(const dg_eta* eta, const dg_surface* s, const dg_profile* prof, double* out, int* overflow) {
  return guarded([&] {
    need(eta, "eta");
    need(s, "surface");
    need(prof, "profile");
    need(out, "out");
    const dgkit::FHatValue v = dgkit::F_hat(*eta->e, *s->s, *prof->p);
    *out = v.value;
    if (overflow) *overflow = v.overflow ? 1 : 0;
  });
}

dg_status dg_family_solve(const dg_profile* prof, const dg_eta* eta, double eps, const double* t_grid, size_t t_count,
                          dg_admissibility policy, dg_family** out) {
  return guarded([&] {
    need(prof, "profile");
    need(eta, "eta");
    need(t_grid, "t_grid");
    need(out, "out");
    const auto pol = policy == DG_ADMISSIBILITY_INTEGRATION ? dgkit::AdmissibilityPolicy::integration
                                                            : dgkit::AdmissibilityPolicy::lemma_bound;
    *out = new dg_family{dgkit::PerturbedProfileFamily::solve(prof->p, eta->e, eps,
                                                              std::vector<double>(t_grid, t_grid + t_count), pol)};
  });
}

void dg_family_free(dg_family* fam) { delete fam; }

dg_status dg_family_eval(const dg_family* fam, double t, double s, double* q, double* q_s, double* q_t) {
  return guarded([&] {
    need(fam, "family");
    const dgkit::FamilyPoint p = fam->f->eval(t, s);
    if (q) *q = p.q;
    if (q_s) *q_s = p.q_s;
    if (q_t) *q_t = p.q_t;
  });
}

dg_status dg_family_identity_residuals(const dg_family* fam, double* first, double* second) {
  return guarded([&] {
    need(fam, "family");
    if (first) *first = fam->f->identity_residual_first();
    if (second) *second = fam->f->identity_residual_second_fd();
  });
}

dg_status dg_field_create(const dg_surface* s, const dg_family* fam, dg_field** out) {
  return guarded([&] {
    need(s, "surface");
    need(fam, "family");
    need(out, "out");
    *out = new dg_field{std::make_shared<const dgkit::RecoveryField>(s->s, fam->f)};
  });
}

void dg_field_free(dg_field* f) { delete f; }

dg_status dg_field_eval(const dg_field* f, const double* x, size_t dim, double* u, double* grad, double* lap) {
  return guarded([&] {
    need(f, "field");
    need(x, "x");
    if (static_cast<int>(dim) != f->f->surface().dim()) {
      dgkit::fail(dgkit::ErrorCode::invalid_argument, "field eval: point dimension does not match the surface");
    }
    const dgkit::FieldValue v = f->f->eval(std::span<const double>(x, dim));
    if (u) *u = v.u;
    if (grad) {
      for (size_t i = 0; i < dim; ++i) grad[i] = v.grad[i];
    }
    if (lap) *lap = v.lap;
  });
}

void dg_quadrature_default(dg_quadrature* q) {
  if (q == nullptr) return;
  const dgkit::QuadSpec s;
  q->panel_width = s.panel_width;
  q->order = s.order;
  q->surface_resolution = s.surface_resolution;
}

dg_status dg_field_evaluate(const dg_field* f, double lambda, const dg_quadrature* q, int threads,
                            dg_energy_report* out) {
  return guarded([&] {
    need(f, "field");
    need(out, "out");
    const dgkit::EnergyReport r = dgkit::evaluate(*f->f, lambda, dgkit::RegionSpec::all(), quad_of(q), threads);
    *out = dg_energy_report{r.eps,    r.lambda, r.E,      r.G,      r.G_hat,    r.DG,      r.E_on_A,
                            r.E_on_B, r.G_on_A, r.G_on_B, r.mu_total, r.xi_total, r.xi_abs};
  });
}

dg_status dg_field_ball_mass(const dg_field* f, double r, const dg_quadrature* q, double* mu, double* xi,
                             double* exterior) {
  return guarded([&] {
    need(f, "field");
    const auto m = dgkit::measure_profile(*f->f, {r}, quad_of(q));
    if (mu) *mu = m.front().mu;
    if (xi) *xi = m.front().xi;
    if (exterior) *exterior = m.front().exterior;
  });
}

dg_status dg_nested_radii(int k, int n, double* out, size_t cap, size_t* count) {
  dg_status st = guarded([&] {
    const auto r = dgkit::nested_radii(k, n);
    if (count) *count = r.size();
    if (out == nullptr && cap > 0) dgkit::fail(dgkit::ErrorCode::invalid_argument, "out must not be NULL");
    for (size_t i = 0; i < r.size() && i < cap; ++i) out[i] = r[i];
    if (cap < r.size()) last_error = "nested radii: buffer holds fewer than 2k + 1 entries";
  });
  if (st == DG_OK && !last_error.empty()) return DG_BUFFER_TOO_SMALL;
  return st;
}

dg_status dg_config_default(const char* experiment, dg_config** out) {
  return guarded([&] {
    need(experiment, "experiment");
    need(out, "out");
    nlohmann::json j = {{"experiment", experiment}};
    *out = wrap_config(dgkit::ExperimentConfig::from_json(j));
  });
}

dg_status dg_config_from_string(const char* json, dg_config** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json);
    } catch (const std::exception& e) {
      dgkit::fail(dgkit::ErrorCode::config_error, std::string("config: ") + e.what());
    }
    *out = wrap_config(dgkit::ExperimentConfig::from_json(j));
  });
}

dg_status dg_config_from_file(const char* path, dg_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = wrap_config(dgkit::ExperimentConfig::from_file(path));
  });
}

dg_status dg_config_validate(const char* json) {
  dg_config* c = nullptr;
  const dg_status st = dg_config_from_string(json, &c);
  dg_config_free(c);
  return st;
}

void dg_config_free(dg_config* cfg) { delete cfg; }

const char* dg_config_json(const dg_config* cfg) { return cfg ? cfg->json.c_str() : ""; }

const char* dg_config_hash(const dg_config* cfg) { return cfg ? cfg->hash.c_str() : ""; }

void dg_run_options_default(dg_run_options* opt) {
  if (opt == nullptr) return;
  opt->threads = 1;
  opt->quad_refine = 1.0;
  opt->emit_plots = 0;
  opt->output_dir = nullptr;
}

dg_status dg_run_experiment(const dg_config* cfg, const dg_run_options* opt, dg_run_result** out) {
  return guarded([&] {
    need(cfg, "config");
    need(out, "out");
    dgkit::RunOptions o;
    if (opt != nullptr) {
      o.threads = opt->threads;
      o.quad_refine = opt->quad_refine;
      o.emit_plots = opt->emit_plots != 0;
      if (opt->output_dir != nullptr) o.output_dir = opt->output_dir;
    }
    *out = new dg_run_result{dgkit::run_experiment(cfg->cfg, o)};
  });
}

void dg_run_result_free(dg_run_result* r) { delete r; }

int dg_run_result_exit_code(const dg_run_result* r) { return r ? r->r.exit_code : 1; }

const char* dg_run_result_summary(const dg_run_result* r) { return r ? r->r.summary.c_str() : ""; }

size_t dg_run_result_check_count(const dg_run_result* r) { return r ? r->r.checks.size() : 0; }

dg_status dg_run_result_check(const dg_run_result* r, size_t i, const char** name, int* passed, int* fatal,
                              const char** detail) {
  return guarded([&] {
    need(r, "result");
    if (i >= r->r.checks.size()) dgkit::fail(dgkit::ErrorCode::invalid_argument, "check index out of range");
    const dgkit::CheckResult& c = r->r.checks[i];
    if (name) *name = c.name.c_str();
    if (passed) *passed = c.passed ? 1 : 0;
    if (fatal) *fatal = c.fatal ? 1 : 0;
    if (detail) *detail = c.detail.c_str();
  });
}

size_t dg_run_result_artifact_count(const dg_run_result* r) { return r ? r->r.artifacts.size() : 0; }

const char* dg_run_result_artifact(const dg_run_result* r, size_t i) {
  return r && i < r->r.artifacts.size() ? r->r.artifacts[i].c_str() : nullptr;
}

}  // extern "C"
