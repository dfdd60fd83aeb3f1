#ifndef DGKIT_DGKIT_H
#define DGKIT_DGKIT_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(DGKIT_BUILDING)
#define DG_API __declspec(dllexport)
#else
#define DG_API __declspec(dllimport)
#endif
#else
#define DG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dg_status {
  DG_OK = 0,
  DG_INVALID_ARGUMENT = 1,
  DG_INVALID_POTENTIAL = 2,
  DG_QUADRATURE_FAILURE = 3,
  DG_INTEGRATION_FAILURE = 4,
  DG_ADMISSIBILITY_VIOLATION = 5,
  DG_OUT_OF_TUBE = 6,
  DG_INVALID_CENTER = 7,
  DG_SCHEDULE_ERROR = 8,
  DG_IO_ERROR = 9,
  DG_CONFIG_ERROR = 10,
  DG_INTERNAL_ERROR = 11,
  DG_BUFFER_TOO_SMALL = 12
} dg_status;

typedef enum dg_admissibility { DG_ADMISSIBILITY_LEMMA_BOUND = 0, DG_ADMISSIBILITY_INTEGRATION = 1 } dg_admissibility;

typedef struct dg_potential dg_potential;
typedef struct dg_profile dg_profile;
typedef struct dg_surface dg_surface;
typedef struct dg_eta dg_eta;
typedef struct dg_family dg_family;
typedef struct dg_field dg_field;
typedef struct dg_config dg_config;
typedef struct dg_run_result dg_run_result;

DG_API const char* dg_version(void);
DG_API const char* dg_status_name(dg_status status);
/* Message of the last failing call on this thread; empty after a successful call. */
DG_API const char* dg_last_error(void);

/* Potentials */
DG_API dg_status dg_potential_builtin(const char* name, dg_potential** out);
DG_API dg_status dg_potential_from_csv(const char* path, dg_potential** out);
DG_API void dg_potential_free(dg_potential* p);
DG_API dg_status dg_potential_eval(const dg_potential* p, double u, double* w, double* dw, double* ddw);
DG_API dg_status dg_potential_wells(const dg_potential* p, double* a, double* b);
DG_API dg_status dg_potential_sigma(const dg_potential* p, double* out);
/* Flags are 1 when the assumption holds. */
DG_API dg_status dg_potential_check(const dg_potential* p, int* w1, int* w2, int* w3);

/* Optimal profile; s_max = 0 picks the automatic half width. */
DG_API dg_status dg_profile_solve(const dg_potential* p, double s_max, double step, dg_profile** out);
DG_API void dg_profile_free(dg_profile* prof);
DG_API dg_status dg_profile_eval(const dg_profile* prof, double s, double* q, double* dq, double* ddq);
DG_API dg_status dg_profile_sigma(const dg_profile* prof, double* out);
DG_API dg_status dg_profile_kink_energy(const dg_profile* prof, double* out);
DG_API dg_status dg_profile_tail_constant(const dg_profile* prof, double* out);

/* Surfaces */
DG_API dg_status dg_surface_sphere(double radius, int n, dg_surface** out);
DG_API dg_status dg_surface_concentric(const double* radii, size_t count, int n, int innermost_inside,
                                       dg_surface** out);
DG_API dg_status dg_surface_torus(double major, double minor, dg_surface** out);
DG_API void dg_surface_free(dg_surface* s);
DG_API dg_status dg_surface_dim(const dg_surface* s, int* out);
DG_API dg_status dg_surface_area(const dg_surface* s, double* out);
DG_API dg_status dg_surface_signed_distance(const dg_surface* s, const double* x, size_t dim, double* out);
DG_API dg_status dg_surface_curvature_range(const dg_surface* s, double* h_min, double* h_max);

/* Perturbations */
DG_API dg_status dg_eta_zero(dg_eta** out);
DG_API dg_status dg_eta_L(double L, const dg_surface* s, const dg_profile* prof, dg_eta** out);
DG_API dg_status dg_eta_from_csv(const char* path, dg_eta** out);
DG_API void dg_eta_free(dg_eta* eta);
DG_API dg_status dg_eta_eval(const dg_eta* eta, double t, double s, double* value, double* d_s);
DG_API dg_status dg_eta_eps0(const dg_eta* eta, const dg_profile* prof, double* out);
DG_API dg_status dg_eta_F(const dg_eta* eta, const dg_surface* s, const dg_profile* prof, double* out);
/* overflow is set to 1 when the value is +infinity. */
DG_API dg_status dg_eta_F_hat(const dg_eta* eta, const dg_surface* s, const dg_profile* prof, double* out,
                              int* overflow);

/* Perturbed profile families */
DG_API dg_status dg_family_solve(const dg_profile* prof, const dg_eta* eta, double eps, const double* t_grid,
                                 size_t t_count, dg_admissibility policy, dg_family** out);
DG_API void dg_family_free(dg_family* fam);
DG_API dg_status dg_family_eval(const dg_family* fam, double t, double s, double* q, double* q_s, double* q_t);
DG_API dg_status dg_family_identity_residuals(const dg_family* fam, double* first, double* second);

/* Recovery fields */
DG_API dg_status dg_field_create(const dg_surface* s, const dg_family* fam, dg_field** out);
DG_API void dg_field_free(dg_field* f);
/* grad must hold dim entries. */
DG_API dg_status dg_field_eval(const dg_field* f, const double* x, size_t dim, double* u, double* grad, double* lap);

typedef struct dg_quadrature {
  double panel_width;
  int order;
  int surface_resolution;
} dg_quadrature;

typedef struct dg_energy_report {
  double eps;
  double lambda;
  double E;
  double G;
  double G_hat;
  double DG;
  double E_on_A;
  double E_on_B;
  double G_on_A;
  double G_on_B;
  double mu_total;
  double xi_total;
  double xi_abs;
} dg_energy_report;

DG_API void dg_quadrature_default(dg_quadrature* q);
/* q may be NULL for the defaults. */
DG_API dg_status dg_field_evaluate(const dg_field* f, double lambda, const dg_quadrature* q, int threads,
                                   dg_energy_report* out);
DG_API dg_status dg_field_ball_mass(const dg_field* f, double r, const dg_quadrature* q, double* mu, double* xi,
                                    double* exterior);

/* Writes up to cap radii; count receives the full number 2k + 1. */
DG_API dg_status dg_nested_radii(int k, int n, double* out, size_t cap, size_t* count);

/* Experiment configs */
DG_API dg_status dg_config_default(const char* experiment, dg_config** out);
DG_API dg_status dg_config_from_string(const char* json, dg_config** out);
DG_API dg_status dg_config_from_file(const char* path, dg_config** out);
/* Validates without keeping the config; dg_last_error lists every offending field. */
DG_API dg_status dg_config_validate(const char* json);
DG_API void dg_config_free(dg_config* cfg);
/* Normalized JSON and hash, owned by the config. */
DG_API const char* dg_config_json(const dg_config* cfg);
DG_API const char* dg_config_hash(const dg_config* cfg);

typedef struct dg_run_options {
  int threads;
  double quad_refine;
  int emit_plots;
  const char* output_dir; /* NULL or empty: environment, then config */
} dg_run_options;

DG_API void dg_run_options_default(dg_run_options* opt);
/* DG_OK when the run completed; check outcomes are in the result. */
DG_API dg_status dg_run_experiment(const dg_config* cfg, const dg_run_options* opt, dg_run_result** out);
DG_API void dg_run_result_free(dg_run_result* r);
/* 0 when every fatal check passed, 3 otherwise. */
DG_API int dg_run_result_exit_code(const dg_run_result* r);
DG_API const char* dg_run_result_summary(const dg_run_result* r);
DG_API size_t dg_run_result_check_count(const dg_run_result* r);
DG_API dg_status dg_run_result_check(const dg_run_result* r, size_t i, const char** name, int* passed, int* fatal,
                                     const char** detail);
DG_API size_t dg_run_result_artifact_count(const dg_run_result* r);
DG_API const char* dg_run_result_artifact(const dg_run_result* r, size_t i);

#ifdef __cplusplus
}
#endif

#endif
