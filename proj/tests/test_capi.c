#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "dgkit/dgkit.h"

static const double PI = 3.14159265358979323846;

static int failures = 0;

#define EXPECT(cond)                                                      \
  do {                                                                    \
    if (!(cond)) {                                                        \
      fprintf(stderr, "%s:%d: expectation failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                         \
    }                                                                     \
  } while (0)

#define EXPECT_OK(call)                                                   \
  do {                                                                    \
    dg_status st_ = (call);                                               \
    if (st_ != DG_OK) {                                                   \
      fprintf(stderr, "%s:%d: %s returned %s: %s\n", __FILE__, __LINE__, #call, dg_status_name(st_), \
              dg_last_error());                                           \
      ++failures;                                                         \
    }                                                                     \
  } while (0)

static int near(double a, double b, double rel) { return fabs(a - b) <= rel * fmax(fabs(a), fabs(b)); }

static void test_errors(void) {
  dg_potential* p = NULL;
  EXPECT(strcmp(dg_version(), "1.0.0") == 0);
  EXPECT(dg_potential_builtin("no_such_well", &p) == DG_INVALID_POTENTIAL || p == NULL);
  EXPECT(strlen(dg_last_error()) > 0);
  EXPECT(dg_potential_builtin(NULL, &p) == DG_INVALID_ARGUMENT);
  EXPECT(dg_potential_sigma(NULL, NULL) == DG_INVALID_ARGUMENT);
  EXPECT(dg_potential_from_csv("/nonexistent/w.csv", &p) == DG_IO_ERROR);
  EXPECT(strcmp(dg_status_name(DG_CONFIG_ERROR), "config_error") == 0);
  EXPECT(strcmp(dg_status_name(DG_BUFFER_TOO_SMALL), "buffer_too_small") == 0);
  dg_potential_free(NULL);
}

static void test_pipeline(void) {
  dg_potential* p = NULL;
  dg_profile* prof = NULL;
  dg_surface* circle = NULL;
  dg_eta* zero = NULL;
  dg_family* fam = NULL;
  dg_field* field = NULL;
  double a = 0, b = 0, sigma = 0, w = 0, dw = 0, ddw = 0, q = 0, dq = 0, ddq = 0;
  int w1 = 0, w2 = 0, w3 = 0;

  EXPECT_OK(dg_potential_builtin("double_well", &p));
  EXPECT_OK(dg_potential_wells(p, &a, &b));
  EXPECT(a == -1.0 && b == 1.0);
  EXPECT_OK(dg_potential_sigma(p, &sigma));
  EXPECT(near(sigma, 8.0 / 3.0, 1e-12));
  EXPECT_OK(dg_potential_eval(p, 0.0, &w, &dw, &ddw));
  EXPECT(near(w, 1.0, 1e-14));
  EXPECT_OK(dg_potential_check(p, &w1, &w2, &w3));
  EXPECT(w1 && w2 && w3);

  EXPECT_OK(dg_profile_solve(p, 0.0, 1e-3, &prof));
  EXPECT_OK(dg_profile_eval(prof, 0.5, &q, &dq, &ddq));
  EXPECT(near(q, tanh(0.5), 1e-12));
  EXPECT_OK(dg_profile_kink_energy(prof, &w));
  EXPECT(near(w, 4.0 / 3.0, 1e-8));

  EXPECT_OK(dg_surface_sphere(1.0, 2, &circle));
  {
    const double x[2] = {0.5, 0.0};
    double d = 0, area = 0, hmin = 0, hmax = 0;
    int dim = 0;
    EXPECT_OK(dg_surface_signed_distance(circle, x, 2, &d));
    EXPECT(near(d, 0.5, 1e-14));
    EXPECT_OK(dg_surface_area(circle, &area));
    EXPECT(near(area, 2 * PI, 1e-14));
    EXPECT_OK(dg_surface_dim(circle, &dim));
    EXPECT(dim == 2);
    EXPECT_OK(dg_surface_curvature_range(circle, &hmin, &hmax));
    EXPECT(hmin == 1.0 && hmax == 1.0);
  }

  EXPECT_OK(dg_eta_zero(&zero));
  {
    double f0 = 0, fh = 0;
    int overflow = 1;
    EXPECT_OK(dg_eta_F(zero, circle, prof, &f0));
    EXPECT(near(f0, 8.0 * PI * 32.0 / 35.0, 1e-8));
    EXPECT_OK(dg_eta_F_hat(zero, circle, prof, &fh, &overflow));
    EXPECT(overflow == 0);
    EXPECT(near(fh, 4.0 * PI * sigma, 1e-8));
  }

  {
    const double t_grid[1] = {1.0};
    dg_energy_report rep;
    dg_quadrature quad;
    double val = 0, grad[2] = {0, 0}, lap = 0, mu = 0, xi = 0, ext = 0;
    const double x[2] = {1.0, 0.0};
    const double far[3] = {1.0, 0.0, 0.0};
    EXPECT_OK(dg_family_solve(prof, zero, 0.02, t_grid, 1, DG_ADMISSIBILITY_LEMMA_BOUND, &fam));
    EXPECT_OK(dg_field_create(circle, fam, &field));
    EXPECT_OK(dg_field_eval(field, x, 2, &val, grad, &lap));
    EXPECT(fabs(val) < 1e-12);
    EXPECT(dg_field_eval(field, far, 3, &val, grad, &lap) == DG_INVALID_ARGUMENT);
    dg_quadrature_default(&quad);
    EXPECT(quad.order == 8 && quad.panel_width == 0.5);
    EXPECT_OK(dg_field_evaluate(field, 1.0, &quad, 2, &rep));
    EXPECT(near(rep.E, 16.0 * PI / 3.0, 1e-6));
    EXPECT(near(rep.DG, rep.G + rep.E, 1e-12));
    EXPECT_OK(dg_field_ball_mass(field, 2.0, NULL, &mu, &xi, &ext));
    EXPECT(near(mu, 2 * PI, 1e-3));
    EXPECT(ext < 1e-12);
  }

  {
    dg_eta* bump = NULL;
    double v = 0, ds = 0;
    EXPECT_OK(dg_eta_L(4.0, circle, prof, &bump));
    EXPECT_OK(dg_eta_eval(bump, 1.0, 0.0, &v, &ds));
    EXPECT(near(v, -sigma / 2.0, 1e-10));
    dg_eta_free(bump);
  }

  dg_field_free(field);
  dg_family_free(fam);
  dg_eta_free(zero);
  dg_surface_free(circle);
  dg_profile_free(prof);
  dg_potential_free(p);
}

static void test_radii(void) {
  double r[3];
  size_t count = 0;
  EXPECT_OK(dg_nested_radii(1, 2, r, 3, &count));
  EXPECT(count == 3);
  EXPECT(near(r[0], 1.0 / (12 * PI), 1e-14));
  EXPECT(near(r[2], 1.0 / (4 * PI), 1e-14));
  EXPECT(dg_nested_radii(2, 2, r, 3, &count) == DG_BUFFER_TOO_SMALL);
  EXPECT(count == 5);
  EXPECT(dg_nested_radii(0, 2, r, 3, &count) == DG_INVALID_ARGUMENT);
}

static void test_configs(void) {
  dg_config* cfg = NULL;
  dg_config* other = NULL;
  dg_run_result* res = NULL;
  dg_run_options opt;
  const char* name = NULL;
  const char* detail = NULL;
  int passed = 0, fatal = 0;
  size_t i;

  EXPECT_OK(dg_config_default("eta_sweep", &cfg));
  EXPECT(strstr(dg_config_json(cfg), "\"torus\"") != NULL);
  EXPECT(strlen(dg_config_hash(cfg)) == 16);
  dg_config_free(cfg);

  EXPECT(dg_config_validate("{\"experiment\": \"gamma_limit\", \"lambda\": -1, \"bogus\": 2}") == DG_CONFIG_ERROR);
  EXPECT(strstr(dg_last_error(), "lambda") != NULL);
  EXPECT(strstr(dg_last_error(), "bogus") != NULL);
  EXPECT(dg_config_validate("{not json") == DG_CONFIG_ERROR);

  EXPECT_OK(dg_config_from_string("{\"experiment\": \"radial_decomposition\", \"output_dir\": \"a\", "
                                  "\"eps_schedule\": [8e-3, 4e-3, 2e-3, 1e-3]}",
                                  &cfg));
  EXPECT_OK(dg_config_from_string("{\"experiment\": \"radial_decomposition\", \"output_dir\": \"b\", "
                                  "\"eps_schedule\": [8e-3, 4e-3, 2e-3, 1e-3]}",
                                  &other));
  EXPECT(strcmp(dg_config_hash(cfg), dg_config_hash(other)) == 0);
  dg_config_free(other);

  dg_run_options_default(&opt);
  opt.threads = 2;
  opt.output_dir = "capi_out";
  EXPECT_OK(dg_run_experiment(cfg, &opt, &res));
  EXPECT(dg_run_result_exit_code(res) == 0);
  EXPECT(dg_run_result_check_count(res) > 0);
  for (i = 0; i < dg_run_result_check_count(res); ++i) {
    EXPECT_OK(dg_run_result_check(res, i, &name, &passed, &fatal, &detail));
    EXPECT(passed == 1);
    EXPECT(name != NULL && strlen(name) > 0);
  }
  EXPECT(dg_run_result_check(res, 9999, &name, &passed, &fatal, &detail) == DG_INVALID_ARGUMENT);
  EXPECT(dg_run_result_artifact_count(res) > 0);
  EXPECT(strstr(dg_run_result_artifact(res, 0), dg_config_hash(cfg)) != NULL);
  EXPECT(strstr(dg_run_result_summary(res), "PASS") != NULL);
  dg_run_result_free(res);
  dg_config_free(cfg);
}

int main(void) {
  test_errors();
  test_pipeline();
  test_radii();
  test_configs();
  if (failures == 0) printf("capi: all checks passed\n");
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
