#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dgkit/numerics.hpp"
#include "dgkit/recovery.hpp"

namespace dgkit {

class RadialField;

struct EnergyReport {
  double eps = 0.0;
  double lambda = 1.0;
  double E = 0.0;
  double G = 0.0;
  double G_hat = 0.0;
  double DG = 0.0;
  double E_on_A = 0.0;
  double E_on_B = 0.0;
  double G_on_A = 0.0;
  double G_on_B = 0.0;
  double mu_total = 0.0;
  double xi_total = 0.0;  // signed
  double xi_abs = 0.0;    // total variation of the discrepancy measure
};

struct RegionSpec {
  enum class Kind { all, tube_band, ball, annulus };
  Kind kind = Kind::all;
  double lo = 0.0;  // tube_band: s_lo; annulus: r_lo
  double hi = 0.0;  // tube_band: s_hi; ball: r; annulus: r_hi

  static RegionSpec all() { return {}; }
  static RegionSpec tube_band(double s_lo, double s_hi) { return {Kind::tube_band, s_lo, s_hi}; }
  static RegionSpec ball(double r) { return {Kind::ball, 0.0, r}; }
  static RegionSpec annulus(double r_lo, double r_hi) { return {Kind::annulus, r_lo, r_hi}; }
  std::string describe() const;
};

struct QuadSpec {
  double panel_width = 0.5;  // in the band variable s
  int order = 8;
  int surface_resolution = 256;  // torus tube-angle nodes
};

EnergyReport evaluate(const RecoveryField& f, double lambda, const RegionSpec& region = {}, const QuadSpec& q = {},
                      int threads = 1);
EnergyReport evaluate(const RadialField& f, double lambda, const RegionSpec& region = {}, const QuadSpec& q = {});

// Evaluates at q and at a doubled node count; throws quadrature_failure with both estimates when E or G
// move by more than rel_tol.
EnergyReport evaluate_checked(const RecoveryField& f, double lambda, const RegionSpec& region = {},
                              const QuadSpec& q = {}, double rel_tol = 1e-6, int threads = 1);

struct StudySummary {
  Extrapolation E, G, DG, G_hat;
  bool E_monotone = false;  // E strictly monotone along the schedule
  bool G_decreasing = false;
  bool G_hat_increasing = false;
  bool equipartition_monotone = false;  // xi_abs / E nonincreasing
};

struct StudyResult {
  std::vector<EnergyReport> rows;
  StudySummary summary;
};

using FieldBuilder = std::function<std::shared_ptr<const RecoveryField>(double eps)>;

// Builds and evaluates one field per eps; the schedule must be strictly decreasing with at least four
// entries. Extrapolation runs in h (default h = eps).
StudyResult convergence_study(const FieldBuilder& builder, const std::vector<double>& schedule, double lambda,
                              const QuadSpec& q = {}, int threads = 1, std::vector<double> h = {});

struct BallMass {
  double r = 0.0;
  double mu = 0.0;       // mu_eps(B_r)
  double xi = 0.0;       // xi_eps(B_r), signed
  double exterior = 0.0; // mu_eps(R^n \ B_r)
};

std::vector<BallMass> measure_profile(const RecoveryField& f, const std::vector<double>& radii, const QuadSpec& q = {});
std::vector<BallMass> measure_profile(const RadialField& f, const std::vector<double>& radii, const QuadSpec& q = {});

void write_reports_csv(const std::vector<EnergyReport>& rows, const std::string& path,
                       const std::string& header_comment = "");

}  // namespace dgkit
