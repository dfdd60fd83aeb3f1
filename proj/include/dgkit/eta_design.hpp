#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dgkit/geometry.hpp"
#include "dgkit/numerics.hpp"
#include "dgkit/profile.hpp"

namespace dgkit {

// Plateau bump: 1 on |x| <= 1, 0 for |x| >= 2, quintic smoothstep ramps in between.
Jet plateau_bump(double x);

// eta_L(t, s) = Phi(t, s) rho(s / L) g(t) with Phi(t, s) = -2 t int_{-inf}^s q0'^2.
class EtaL final : public PerturbationEta {
 public:
  EtaL(double L, std::shared_ptr<const OptimalProfile> prof, std::pair<double, double> h_range);

  double eval(double t, double s) const override;
  double d_s(double t, double s) const override;
  double support_radius() const override { return std::max(2.0 * L_, t_support_); }
  double s_support() const override { return 2.0 * L_; }
  double sup_abs() const override { return sup_; }
  std::vector<double> s_breaks() const override { return {-2.0 * L_, -L_, L_, 2.0 * L_}; }
  std::string describe() const override;

  double L() const { return L_; }
  double t_support() const { return t_support_; }
  double phi(double t, double s) const;
  Jet rho_L(double s) const;
  Jet g(double t) const;

 private:
  double L_;
  std::shared_ptr<const OptimalProfile> prof_;
  double plateau_lo_, plateau_hi_, t_support_;
  double sup_ = 0.0;
};

std::shared_ptr<const EtaL> build_eta_L(double L, const Hypersurface& surf, std::shared_ptr<const OptimalProfile> prof);

struct QuadratureOptions {
  double panel_width = 0.5;
  int order = 8;
  int surface_resolution = 256;
};

// int ds int_Sigma [ds eta(H, s) + 2 q0'^2 H]^2.
double F(const PerturbationEta& eta, const Hypersurface& surf, const OptimalProfile& prof,
         const QuadratureOptions& q = {});

struct FHatValue {
  double value = 0.0;       // +infinity when the overflow guard trips
  double decomposed = 0.0;  // int int (ds eta)^2 / q0'^2 + 4 q0'^2 H^2
  bool overflow = false;
  double overflow_s = 0.0;
};

// int ds int_Sigma [ds eta(H, s) / q0' + 2 q0' H]^2.
FHatValue F_hat(const PerturbationEta& eta, const Hypersurface& surf, const OptimalProfile& prof,
                const QuadratureOptions& q = {});

// 2L int_Sigma 4 H^2 [C^2 exp(-2L/C) + sigma/L]^2 with the profile's tail constant C.
double eta_L_bound(double L, const Hypersurface& surf, const OptimalProfile& prof, int surface_resolution = 256);

struct SweepRow {
  double L = 0.0;
  double F = 0.0;
  double F_hat = 0.0;
  double F_hat_decomposed = 0.0;
  double bound = 0.0;
  bool overflow = false;
};

std::vector<SweepRow> eta_sweep(const std::vector<double>& Ls, const Hypersurface& surf,
                                std::shared_ptr<const OptimalProfile> prof, const QuadratureOptions& q = {},
                                int threads = 1);

// Coupling of the bump length L to eps.
enum class LRule { constant, log, max4_log, half_log, eighth_log };

LRule parse_l_rule(const std::string& name);
const char* l_rule_name(LRule rule);
// t_max: largest |curvature| the perturbation is evaluated at.
double coupled_L(LRule rule, double eps, double L_const, double sigma, double t_max);

// CSV "t,s,eta" on a tensor grid; readable by TabulatedEta::from_csv.
void export_eta_grid(const PerturbationEta& eta, std::pair<double, double> t_range, std::size_t nt,
                     std::pair<double, double> s_range, std::size_t ns, const std::string& path);

}  // namespace dgkit
