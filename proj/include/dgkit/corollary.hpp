#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dgkit/eta_design.hpp"
#include "dgkit/functionals.hpp"
#include "dgkit/geometry.hpp"
#include "dgkit/profile.hpp"
#include "dgkit/recovery.hpp"

namespace dgkit {

// r_{k,j} = [(1/(2k+1) + j/(2k(2k+1))) / omega_{n-1}]^{1/(n-1)} for j = -k..k, increasing.
std::vector<double> nested_radii(int k, int n);
double nested_min_gap(int k, int n);

struct KRule {
  double gap_factor = 8.0;  // k(eps) = largest k with min gap > gap_factor sqrt(eps)
  int k_cap = 6;
};

// Throws schedule_error naming (eps, k) when not even k = 1 is admissible.
int k_for_eps(const KRule& rule, int n, double eps);

struct NestedSphereFamily {
  int k = 1;
  int n = 2;
  std::vector<double> radii;
  std::shared_ptr<const Hypersurface> surface;
  // Sorted distinct shell curvatures.
  std::vector<double> t_grid() const;
};

NestedSphereFamily build_nested_family(int k, int n);

struct DiracRow {
  double eps = 0.0;
  int k = 0;
  double L = 0.0;
  EnergyReport report;
  std::vector<double> mu_in;   // per probe mu(B_r)
  std::vector<double> mu_out;  // per probe mu(R^n \ B_r)
};

struct DiracSummary {
  double max_E_plus_G = 0.0;
  double tail_mu_in_min = 0.0;     // smallest mu(B_r) over probes at the last eps
  double tail_exterior_max = 0.0;  // largest exterior mass over probes at the last eps
  bool exterior_nonincreasing = true;
  bool G_decreasing = false;
  bool G_decreasing_tail = false;  // over the rows sharing the last k
};

struct DiracStudy {
  std::vector<double> probes;
  std::vector<DiracRow> rows;
  DiracSummary summary;
};

struct DiracOptions {
  KRule k_rule;
  LRule l_rule = LRule::eighth_log;
  double L_const = 4.0;
  double lambda = 1.0;
  QuadSpec quad;
  int threads = 1;
};

DiracStudy dirac_study(std::shared_ptr<const OptimalProfile> prof, int n, const std::vector<double>& schedule,
                       const std::vector<double>& probes, const DiracOptions& opt = {});

void write_dirac_csv(const DiracStudy& study, const std::string& path, const std::string& header_comment = "");

}  // namespace dgkit
