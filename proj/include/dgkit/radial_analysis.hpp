#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "dgkit/numerics.hpp"
#include "dgkit/potential.hpp"
#include "dgkit/profile.hpp"
#include "dgkit/recovery.hpp"

namespace dgkit {

// Radial profile u(r) on a strictly increasing grid with first and second derivatives;
// evaluated between nodes by quintic Hermite interpolation.
class RadialField {
 public:
  RadialField(double eps, int n, std::shared_ptr<const Potential> p, std::vector<double> r, std::vector<double> u,
              std::vector<double> du, std::vector<double> ddu);

  // Derivatives by second-order finite differences.
  static RadialField from_samples(double eps, int n, std::shared_ptr<const Potential> p, std::vector<double> r,
                                  std::vector<double> u);
  // CSV with header r,u[,du,ddu]; missing derivative columns are filled by finite differences.
  static RadialField from_csv(const std::string& path, double eps, int n, std::shared_ptr<const Potential> p);
  // Samples a recovery field on a radial surface along the first axis with analytic derivatives.
  static RadialField sample_recovery(const RecoveryField& f, double r_lo, double r_hi, std::size_t count);
  // Shells glued at midpoints: around radius r_i the field is q0(o_i (r_i - r) / eps), o_i alternating
  // with +1 on the outermost shell. Grid spacing dr.
  static RadialField synthetic_shells(const OptimalProfile& prof, std::vector<double> radii, double eps, int n,
                                      double r_lo, double r_hi, double dr);

  Jet eval(double r) const;
  double eps() const { return eps_; }
  int dim() const { return n_; }
  double r_min() const { return r_.front(); }
  double r_max() const { return r_.back(); }
  const std::vector<double>& r() const { return r_; }
  const std::vector<double>& u() const { return u_; }
  const std::vector<double>& du() const { return du_; }
  const std::vector<double>& ddu() const { return ddu_; }
  const Potential& potential() const { return *p_; }
  std::shared_ptr<const Potential> potential_ptr() const { return p_; }

  void write_csv(const std::string& path) const;

 private:
  double eps_;
  int n_;
  std::shared_ptr<const Potential> p_;
  std::vector<double> r_, u_, du_, ddu_;
};

struct CrossingResult {
  std::vector<double> radii;  // decreasing
  std::vector<std::string> warnings;
};

// Zeros of u - gamma in [r0, r_max]; gamma defaults to (a + b) / 2.
CrossingResult find_crossings(const RadialField& f, double r0, double gamma = std::numeric_limits<double>::quiet_NaN());

enum class MatchedProfile { plus, minus };

struct BlowUpWindow {
  double center = 0.0;
  double half_width = 0.0;  // m, in s units
  std::vector<double> s, psi, dpsi, ddpsi;
  double gamma = 0.0;
  MatchedProfile matched = MatchedProfile::plus;
  double w22_plus = 0.0, w22_minus = 0.0;
  double c1_plus = 0.0, c1_minus = 0.0;
  double w22_distance = 0.0;
  double c1_distance = 0.0;
  double energy = 0.0;          // int (psi'^2 + W(psi)) ds
  double discrepancy = 0.0;     // int (psi'^2 - W(psi)) ds
  double residual_abs = 0.0;    // int |psi'^2 - W(psi)| ds
};

// psi(s) = u(R + eps s) on a uniform s-grid of spacing ds, matched against q0(s + q0^{-1}(gamma)) and
// q0(q0^{-1}(gamma) - s).
BlowUpWindow blow_up(const RadialField& f, const OptimalProfile& prof, double center, double m, double ds = 0.01);

struct EpsDecomposition {
  double eps = 0.0;
  double m = 0.0;
  std::vector<double> crossings;
  std::vector<double> masses;  // window energy int e omega r^{n-1} dr
  std::vector<double> match_c1;
  std::vector<double> match_w22;
  std::vector<int> matched_plus;
  double total_mass = 0.0;        // energy outside B_{r0}
  double residual_mass = 0.0;     // fraction of total_mass outside every window
  double discrepancy_mass = 0.0;  // |xi| outside B_{r0} as a fraction of total_mass
  std::vector<std::string> warnings;
};

struct InterfaceDecomposition {
  std::vector<double> radii;
  std::vector<double> masses;
  double residual_mass = 0.0;
  double discrepancy_mass = 0.0;
  bool stable = true;
  std::string instability;
  std::vector<EpsDecomposition> per_eps;
  std::string to_json() const;
};

using RadialBuilder = std::function<std::shared_ptr<const RadialField>(double eps)>;
using WindowRule = std::function<double(double eps)>;

// m(eps) = eps^{-1/2} / 4.
double default_window(double eps);

InterfaceDecomposition decompose(const RadialBuilder& family, const OptimalProfile& prof,
                                 const std::vector<double>& schedule, double r0,
                                 const WindowRule& window = default_window, int threads = 1);

struct OutOfZerosReport {
  double flux_c = 0.0;  // omega c^{n-1} eps sqrt(W(u(c))) |u'(c)|
  double flux_d = 0.0;
  double energy = 0.0;  // E on the annulus (c, d)
  bool near_well = false;
  double identity_residual = 0.0;
  double identity_scale = 0.0;
};

// near_well: u stays within delta of one well on (c, d); delta defaults to (b - a) / 4.
OutOfZerosReport out_of_zeros_diagnostic(const RadialField& f, double c, double d, double delta = 0.0);

}  // namespace dgkit
