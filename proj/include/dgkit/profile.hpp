#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgkit/numerics.hpp"
#include "dgkit/potential.hpp"

namespace dgkit {

// Value of a transition profile at one s, with the offset from the well on the side of s
// (s < 0: a side, s >= 0: b side) carried separately for tail precision.
struct ProfilePoint {
  double q = 0.0;
  double dq = 0.0;
  double ddq = 0.0;
  double offset = 0.0;
  Well side = Well::b;
};

// Transition profile tabulated on the uniform grid s_i = -S + i h. Between nodes the
// offset is interpolated by quintic Hermite polynomials; beyond |s| = S it is continued
// by an exponential with the decay rate observed at the last node.
class ProfileTable {
 public:
  ProfileTable() = default;
  ProfileTable(const Potential& p, double half_width, double step, std::vector<double> q, std::vector<double> dq,
               std::vector<double> ddq, std::vector<double> offset);

  ProfilePoint eval(double s) const;
  std::size_t size() const { return q_.size(); }
  std::size_t center() const { return center_; }
  double node(std::size_t i) const { return -half_width_ + step_ * static_cast<double>(i); }
  double step() const { return step_; }
  double half_width() const { return half_width_; }
  ProfilePoint at_node(std::size_t i) const;
  // Decay rates of the exponential continuation on each side.
  double tail_rate(Well side) const { return side == Well::a ? rate_a_ : rate_b_; }

 private:
  double a_ = 0.0, b_ = 1.0;
  double half_width_ = 0.0, step_ = 0.0;
  std::size_t center_ = 0;
  std::vector<double> q_, dq_, ddq_, off_;
  double rate_a_ = 0.0, rate_b_ = 0.0;
};

// Forcing term of the profile equation ds q = sqrt(W(q) - f(s)) and its s-derivative.
struct Forcing {
  std::function<double(double)> f;
  std::function<double(double)> ds;
  // Forcing vanishes identically for |s| >= support.
  double support = 0.0;
};

// Integrates ds q = sqrt(W(q) - f(s)), q(0) = (a+b)/2 with classical RK4 on [-S, S], in the
// offset variable on each side. Throws integration_failure if q leaves (a, b) and
// admissibility_violation if the radicand turns negative.
ProfileTable integrate_profile(const Potential& p, double half_width, double step, const Forcing* forcing);

// Default tabulation half width: large enough that the tail offset is far below 1e-10.
double default_half_width(const Potential& p);

class OptimalProfile {
 public:
  static std::shared_ptr<const OptimalProfile> solve(std::shared_ptr<const Potential> p, double s_max = 0.0,
                                                     double step = 1e-3);

  ProfilePoint eval(double s) const { return table_.eval(s); }
  double value(double s) const { return table_.eval(s).q; }
  double deriv(double s) const { return table_.eval(s).dq; }
  // q0^{-1}(gamma) for gamma in (a, b); bisection to 1e-10 inside the table, closed form in the tails.
  double inverse(double gamma) const;
  // s with offset(s) = y on the given side.
  double inverse_offset(Well side, double y) const;

  // int q0'^2 over the whole line (tabulation plus exponential tails).
  double kink_energy() const { return kink_total_; }
  // int q0'^2 over [-S, S] only.
  double kink_energy_table() const { return kink_table_; }
  // int_{-inf}^{s} q0'(r)^2 dr.
  double cumulative_kink(double s) const;

  double tail_constant() const { return tail_constant_; }
  double half_width() const { return table_.half_width(); }
  double step() const { return table_.step(); }
  double sigma() const { return sigma_; }
  double gamma0() const { return 0.5 * (potential_->a() + potential_->b()); }
  const Potential& potential() const { return *potential_; }
  std::shared_ptr<const Potential> potential_ptr() const { return potential_; }
  const ProfileTable& table() const { return table_; }

  // Maximum over nodes of |q0' - sqrt(W(q0))|.
  double ode_residual() const;

 private:
  std::shared_ptr<const Potential> potential_;
  ProfileTable table_;
  double sigma_ = 0.0;
  double tail_constant_ = 1.0;
  double kink_total_ = 0.0, kink_table_ = 0.0;
  std::vector<double> cum_;  // cumulative kink energy at nodes, including the left tail
};

// Smallest C >= 1 such that c_i(s) <= C exp(-|s|/C) holds for every sample (s, c).
double fit_exponential_constant(const std::vector<double>& s, const std::vector<double>& c);

// Compactly supported perturbation eta(t, s).
class PerturbationEta {
 public:
  virtual ~PerturbationEta() = default;
  virtual double eval(double t, double s) const = 0;
  virtual double d_s(double t, double s) const = 0;
  // R with support in [-R, R]^2.
  virtual double support_radius() const = 0;
  // Support in the s variable alone (never larger than support_radius).
  virtual double s_support() const { return support_radius(); }
  virtual double sup_abs() const = 0;
  // Points in s where eta is only finitely smooth; quadrature panels are split there.
  virtual std::vector<double> s_breaks() const { return {}; }
  virtual std::string describe() const = 0;
};

class ZeroEta final : public PerturbationEta {
 public:
  double eval(double, double) const override { return 0.0; }
  double d_s(double, double) const override { return 0.0; }
  double support_radius() const override { return 0.0; }
  double sup_abs() const override { return 0.0; }
  std::string describe() const override { return "zero"; }
};

// Eta sampled on a tensor grid; natural cubic splines in s, then in t.
class TabulatedEta final : public PerturbationEta {
 public:
  TabulatedEta(std::vector<double> t, std::vector<double> s, std::vector<std::vector<double>> values);
  // CSV with header "t,s,eta", rows in any order covering a full tensor grid.
  static std::shared_ptr<const TabulatedEta> from_csv(const std::string& path);

  double eval(double t, double s) const override;
  double d_s(double t, double s) const override;
  double support_radius() const override { return radius_; }
  double s_support() const override { return s_radius_; }
  double sup_abs() const override { return sup_; }
  std::string describe() const override { return "tabulated"; }

 private:
  Jet combine(double t, double s) const;
  std::vector<double> t_, s_;
  std::vector<NaturalSpline> rows_;
  SplineWeights tw_;
  double radius_ = 0.0, s_radius_ = 0.0, sup_ = 0.0;
};

// min_{|s| <= R} W(q0(2s)) / max|eta|; +infinity when eta vanishes.
double compute_eps0(const PerturbationEta& eta, const OptimalProfile& prof);

// How the admissibility of eps is certified before a perturbed family is built.
enum class AdmissibilityPolicy {
  lemma_bound,  // eps must lie below compute_eps0
  integration   // only require the integration to stay inside (a, b) with nonnegative radicand
};

struct FamilyPoint {
  double q = 0.0;
  double offset = 0.0;
  Well side = Well::b;
  double q_s = 0.0, q_ss = 0.0, q_t = 0.0, q_tt = 0.0;
  // (2 q_ss - W'(q)) / eps evaluated without cancellation.
  double defect = 0.0;
  // (q_s)^2 - W(q) through the profile identity, without cancellation.
  double discrepancy = 0.0;
};

class PerturbedProfileFamily {
 public:
  static std::shared_ptr<const PerturbedProfileFamily> solve(
      std::shared_ptr<const OptimalProfile> prof, std::shared_ptr<const PerturbationEta> eta, double eps,
      std::vector<double> t_grid, AdmissibilityPolicy policy = AdmissibilityPolicy::lemma_bound, double step = 0.0,
      int threads = 1);

  FamilyPoint eval(double t, double s) const;
  FamilyPoint eval_node(std::size_t j, double s) const;

  double eps() const { return eps_; }
  double eps0() const { return eps0_; }
  const std::vector<double>& t_grid() const { return weights_.knots(); }
  const ProfileTable& table(std::size_t j) const { return tables_[j]; }
  const OptimalProfile& profile() const { return *profile_; }
  std::shared_ptr<const OptimalProfile> profile_ptr() const { return profile_; }
  const PerturbationEta& eta() const { return *eta_; }
  const Potential& potential() const { return profile_->potential(); }
  double half_width() const { return tables_.front().half_width(); }
  AdmissibilityPolicy policy() const { return policy_; }

  // Beyond this |s| all interface densities are below 1e-40 of their peak.
  double tail_cut() const { return tail_cut_; }
  std::vector<double> s_breaks() const;

  // Maximum over nodes of the two profile identities.
  double identity_residual_first() const;
  double identity_residual_second_fd() const;

 private:
  std::shared_ptr<const OptimalProfile> profile_;
  std::shared_ptr<const PerturbationEta> eta_;
  double eps_ = 0.0, eps0_ = 0.0, tail_cut_ = 0.0;
  AdmissibilityPolicy policy_ = AdmissibilityPolicy::lemma_bound;
  SplineWeights weights_;
  std::vector<ProfileTable> tables_;
};

struct FamilyLimitReport {
  std::vector<double> eps;
  std::vector<double> sup_q, sup_dq, sup_dt, sup_dtt;
  bool monotone = true;
  bool ratios_ok = true;
  std::vector<std::string> violations;
  std::vector<std::string> notes;  // ratios below 0.3: decay faster than linear
};

// Sup-norm convergence of a family sequence to q0 (eps decreasing). Each halving of eps must shrink every
// norm by a ratio of at most 0.7; ratios below 0.3 are noted.
FamilyLimitReport verify_family_limits(const std::vector<std::shared_ptr<const PerturbedProfileFamily>>& fams);

// CSV columns t, s, q, dq, ddq on every `stride`-th node.
void export_profile_csv(const PerturbedProfileFamily& fam, const std::string& path, std::size_t stride = 10);
void export_profile_csv(const OptimalProfile& prof, const std::string& path, std::size_t stride = 10);

}  // namespace dgkit
