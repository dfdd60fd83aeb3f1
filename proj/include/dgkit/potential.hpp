#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dgkit {

enum class Well { a, b };

// Double-well type potential W with wells a < b.
//
// Besides W, W' and W'' the potential exposes evaluators in the offset y from a
// well (u = a + y or u = b - y) so that exponentially small tails keep full
// relative precision.
class Potential {
 public:
  using Fn = std::function<double(double)>;

  Potential(std::string name, double a, double b, Fn w, Fn dw, Fn ddw, std::optional<double> kappa = std::nullopt);

  static Potential double_well();
  static Potential cosine();
  static Potential builtin(const std::string& name);
  // Two-column CSV with header "u,w"; wells are the first pair of consecutive zero samples.
  static Potential from_csv(const std::string& path);
  static Potential from_table(std::string name, std::vector<double> u, std::vector<double> w);

  // Returns c * W.
  Potential scaled(double c) const;

  double w(double u) const { return w_(u); }
  double dw(double u) const { return dw_(u); }
  double ddw(double u) const { return ddw_(u); }

  // W and W' at u = a + y (side a) or u = b - y (side b).
  double w_near(Well side, double y) const;
  double dw_near(Well side, double y) const;
  double at(Well side, double y) const { return side == Well::a ? a_ + y : b_ - y; }

  double a() const { return a_; }
  double b() const { return b_; }
  double well(Well side) const { return side == Well::a ? a_ : b_; }
  std::optional<double> kappa() const { return kappa_; }
  const std::string& name() const { return name_; }

  // Decay rate sqrt(W''(well)/2) of the optimal profile at each well.
  double decay_rate(Well side) const;

 private:
  std::string name_;
  double a_, b_;
  Fn w_, dw_, ddw_;
  std::optional<double> kappa_;
  Fn w_a_, w_b_, dw_a_, dw_b_;  // offset evaluators; empty means plain evaluation
};

struct AssumptionFlags {
  bool w1 = false;       // C^2 with consistent derivatives
  bool w2 = false;       // zeros at a, b and positive in between
  bool w3 = false;       // nondegenerate wells
  bool w3_plus = false;  // convexity bound outside [a, b]
};

struct PotentialReport {
  double sigma = 0.0;
  double kappa_ratio_min = 0.0;
  double min_w_inside = 0.0;
  AssumptionFlags flags;
  std::string to_json() const;
};

struct SampleGrid {
  std::size_t points = 4096;
  std::optional<double> margin;  // default b - a
};

// 2 * int_a^b sqrt(W) by composite Gauss-Legendre, refined until two levels agree to 1e-10.
double sigma(const Potential& p, int quad_order = 20);

PotentialReport verify_assumptions(const Potential& p, const SampleGrid& grid = {});

}  // namespace dgkit
