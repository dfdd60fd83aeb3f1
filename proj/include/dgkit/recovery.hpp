#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dgkit/geometry.hpp"
#include "dgkit/numerics.hpp"
#include "dgkit/profile.hpp"

namespace dgkit {

// C^2 cutoff in the band variable s: 0 on |s| <= 1/sqrt(eps), 1 for |s| >= 1/sqrt(eps) + 1.
class CutoffTheta {
 public:
  explicit CutoffTheta(double eps);
  Jet at(double s) const;
  double eval(double s) const { return at(s).f; }
  double d1(double s) const { return at(s).d1; }
  double d2(double s) const { return at(s).d2; }
  double eps() const { return eps_; }
  double inner() const { return inner_; }
  double outer() const { return inner_ + 1.0; }

 private:
  double eps_, inner_;
};

CutoffTheta build_cutoff(double eps);

// Recovery field quantities at one point given in band coordinates. Energy-type
// densities are premultiplied by eps so that they integrate against ds dH.
struct FieldSample {
  double u = 0.0;
  double offset = 0.0;  // distance of u from the well on its side
  Well side = Well::b;
  double du_dd = 0.0;   // grad u = du_dd * grad d + du_dh * grad h
  double du_dh = 0.0;
  double lap = 0.0;
  double energy = 0.0;       // eps * (eps |grad u|^2 + W(u) / eps)
  double discrepancy = 0.0;  // eps * (eps |grad u|^2 - W(u) / eps)
  double mismatch = 0.0;     // 2 eps lap u - W'(u) / eps
  bool in_a = false;
  bool in_b = false;
};

struct FieldValue {
  double u = 0.0;
  std::vector<double> grad;
  double lap = 0.0;
};

class RecoveryField {
 public:
  RecoveryField(std::shared_ptr<const Hypersurface> surf, std::shared_ptr<const PerturbedProfileFamily> family);

  FieldValue eval(std::span<const double> x) const;
  FieldSample sample(double s, const TubeScalars& ts) const;
  FieldSample shell_sample(std::size_t shell, double s) const;
  FieldSample torus_sample(double phi, double s) const;

  double eps() const { return eps_; }
  const CutoffTheta& theta() const { return theta_; }
  const Hypersurface& surface() const { return *surf_; }
  std::shared_ptr<const Hypersurface> surface_ptr() const { return surf_; }
  const PerturbedProfileFamily& family() const { return *family_; }
  const Potential& potential() const { return family_->potential(); }
  double sigma() const { return family_->profile().sigma(); }

 private:
  std::shared_ptr<const Hypersurface> surf_;
  std::shared_ptr<const PerturbedProfileFamily> family_;
  double eps_;
  CutoffTheta theta_;
};

// Radial surfaces: CSV columns r, u, du, lap_u along a ray, du the radial derivative.
void export_radial_slice(const RecoveryField& f, double r_lo, double r_hi, std::size_t count, const std::string& path);
// Torus: CSV columns node, phi, tau, u over tube coordinates.
void export_torus_slice(const RecoveryField& f, std::size_t n_phi, std::size_t n_tau, const std::string& path);

}  // namespace dgkit
