#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dgkit {

enum class SurfaceKind { sphere, concentric_spheres, torus };

// One spherical shell of a radial surface. orientation = +1 when E lies on the inner side
// of the shell locally (signed distance r - |x|), -1 otherwise.
struct Shell {
  double radius = 1.0;
  int orientation = 1;
};

// Scalar tube data the recovery field needs at one point.
struct TubeScalars {
  double d = 0.0;          // signed distance, positive inside E
  double lap_d = 0.0;      // Laplacian of d
  double h = 0.0;          // mean curvature at the foot point, extended constantly along normals
  double grad_h_sq = 0.0;  // |grad h|^2
  double lap_h = 0.0;      // Laplacian of h
};

struct TubeFrame {
  TubeScalars scalars;
  int dim = 3;
  std::array<double, 3> normal{};  // grad d
  std::array<double, 3> grad_h{};
  std::array<double, 3> foot{};    // projection onto the surface
  std::array<double, 2> k{};       // principal curvatures at the foot (n - 1 used)
};

struct SurfaceQuadrature {
  int dim = 3;
  std::vector<std::array<double, 3>> nodes;
  std::vector<double> weights;
  std::vector<double> mean_curvature;
  std::vector<std::array<double, 2>> principal;
  double total_weight() const;
  void write_csv(const std::string& path) const;
};

// Nodes sharing the same curvature data, with their weights summed.
struct CurvatureGroup {
  double h = 0.0;
  std::array<double, 2> k{};
  double weight = 0.0;
  double phi = 0.0;        // torus tube angle of the group
  std::size_t shell = 0;   // radial surfaces: shell index
};

class Hypersurface {
 public:
  static Hypersurface sphere(double radius, int n);
  static Hypersurface concentric_spheres(std::vector<double> radii, int n, bool innermost_inside);
  static Hypersurface torus(double major, double minor);

  SurfaceKind kind() const { return kind_; }
  int dim() const { return n_; }
  double delta() const { return delta_; }
  double focal_bound() const { return focal_; }
  double area() const;
  bool is_radial() const { return kind_ != SurfaceKind::torus; }
  const std::vector<Shell>& shells() const { return shells_; }
  double torus_major() const { return big_r_; }
  double torus_minor() const { return small_r_; }
  std::string describe() const;

  double signed_distance(std::span<const double> x) const;
  std::vector<double> project(std::span<const double> x) const;
  // Throws out_of_tube when |d(x)| > delta.
  TubeFrame frame(std::span<const double> x) const;
  double laplacian_distance(std::span<const double> x) const;
  double mean_curvature(std::span<const double> y) const;
  std::vector<double> principal_curvatures(std::span<const double> y) const;
  double level_set_area(double t) const;
  std::pair<double, double> curvature_range() const;

  SurfaceQuadrature quadrature(int resolution) const;
  std::vector<CurvatureGroup> curvature_groups(int resolution) const;

  // Radial shells: tube data at signed distance d from shell j.
  TubeScalars shell_scalars(std::size_t j, double d) const;
  // Torus: tube data at tube angle phi and signed distance d.
  TubeScalars torus_scalars(double phi, double d) const;
  // Torus mean curvature as a function of the tube angle, with two derivatives.
  std::array<double, 3> torus_h(double phi) const;

 private:
  SurfaceKind kind_ = SurfaceKind::sphere;
  int n_ = 2;
  std::vector<Shell> shells_;
  double big_r_ = 0.0, small_r_ = 0.0;
  double delta_ = 0.0, focal_ = 0.0;
  std::size_t nearest_shell(double radius) const;
};

}  // namespace dgkit
