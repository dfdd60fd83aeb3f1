#include "dgkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>

#include "dgkit/error.hpp"
#include "dgkit/numerics.hpp"

namespace dgkit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double SurfaceQuadrature::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

void SurfaceQuadrature::write_csv(const std::string& path) const {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::io_error, "cannot write '" + path + "'");
  out << (dim == 2 ? "x,y,weight,H\n" : "x,y,z,weight,H\n");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (int c = 0; c < dim; ++c) out << fmt(nodes[i][c]) << ',';
    out << fmt(weights[i]) << ',' << fmt(mean_curvature[i]) << '\n';
  }
}

Hypersurface Hypersurface::sphere(double radius, int n) {
  require(radius > 0.0, ErrorCode::invalid_argument, "sphere: radius must be positive");
  require(n == 2 || n == 3, ErrorCode::invalid_argument, "sphere: ambient dimension must be 2 or 3");
  Hypersurface s;
  s.kind_ = SurfaceKind::sphere;
  s.n_ = n;
  s.shells_ = {{radius, 1}};
  s.focal_ = radius;
  s.delta_ = 0.9 * radius;
  return s;
}

Hypersurface Hypersurface::concentric_spheres(std::vector<double> radii, int n, bool innermost_inside) {
  require(!radii.empty(), ErrorCode::invalid_argument, "concentric spheres: empty radius list");
  require(n == 2 || n == 3, ErrorCode::invalid_argument, "concentric spheres: ambient dimension must be 2 or 3");
  std::sort(radii.begin(), radii.end());
  require(radii.front() > 0.0, ErrorCode::invalid_argument, "concentric spheres: radii must be positive");
  double focal = radii.front();
  for (std::size_t i = 1; i < radii.size(); ++i) {
    require(radii[i] > radii[i - 1], ErrorCode::invalid_argument, "concentric spheres: radii must be distinct");
    focal = std::min(focal, 0.5 * (radii[i] - radii[i - 1]));
  }
  Hypersurface s;
  s.kind_ = SurfaceKind::concentric_spheres;
  s.n_ = n;
  for (std::size_t j = 0; j < radii.size(); ++j) {
    const bool inner_in_e = innermost_inside == (j % 2 == 0);
    s.shells_.push_back({radii[j], inner_in_e ? 1 : -1});
  }
  s.focal_ = focal;
  s.delta_ = 0.9 * focal;
  return s;
}

Hypersurface Hypersurface::torus(double major, double minor) {
  require(minor > 0.0 && major > minor, ErrorCode::invalid_argument, "torus: need 0 < minor < major");
  Hypersurface s;
  s.kind_ = SurfaceKind::torus;
  s.n_ = 3;
  s.big_r_ = major;
  s.small_r_ = minor;
  s.focal_ = std::min(minor, major - minor);
  s.delta_ = 0.9 * s.focal_;
  return s;
}

std::string Hypersurface::describe() const {
  switch (kind_) {
    case SurfaceKind::sphere: return "sphere(radius=" + fmt(shells_[0].radius) + ", n=" + std::to_string(n_) + ")";
    case SurfaceKind::concentric_spheres: {
      std::string r = "concentric_spheres(n=" + std::to_string(n_) + ", radii=[";
      for (std::size_t j = 0; j < shells_.size(); ++j) r += (j ? "," : "") + fmt(shells_[j].radius);
      return r + "])";
    }
    case SurfaceKind::torus: return "torus(major=" + fmt(big_r_) + ", minor=" + fmt(small_r_) + ")";
  }
  return "surface";
}

double Hypersurface::area() const {
  if (kind_ == SurfaceKind::torus) return 4.0 * std::numbers::pi * std::numbers::pi * big_r_ * small_r_;
  double a = 0.0;
  for (const Shell& sh : shells_) a += sphere_area(n_) * std::pow(sh.radius, n_ - 1);
  return a;
}

std::size_t Hypersurface::nearest_shell(double radius) const {
  std::size_t best = 0;
  double dist = std::abs(radius - shells_[0].radius);
  for (std::size_t j = 1; j < shells_.size(); ++j) {
    const double dj = std::abs(radius - shells_[j].radius);
    if (dj < dist) {
      dist = dj;
      best = j;
    }
  }
  return best;
}

double Hypersurface::signed_distance(std::span<const double> x) const {
  require(static_cast<int>(x.size()) == n_, ErrorCode::invalid_argument, "signed_distance: point dimension mismatch");
  if (kind_ == SurfaceKind::torus) {
    const double rho = std::hypot(x[0], x[1]);
    return small_r_ - std::hypot(rho - big_r_, x[2]);
  }
  const double r = norm(x);
  const Shell& sh = shells_[nearest_shell(r)];
  return sh.orientation * (sh.radius - r);
}

std::array<double, 3> Hypersurface::torus_h(double phi) const {
  const double c = std::cos(phi), s = std::sin(phi);
  const double D = big_r_ + small_r_ * c;
  const double h = 1.0 / small_r_ + c / D;
  const double h1 = -big_r_ * s / (D * D);
  const double h2 = -big_r_ * c / (D * D) - 2.0 * big_r_ * small_r_ * s * s / (D * D * D);
  return {h, h1, h2};
}

TubeScalars Hypersurface::shell_scalars(std::size_t j, double d) const {
  const Shell& sh = shells_.at(j);
  const double r = sh.radius - sh.orientation * d;
  TubeScalars ts;
  ts.d = d;
  ts.lap_d = -sh.orientation * (n_ - 1) / r;
  ts.h = sh.orientation * (n_ - 1) / sh.radius;
  return ts;
}

TubeScalars Hypersurface::torus_scalars(double phi, double d) const {
  const double tau = small_r_ - d;
  const double c = std::cos(phi), s = std::sin(phi);
  const double rho = big_r_ + tau * c;
  const auto hh = torus_h(phi);
  TubeScalars ts;
  ts.d = d;
  ts.lap_d = -(1.0 / tau + c / rho);
  ts.h = hh[0];
  ts.grad_h_sq = hh[1] * hh[1] / (tau * tau);
  ts.lap_h = hh[2] / (tau * tau) - hh[1] * s / (tau * rho);
  return ts;
}

TubeFrame Hypersurface::frame(std::span<const double> x) const {
  const double d = signed_distance(x);
  if (std::abs(d) > delta_) {
    fail(ErrorCode::out_of_tube, "point at signed distance " + fmt(d) + " lies outside the tube of half width " +
                                     fmt(delta_));
  }
  TubeFrame f;
  f.dim = n_;
  if (kind_ == SurfaceKind::torus) {
    const double rho = std::hypot(x[0], x[1]);
    const double theta = std::atan2(x[1], x[0]);
    const double phi = std::atan2(x[2], rho - big_r_);
    const double cp = std::cos(phi), sp = std::sin(phi), ct = std::cos(theta), st = std::sin(theta);
    f.scalars = torus_scalars(phi, d);
    const double tau = small_r_ - d;
    const std::array<double, 3> e_rho{ct, st, 0.0};
    const std::array<double, 3> e_z{0.0, 0.0, 1.0};
    const auto hh = torus_h(phi);
    for (int c = 0; c < 3; ++c) {
      f.normal[c] = -(cp * e_rho[c] + sp * e_z[c]);
      f.grad_h[c] = hh[1] / tau * (-sp * e_rho[c] + cp * e_z[c]);
      f.foot[c] = big_r_ * e_rho[c] + small_r_ * (cp * e_rho[c] + sp * e_z[c]);
    }
    f.k = {1.0 / small_r_, cp / (big_r_ + small_r_ * cp)};
    return f;
  }
  const double r = norm(x);
  const std::size_t j = nearest_shell(r);
  const Shell& sh = shells_[j];
  f.scalars = shell_scalars(j, d);
  for (int c = 0; c < n_; ++c) {
    f.normal[c] = -sh.orientation * x[c] / r;
    f.foot[c] = x[c] * sh.radius / r;
  }
  f.k = {sh.orientation / sh.radius, sh.orientation / sh.radius};
  return f;
}

std::vector<double> Hypersurface::project(std::span<const double> x) const {
  const TubeFrame f = frame(x);
  return std::vector<double>(f.foot.begin(), f.foot.begin() + n_);
}

double Hypersurface::laplacian_distance(std::span<const double> x) const { return frame(x).scalars.lap_d; }

double Hypersurface::mean_curvature(std::span<const double> y) const {
  const TubeFrame f = frame(y);
  return f.scalars.h;
}

std::vector<double> Hypersurface::principal_curvatures(std::span<const double> y) const {
  const TubeFrame f = frame(y);
  return std::vector<double>(f.k.begin(), f.k.begin() + (n_ - 1));
}

double Hypersurface::level_set_area(double t) const {
  if (std::abs(t) > delta_) {
    fail(ErrorCode::out_of_tube, "level_set_area: |t| = " + fmt(std::abs(t)) + " exceeds the tube half width");
  }
  if (kind_ == SurfaceKind::torus) return 4.0 * std::numbers::pi * std::numbers::pi * big_r_ * (small_r_ - t);
  double a = 0.0;
  for (const Shell& sh : shells_) a += sphere_area(n_) * std::pow(sh.radius - sh.orientation * t, n_ - 1);
  return a;
}

std::pair<double, double> Hypersurface::curvature_range() const {
  if (kind_ == SurfaceKind::torus)
    return {1.0 / small_r_ - 1.0 / (big_r_ - small_r_), 1.0 / small_r_ + 1.0 / (big_r_ + small_r_)};
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const Shell& sh : shells_) {
    const double h = sh.orientation * (n_ - 1) / sh.radius;
    lo = std::min(lo, h);
    hi = std::max(hi, h);
  }
  return {lo, hi};
}

SurfaceQuadrature Hypersurface::quadrature(int resolution) const {
  require(resolution >= 4, ErrorCode::invalid_argument, "quadrature: resolution must be at least 4");
  SurfaceQuadrature q;
  q.dim = n_;
  if (kind_ == SurfaceKind::torus) {
    const int N = resolution;
    const double dang = kTwoPi / N;
    for (int ip = 0; ip < N; ++ip) {
      const double phi = dang * ip;
      const auto hh = torus_h(phi);
      const double cp = std::cos(phi), sp = std::sin(phi);
      const double w = small_r_ * (big_r_ + small_r_ * cp) * dang * dang;
      for (int it = 0; it < N; ++it) {
        const double th = dang * it;
        const double rr = big_r_ + small_r_ * cp;
        q.nodes.push_back({rr * std::cos(th), rr * std::sin(th), small_r_ * sp});
        q.weights.push_back(w);
        q.mean_curvature.push_back(hh[0]);
        q.principal.push_back({1.0 / small_r_, cp / (big_r_ + small_r_ * cp)});
      }
    }
    return q;
  }
  for (const Shell& sh : shells_) {
    const double k = sh.orientation / sh.radius;
    const double H = (n_ - 1) * k;
    if (n_ == 2) {
      const int N = resolution;
      for (int i = 0; i < N; ++i) {
        const double a = kTwoPi * i / N;
        q.nodes.push_back({sh.radius * std::cos(a), sh.radius * std::sin(a), 0.0});
        q.weights.push_back(kTwoPi * sh.radius / N);
        q.mean_curvature.push_back(H);
        q.principal.push_back({k, 0.0});
      }
    } else {
      const GaussRule rule = gauss_legendre(resolution);
      const int M = 2 * resolution;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double ct = rule.nodes[i], stt = std::sqrt(1.0 - ct * ct);
        for (int m = 0; m < M; ++m) {
          const double a = kTwoPi * m / M;
          q.nodes.push_back({sh.radius * stt * std::cos(a), sh.radius * stt * std::sin(a), sh.radius * ct});
          q.weights.push_back(sh.radius * sh.radius * rule.weights[i] * kTwoPi / M);
          q.mean_curvature.push_back(H);
          q.principal.push_back({k, k});
        }
      }
    }
  }
  return q;
}

std::vector<CurvatureGroup> Hypersurface::curvature_groups(int resolution) const {
  std::vector<CurvatureGroup> g;
  if (kind_ == SurfaceKind::torus) {
    require(resolution >= 4, ErrorCode::invalid_argument, "curvature_groups: resolution must be at least 4");
    const double dang = kTwoPi / resolution;
    for (int ip = 0; ip < resolution; ++ip) {
      const double phi = dang * ip;
      const double cp = std::cos(phi);
      CurvatureGroup c;
      c.phi = phi;
      c.h = torus_h(phi)[0];
      c.k = {1.0 / small_r_, cp / (big_r_ + small_r_ * cp)};
      c.weight = kTwoPi * small_r_ * (big_r_ + small_r_ * cp) * dang;
      g.push_back(c);
    }
    return g;
  }
  for (std::size_t j = 0; j < shells_.size(); ++j) {
    const Shell& sh = shells_[j];
    CurvatureGroup c;
    c.shell = j;
    c.k = {sh.orientation / sh.radius, sh.orientation / sh.radius};
    c.h = (n_ - 1) * c.k[0];
    c.weight = sphere_area(n_) * std::pow(sh.radius, n_ - 1);
    g.push_back(c);
  }
  return g;
}

}  // namespace dgkit
