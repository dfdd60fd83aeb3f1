#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "dgkit/corollary.hpp"
#include "dgkit/error.hpp"
#include "dgkit/geometry.hpp"
#include "dgkit/numerics.hpp"
#include "halton.hpp"

using namespace dgkit;

namespace {

constexpr double pi = std::numbers::pi;

double fd_laplacian(const Hypersurface& s, std::vector<double> x, double h) {
  double lap = 0.0;
  const double d0 = s.signed_distance(x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    x[i] = xi + h;
    const double dp = s.signed_distance(x);
    x[i] = xi - h;
    const double dm = s.signed_distance(x);
    x[i] = xi;
    lap += (dp - 2 * d0 + dm) / (h * h);
  }
  return lap;
}

std::vector<double> fd_gradient(const Hypersurface& s, std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    x[i] = xi + h;
    const double dp = s.signed_distance(x);
    x[i] = xi - h;
    const double dm = s.signed_distance(x);
    x[i] = xi;
    g[i] = (dp - dm) / (2 * h);
  }
  return g;
}

// Torus point at tube angles (theta, phi) and signed distance d.
std::vector<double> torus_point(double R, double r, double theta, double phi, double d) {
  const double rho = R + (r - d) * std::cos(phi);
  return {rho * std::cos(theta), rho * std::sin(theta), (r - d) * std::sin(phi)};
}

// Halton samples of the tube U_delta for the three test surfaces.
std::vector<std::vector<double>> tube_points(const Hypersurface& s, std::size_t count) {
  std::vector<std::vector<double>> out;
  const double delta = s.delta();
  for (std::size_t i = 1; i <= count; ++i) {
    const double d = (2.0 * halton(i, 2) - 1.0) * 0.95 * delta;
    if (s.kind() == SurfaceKind::torus) {
      out.push_back(torus_point(s.torus_major(), s.torus_minor(), 2 * pi * halton(i, 3), 2 * pi * halton(i, 5), d));
      continue;
    }
    const Shell& sh = s.shells()[i % s.shells().size()];
    const double r = sh.radius - sh.orientation * d;
    if (s.dim() == 2) {
      const double a = 2 * pi * halton(i, 3);
      out.push_back({r * std::cos(a), r * std::sin(a)});
    } else {
      const double z = 2.0 * halton(i, 3) - 1.0, a = 2 * pi * halton(i, 5);
      const double rr = std::sqrt(1 - z * z);
      out.push_back({r * rr * std::cos(a), r * rr * std::sin(a), r * z});
    }
  }
  return out;
}

std::vector<Hypersurface> test_surfaces() {
  return {Hypersurface::sphere(1.0, 2), Hypersurface::sphere(1.3, 3), Hypersurface::torus(2.0, 0.5),
          Hypersurface::concentric_spheres({1.0, 0.5}, 2, false)};
}

}  // namespace

TEST_CASE("signed distance examples") {
  const Hypersurface s2 = Hypersurface::sphere(1.0, 2);
  const Hypersurface s3 = Hypersurface::sphere(1.0, 3);
  CHECK(s2.signed_distance(std::vector<double>{0.0, 0.0}) == 1.0);
  CHECK(s3.signed_distance(std::vector<double>{0.0, 0.0, 0.0}) == 1.0);
  CHECK(s2.signed_distance(std::vector<double>{3.0, 4.0}) == doctest::Approx(-4.0));
  const Hypersurface t = Hypersurface::torus(2.0, 0.5);
  CHECK(t.signed_distance(std::vector<double>{2.5, 0.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(t.signed_distance(std::vector<double>{2.0, 0.0, 0.0}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(s2.signed_distance(std::vector<double>{1.0, 0.0, 0.0}), Error);
}

TEST_CASE("nested shells follow the parity of E_k") {
  const auto r = nested_radii(1, 2);
  const NestedSphereFamily fam = build_nested_family(1, 2);
  const auto at = [&](double rad) { return fam.surface->signed_distance(std::vector<double>{rad, 0.0}); };
  // E_1 = (B_{r_1} \ B_{r_0}) u B_{r_{-1}}
  CHECK(at(0.5 * (r[2] + r[1])) > 0.0);
  CHECK(at(0.5 * (r[1] + r[0])) < 0.0);
  CHECK(at(0.5 * r[0]) > 0.0);
  CHECK(at(2.0 * r[2]) < 0.0);
}

TEST_CASE("tube widths stay below the focal bound") {
  for (const Hypersurface& s : test_surfaces()) {
    CHECK(s.delta() > 0.0);
    CHECK(s.delta() < s.focal_bound());
    CHECK(s.delta() == doctest::Approx(0.9 * s.focal_bound()));
  }
  CHECK(Hypersurface::torus(2.0, 0.5).focal_bound() == doctest::Approx(0.5));
  CHECK(Hypersurface::concentric_spheres({1.0, 0.5}, 2, false).focal_bound() == doctest::Approx(0.25));
}

TEST_CASE("mean curvature and laplacian of the distance") {
  const Hypersurface s3 = Hypersurface::sphere(1.0, 3);
  CHECK(s3.mean_curvature(std::vector<double>{0.0, 0.0, 1.0}) == doctest::Approx(2.0));
  CHECK(-fd_laplacian(s3, {0.6, 0.0, 0.8}, 1e-4) == doctest::Approx(2.0).epsilon(1e-4));
  const Hypersurface t = Hypersurface::torus(2.0, 0.5);
  CHECK(t.mean_curvature(std::vector<double>{2.5, 0.0, 0.0}) == doctest::Approx(2.4));
  CHECK(-fd_laplacian(t, {2.5, 0.0, 0.0}, 1e-4) == doctest::Approx(2.4).epsilon(1e-4));
  const std::vector<double> y{0.0, 1.0, 0.0};
  CHECK(-s3.laplacian_distance(y) == doctest::Approx(s3.mean_curvature(y)));
  const auto k = t.principal_curvatures(std::vector<double>{2.5, 0.0, 0.0});
  CHECK(k[0] == doctest::Approx(2.0));
  CHECK(k[1] == doctest::Approx(0.4));
  CHECK_THROWS_AS(t.frame(std::vector<double>{2.0, 0.0, 0.0}), Error);
}

TEST_CASE("level set areas") {
  const Hypersurface s2 = Hypersurface::sphere(1.0, 2);
  CHECK(s2.level_set_area(0.0) == doctest::Approx(2 * pi));
  CHECK(s2.level_set_area(0.5) == doctest::Approx(pi));
  const Hypersurface t = Hypersurface::torus(2.0, 0.5);
  for (double tt : {-0.3, 0.0, 0.2}) CHECK(t.level_set_area(tt) == doctest::Approx(4 * pi * pi * 2.0 * (0.5 - tt)));
  CHECK_THROWS_AS(s2.level_set_area(0.95), Error);
  const GaussRule g = gauss_legendre(8);
  for (const Hypersurface& s : test_surfaces()) {
    double prev = 1e300;
    for (double r : {0.2, 0.1, 0.05}) {
      const double r_eff = r * s.delta();
      const double vol = integrate_panels([&](double x) { return s.level_set_area(x); }, -r_eff, r_eff, r_eff, g);
      const double err = std::abs(vol / (2 * r_eff) - s.area());
      CHECK(err <= prev + 1e-12);
      prev = err;
    }
    CHECK(prev <= 1e-2 * s.area());
  }
}

TEST_CASE("curvature ranges") {
  const auto s3 = Hypersurface::sphere(1.0, 3).curvature_range();
  CHECK(s3.first == doctest::Approx(2.0));
  CHECK(s3.second == doctest::Approx(2.0));
  const auto t = Hypersurface::torus(2.0, 0.5).curvature_range();
  CHECK(t.first == doctest::Approx(4.0 / 3.0));
  CHECK(t.second == doctest::Approx(2.4));
  double lo = 1e9, hi = -1e9;
  for (int i = 0; i < 3600; ++i) {
    const double h = Hypersurface::torus(2.0, 0.5).torus_h(2 * pi * i / 3600.0)[0];
    lo = std::min(lo, h);
    hi = std::max(hi, h);
  }
  CHECK(lo == doctest::Approx(4.0 / 3.0).epsilon(1e-6));
  CHECK(hi == doctest::Approx(2.4).epsilon(1e-6));
  CHECK(Hypersurface::sphere(1e6, 3).curvature_range().second < 1e-5);
}

TEST_CASE("tube invariants at 1000 Halton points") {
  for (const Hypersurface& s : test_surfaces()) {
    for (const auto& x : tube_points(s, 1000)) {
      const TubeFrame f = s.frame(x);
      const auto g = fd_gradient(s, x, 1e-6);
      double norm = 0.0, dot = 0.0, dotn = 0.0;
      for (int i = 0; i < s.dim(); ++i) {
        norm += g[i] * g[i];
        dot += f.grad_h[i] * f.normal[i];
        dotn += f.normal[i] * f.normal[i];
      }
      CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-6));
      CHECK(std::abs(dot) <= 1e-6);
      CHECK(std::sqrt(dotn) == doctest::Approx(1.0).epsilon(1e-12));
      std::vector<double> p(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) p[i] = x[i] - f.scalars.d * f.normal[i];
      CHECK(std::abs(s.signed_distance(p)) <= 1e-9);
      const auto proj = s.project(x);
      for (std::size_t i = 0; i < x.size(); ++i) CHECK(proj[i] == doctest::Approx(p[i]).epsilon(1e-9));
      CHECK(f.scalars.lap_d == doctest::Approx(fd_laplacian(s, x, 1e-4)).epsilon(1e-4).scale(1.0));
    }
  }
}

TEST_CASE("surface quadrature") {
  for (const Hypersurface& s : test_surfaces()) {
    const SurfaceQuadrature q = s.quadrature(64);
    CHECK(q.total_weight() == doctest::Approx(s.area()).epsilon(1e-10));
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      const double sum = q.principal[i][0] + (s.dim() == 3 ? q.principal[i][1] : 0.0);
      CHECK(q.mean_curvature[i] == doctest::Approx(sum).epsilon(1e-14));
    }
  }
  CHECK(Hypersurface::torus(2.0, 0.5).area() == doctest::Approx(4 * pi * pi * 2.0 * 0.5));
  CHECK(Hypersurface::concentric_spheres({1.0, 0.5}, 2, false).area() == doctest::Approx(3 * pi));
}

TEST_CASE("torus mean curvature derivatives") {
  const Hypersurface t = Hypersurface::torus(2.0, 0.5);
  const double phi = 0.7, h = 1e-5;
  const auto c = t.torus_h(phi);
  CHECK(c[1] == doctest::Approx((t.torus_h(phi + h)[0] - t.torus_h(phi - h)[0]) / (2 * h)).epsilon(1e-8));
  CHECK(c[2] == doctest::Approx((t.torus_h(phi + h)[1] - t.torus_h(phi - h)[1]) / (2 * h)).epsilon(1e-7));
}
