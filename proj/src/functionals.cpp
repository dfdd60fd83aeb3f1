#include "dgkit/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>

#include "dgkit/error.hpp"
#include "dgkit/radial_analysis.hpp"

namespace dgkit {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Sums {
  double E_a = 0, E_b = 0, G_a = 0, G_b = 0, G_hat = 0, xi = 0, xi_abs = 0;
  void add(const Sums& o) {
    E_a += o.E_a;
    E_b += o.E_b;
    G_a += o.G_a;
    G_b += o.G_b;
    G_hat += o.G_hat;
    xi += o.xi;
    xi_abs += o.xi_abs;
  }
};

EnergyReport finish(const Sums& t, double eps, double lambda, double sigma) {
  EnergyReport r;
  r.eps = eps;
  r.lambda = lambda;
  r.E_on_A = t.E_a;
  r.E_on_B = t.E_b;
  r.G_on_A = t.G_a;
  r.G_on_B = t.G_b;
  r.E = t.E_a + t.E_b;
  r.G = t.G_a + t.G_b;
  r.G_hat = t.G_hat;
  r.DG = r.G + lambda * r.E;
  r.mu_total = r.E / sigma;
  r.xi_total = t.xi;
  r.xi_abs = t.xi_abs;
  return r;
}

// Radius interval of the region; the tube band is handled separately.
std::pair<double, double> radius_window(const RegionSpec& region) {
  switch (region.kind) {
    case RegionSpec::Kind::ball: return {-kInf, region.hi};
    case RegionSpec::Kind::annulus: return {region.lo, region.hi};
    default: return {-kInf, kInf};
  }
}

void validate_region(const RegionSpec& region) {
  switch (region.kind) {
    case RegionSpec::Kind::all: break;
    case RegionSpec::Kind::tube_band:
      require(region.lo < region.hi, ErrorCode::invalid_argument, "region: empty tube band");
      break;
    case RegionSpec::Kind::ball:
      require(region.hi > 0.0, ErrorCode::invalid_argument, "region: ball radius must be positive");
      break;
    case RegionSpec::Kind::annulus:
      require(region.lo >= 0.0 && region.lo < region.hi, ErrorCode::invalid_argument, "region: bad annulus");
      break;
  }
}

}  // namespace

std::string RegionSpec::describe() const {
  switch (kind) {
    case Kind::all: return "all";
    case Kind::tube_band: return "tube_band(" + fmt(lo) + "," + fmt(hi) + ")";
    case Kind::ball: return "ball(" + fmt(hi) + ")";
    case Kind::annulus: return "annulus(" + fmt(lo) + "," + fmt(hi) + ")";
  }
  return "unknown";
}

EnergyReport evaluate(const RecoveryField& f, double lambda, const RegionSpec& region, const QuadSpec& q,
                      int threads) {
  validate_region(region);
  require(lambda > 0.0, ErrorCode::invalid_argument, "evaluate: lambda must be positive");
  require(q.panel_width > 0.0 && q.order >= 2 && q.surface_resolution >= 4, ErrorCode::invalid_argument,
          "evaluate: bad quadrature spec");
  const Hypersurface& surf = f.surface();
  const double eps = f.eps();
  const double T = f.theta().inner();
  const double S = std::min(f.theta().outer(), f.family().tail_cut());
  if (region.kind == RegionSpec::Kind::tube_band) {
    const double lim = surf.delta() / eps;
    require(region.lo >= -lim - 1e-12 && region.hi <= lim + 1e-12, ErrorCode::invalid_argument,
            "region: tube band exceeds the tube half width");
  }
  double lo = -S, hi = S;
  if (region.kind == RegionSpec::Kind::tube_band) {
    lo = std::max(lo, region.lo);
    hi = std::min(hi, region.hi);
  }
  const auto [r_lo, r_hi] = radius_window(region);
  const GaussRule rule = gauss_legendre(q.order);
  std::vector<double> base = f.family().s_breaks();
  for (double b : {0.0, -T, T}) base.push_back(b);

  const bool radial = surf.is_radial();
  const std::size_t groups =
      radial ? surf.shells().size() : static_cast<std::size_t>(q.surface_resolution);
  const std::vector<CurvatureGroup> tgroups = radial ? std::vector<CurvatureGroup>{}
                                                     : surf.curvature_groups(q.surface_resolution);
  std::vector<Sums> parts(groups);
  parallel_for(groups, threads, [&](std::size_t g) {
    std::vector<double> breaks = base;
    // Map from s to |x| and the area factor of the level set.
    std::function<double(double)> radius_of;
    std::function<double(double)> area_of;
    std::function<FieldSample(double)> sample_of;
    if (radial) {
      const Shell& sh = surf.shells()[g];
      const int n = surf.dim();
      const double area = sphere_area(n) * std::pow(sh.radius, n - 1);
      radius_of = [&, sh](double s) { return sh.radius - sh.orientation * eps * s; };
      area_of = [&, sh, area, n](double s) {
        return area * std::pow((sh.radius - sh.orientation * eps * s) / sh.radius, n - 1);
      };
      sample_of = [&, g](double s) { return f.shell_sample(g, s); };
      for (double rb : {r_lo, r_hi}) {
        if (std::isfinite(rb)) breaks.push_back(sh.orientation * (sh.radius - rb) / eps);
      }
    } else {
      const CurvatureGroup& cg = tgroups[g];
      const double R = surf.torus_major(), r = surf.torus_minor();
      const double cp = std::cos(cg.phi);
      radius_of = [&, cp, R, r](double s) {
        const double tau = r - eps * s;
        return std::sqrt(R * R + 2.0 * R * tau * cp + tau * tau);
      };
      area_of = [&, cg](double s) { return cg.weight * (1.0 - eps * s * cg.k[0]) * (1.0 - eps * s * cg.k[1]); };
      sample_of = [&, cg](double s) { return f.torus_sample(cg.phi, s); };
      for (double rb : {r_lo, r_hi}) {
        if (!std::isfinite(rb)) continue;
        const double disc = R * R * cp * cp - R * R + rb * rb;
        if (disc < 0.0) continue;
        for (double sg : {-1.0, 1.0}) breaks.push_back((r - (-R * cp + sg * std::sqrt(disc))) / eps);
      }
    }
    Sums acc;
    if (hi <= lo) return;
    for_each_node(lo, hi, breaks, q.panel_width, rule, [&](double s, double w) {
      const double rad = radius_of(s);
      if (rad < r_lo || rad >= r_hi) return;
      const FieldSample fs = sample_of(s);
      const double wa = w * area_of(s);
      const double m2 = fs.mismatch * fs.mismatch;
      if (fs.in_a) {
        acc.E_a += wa * fs.energy;
        acc.G_a += wa * m2 * fs.energy;
      } else {
        acc.E_b += wa * fs.energy;
        acc.G_b += wa * m2 * fs.energy;
      }
      acc.G_hat += wa * m2;
      acc.xi += wa * fs.discrepancy;
      acc.xi_abs += wa * std::abs(fs.discrepancy);
    });
    parts[g] = acc;
  });
  Sums total;
  for (const Sums& s : parts) total.add(s);
  return finish(total, eps, lambda, f.sigma());
}

EnergyReport evaluate(const RadialField& f, double lambda, const RegionSpec& region, const QuadSpec& q) {
  validate_region(region);
  require(lambda > 0.0, ErrorCode::invalid_argument, "evaluate: lambda must be positive");
  require(region.kind != RegionSpec::Kind::tube_band, ErrorCode::invalid_argument,
          "evaluate: tube bands are undefined for radial fields");
  const auto [wlo, whi] = radius_window(region);
  const double lo = std::max(f.r_min(), wlo), hi = std::min(f.r_max(), whi);
  const Potential& p = f.potential();
  const double eps = f.eps();
  const int n = f.dim();
  const double omega = sphere_area(n);
  const GaussRule rule = gauss_legendre(q.order);
  const double width = q.panel_width * eps;
  Sums acc;
  const auto& r = f.r();
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    const double a = std::max(r[i], lo), b = std::min(r[i + 1], hi);
    if (b <= a) continue;
    for_each_node(a, b, {}, width, rule, [&](double x, double w) {
      const Jet j = f.eval(x);
      const double wr = w * omega * std::pow(x, n - 1);
      const double W = p.w(j.f);
      const double lap = j.d2 + (n - 1) * j.d1 / x;
      const double mis = 2.0 * eps * lap - p.dw(j.f) / eps;
      const double grad2 = eps * j.d1 * j.d1;
      const double e = grad2 + W / eps;
      acc.E_a += wr * e;
      acc.G_a += wr * mis * mis * e;
      acc.G_hat += wr * mis * mis / eps;
      acc.xi += wr * (grad2 - W / eps);
      acc.xi_abs += wr * std::abs(grad2 - W / eps);
    });
  }
  return finish(acc, eps, lambda, dgkit::sigma(p));
}

EnergyReport evaluate_checked(const RecoveryField& f, double lambda, const RegionSpec& region, const QuadSpec& q,
                              double rel_tol, int threads) {
  const EnergyReport coarse = evaluate(f, lambda, region, q, threads);
  QuadSpec fine = q;
  fine.panel_width *= 0.5;
  fine.surface_resolution *= 2;
  const EnergyReport r = evaluate(f, lambda, region, fine, threads);
  auto rel = [](double x, double y) { return std::abs(x - y) / std::max(std::abs(y), 1e-300); };
  const double dE = rel(coarse.E, r.E), dG = r.G == 0.0 && coarse.G == 0.0 ? 0.0 : rel(coarse.G, r.G);
  if (dE > rel_tol || dG > rel_tol) {
    fail(ErrorCode::quadrature_failure, "quadrature did not converge under refinement at eps = " + fmt(f.eps()) +
                                            ": E = " + fmt(r.E) + " (change " + fmt(dE) + "), G = " + fmt(r.G) +
                                            " (change " + fmt(dG) + ")");
  }
  return r;
}

namespace {

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return v.size() >= 2;
}

bool nonincreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1]) return false;
  }
  return true;
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return v.size() >= 2;
}

}  // namespace

StudyResult convergence_study(const FieldBuilder& builder, const std::vector<double>& schedule, double lambda,
                              const QuadSpec& q, int threads, std::vector<double> h) {
  require(schedule.size() >= 4, ErrorCode::schedule_error, "convergence study: schedule needs at least 4 entries");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    require(schedule[i] > 0.0 && schedule[i] < 1.0, ErrorCode::schedule_error,
            "convergence study: eps = " + fmt(schedule[i]) + " outside (0, 1)");
    if (i > 0) {
      require(schedule[i] < schedule[i - 1], ErrorCode::schedule_error,
              "convergence study: schedule must be strictly decreasing");
    }
  }
  if (h.empty()) h = schedule;
  require(h.size() == schedule.size(), ErrorCode::invalid_argument, "convergence study: h size mismatch");
  StudyResult out;
  out.rows.resize(schedule.size());
  // Independent rows run concurrently; each row evaluates single-threaded.
  parallel_for(schedule.size(), threads, [&](std::size_t i) {
    try {
      const auto field = builder(schedule[i]);
      out.rows[i] = evaluate(*field, lambda, RegionSpec::all(), q, 1);
    } catch (const Error& err) {
      fail(err.code(), "eps = " + fmt(schedule[i]) + ": " + err.what());
    }
  });
  std::vector<double> E, G, DG, Gh, eq;
  for (const EnergyReport& r : out.rows) {
    E.push_back(r.E);
    G.push_back(r.G);
    DG.push_back(r.DG);
    Gh.push_back(r.G_hat);
    eq.push_back(r.E > 0.0 ? r.xi_abs / r.E : 0.0);
  }
  StudySummary& s = out.summary;
  s.E = richardson(h, E);
  s.G = richardson(h, G);
  s.DG = richardson(h, DG);
  s.G_hat = richardson(h, Gh);
  s.E_monotone = strictly_decreasing(E) || strictly_increasing(E);
  s.G_decreasing = strictly_decreasing(G);
  s.G_hat_increasing = strictly_increasing(Gh);
  s.equipartition_monotone = nonincreasing(eq);
  return out;
}

std::vector<BallMass> measure_profile(const RecoveryField& f, const std::vector<double>& radii, const QuadSpec& q) {
  std::vector<BallMass> out;
  for (double r : radii) {
    require(r > 0.0, ErrorCode::invalid_argument, "measure_profile: radii must be positive");
    const EnergyReport in = evaluate(f, 1.0, RegionSpec::ball(r), q);
    const EnergyReport ex = evaluate(f, 1.0, RegionSpec::annulus(r, kInf), q);
    out.push_back({r, in.mu_total, in.xi_total, ex.mu_total});
  }
  return out;
}

std::vector<BallMass> measure_profile(const RadialField& f, const std::vector<double>& radii, const QuadSpec& q) {
  std::vector<BallMass> out;
  for (double r : radii) {
    require(r > 0.0, ErrorCode::invalid_argument, "measure_profile: radii must be positive");
    const EnergyReport in = evaluate(f, 1.0, RegionSpec::ball(r), q);
    const EnergyReport ex = evaluate(f, 1.0, RegionSpec::annulus(r, kInf), q);
    out.push_back({r, in.mu_total, in.xi_total, ex.mu_total});
  }
  return out;
}

void write_reports_csv(const std::vector<EnergyReport>& rows, const std::string& path,
                       const std::string& header_comment) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::io_error, "cannot write '" + path + "'");
  if (!header_comment.empty()) out << "# " << header_comment << '\n';
  out << "eps,E,G,G_hat,DG,mu_total,xi_total,xi_abs,E_on_A,E_on_B,G_on_A,G_on_B,lambda\n";
  for (const EnergyReport& r : rows) {
    out << fmt(r.eps) << ',' << fmt(r.E) << ',' << fmt(r.G) << ',' << fmt(r.G_hat) << ',' << fmt(r.DG) << ','
        << fmt(r.mu_total) << ',' << fmt(r.xi_total) << ',' << fmt(r.xi_abs) << ',' << fmt(r.E_on_A) << ','
        << fmt(r.E_on_B) << ',' << fmt(r.G_on_A) << ',' << fmt(r.G_on_B) << ',' << fmt(r.lambda) << '\n';
  }
}

}  // namespace dgkit
