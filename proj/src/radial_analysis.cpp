#include "dgkit/radial_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "dgkit/error.hpp"
#include "dgkit/functionals.hpp"

namespace dgkit {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// Second-order finite differences on a nonuniform grid.
void fd_derivatives(const std::vector<double>& r, const std::vector<double>& u, std::vector<double>& du,
                    std::vector<double>& ddu) {
  const std::size_t n = r.size();
  du.assign(n, 0.0);
  ddu.assign(n, 0.0);
  auto stencil = [&](std::size_t i0, std::size_t c) {
    // Derivatives at r[c] of the parabola through nodes i0, i0+1, i0+2.
    const double x0 = r[i0] - r[c], x1 = r[i0 + 1] - r[c], x2 = r[i0 + 2] - r[c];
    const double f0 = u[i0], f1 = u[i0 + 1], f2 = u[i0 + 2];
    const double d01 = (f1 - f0) / (x1 - x0), d12 = (f2 - f1) / (x2 - x1);
    const double d012 = (d12 - d01) / (x2 - x0);
    du[c] = d01 + d012 * (-x0 - x1);
    ddu[c] = 2.0 * d012;
  };
  if (n < 3) {
    du.assign(n, (u[1] - u[0]) / (r[1] - r[0]));
    return;
  }
  stencil(0, 0);
  for (std::size_t i = 1; i + 1 < n; ++i) stencil(i - 1, i);
  stencil(n - 3, n - 1);
}

template <class Fn>
void integrate_radial(const RadialField& f, double lo, double hi, double width, const GaussRule& rule, Fn&& fn) {
  const auto& r = f.r();
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    const double a = std::max(r[i], lo), b = std::min(r[i + 1], hi);
    if (b <= a) continue;
    for_each_node(a, b, {}, width, rule, [&](double x, double w) { fn(x, w, f.eval(x)); });
  }
}

double simpson(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  if (n < 3) return n == 2 ? 0.5 * h * (y[0] + y[1]) : 0.0;
  double s = y.front() + y.back();
  for (std::size_t i = 1; i + 1 < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * y[i];
  return s * h / 3.0;
}

}  // namespace

RadialField::RadialField(double eps, int n, std::shared_ptr<const Potential> p, std::vector<double> r,
                         std::vector<double> u, std::vector<double> du, std::vector<double> ddu)
    : eps_(eps), n_(n), p_(std::move(p)), r_(std::move(r)), u_(std::move(u)), du_(std::move(du)),
      ddu_(std::move(ddu)) {
  require(eps > 0.0, ErrorCode::invalid_argument, "radial field: eps must be positive");
  require(n >= 2, ErrorCode::invalid_argument, "radial field: dimension must be at least 2");
  require(static_cast<bool>(p_), ErrorCode::invalid_argument, "radial field: null potential");
  require(r_.size() >= 2, ErrorCode::invalid_argument, "radial field: need at least two samples");
  require(u_.size() == r_.size() && du_.size() == r_.size() && ddu_.size() == r_.size(), ErrorCode::invalid_argument,
          "radial field: column lengths differ");
  require(r_.front() > 0.0, ErrorCode::invalid_argument, "radial field: radii must be positive");
  for (std::size_t i = 1; i < r_.size(); ++i) {
    require(r_[i] > r_[i - 1], ErrorCode::invalid_argument, "radial field: grid must be strictly increasing");
  }
}

RadialField RadialField::from_samples(double eps, int n, std::shared_ptr<const Potential> p, std::vector<double> r,
                                      std::vector<double> u) {
  require(r.size() == u.size() && r.size() >= 2, ErrorCode::invalid_argument, "radial field: bad samples");
  std::vector<double> du, ddu;
  for (std::size_t i = 1; i < r.size(); ++i) {
    require(r[i] > r[i - 1], ErrorCode::invalid_argument, "radial field: grid must be strictly increasing");
  }
  fd_derivatives(r, u, du, ddu);
  return RadialField(eps, n, std::move(p), std::move(r), std::move(u), std::move(du), std::move(ddu));
}

RadialField RadialField::from_csv(const std::string& path, double eps, int n, std::shared_ptr<const Potential> p) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::io_error, "cannot read '" + path + "'");
  std::string line;
  std::vector<std::string> cols;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) {
      c.erase(std::remove_if(c.begin(), c.end(), [](unsigned char ch) { return std::isspace(ch); }), c.end());
      cols.push_back(c);
    }
    break;
  }
  auto index = [&](const std::string& name) -> long {
    const auto it = std::find(cols.begin(), cols.end(), name);
    return it == cols.end() ? -1 : static_cast<long>(it - cols.begin());
  };
  const long ir = index("r"), iu = index("u"), idu = index("du"), iddu = index("ddu");
  require(ir >= 0 && iu >= 0, ErrorCode::io_error, "radial csv '" + path + "': header must name columns r and u");
  std::vector<double> r, u, du, ddu;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> vals;
    if (!parse_csv_row(line, vals))
      fail(ErrorCode::io_error, "radial csv '" + path + "': bad number on line " + std::to_string(lineno));
    require(vals.size() == cols.size(), ErrorCode::io_error,
            "radial csv '" + path + "': wrong column count on line " + std::to_string(lineno));
    r.push_back(vals[ir]);
    u.push_back(vals[iu]);
    if (idu >= 0) du.push_back(vals[idu]);
    if (iddu >= 0) ddu.push_back(vals[iddu]);
  }
  if (idu < 0 || iddu < 0) {
    std::vector<double> fdu, fddu;
    require(r.size() >= 2, ErrorCode::io_error, "radial csv '" + path + "': too few rows");
    fd_derivatives(r, u, fdu, fddu);
    if (idu < 0) du = fdu;
    if (iddu < 0) ddu = fddu;
  }
  return RadialField(eps, n, std::move(p), std::move(r), std::move(u), std::move(du), std::move(ddu));
}

RadialField RadialField::sample_recovery(const RecoveryField& f, double r_lo, double r_hi, std::size_t count) {
  require(f.surface().is_radial(), ErrorCode::invalid_argument, "sample_recovery: surface is not radial");
  require(r_lo > 0.0 && r_hi > r_lo && count >= 2, ErrorCode::invalid_argument, "sample_recovery: bad range");
  const int n = f.surface().dim();
  std::vector<double> r(count), u(count), du(count), ddu(count);
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    r[i] = r_lo + (r_hi - r_lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    x[0] = r[i];
    const FieldValue v = f.eval(x);
    u[i] = v.u;
    du[i] = v.grad[0];
    ddu[i] = v.lap - (n - 1) * v.grad[0] / r[i];
  }
  return RadialField(f.eps(), n, f.family().profile().potential_ptr(), std::move(r), std::move(u), std::move(du),
                     std::move(ddu));
}

RadialField RadialField::synthetic_shells(const OptimalProfile& prof, std::vector<double> radii, double eps, int n,
                                          double r_lo, double r_hi, double dr) {
  require(!radii.empty(), ErrorCode::invalid_argument, "synthetic shells: no radii");
  require(r_lo > 0.0 && r_hi > r_lo && dr > 0.0, ErrorCode::invalid_argument, "synthetic shells: bad grid");
  std::sort(radii.begin(), radii.end(), std::greater<>());
  const auto count = static_cast<std::size_t>(std::ceil((r_hi - r_lo) / dr)) + 1;
  const double h = (r_hi - r_lo) / static_cast<double>(count - 1);
  std::vector<double> r(count), u(count), du(count), ddu(count);
  for (std::size_t i = 0; i < count; ++i) {
    r[i] = r_lo + h * static_cast<double>(i);
    std::size_t k = 0;
    while (k + 1 < radii.size() && r[i] < 0.5 * (radii[k] + radii[k + 1])) ++k;
    const double o = k % 2 == 0 ? 1.0 : -1.0;
    const ProfilePoint pt = prof.eval(o * (radii[k] - r[i]) / eps);
    u[i] = pt.q;
    du[i] = -o * pt.dq / eps;
    ddu[i] = pt.ddq / (eps * eps);
  }
  return RadialField(eps, n, prof.potential_ptr(), std::move(r), std::move(u), std::move(du), std::move(ddu));
}

Jet RadialField::eval(double r) const {
  require(r >= r_.front() && r <= r_.back(), ErrorCode::invalid_argument,
          "radial field: r = " + fmt(r) + " outside the grid");
  auto it = std::upper_bound(r_.begin(), r_.end(), r);
  std::size_t i = it == r_.begin() ? 0 : static_cast<std::size_t>(it - r_.begin()) - 1;
  i = std::min(i, r_.size() - 2);
  return quintic_hermite(r_[i], r_[i + 1], {u_[i], du_[i], ddu_[i]}, {u_[i + 1], du_[i + 1], ddu_[i + 1]}, r);
}

void RadialField::write_csv(const std::string& path) const {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::io_error, "cannot write '" + path + "'");
  out << "r,u,du,ddu\n";
  for (std::size_t i = 0; i < r_.size(); ++i) {
    out << fmt(r_[i]) << ',' << fmt(u_[i]) << ',' << fmt(du_[i]) << ',' << fmt(ddu_[i]) << '\n';
  }
}

CrossingResult find_crossings(const RadialField& f, double r0, double gamma) {
  require(r0 > 0.0, ErrorCode::invalid_argument, "find_crossings: r0 must be positive");
  const Potential& p = f.potential();
  if (std::isnan(gamma)) gamma = 0.5 * (p.a() + p.b());
  const auto& r = f.r();
  const auto& u = f.u();
  auto pos = [&](double v) { return v - gamma >= 0.0; };
  auto g = [&](double x) { return f.eval(x).f; };
  CrossingResult out;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    if (r[i + 1] < r0) continue;
    double lo = std::max(r[i], r0), hi = r[i + 1];
    const double ulo = lo == r[i] ? u[i] : g(lo);
    const bool slo = pos(ulo);
    if (slo != pos(u[i + 1])) {
      const double tol = 1e-12 * f.eps();
      for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (pos(g(mid)) == slo) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      out.radii.push_back(0.5 * (lo + hi));
      continue;
    }
    const double du0 = f.du()[i], du1 = f.du()[i + 1];
    if (du0 * du1 < 0.0) {
      for (int k = 1; k < 16; ++k) {
        const double x = lo + (hi - lo) * k / 16.0;
        if (pos(g(x)) != slo) {
          out.warnings.push_back("grid too coarse: two crossings inside the cell [" + fmt(r[i]) + ", " +
                                 fmt(r[i + 1]) + "]");
          break;
        }
      }
    }
  }
  std::sort(out.radii.begin(), out.radii.end(), std::greater<>());
  return out;
}

BlowUpWindow blow_up(const RadialField& f, const OptimalProfile& prof, double center, double m, double ds) {
  require(m > 0.0 && ds > 0.0, ErrorCode::invalid_argument, "blow_up: window and step must be positive");
  const double eps = f.eps();
  require(center - m * eps >= f.r_min() && center + m * eps <= f.r_max(), ErrorCode::invalid_argument,
          "blow_up: window around " + fmt(center) + " leaves the grid");
  require(m * eps < center, ErrorCode::invalid_argument, "blow_up: window reaches the origin");
  const Potential& p = f.potential();
  BlowUpWindow w;
  w.center = center;
  w.half_width = m;
  w.gamma = f.eval(center).f;
  require(w.gamma > p.a() && w.gamma < p.b(), ErrorCode::invalid_center,
          "blow_up: center value " + fmt(w.gamma) + " lies outside (a, b)");
  auto half = static_cast<std::size_t>(std::ceil(m / ds));
  const std::size_t count = 2 * half + 1;
  const double h = m / static_cast<double>(half);
  const double s0 = prof.inverse(w.gamma);
  w.s.resize(count);
  w.psi.resize(count);
  w.dpsi.resize(count);
  w.ddpsi.resize(count);
  std::vector<double> wp(count), wm(count), en(count), dis(count), dabs(count);
  double c1p = 0.0, c1m = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const double s = -m + h * static_cast<double>(k);
    const Jet j = f.eval(center + eps * s);
    w.s[k] = s;
    w.psi[k] = j.f;
    w.dpsi[k] = eps * j.d1;
    w.ddpsi[k] = eps * eps * j.d2;
    const ProfilePoint plus = prof.eval(s + s0);
    const ProfilePoint minus = prof.eval(s0 - s);
    const double p0 = w.psi[k] - plus.q, p1 = w.dpsi[k] - plus.dq, p2 = w.ddpsi[k] - plus.ddq;
    const double m0 = w.psi[k] - minus.q, m1 = w.dpsi[k] + minus.dq, m2 = w.ddpsi[k] - minus.ddq;
    wp[k] = p0 * p0 + p1 * p1 + p2 * p2;
    wm[k] = m0 * m0 + m1 * m1 + m2 * m2;
    c1p = std::max({c1p, std::abs(p0), std::abs(p1)});
    c1m = std::max({c1m, std::abs(m0), std::abs(m1)});
    const double W = p.w(w.psi[k]);
    const double d2 = w.dpsi[k] * w.dpsi[k];
    en[k] = d2 + W;
    dis[k] = d2 - W;
    dabs[k] = std::abs(d2 - W);
  }
  auto trapezoid = [&](const std::vector<double>& y) {
    double s = 0.5 * (y.front() + y.back());
    for (std::size_t k = 1; k + 1 < y.size(); ++k) s += y[k];
    return s * h;
  };
  w.w22_plus = std::sqrt(trapezoid(wp));
  w.w22_minus = std::sqrt(trapezoid(wm));
  w.c1_plus = c1p;
  w.c1_minus = c1m;
  const bool plus = std::abs(w.w22_plus - w.w22_minus) <= 1e-9 || w.w22_plus < w.w22_minus;
  w.matched = plus ? MatchedProfile::plus : MatchedProfile::minus;
  w.w22_distance = plus ? w.w22_plus : w.w22_minus;
  w.c1_distance = plus ? w.c1_plus : w.c1_minus;
  w.energy = simpson(en, h);
  w.discrepancy = simpson(dis, h);
  w.residual_abs = simpson(dabs, h);
  return w;
}

double default_window(double eps) { return 0.25 / std::sqrt(eps); }

std::string InterfaceDecomposition::to_json() const {
  nlohmann::ordered_json j;
  j["radii"] = radii;
  j["masses"] = masses;
  j["residual_mass"] = residual_mass;
  j["discrepancy_mass"] = discrepancy_mass;
  j["stable"] = stable;
  if (!stable) j["instability"] = instability;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const EpsDecomposition& e : per_eps) {
    nlohmann::ordered_json r;
    r["eps"] = e.eps;
    r["m"] = e.m;
    r["crossings"] = e.crossings;
    r["masses"] = e.masses;
    r["match_c1"] = e.match_c1;
    r["match_w22"] = e.match_w22;
    r["matched_plus"] = e.matched_plus;
    r["total_mass"] = e.total_mass;
    r["residual_mass"] = e.residual_mass;
    r["discrepancy_mass"] = e.discrepancy_mass;
    r["warnings"] = e.warnings;
    rows.push_back(r);
  }
  j["per_eps_tables"] = rows;
  return j.dump(2);
}

InterfaceDecomposition decompose(const RadialBuilder& family, const OptimalProfile& prof,
                                 const std::vector<double>& schedule, double r0, const WindowRule& window,
                                 int threads) {
  require(!schedule.empty(), ErrorCode::schedule_error, "decompose: empty schedule");
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    require(schedule[i] < schedule[i - 1], ErrorCode::schedule_error, "decompose: schedule must be decreasing");
  }
  require(r0 > 0.0, ErrorCode::invalid_argument, "decompose: r0 must be positive");
  InterfaceDecomposition out;
  out.per_eps.resize(schedule.size());
  parallel_for(schedule.size(), threads, [&](std::size_t i) {
    const double eps = schedule[i];
    std::shared_ptr<const RadialField> f;
    try {
      f = family(eps);
    } catch (const Error& err) {
      fail(err.code(), "decompose: eps = " + fmt(eps) + ": " + err.what());
    }
    EpsDecomposition& row = out.per_eps[i];
    row.eps = eps;
    const CrossingResult cr = find_crossings(*f, r0);
    row.crossings = cr.radii;
    row.warnings = cr.warnings;
    double m = window(eps);
    auto fits = [&](double mm) {
      const auto& z = row.crossings;
      for (std::size_t k = 0; k < z.size(); ++k) {
        if (z[k] - mm * eps < std::max(f->r_min(), r0) || z[k] + mm * eps > f->r_max()) return false;
        if (k + 1 < z.size() && z[k] - z[k + 1] <= 2.0 * mm * eps) return false;
      }
      return true;
    };
    for (int it = 0; it < 60 && !fits(m); ++it) m *= 0.5;
    row.m = m;
    const QuadSpec q;
    double window_sum = 0.0;
    for (double z : row.crossings) {
      const double mass = evaluate(*f, 1.0, RegionSpec::annulus(z - m * eps, z + m * eps), q).E;
      row.masses.push_back(mass);
      window_sum += mass;
      const BlowUpWindow bw = blow_up(*f, prof, z, m);
      row.match_c1.push_back(bw.c1_distance);
      row.match_w22.push_back(bw.w22_distance);
      row.matched_plus.push_back(bw.matched == MatchedProfile::plus ? 1 : 0);
    }
    const EnergyReport outside = evaluate(*f, 1.0, RegionSpec::annulus(r0, kInf), q);
    row.total_mass = outside.E;
    row.residual_mass = outside.E > 0.0 ? std::max(0.0, outside.E - window_sum) / outside.E : 0.0;
    row.discrepancy_mass = outside.E > 0.0 ? outside.xi_abs / outside.E : 0.0;
  });
  const std::size_t n = out.per_eps.size();
  const std::size_t tail = n - (n + 1) / 2;
  for (std::size_t i = tail + 1; i < n; ++i) {
    if (out.per_eps[i].crossings.size() != out.per_eps[tail].crossings.size()) {
      out.stable = false;
      out.instability = "crossing count changes along the schedule tail: " +
                        std::to_string(out.per_eps[tail].crossings.size()) + " at eps = " +
                        fmt(out.per_eps[tail].eps) + ", " + std::to_string(out.per_eps[i].crossings.size()) +
                        " at eps = " + fmt(out.per_eps[i].eps);
      break;
    }
  }
  const EpsDecomposition& last = out.per_eps.back();
  out.radii = last.crossings;
  out.masses = last.masses;
  out.residual_mass = last.residual_mass;
  out.discrepancy_mass = last.discrepancy_mass;
  return out;
}

OutOfZerosReport out_of_zeros_diagnostic(const RadialField& f, double c, double d, double delta) {
  require(c < d && c >= f.r_min() && d <= f.r_max(), ErrorCode::invalid_argument,
          "out_of_zeros: annulus must lie inside the grid");
  const Potential& p = f.potential();
  if (delta <= 0.0) delta = 0.25 * (p.b() - p.a());
  const double eps = f.eps();
  const int n = f.dim();
  const double omega = sphere_area(n);
  OutOfZerosReport out;
  const Jet jc = f.eval(c), jd = f.eval(d);
  out.flux_c = omega * std::pow(c, n - 1) * eps * std::sqrt(std::max(0.0, p.w(jc.f))) * std::abs(jc.d1);
  out.flux_d = omega * std::pow(d, n - 1) * eps * std::sqrt(std::max(0.0, p.w(jd.f))) * std::abs(jd.d1);
  out.energy = evaluate(f, 1.0, RegionSpec::annulus(c, d)).E;

  bool near_a = true, near_b = true;
  auto visit = [&](double v) {
    near_a = near_a && std::abs(v - p.a()) < delta;
    near_b = near_b && std::abs(v - p.b()) < delta;
  };
  visit(jc.f);
  visit(jd.f);
  for (std::size_t i = 0; i < f.r().size(); ++i) {
    if (f.r()[i] > c && f.r()[i] < d) visit(f.u()[i]);
  }
  out.near_well = near_a || near_b;

  // g = -2 sqrt(W) on [a, b] and 2 sqrt(W) outside, with g' 2W = W' g.
  const double slope_a = std::sqrt(2.0 * p.ddw(p.a())), slope_b = std::sqrt(2.0 * p.ddw(p.b()));
  auto g = [&](double u) {
    const double s = (u >= p.a() && u <= p.b()) ? -2.0 : 2.0;
    return s * std::sqrt(std::max(0.0, p.w(u)));
  };
  auto dg = [&](double u) {
    const double W = p.w(u);
    const double s = (u >= p.a() && u <= p.b()) ? -1.0 : 1.0;
    if (W > 1e-280) return s * p.dw(u) / std::sqrt(W);
    return std::abs(u - p.a()) < std::abs(u - p.b()) ? -slope_a : slope_b;
  };
  double lhs = 0.0, interior = 0.0;
  const GaussRule rule = gauss_legendre(8);
  integrate_radial(f, c, d, 0.5 * eps, rule, [&](double x, double w, const Jet& j) {
    const double wr = w * omega * std::pow(x, n - 1);
    const double e = eps * j.d1 * j.d1 + p.w(j.f) / eps;
    const double lap = j.d2 + (n - 1) * j.d1 / x;
    lhs += wr * dg(j.f) * e;
    interior += wr * g(j.f) * (eps * lap - p.dw(j.f) / (2.0 * eps));
  });
  const double boundary = omega * std::pow(d, n - 1) * eps * g(jd.f) * jd.d1 -
                          omega * std::pow(c, n - 1) * eps * g(jc.f) * jc.d1;
  out.identity_residual = std::abs(lhs - boundary + interior);
  out.identity_scale = std::abs(lhs) + std::abs(boundary) + std::abs(interior);
  return out;
}

}  // namespace dgkit
