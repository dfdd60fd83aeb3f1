#include "dgkit/eta_design.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "dgkit/error.hpp"

namespace dgkit {

namespace {

constexpr double kOverflowGuard = 1e280;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double s_extent(const PerturbationEta& eta, const OptimalProfile& prof) {
  return std::max(eta.s_support(), prof.half_width());
}

std::vector<double> s_breaks_for(const PerturbationEta& eta) {
  auto b = eta.s_breaks();
  b.push_back(0.0);
  return b;
}

}  // namespace

Jet plateau_bump(double x) {
  const double ax = std::abs(x);
  const Jet r = smoothstep5(ax - 1.0);
  const double sg = x < 0.0 ? -1.0 : 1.0;
  return {1.0 - r.f, -sg * r.d1, -r.d2};
}

EtaL::EtaL(double L, std::shared_ptr<const OptimalProfile> prof, std::pair<double, double> h_range)
    : L_(L), prof_(std::move(prof)) {
  require(L >= 1.0, ErrorCode::invalid_argument, "eta_L: L must be at least 1");
  require(static_cast<bool>(prof_), ErrorCode::invalid_argument, "eta_L: null profile");
  require(h_range.first <= h_range.second, ErrorCode::invalid_argument, "eta_L: empty curvature range");
  plateau_lo_ = h_range.first - 1.0;
  plateau_hi_ = h_range.second + 1.0;
  t_support_ = std::max(std::abs(plateau_lo_ - 1.0), std::abs(plateau_hi_ + 1.0));

  double tg = 0.0;
  const int nt = 4000;
  for (int i = 0; i <= nt; ++i) {
    const double t = (plateau_lo_ - 1.0) + (plateau_hi_ - plateau_lo_ + 2.0) * i / nt;
    tg = std::max(tg, std::abs(t) * g(t).f);
  }
  tg = std::max({tg, std::abs(plateau_lo_), std::abs(plateau_hi_)});
  double cr = 0.0;
  const int ns = 8000;
  for (int i = 0; i <= ns; ++i) {
    const double s = 2.0 * L_ * i / ns;
    cr = std::max(cr, prof_->cumulative_kink(s) * rho_L(s).f);
  }
  sup_ = 2.0 * tg * cr;
}

std::string EtaL::describe() const { return "eta_L(L=" + fmt(L_) + ")"; }

Jet EtaL::rho_L(double s) const {
  const Jet r = plateau_bump(s / L_);
  return {r.f, r.d1 / L_, r.d2 / (L_ * L_)};
}

Jet EtaL::g(double t) const {
  if (t >= plateau_lo_ && t <= plateau_hi_) return {1.0, 0.0, 0.0};
  if (t < plateau_lo_) {
    const Jet r = smoothstep5(plateau_lo_ - t);
    return {1.0 - r.f, r.d1, -r.d2};
  }
  const Jet r = smoothstep5(t - plateau_hi_);
  return {1.0 - r.f, -r.d1, -r.d2};
}

double EtaL::phi(double t, double s) const { return -2.0 * t * prof_->cumulative_kink(s); }

double EtaL::eval(double t, double s) const {
  if (std::abs(s) >= 2.0 * L_) return 0.0;
  const double gt = g(t).f;
  if (gt == 0.0) return 0.0;
  return phi(t, s) * rho_L(s).f * gt;
}

double EtaL::d_s(double t, double s) const {
  if (std::abs(s) >= 2.0 * L_) return 0.0;
  const double gt = g(t).f;
  if (gt == 0.0) return 0.0;
  const Jet r = rho_L(s);
  const double dq = prof_->deriv(s);
  return (-2.0 * t * dq * dq * r.f + phi(t, s) * r.d1) * gt;
}

std::shared_ptr<const EtaL> build_eta_L(double L, const Hypersurface& surf, std::shared_ptr<const OptimalProfile> prof) {
  return std::make_shared<EtaL>(L, std::move(prof), surf.curvature_range());
}

double F(const PerturbationEta& eta, const Hypersurface& surf, const OptimalProfile& prof, const QuadratureOptions& q) {
  const GaussRule rule = gauss_legendre(q.order);
  const double S = s_extent(eta, prof);
  double total = 0.0;
  for (const CurvatureGroup& grp : surf.curvature_groups(q.surface_resolution)) {
    const double H = grp.h;
    const double inner = integrate_with_breaks(
        [&](double s) {
          const double d = prof.deriv(s);
          const double v = eta.d_s(H, s) + 2.0 * d * d * H;
          return v * v;
        },
        -S, S, s_breaks_for(eta), q.panel_width, rule);
    total += grp.weight * inner;
  }
  return total;
}

FHatValue F_hat(const PerturbationEta& eta, const Hypersurface& surf, const OptimalProfile& prof,
                const QuadratureOptions& q) {
  const GaussRule rule = gauss_legendre(q.order);
  const double S = s_extent(eta, prof);
  FHatValue out;
  for (const CurvatureGroup& grp : surf.curvature_groups(q.surface_resolution)) {
    const double H = grp.h;
    double direct = 0.0, split = 0.0;
    for_each_node(-S, S, s_breaks_for(eta), q.panel_width, rule, [&](double s, double w) {
      const double d = prof.deriv(s);
      const double e = eta.d_s(H, s);
      const double v = e / d + 2.0 * d * H;
      const double sq = v * v;
      const double dec = e * e / (d * d) + 4.0 * d * d * H * H;
      if (!out.overflow && (!(sq < kOverflowGuard) || !(dec < kOverflowGuard))) {
        out.overflow = true;
        out.overflow_s = s;
      }
      direct += w * sq;
      split += w * dec;
    });
    out.value += grp.weight * direct;
    out.decomposed += grp.weight * split;
  }
  if (out.overflow) {
    out.value = std::numeric_limits<double>::infinity();
    out.decomposed = std::numeric_limits<double>::infinity();
  }
  return out;
}

double eta_L_bound(double L, const Hypersurface& surf, const OptimalProfile& prof, int surface_resolution) {
  const double C = prof.tail_constant();
  const double inner = C * C * std::exp(-2.0 * L / C) + prof.sigma() / L;
  double h2 = 0.0;
  for (const CurvatureGroup& grp : surf.curvature_groups(surface_resolution)) h2 += grp.weight * 4.0 * grp.h * grp.h;
  return 2.0 * L * h2 * inner * inner;
}

std::vector<SweepRow> eta_sweep(const std::vector<double>& Ls, const Hypersurface& surf,
                                std::shared_ptr<const OptimalProfile> prof, const QuadratureOptions& q, int threads) {
  std::vector<SweepRow> rows(Ls.size());
  parallel_for(Ls.size(), threads, [&](std::size_t i) {
    const auto eta = build_eta_L(Ls[i], surf, prof);
    SweepRow r;
    r.L = Ls[i];
    r.F = F(*eta, surf, *prof, q);
    const FHatValue fh = F_hat(*eta, surf, *prof, q);
    r.F_hat = fh.value;
    r.F_hat_decomposed = fh.decomposed;
    r.overflow = fh.overflow;
    r.bound = eta_L_bound(Ls[i], surf, *prof, q.surface_resolution);
    rows[i] = r;
  });
  return rows;
}

LRule parse_l_rule(const std::string& name) {
  if (name == "constant") return LRule::constant;
  if (name == "log") return LRule::log;
  if (name == "max4_log") return LRule::max4_log;
  if (name == "half_log") return LRule::half_log;
  if (name == "eighth_log") return LRule::eighth_log;
  fail(ErrorCode::config_error,
       "unknown L rule '" + name + "' (expected constant, log, max4_log, half_log or eighth_log)");
}

const char* l_rule_name(LRule rule) {
  switch (rule) {
    case LRule::constant: return "constant";
    case LRule::log: return "log";
    case LRule::max4_log: return "max4_log";
    case LRule::half_log: return "half_log";
    case LRule::eighth_log: return "eighth_log";
  }
  return "unknown";
}

double coupled_L(LRule rule, double eps, double L_const, double sigma, double t_max) {
  require(eps > 0.0 && eps < 1.0, ErrorCode::invalid_argument, "coupled_L: eps must lie in (0, 1)");
  const double lg = std::log(1.0 / eps);
  switch (rule) {
    case LRule::constant: return L_const;
    case LRule::log: return std::max(1.0, lg);
    case LRule::max4_log: return std::max(4.0, lg);
    case LRule::half_log: return std::max(1.0, 0.5 * lg);
    case LRule::eighth_log: return std::max(1.0, (lg - std::log(std::max(1.0, sigma * t_max))) / 8.0 - 0.5);
  }
  return L_const;
}

void export_eta_grid(const PerturbationEta& eta, std::pair<double, double> t_range, std::size_t nt,
                     std::pair<double, double> s_range, std::size_t ns, const std::string& path) {
  require(nt >= 1 && ns >= 2, ErrorCode::invalid_argument, "export_eta_grid: grid too small");
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::io_error, "cannot write '" + path + "'");
  out << "t,s,eta\n";
  for (std::size_t i = 0; i < nt; ++i) {
    const double t = nt == 1 ? t_range.first : t_range.first + (t_range.second - t_range.first) * i / (nt - 1);
    for (std::size_t j = 0; j < ns; ++j) {
      const double s = s_range.first + (s_range.second - s_range.first) * j / (ns - 1);
      out << fmt(t) << ',' << fmt(s) << ',' << fmt(eta.eval(t, s)) << '\n';
    }
  }
}

}  // namespace dgkit
