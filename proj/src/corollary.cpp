#include "dgkit/corollary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "dgkit/error.hpp"

namespace dgkit {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool tube_ok(int k, int n, double eps) {
  const double gap = nested_min_gap(k, n);
  const auto r = nested_radii(k, n);
  const double delta = 0.9 * std::min(r.front(), 0.5 * gap);
  return std::sqrt(eps) + eps < delta;
}

}  // namespace

std::vector<double> nested_radii(int k, int n) {
  require(k >= 1 && n >= 2, ErrorCode::invalid_argument, "nested_radii: need k >= 1 and n >= 2");
  const double omega = sphere_area(n);
  std::vector<double> r;
  for (int j = -k; j <= k; ++j) {
    const double frac = 1.0 / (2.0 * k + 1.0) + j / (2.0 * k * (2.0 * k + 1.0));
    r.push_back(std::pow(frac / omega, 1.0 / (n - 1)));
  }
  return r;
}

double nested_min_gap(int k, int n) {
  const auto r = nested_radii(k, n);
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < r.size(); ++i) g = std::min(g, r[i] - r[i - 1]);
  return g;
}

int k_for_eps(const KRule& rule, int n, double eps) {
  require(rule.k_cap >= 1, ErrorCode::invalid_argument, "k rule: k_cap must be at least 1");
  require(eps > 0.0 && eps < 1.0, ErrorCode::schedule_error, "k rule: eps = " + fmt(eps) + " outside (0, 1)");
  int best = 0;
  for (int k = 1; k <= rule.k_cap; ++k) {
    if (nested_min_gap(k, n) > rule.gap_factor * std::sqrt(eps)) best = k;
  }
  if (best == 0) {
    fail(ErrorCode::schedule_error,
         "k rule: no admissible k at eps = " + fmt(eps) + " (k = 1 has min gap " + fmt(nested_min_gap(1, n)) + ")");
  }
  if (!tube_ok(best, n, eps)) {
    fail(ErrorCode::schedule_error,
         "tube admissibility fails for the pair (eps = " + fmt(eps) + ", k = " + std::to_string(best) + ")");
  }
  return best;
}

std::vector<double> NestedSphereFamily::t_grid() const {
  std::vector<double> t;
  for (const Shell& s : surface->shells()) t.push_back(s.orientation * (n - 1) / s.radius);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

NestedSphereFamily build_nested_family(int k, int n) {
  NestedSphereFamily f;
  f.k = k;
  f.n = n;
  f.radii = nested_radii(k, n);
  f.surface = std::make_shared<const Hypersurface>(Hypersurface::concentric_spheres(f.radii, n, true));
  return f;
}

DiracStudy dirac_study(std::shared_ptr<const OptimalProfile> prof, int n, const std::vector<double>& schedule,
                       const std::vector<double>& probes, const DiracOptions& opt) {
  require(static_cast<bool>(prof), ErrorCode::invalid_argument, "dirac study: null profile");
  require(!schedule.empty(), ErrorCode::schedule_error, "dirac study: empty schedule");
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    require(schedule[i] < schedule[i - 1], ErrorCode::schedule_error, "dirac study: schedule must be decreasing");
  }
  for (double r : probes) require(r > 0.0, ErrorCode::invalid_argument, "dirac study: probes must be positive");
  DiracStudy out;
  out.probes = probes;
  out.rows.resize(schedule.size());
  std::vector<int> ks;
  for (double eps : schedule) ks.push_back(k_for_eps(opt.k_rule, n, eps));
  parallel_for(schedule.size(), opt.threads, [&](std::size_t i) {
    const double eps = schedule[i];
    try {
      const NestedSphereFamily fam = build_nested_family(ks[i], n);
      const auto t = fam.t_grid();
      const double t_max = std::max(std::abs(t.front()), std::abs(t.back()));
      const double L = coupled_L(opt.l_rule, eps, opt.L_const, prof->sigma(), t_max);
      const auto eta = build_eta_L(L, *fam.surface, prof);
      const auto pf = PerturbedProfileFamily::solve(prof, eta, eps, t, AdmissibilityPolicy::integration);
      const RecoveryField field(fam.surface, pf);
      DiracRow& row = out.rows[i];
      row.eps = eps;
      row.k = ks[i];
      row.L = L;
      row.report = evaluate(field, opt.lambda, RegionSpec::all(), opt.quad);
      for (const BallMass& bm : measure_profile(field, probes, opt.quad)) {
        row.mu_in.push_back(bm.mu);
        row.mu_out.push_back(bm.exterior);
      }
    } catch (const Error& err) {
      fail(err.code(), "dirac study: eps = " + fmt(eps) + ", k = " + std::to_string(ks[i]) + ": " + err.what());
    }
  });
  DiracSummary& s = out.summary;
  s.G_decreasing = out.rows.size() >= 2;
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    const DiracRow& r = out.rows[i];
    s.max_E_plus_G = std::max(s.max_E_plus_G, r.report.E + r.report.G);
    if (i > 0) {
      if (!(r.report.G < out.rows[i - 1].report.G)) s.G_decreasing = false;
      for (std::size_t p = 0; p < probes.size(); ++p) {
        if (r.mu_out[p] > out.rows[i - 1].mu_out[p]) s.exterior_nonincreasing = false;
      }
    }
  }
  const DiracRow& last = out.rows.back();
  std::size_t first = out.rows.size() - 1;
  while (first > 0 && out.rows[first - 1].k == last.k) --first;
  s.G_decreasing_tail = out.rows.size() - first >= 2;
  for (std::size_t i = first + 1; i < out.rows.size(); ++i) {
    if (!(out.rows[i].report.G < out.rows[i - 1].report.G)) s.G_decreasing_tail = false;
  }
  s.tail_mu_in_min = last.mu_in.empty() ? 0.0 : *std::min_element(last.mu_in.begin(), last.mu_in.end());
  s.tail_exterior_max = last.mu_out.empty() ? 0.0 : *std::max_element(last.mu_out.begin(), last.mu_out.end());
  return out;
}

void write_dirac_csv(const DiracStudy& study, const std::string& path, const std::string& header_comment) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::io_error, "cannot write '" + path + "'");
  if (!header_comment.empty()) out << "# " << header_comment << '\n';
  out << "eps,k,L,E,G,G_hat,mu_total,xi_total";
  for (double r : study.probes) out << ",mu_in_" << fmt(r) << ",mu_out_" << fmt(r);
  out << '\n';
  for (const DiracRow& row : study.rows) {
    out << fmt(row.eps) << ',' << row.k << ',' << fmt(row.L) << ',' << fmt(row.report.E) << ',' << fmt(row.report.G)
        << ',' << fmt(row.report.G_hat) << ',' << fmt(row.report.mu_total) << ',' << fmt(row.report.xi_total);
    for (std::size_t p = 0; p < study.probes.size(); ++p) out << ',' << fmt(row.mu_in[p]) << ',' << fmt(row.mu_out[p]);
    out << '\n';
  }
}

}  // namespace dgkit
