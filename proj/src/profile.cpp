#include "dgkit/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "dgkit/error.hpp"

namespace dgkit {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ProfileTable::ProfileTable(const Potential& p, double half_width, double step, std::vector<double> q,
                           std::vector<double> dq, std::vector<double> ddq, std::vector<double> offset)
    : a_(p.a()), b_(p.b()), half_width_(half_width), step_(step), q_(std::move(q)), dq_(std::move(dq)),
      ddq_(std::move(ddq)), off_(std::move(offset)) {
  require(q_.size() >= 3 && q_.size() % 2 == 1, ErrorCode::internal_error, "profile table: bad node count");
  center_ = q_.size() / 2;
  rate_a_ = dq_.front() / off_.front();
  rate_b_ = dq_.back() / off_.back();
}

ProfilePoint ProfileTable::at_node(std::size_t i) const {
  ProfilePoint out;
  out.q = q_[i];
  out.dq = dq_[i];
  out.ddq = ddq_[i];
  out.side = i >= center_ ? Well::b : Well::a;
  out.offset = off_[i];
  return out;
}

ProfilePoint ProfileTable::eval(double s) const {
  ProfilePoint out;
  if (s >= half_width_) {
    const double y = off_.back() * std::exp(-rate_b_ * (s - half_width_));
    out = {b_ - y, rate_b_ * y, -rate_b_ * rate_b_ * y, y, Well::b};
    return out;
  }
  if (s <= -half_width_) {
    const double y = off_.front() * std::exp(rate_a_ * (s + half_width_));
    out = {a_ + y, rate_a_ * y, rate_a_ * rate_a_ * y, y, Well::a};
    return out;
  }
  auto i = static_cast<std::size_t>(std::floor((s + half_width_) / step_));
  i = std::min(i, q_.size() - 2);
  const Well side = i >= center_ ? Well::b : Well::a;
  auto jet = [&](std::size_t k) -> Jet {
    if (side == Well::b) return {off_[k], -dq_[k], -ddq_[k]};
    const double y = k == center_ ? q_[k] - a_ : off_[k];
    return {y, dq_[k], ddq_[k]};
  };
  const Jet y = quintic_hermite(node(i), node(i + 1), jet(i), jet(i + 1), s);
  out.side = side;
  out.offset = y.f;
  if (side == Well::b) {
    out.q = b_ - y.f;
    out.dq = -y.d1;
    out.ddq = -y.d2;
  } else {
    out.q = a_ + y.f;
    out.dq = y.d1;
    out.ddq = y.d2;
  }
  return out;
}

ProfileTable integrate_profile(const Potential& p, double half_width, double step, const Forcing* forcing) {
  require(half_width > 0.0 && step > 0.0, ErrorCode::invalid_argument, "profile: half width and step must be positive");
  const auto n = static_cast<std::size_t>(std::ceil(half_width / step - 1e-9));
  const double h = half_width / static_cast<double>(n);
  const std::size_t total = 2 * n + 1;
  std::vector<double> q(total), dq(total), ddq(total), off(total);
  const double gamma0 = 0.5 * (p.a() + p.b());

  auto f = [&](double s) {
    if (!forcing || std::abs(s) >= forcing->support) return 0.0;
    return forcing->f(s);
  };
  auto fds = [&](double s) {
    if (!forcing || std::abs(s) >= forcing->support) return 0.0;
    return forcing->ds(s);
  };

  for (Well side : {Well::b, Well::a}) {
    const double dir = side == Well::b ? 1.0 : -1.0;
    auto rhs = [&](double sigma, double y) {
      const double s = dir * sigma;
      const double rad = p.w_near(side, y) - f(s);
      if (rad < 0.0) {
        fail(ErrorCode::admissibility_violation,
             "profile: radicand W(q) - eps*eta negative (" + fmt(rad) + ") at s = " + fmt(s));
      }
      return -std::sqrt(rad);
    };
    auto store = [&](std::size_t k, double sigma, double y) {
      const double s = dir * sigma;
      if (!(y > 0.0) || !std::isfinite(y)) {
        fail(ErrorCode::integration_failure, "profile: q left (a, b) at s = " + fmt(s));
      }
      const std::size_t idx = side == Well::b ? n + k : n - k;
      const double rad = p.w_near(side, y) - f(s);
      if (rad < 0.0) {
        fail(ErrorCode::admissibility_violation,
             "profile: radicand W(q) - eps*eta negative (" + fmt(rad) + ") at s = " + fmt(s));
      }
      const double v = std::sqrt(rad);
      q[idx] = p.at(side, y);
      dq[idx] = v;
      const double fs = fds(s);
      if (v > 0.0) {
        ddq[idx] = 0.5 * (p.dw_near(side, y) - fs / v);
      } else {
        require(fs == 0.0, ErrorCode::admissibility_violation, "profile: vanishing slope at s = " + fmt(s));
        ddq[idx] = 0.5 * p.dw_near(side, y);
      }
      off[idx] = y;
    };
    double y = side == Well::b ? p.b() - gamma0 : gamma0 - p.a();
    if (side == Well::b) store(0, 0.0, y);
    for (std::size_t k = 0; k < n; ++k) {
      const double sg = h * static_cast<double>(k);
      const double k1 = rhs(sg, y);
      const double k2 = rhs(sg + 0.5 * h, y + 0.5 * h * k1);
      const double k3 = rhs(sg + 0.5 * h, y + 0.5 * h * k2);
      const double k4 = rhs(sg + h, y + h * k3);
      y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      store(k + 1, sg + h, y);
    }
  }
  q[n] = gamma0;
  return ProfileTable(p, half_width, h, std::move(q), std::move(dq), std::move(ddq), std::move(off));
}

double default_half_width(const Potential& p) {
  const double lam = std::min(p.decay_rate(Well::a), p.decay_rate(Well::b));
  return std::max(10.0, 25.0 / lam);
}

double fit_exponential_constant(const std::vector<double>& x, const std::vector<double>& c) {
  require(x.size() == c.size(), ErrorCode::invalid_argument, "fit_exponential_constant: size mismatch");
  auto ok_nonpos = [&](double C) {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] <= 0.0 && c[i] > C * std::exp(x[i] / C)) return false;
    return true;
  };
  auto ok_all = [&](double C) {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (c[i] > C * std::exp(x[i] / C)) return false;
    return true;
  };
  double C = 1.0;
  if (!ok_nonpos(1.0)) {
    double hi = 2.0;
    while (!ok_nonpos(hi)) {
      hi *= 2.0;
      require(hi < 1e12, ErrorCode::internal_error, "fit_exponential_constant: no finite constant");
    }
    double lo = hi / 2.0;
    if (lo < 1.0) lo = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (ok_nonpos(mid)) hi = mid; else lo = mid;
    }
    C = hi;
  }
  while (!ok_all(C)) C *= 1.01;
  return C;
}

std::shared_ptr<const OptimalProfile> OptimalProfile::solve(std::shared_ptr<const Potential> p, double s_max,
                                                            double step) {
  require(static_cast<bool>(p), ErrorCode::invalid_argument, "solve_q0: null potential");
  if (s_max <= 0.0) s_max = default_half_width(*p);
  require(step > 0.0 && step <= 1e-2, ErrorCode::invalid_argument, "solve_q0: step must lie in (0, 1e-2]");
  require(s_max >= 10.0, ErrorCode::invalid_argument, "solve_q0: s_max must be at least 10");
  auto out = std::shared_ptr<OptimalProfile>(new OptimalProfile());
  out->potential_ = p;
  out->sigma_ = dgkit::sigma(*p);
  out->table_ = integrate_profile(*p, s_max, step, nullptr);
  const ProfileTable& t = out->table_;

  const std::size_t N = t.size();
  out->cum_.assign(N, 0.0);
  const GaussRule rule = gauss_legendre(8);
  const double ra = t.tail_rate(Well::a), rb = t.tail_rate(Well::b);
  out->cum_[0] = 0.5 * ra * t.at_node(0).offset * t.at_node(0).offset;
  for (std::size_t i = 0; i + 1 < N; ++i) {
    const double lo = t.node(i), hi = t.node(i + 1);
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes[k];
      const double d = t.eval(s).dq;
      acc += 0.5 * (hi - lo) * rule.weights[k] * d * d;
    }
    out->cum_[i + 1] = out->cum_[i] + acc;
  }
  const double yb = t.at_node(N - 1).offset;
  out->kink_table_ = out->cum_[N - 1] - out->cum_[0];
  out->kink_total_ = out->cum_[N - 1] + 0.5 * rb * yb * yb;

  std::vector<double> xs, cs;
  xs.reserve(4 * N);
  cs.reserve(4 * N);
  for (std::size_t i = 0; i < N; ++i) {
    const ProfilePoint pt = t.at_node(i);
    const double s = t.node(i);
    const double qa = pt.side == Well::a ? pt.offset : p->b() - p->a() - pt.offset;
    const double qb = pt.side == Well::b ? pt.offset : p->b() - p->a() - pt.offset;
    xs.push_back(s);
    cs.push_back(qa);
    xs.push_back(-s);
    cs.push_back(qb);
    xs.push_back(-std::abs(s));
    cs.push_back(std::abs(pt.dq));
    xs.push_back(-std::abs(s));
    cs.push_back(std::abs(pt.ddq));
  }
  out->tail_constant_ = 2.0 * fit_exponential_constant(xs, cs);
  return out;
}

double OptimalProfile::cumulative_kink(double s) const {
  const ProfileTable& t = table_;
  const double S = t.half_width();
  if (s <= -S) {
    const double y = t.eval(s).offset;
    return 0.5 * t.tail_rate(Well::a) * y * y;
  }
  if (s >= S) {
    const double y = t.eval(s).offset;
    return kink_total_ - 0.5 * t.tail_rate(Well::b) * y * y;
  }
  auto i = static_cast<std::size_t>(std::floor((s + S) / t.step()));
  i = std::min(i, t.size() - 2);
  auto jet = [&](std::size_t k) -> Jet {
    const ProfilePoint pt = t.at_node(k);
    return {cum_[k], pt.dq * pt.dq, 2.0 * pt.dq * pt.ddq};
  };
  return quintic_hermite(t.node(i), t.node(i + 1), jet(i), jet(i + 1), s).f;
}

double OptimalProfile::inverse_offset(Well side, double y) const {
  require(y > 0.0, ErrorCode::invalid_argument, "inverse: offset must be positive");
  const ProfileTable& t = table_;
  const double S = t.half_width();
  const double y_center = side == Well::b ? potential_->b() - gamma0() : gamma0() - potential_->a();
  require(y <= y_center, ErrorCode::invalid_argument, "inverse: offset beyond the center value");
  if (y == y_center) return 0.0;
  if (side == Well::b) {
    const double y_end = t.at_node(t.size() - 1).offset;
    if (y <= y_end) return S + std::log(y_end / y) / t.tail_rate(Well::b);
    double lo = 0.0, hi = S;  // offset decreasing in s
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      if (t.eval(mid).offset > y) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
  }
  const double y_end = t.at_node(0).offset;
  if (y <= y_end) return -S - std::log(y_end / y) / t.tail_rate(Well::a);
  double lo = -S, hi = 0.0;  // offset increasing in s
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (t.eval(mid).offset < y) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double OptimalProfile::inverse(double gamma) const {
  const Potential& p = *potential_;
  require(gamma > p.a() && gamma < p.b(), ErrorCode::invalid_argument, "inverse: gamma must lie in (a, b)");
  if (gamma == gamma0()) return 0.0;
  if (gamma > gamma0()) return inverse_offset(Well::b, p.b() - gamma);
  return inverse_offset(Well::a, gamma - p.a());
}

double OptimalProfile::ode_residual() const {
  double r = 0.0;
  for (std::size_t i = 0; i < table_.size(); ++i) {
    const ProfilePoint pt = table_.at_node(i);
    r = std::max(r, std::abs(pt.dq - std::sqrt(potential_->w_near(pt.side, pt.offset))));
  }
  return r;
}

TabulatedEta::TabulatedEta(std::vector<double> t, std::vector<double> s, std::vector<std::vector<double>> values)
    : t_(std::move(t)), s_(std::move(s)) {
  require(!t_.empty() && s_.size() >= 2, ErrorCode::invalid_argument, "tabulated eta: need t samples and two s samples");
  require(values.size() == t_.size(), ErrorCode::invalid_argument, "tabulated eta: row count mismatch");
  for (auto& row : values) {
    require(row.size() == s_.size(), ErrorCode::invalid_argument, "tabulated eta: column count mismatch");
    for (double v : row) sup_ = std::max(sup_, std::abs(v));
    rows_.emplace_back(s_, row);
  }
  tw_ = SplineWeights(t_);
  s_radius_ = std::max(std::abs(s_.front()), std::abs(s_.back()));
  radius_ = std::max({s_radius_, std::abs(t_.front()), std::abs(t_.back())});
}

std::shared_ptr<const TabulatedEta> TabulatedEta::from_csv(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::io_error, "cannot open eta grid '" + path + "'");
  std::string line;
  std::getline(in, line);
  line.erase(std::remove_if(line.begin(), line.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
             line.end());
  require(line == "t,s,eta", ErrorCode::io_error, "eta grid '" + path + "' must start with header \"t,s,eta\"");
  std::map<double, std::map<double, double>> grid;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> vals;
    require(parse_csv_row(line, vals) && vals.size() == 3, ErrorCode::io_error,
            "eta grid '" + path + "': malformed row");
    grid[vals[0]][vals[1]] = vals[2];
  }
  require(!grid.empty(), ErrorCode::io_error, "eta grid '" + path + "' is empty");
  std::vector<double> ts, ss;
  for (auto& [s, v] : grid.begin()->second) ss.push_back(s);
  std::vector<std::vector<double>> vals;
  for (auto& [t, row] : grid) {
    require(row.size() == ss.size(), ErrorCode::io_error, "eta grid '" + path + "' is not a full tensor grid");
    ts.push_back(t);
    std::vector<double> r;
    for (double s : ss) {
      auto it = row.find(s);
      require(it != row.end(), ErrorCode::io_error, "eta grid '" + path + "' is not a full tensor grid");
      r.push_back(it->second);
    }
    vals.push_back(std::move(r));
  }
  return std::make_shared<TabulatedEta>(std::move(ts), std::move(ss), std::move(vals));
}

Jet TabulatedEta::combine(double t, double s) const {
  if (t < t_.front() || t > t_.back() || s < s_.front() || s > s_.back()) return {};
  std::vector<double> w0, w1, w2;
  tw_.weights(t, w0, w1, w2);
  Jet out;
  for (std::size_t j = 0; j < rows_.size(); ++j) {
    if (w0[j] == 0.0) continue;
    const Jet r = rows_[j].eval(s);
    out.f += w0[j] * r.f;
    out.d1 += w0[j] * r.d1;
  }
  return out;
}

double TabulatedEta::eval(double t, double s) const { return combine(t, s).f; }
double TabulatedEta::d_s(double t, double s) const { return combine(t, s).d1; }

double compute_eps0(const PerturbationEta& eta, const OptimalProfile& prof) {
  const double sup = eta.sup_abs();
  if (!(sup > 0.0)) return std::numeric_limits<double>::infinity();
  const double R = eta.support_radius();
  const Potential& p = prof.potential();
  double m = std::numeric_limits<double>::infinity();
  const int n = 8000;
  for (int i = 0; i <= n; ++i) {
    const double s = -R + 2.0 * R * i / n;
    const ProfilePoint pt = prof.eval(2.0 * s);
    m = std::min(m, p.w_near(pt.side, pt.offset));
  }
  return m / sup;
}

std::shared_ptr<const PerturbedProfileFamily> PerturbedProfileFamily::solve(
    std::shared_ptr<const OptimalProfile> prof, std::shared_ptr<const PerturbationEta> eta, double eps,
    std::vector<double> t_grid, AdmissibilityPolicy policy, double step, int threads) {
  require(static_cast<bool>(prof), ErrorCode::invalid_argument, "solve_perturbed: null profile");
  if (!eta) eta = std::make_shared<ZeroEta>();
  require(eps >= 0.0 && std::isfinite(eps), ErrorCode::invalid_argument, "solve_perturbed: eps must be nonnegative");
  require(!t_grid.empty(), ErrorCode::invalid_argument, "solve_perturbed: empty t_grid");
  std::sort(t_grid.begin(), t_grid.end());
  t_grid.erase(std::unique(t_grid.begin(), t_grid.end()), t_grid.end());
  auto out = std::shared_ptr<PerturbedProfileFamily>(new PerturbedProfileFamily());
  out->profile_ = prof;
  out->eta_ = eta;
  out->eps_ = eps;
  out->policy_ = policy;
  out->eps0_ = compute_eps0(*eta, *prof);
  if (policy == AdmissibilityPolicy::lemma_bound && eps > 0.0 && !(eps < out->eps0_)) {
    fail(ErrorCode::admissibility_violation,
         "solve_perturbed: eps = " + fmt(eps) + " is not below eps0 = " + fmt(out->eps0_));
  }
  out->weights_ = SplineWeights(t_grid);
  const Potential& p = prof->potential();
  const double S = std::max(prof->half_width(), eta->s_support() + 2.0);
  if (step <= 0.0) step = prof->step();
  out->tables_.resize(t_grid.size());
  const bool trivial = eps == 0.0 || !(eta->sup_abs() > 0.0);
  parallel_for(t_grid.size(), threads, [&](std::size_t j) {
    if (trivial && S == prof->half_width() && step == prof->step()) {
      out->tables_[j] = prof->table();
      return;
    }
    const double t = t_grid[j];
    Forcing f;
    f.f = [&, t](double s) { return eps * eta->eval(t, s); };
    f.ds = [&, t](double s) { return eps * eta->d_s(t, s); };
    f.support = trivial ? 0.0 : eta->s_support();
    out->tables_[j] = integrate_profile(p, S, step, &f);
  });
  const double lam = std::min(p.decay_rate(Well::a), p.decay_rate(Well::b));
  out->tail_cut_ = eta->s_support() + 46.0 / lam;
  return out;
}

std::vector<double> PerturbedProfileFamily::s_breaks() const {
  std::vector<double> b = eta_->s_breaks();
  b.push_back(0.0);
  return b;
}

FamilyPoint PerturbedProfileFamily::eval_node(std::size_t j, double s) const {
  const ProfilePoint pt = tables_[j].eval(s);
  FamilyPoint out;
  out.q = pt.q;
  out.offset = pt.offset;
  out.side = pt.side;
  out.q_s = pt.dq;
  out.q_ss = pt.ddq;
  const double t = weights_.knots()[j];
  out.defect = pt.dq > 0.0 ? -eta_->d_s(t, s) / pt.dq : 0.0;
  out.discrepancy = -eps_ * eta_->eval(t, s);
  return out;
}

FamilyPoint PerturbedProfileFamily::eval(double t, double s) const {
  const std::size_t m = tables_.size();
  if (m == 1) return eval_node(0, s);
  std::vector<double> w0, w1, w2;
  weights_.weights(t, w0, w1, w2);
  const long knot = weights_.exact_knot(t);
  std::vector<FamilyPoint> pts(m);
  for (std::size_t j = 0; j < m; ++j) pts[j] = eval_node(j, s);
  const double sign = pts[0].side == Well::b ? -1.0 : 1.0;  // dq/dy
  FamilyPoint out;
  if (knot >= 0) {
    out = pts[static_cast<std::size_t>(knot)];
  } else {
    out.side = pts[0].side;
    for (std::size_t j = 0; j < m; ++j) {
      out.offset += w0[j] * pts[j].offset;
      out.q_s += w0[j] * pts[j].q_s;
      out.q_ss += w0[j] * pts[j].q_ss;
      out.defect += w0[j] * pts[j].defect;
    }
    const Potential& p = potential();
    out.q = p.at(out.side, out.offset);
    if (eps_ > 0.0) {
      double spread = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double d = pts[j].offset - out.offset;
        spread += w0[j] * d * d;
      }
      out.defect += 0.5 * p.ddw(out.q) * spread / eps_;
    }
    double slope_spread = 0.0, spread = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double d = pts[j].q_s - out.q_s, o = pts[j].offset - out.offset;
      out.discrepancy += w0[j] * pts[j].discrepancy;
      slope_spread += w0[j] * d * d;
      spread += w0[j] * o * o;
    }
    out.discrepancy += 0.5 * p.ddw(out.q) * spread - slope_spread;
  }
  out.q_t = 0.0;
  out.q_tt = 0.0;
  for (std::size_t j = 1; j < m; ++j) {
    const double d = pts[j].offset - pts[0].offset;
    out.q_t += sign * w1[j] * d;
    out.q_tt += sign * w2[j] * d;
  }
  return out;
}

double PerturbedProfileFamily::identity_residual_first() const {
  const Potential& p = potential();
  double r = 0.0;
  for (std::size_t j = 0; j < tables_.size(); ++j) {
    const double t = weights_.knots()[j];
    for (std::size_t i = 0; i < tables_[j].size(); ++i) {
      const ProfilePoint pt = tables_[j].at_node(i);
      const double s = tables_[j].node(i);
      r = std::max(r, std::abs(pt.dq * pt.dq - p.w_near(pt.side, pt.offset) + eps_ * eta_->eval(t, s)));
    }
  }
  return r;
}

double PerturbedProfileFamily::identity_residual_second_fd() const {
  const Potential& p = potential();
  double r = 0.0;
  for (std::size_t j = 0; j < tables_.size(); ++j) {
    const double t = weights_.knots()[j];
    const ProfileTable& tab = tables_[j];
    const double h = tab.step();
    for (std::size_t i = 1; i + 1 < tab.size(); ++i) {
      const ProfilePoint pt = tab.at_node(i);
      const double s = tab.node(i);
      const double fd = (tab.at_node(i + 1).dq - tab.at_node(i - 1).dq) / (2.0 * h);
      const double res = 2.0 * fd - p.dw_near(pt.side, pt.offset) + eps_ * eta_->d_s(t, s) / pt.dq;
      r = std::max(r, std::abs(res));
    }
  }
  return r;
}

FamilyLimitReport verify_family_limits(const std::vector<std::shared_ptr<const PerturbedProfileFamily>>& fams) {
  require(fams.size() >= 3, ErrorCode::invalid_argument, "verify_family_limits: need at least three families");
  FamilyLimitReport rep;
  for (std::size_t k = 0; k < fams.size(); ++k) {
    const auto& f = *fams[k];
    if (k > 0) {
      require(f.eps() < fams[k - 1]->eps(), ErrorCode::invalid_argument,
              "verify_family_limits: eps must be strictly decreasing");
    }
    const OptimalProfile& prof = f.profile();
    double sq = 0, sdq = 0, st = 0, stt = 0;
    const ProfileTable& tab0 = f.table(0);
    const std::size_t stride = std::max<std::size_t>(1, tab0.size() / 2000);
    for (std::size_t j = 0; j < f.t_grid().size(); ++j) {
      for (std::size_t i = 0; i < tab0.size(); i += stride) {
        const double s = tab0.node(i);
        const FamilyPoint fp = f.eval(f.t_grid()[j], s);
        const ProfilePoint q0 = prof.eval(s);
        sq = std::max(sq, std::abs(fp.offset - q0.offset));
        sdq = std::max(sdq, std::abs(fp.q_s - q0.dq));
        st = std::max(st, std::abs(fp.q_t));
        stt = std::max(stt, std::abs(fp.q_tt));
      }
    }
    rep.eps.push_back(f.eps());
    rep.sup_q.push_back(sq);
    rep.sup_dq.push_back(sdq);
    rep.sup_dt.push_back(st);
    rep.sup_dtt.push_back(stt);
  }
  auto check = [&](const std::vector<double>& v, const char* name) {
    for (std::size_t k = 1; k < v.size(); ++k) {
      if (v[k] == 0.0 && v[k - 1] == 0.0) continue;
      if (!(v[k] < v[k - 1])) {
        rep.monotone = false;
        rep.violations.push_back(std::string(name) + " not decreasing at eps = " + fmt(rep.eps[k]));
        continue;
      }
      const double ratio = (v[k] / v[k - 1]) * 0.5 / (rep.eps[k] / rep.eps[k - 1]);
      if (ratio > 0.7) {
        rep.ratios_ok = false;
        rep.violations.push_back(std::string(name) + " ratio " + fmt(ratio) + " above 0.7 at eps = " +
                                 fmt(rep.eps[k]));
      } else if (ratio < 0.3) {
        rep.notes.push_back(std::string(name) + " ratio " + fmt(ratio) + " below 0.3 (faster than linear) at eps = " +
                            fmt(rep.eps[k]));
      }
    }
  };
  check(rep.sup_q, "sup|q_eps - q0|");
  check(rep.sup_dq, "sup|ds q_eps - q0'|");
  check(rep.sup_dt, "sup|dt q_eps|");
  check(rep.sup_dtt, "sup|dtt q_eps|");
  return rep;
}

void export_profile_csv(const PerturbedProfileFamily& fam, const std::string& path, std::size_t stride) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::io_error, "cannot write '" + path + "'");
  out << "t,s,q,dq,ddq\n";
  stride = std::max<std::size_t>(1, stride);
  for (std::size_t j = 0; j < fam.t_grid().size(); ++j) {
    const ProfileTable& tab = fam.table(j);
    for (std::size_t i = 0; i < tab.size(); i += stride) {
      const ProfilePoint pt = tab.at_node(i);
      out << fmt(fam.t_grid()[j]) << ',' << fmt(tab.node(i)) << ',' << fmt(pt.q) << ',' << fmt(pt.dq) << ','
          << fmt(pt.ddq) << '\n';
    }
  }
}

void export_profile_csv(const OptimalProfile& prof, const std::string& path, std::size_t stride) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::io_error, "cannot write '" + path + "'");
  out << "t,s,q,dq,ddq\n";
  stride = std::max<std::size_t>(1, stride);
  const ProfileTable& tab = prof.table();
  for (std::size_t i = 0; i < tab.size(); i += stride) {
    const ProfilePoint pt = tab.at_node(i);
    out << "0," << fmt(tab.node(i)) << ',' << fmt(pt.q) << ',' << fmt(pt.dq) << ',' << fmt(pt.ddq) << '\n';
  }
}

}  // namespace dgkit
