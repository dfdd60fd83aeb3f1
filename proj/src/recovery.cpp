#include "dgkit/recovery.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "dgkit/error.hpp"

namespace dgkit {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

CutoffTheta::CutoffTheta(double eps) : eps_(eps) {
  require(eps > 0.0 && eps < 1.0, ErrorCode::invalid_argument, "cutoff: eps must lie in (0, 1)");
  inner_ = 1.0 / std::sqrt(eps);
}

Jet CutoffTheta::at(double s) const {
  const double x = std::abs(s) - inner_;
  const Jet r = smoothstep5(x);
  const double sg = s < 0.0 ? -1.0 : 1.0;
  return {r.f, sg * r.d1, r.d2};
}

CutoffTheta build_cutoff(double eps) { return CutoffTheta(eps); }

RecoveryField::RecoveryField(std::shared_ptr<const Hypersurface> surf,
                             std::shared_ptr<const PerturbedProfileFamily> family)
    : surf_(std::move(surf)), family_(std::move(family)), eps_(family_ ? family_->eps() : 0.5), theta_(eps_) {
  require(static_cast<bool>(surf_) && static_cast<bool>(family_), ErrorCode::invalid_argument,
          "recovery field: null surface or family");
  require(std::sqrt(eps_) + eps_ < surf_->delta(), ErrorCode::schedule_error,
          "recovery field: sqrt(eps) + eps = " + fmt(std::sqrt(eps_) + eps_) + " is not below the tube half width " +
              fmt(surf_->delta()) + " at eps = " + fmt(eps_));
}

FieldSample RecoveryField::sample(double s, const TubeScalars& ts) const {
  FieldSample out;
  const Potential& p = potential();
  const double as = std::abs(s);
  if (as > theta_.outer()) {
    out.side = s >= 0.0 ? Well::b : Well::a;
    out.u = p.well(out.side);
    return out;
  }
  const bool need_t = ts.grad_h_sq != 0.0 || ts.lap_h != 0.0;
  const FamilyPoint fp = family_->eval(ts.h, s);
  const double e = eps_;
  const double V = need_t ? fp.q_tt * ts.grad_h_sq + fp.q_t * ts.lap_h : 0.0;
  const double th_grad_sq = need_t ? e * e * fp.q_t * fp.q_t * ts.grad_h_sq : 0.0;
  out.side = fp.side;
  out.in_a = as < theta_.inner();
  out.in_b = !out.in_a;
  if (out.in_a) {
    out.u = fp.q;
    out.offset = fp.offset;
    out.du_dd = fp.q_s / e;
    out.du_dh = fp.q_t;
    out.lap = V + fp.q_ss / (e * e) + fp.q_s * ts.lap_d / e;
    out.energy = fp.q_s * fp.q_s + th_grad_sq + p.w_near(fp.side, fp.offset);
    out.discrepancy = fp.discrepancy + th_grad_sq;
    out.mismatch = 2.0 * e * V + fp.defect + 2.0 * fp.q_s * ts.lap_d;
    return out;
  }
  const Jet th = theta_.at(s);
  const double one = 1.0 - th.f;
  const double gap = fp.side == Well::b ? fp.offset : -fp.offset;  // chi - q
  out.offset = one * fp.offset;
  out.u = p.at(fp.side, out.offset);
  const double normal = one * fp.q_s + gap * th.d1;
  out.du_dd = normal / e;
  out.du_dh = one * fp.q_t;
  const double tang = one * one * th_grad_sq;
  out.lap = one * (V + fp.q_ss / (e * e) + fp.q_s * ts.lap_d / e) - 2.0 * th.d1 * fp.q_s / (e * e) +
            gap * (th.d2 / (e * e) + th.d1 * ts.lap_d / e);
  const double wu = p.w_near(fp.side, out.offset);
  out.energy = normal * normal + tang + wu;
  out.discrepancy = normal * normal + tang - wu;
  out.mismatch = one * (2.0 * e * V + fp.defect + 2.0 * fp.q_s * ts.lap_d) +
                 (one * p.dw_near(fp.side, fp.offset) - p.dw_near(fp.side, out.offset)) / e -
                 4.0 * th.d1 * fp.q_s / e + 2.0 * gap * (th.d2 / e + th.d1 * ts.lap_d);
  return out;
}

FieldSample RecoveryField::shell_sample(std::size_t shell, double s) const {
  require(surf_->is_radial(), ErrorCode::invalid_argument, "shell_sample: surface is not radial");
  return sample(s, surf_->shell_scalars(shell, eps_ * s));
}

FieldSample RecoveryField::torus_sample(double phi, double s) const {
  require(surf_->kind() == SurfaceKind::torus, ErrorCode::invalid_argument, "torus_sample: surface is not a torus");
  return sample(s, surf_->torus_scalars(phi, eps_ * s));
}

FieldValue RecoveryField::eval(std::span<const double> x) const {
  const int n = surf_->dim();
  require(static_cast<int>(x.size()) == n, ErrorCode::invalid_argument, "eval_field: point dimension mismatch");
  FieldValue out;
  out.grad.assign(static_cast<std::size_t>(n), 0.0);
  const double d = surf_->signed_distance(x);
  if (std::abs(d) > eps_ * theta_.outer()) {
    out.u = potential().well(d >= 0.0 ? Well::b : Well::a);
    return out;
  }
  TubeFrame fr;
  try {
    fr = surf_->frame(x);
  } catch (const Error& err) {
    fail(ErrorCode::internal_error, std::string("eval_field: tube lookup failed inside the band: ") + err.what());
  }
  const FieldSample fs = sample(d / eps_, fr.scalars);
  out.u = fs.u;
  out.lap = fs.lap;
  for (int c = 0; c < n; ++c) out.grad[c] = fs.du_dd * fr.normal[c] + fs.du_dh * fr.grad_h[c];
  return out;
}

void export_radial_slice(const RecoveryField& f, double r_lo, double r_hi, std::size_t count, const std::string& path) {
  require(f.surface().is_radial(), ErrorCode::invalid_argument, "radial slice: surface is not radial");
  require(count >= 2 && r_hi > r_lo && r_lo >= 0.0, ErrorCode::invalid_argument, "radial slice: bad range");
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::io_error, "cannot write '" + path + "'");
  out << "r,u,du,lap_u\n";
  const int n = f.surface().dim();
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    const double r = r_lo + (r_hi - r_lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    x[0] = r;
    const FieldValue v = f.eval(x);
    out << fmt(r) << ',' << fmt(v.u) << ',' << fmt(v.grad[0]) << ',' << fmt(v.lap) << '\n';
  }
}

void export_torus_slice(const RecoveryField& f, std::size_t n_phi, std::size_t n_tau, const std::string& path) {
  const Hypersurface& surf = f.surface();
  require(surf.kind() == SurfaceKind::torus, ErrorCode::invalid_argument, "torus slice: surface is not a torus");
  require(n_phi >= 1 && n_tau >= 2, ErrorCode::invalid_argument, "torus slice: grid too small");
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::io_error, "cannot write '" + path + "'");
  out << "node,phi,tau,u\n";
  const double r = surf.torus_minor(), w = f.eps() * (f.theta().outer() + 2.0);
  for (std::size_t i = 0; i < n_phi; ++i) {
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_phi);
    for (std::size_t j = 0; j < n_tau; ++j) {
      const double tau = r - w + 2.0 * w * static_cast<double>(j) / static_cast<double>(n_tau - 1);
      const double x[3] = {surf.torus_major() + tau * std::cos(phi), 0.0, tau * std::sin(phi)};
      out << i << ',' << fmt(phi) << ',' << fmt(tau) << ',' << fmt(f.eval(x).u) << '\n';
    }
  }
}

}  // namespace dgkit
