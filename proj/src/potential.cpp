#include "dgkit/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>

#include "dgkit/error.hpp"
#include "dgkit/numerics.hpp"
#include "json.hpp"

namespace dgkit {

Potential::Potential(std::string name, double a, double b, Fn w, Fn dw, Fn ddw, std::optional<double> kappa)
    : name_(std::move(name)), a_(a), b_(b), w_(std::move(w)), dw_(std::move(dw)), ddw_(std::move(ddw)), kappa_(kappa) {
  require(b_ > a_, ErrorCode::invalid_potential, "potential: wells must satisfy a < b");
  require(static_cast<bool>(w_) && static_cast<bool>(dw_) && static_cast<bool>(ddw_), ErrorCode::invalid_potential,
          "potential: w, dw and ddw must all be provided");
  if (kappa_) require(*kappa_ > 0.0, ErrorCode::invalid_potential, "potential: kappa must be positive");
}

Potential Potential::double_well() {
  Potential p(
      "double_well", -1.0, 1.0, [](double u) { return (1 - u * u) * (1 - u * u); },
      [](double u) { return -4.0 * u * (1 - u * u); }, [](double u) { return 12.0 * u * u - 4.0; }, 2.0);
  auto sq = [](double y) { const double v = y * (2.0 - y); return v * v; };
  p.w_a_ = sq;
  p.w_b_ = sq;
  p.dw_a_ = [](double y) { return 4.0 * (1.0 - y) * y * (2.0 - y); };
  p.dw_b_ = [](double y) { return -4.0 * (1.0 - y) * y * (2.0 - y); };
  return p;
}

Potential Potential::cosine() {
  Potential p(
      "cosine", 0.0, 2.0 * std::numbers::pi, [](double u) { return 1.0 - std::cos(u); },
      [](double u) { return std::sin(u); }, [](double u) { return std::cos(u); });
  auto half = [](double y) { const double s = std::sin(0.5 * y); return 2.0 * s * s; };
  p.w_a_ = half;
  p.w_b_ = half;
  p.dw_a_ = [](double y) { return std::sin(y); };
  p.dw_b_ = [](double y) { return -std::sin(y); };
  return p;
}

Potential Potential::builtin(const std::string& name) {
  if (name == "double_well") return double_well();
  if (name == "cosine") return cosine();
  fail(ErrorCode::invalid_argument, "unknown builtin potential '" + name + "' (expected cosine or double_well)");
}

Potential Potential::from_table(std::string name, std::vector<double> u, std::vector<double> w) {
  require(u.size() == w.size() && u.size() >= 4, ErrorCode::invalid_potential,
          "tabulated potential: need at least four (u, w) samples");
  double wmax = 0.0;
  for (double v : w) wmax = std::max(wmax, std::abs(v));
  require(wmax > 0.0, ErrorCode::invalid_potential, "tabulated potential: w vanishes identically");
  const double tol = 1e-12 * wmax;
  std::optional<std::size_t> ia, ib;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (std::abs(w[i]) > tol) continue;
    if (!ia) {
      ia = i;
      continue;
    }
    if (i == *ia + 1) {
      ia = i;
      continue;
    }
    ib = i;
    break;
  }
  require(ia && ib, ErrorCode::invalid_potential, "tabulated potential: could not find two consecutive zeros");
  const double a = u[*ia], b = u[*ib];
  auto spline = std::make_shared<NaturalSpline>(std::move(u), std::move(w));
  return Potential(
      std::move(name), a, b, [spline](double x) { return spline->eval(x).f; },
      [spline](double x) { return spline->eval(x).d1; }, [spline](double x) { return spline->eval(x).d2; });
}

Potential Potential::from_csv(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::io_error, "cannot open potential CSV '" + path + "'");
  std::string line;
  std::getline(in, line);
  line.erase(std::remove_if(line.begin(), line.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
             line.end());
  require(line == "u,w", ErrorCode::io_error, "potential CSV '" + path + "' must start with header \"u,w\"");
  std::vector<double> us, ws;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> vals;
    require(parse_csv_row(line, vals) && vals.size() == 2, ErrorCode::io_error,
            "potential CSV '" + path + "': malformed row " + std::to_string(lineno));
    us.push_back(vals[0]);
    ws.push_back(vals[1]);
  }
  return from_table(path, std::move(us), std::move(ws));
}

Potential Potential::scaled(double c) const {
  require(c > 0.0, ErrorCode::invalid_argument, "potential: scale factor must be positive");
  auto mul = [c](const Fn& f) -> Fn {
    if (!f) return {};
    return [c, f](double x) { return c * f(x); };
  };
  std::optional<double> k;
  if (kappa_) k = *kappa_ * std::sqrt(c);
  Potential p(name_ + "*" + std::to_string(c), a_, b_, mul(w_), mul(dw_), mul(ddw_), k);
  p.w_a_ = mul(w_a_);
  p.w_b_ = mul(w_b_);
  p.dw_a_ = mul(dw_a_);
  p.dw_b_ = mul(dw_b_);
  return p;
}

double Potential::w_near(Well side, double y) const {
  const Fn& f = side == Well::a ? w_a_ : w_b_;
  return f ? f(y) : w_(at(side, y));
}

double Potential::dw_near(Well side, double y) const {
  const Fn& f = side == Well::a ? dw_a_ : dw_b_;
  return f ? f(y) : dw_(at(side, y));
}

double Potential::decay_rate(Well side) const {
  const double c = ddw_(well(side));
  require(c > 0.0, ErrorCode::invalid_potential, "potential: degenerate well (W'' <= 0)");
  return std::sqrt(0.5 * c);
}

double sigma(const Potential& p, int quad_order) {
  require(quad_order >= 2, ErrorCode::invalid_argument, "sigma: quadrature order too small");
  const GaussRule rule = gauss_legendre(quad_order);
  auto root = [&](double u) { return std::sqrt(std::max(0.0, p.w(u))); };
  const double len = p.b() - p.a();
  double prev = integrate_panels(root, p.a(), p.b(), len / 4.0, rule);
  for (int level = 3; level <= 16; ++level) {
    const double width = len / std::ldexp(1.0, level);
    const double cur = integrate_panels(root, p.a(), p.b(), width, rule);
    if (std::abs(cur - prev) <= 1e-10 * std::abs(cur)) return 2.0 * cur;
    prev = cur;
  }
  fail(ErrorCode::quadrature_failure, "sigma: composite quadrature did not converge, last estimate " +
                                          std::to_string(2.0 * prev));
}

PotentialReport verify_assumptions(const Potential& p, const SampleGrid& grid) {
  require(grid.points >= 1000, ErrorCode::invalid_argument, "verify_assumptions: need at least 1000 samples");
  const double margin = grid.margin.value_or(p.b() - p.a());
  require(margin > 0.0, ErrorCode::invalid_argument, "verify_assumptions: margin must be positive");
  const double lo = p.a() - margin, hi = p.b() + margin;
  const double dx = (hi - lo) / static_cast<double>(grid.points - 1);
  const double hfd = 1e-5 * (p.b() - p.a());

  PotentialReport rep;
  bool positive_inside = true, consistent = true, convex_outside = static_cast<bool>(p.kappa());
  double kappa_min = std::numeric_limits<double>::infinity();
  double min_inside = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.points; ++i) {
    const double u = lo + dx * static_cast<double>(i);
    const double wu = p.w(u);
    if (wu < 0.0) {
      fail(ErrorCode::invalid_potential, "potential " + p.name() + " is negative at u = " + std::to_string(u));
    }
    const double fd1 = (p.w(u + hfd) - p.w(u - hfd)) / (2 * hfd);
    const double fd2 = (p.dw(u + hfd) - p.dw(u - hfd)) / (2 * hfd);
    if (std::abs(fd1 - p.dw(u)) > 1e-6 * std::max(1.0, std::abs(p.dw(u))) ||
        std::abs(fd2 - p.ddw(u)) > 1e-6 * std::max(1.0, std::abs(p.ddw(u))))
      consistent = false;
    if (u > p.a() && u < p.b()) {
      min_inside = std::min(min_inside, wu);
      if (!(wu > 0.0)) positive_inside = false;
    } else if (u < p.a() || u > p.b()) {
      if (wu > 0.0) kappa_min = std::min(kappa_min, std::abs(p.dw(u)) / std::sqrt(wu));
      if (p.kappa() && p.ddw(u) < 2.0 * (*p.kappa()) * (*p.kappa()) - 1e-9) convex_outside = false;
    }
  }
  const double scale = std::max(1.0, p.w(0.5 * (p.a() + p.b())));
  const bool zeros = std::abs(p.w(p.a())) <= 1e-12 * scale && std::abs(p.w(p.b())) <= 1e-12 * scale;
  rep.flags.w1 = consistent;
  rep.flags.w2 = zeros && positive_inside;
  rep.flags.w3 = p.ddw(p.a()) > 0.0 && p.ddw(p.b()) > 0.0;
  rep.flags.w3_plus = convex_outside;
  rep.kappa_ratio_min = kappa_min;
  rep.min_w_inside = min_inside;
  rep.sigma = rep.flags.w2 ? sigma(p) : 0.0;
  return rep;
}

std::string PotentialReport::to_json() const {
  nlohmann::ordered_json j;
  j["sigma"] = sigma;
  j["kappa_ratio_min"] = kappa_ratio_min;
  j["min_w_inside"] = min_w_inside;
  j["flags"] = {{"W1", flags.w1}, {"W2", flags.w2}, {"W3", flags.w3}, {"W3+", flags.w3_plus}};
  return j.dump(2);
}

}  // namespace dgkit
