#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>

#include "dgkit/error.hpp"
#include "dgkit/eta_design.hpp"
#include "dgkit/geometry.hpp"
#include "dgkit/profile.hpp"

using namespace dgkit;

namespace {

std::shared_ptr<const OptimalProfile> dw_profile(double step = 1e-3) {
  return OptimalProfile::solve(std::make_shared<const Potential>(Potential::double_well()), 0.0, step);
}

std::shared_ptr<const OptimalProfile> cos_profile() {
  return OptimalProfile::solve(std::make_shared<const Potential>(Potential::cosine()));
}

// Plateau bump in s with max 1 and support [-2, 2]; constant in t on [-2, 2].
class BumpEta final : public PerturbationEta {
 public:
  explicit BumpEta(double amp) : amp_(amp) {}
  double eval(double t, double s) const override { return amp_ * bump(t) * bump(s); }
  double d_s(double t, double s) const override {
    const double h = 1e-6;
    return amp_ * bump(t) * (bump(s + h) - bump(s - h)) / (2 * h);
  }
  double support_radius() const override { return 2.0; }
  double sup_abs() const override { return std::abs(amp_); }
  std::string describe() const override { return "bump"; }

 private:
  static double bump(double x) { return plateau_bump(x).f; }
  double amp_;
};

// Classical RK4 for q' = sqrt(W(q)) from (s0, gamma) to s1.
double rk4_profile(const Potential& p, double s0, double gamma, double s1, int steps) {
  const double h = (s1 - s0) / steps;
  double q = gamma;
  const auto f = [&](double x) { return std::sqrt(std::max(0.0, p.w(x))); };
  for (int i = 0; i < steps; ++i) {
    const double k1 = f(q), k2 = f(q + 0.5 * h * k1), k3 = f(q + 0.5 * h * k2), k4 = f(q + h * k3);
    q += h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0;
  }
  return q;
}

}  // namespace

TEST_CASE("optimal profile closed forms") {
  const auto dw = dw_profile();
  const auto cs = cos_profile();
  double e_dw = 0.0, e_cs = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double s = -10.0 + 20.0 * i / 20000.0;
    e_dw = std::max(e_dw, std::abs(dw->value(s) - std::tanh(s)));
    e_cs = std::max(e_cs, std::abs(cs->value(s) - 4.0 * std::atan(std::exp(s / std::numbers::sqrt2))));
  }
  CHECK(e_dw <= 1e-6);
  CHECK(e_cs <= 1e-6);
  CHECK(dw->value(0.0) == 0.0);
  CHECK(cs->value(0.0) == doctest::Approx(std::numbers::pi).epsilon(1e-15));
  CHECK(dw->gamma0() == 0.0);
}

TEST_CASE("kink energy") {
  const auto dw = dw_profile();
  const auto cs = cos_profile();
  CHECK(dw->kink_energy() == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
  CHECK(cs->kink_energy() == doctest::Approx(4.0 * std::numbers::sqrt2).epsilon(1e-10));
  const double C = dw->tail_constant();
  CHECK(dw->kink_energy_table() <= dw->sigma() / 2 + C * C * C * std::exp(-2 * dw->half_width() / C) + 1e-12);
  CHECK(std::abs(dw->kink_energy() - dw->sigma() / 2) <= 1e-7);
}

TEST_CASE("profile invariants") {
  const auto dw = dw_profile();
  const ProfileTable& t = dw->table();
  const double C = dw->tail_constant();
  CHECK(C >= 1.0);
  double prev = -2.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const ProfilePoint p = t.at_node(i);
    const double s = t.node(i);
    CHECK(p.q > -1.0);
    CHECK(p.q < 1.0);
    CHECK(p.dq > 0.0);
    CHECK(p.q > prev);
    prev = p.q;
    const double bound = C * std::exp(-std::abs(s) / C);
    CHECK(p.dq <= bound);
    CHECK(std::abs(p.ddq) <= bound);
    CHECK(p.offset <= bound);
  }
  CHECK(dw->ode_residual() <= 1e-8);
  CHECK(t.at_node(t.center()).q == 0.0);
}

TEST_CASE("inverse and translates") {
  const auto dw = dw_profile();
  for (double g : {-0.9, -0.3, 0.0, 0.5, 0.99}) CHECK(dw->value(dw->inverse(g)) == doctest::Approx(g).epsilon(1e-9));
  CHECK(dw->inverse(0.5) == doctest::Approx(std::atanh(0.5)).epsilon(1e-9));
  const double y = 1e-20;
  CHECK(dw->eval(dw->inverse_offset(Well::b, y)).offset == doctest::Approx(y).epsilon(1e-6));
  const Potential& p = dw->potential();
  const double gamma = 0.3, s0 = 0.7;
  for (double s1 : {1.5, 3.0}) {
    const double ref = rk4_profile(p, s0, gamma, s1, 20000);
    CHECK(dw->value(s1 - s0 + dw->inverse(gamma)) == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("grid refinement is fourth order") {
  const auto ref = dw_profile(1e-3);
  const auto c1 = dw_profile(1e-2);
  const auto c2 = dw_profile(5e-3);
  double e1 = 0.0, e2 = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double s = -5.0 + 10.0 * i / 200.0;
    e1 = std::max(e1, std::abs(c1->value(s) - ref->value(s)));
    e2 = std::max(e2, std::abs(c2->value(s) - ref->value(s)));
  }
  CHECK(e1 <= 1e-8);
  CHECK(e1 / e2 >= 10.0);
}

TEST_CASE("admissibility threshold") {
  const auto dw = dw_profile();
  CHECK(compute_eps0(ZeroEta(), *dw) == std::numeric_limits<double>::infinity());
  const double expected = std::pow(1.0 / std::cosh(4.0), 4);
  CHECK(compute_eps0(BumpEta(1.0), *dw) == doctest::Approx(expected).epsilon(1e-6));
  CHECK(compute_eps0(BumpEta(2.0), *dw) == doctest::Approx(expected / 2).epsilon(1e-6));
}

TEST_CASE("perturbed family") {
  const auto dw = dw_profile();
  const std::vector<double> t{-1.0, 0.0, 1.0, 2.0, 3.0};
  SUBCASE("zero perturbation reproduces q0") {
    const auto f = PerturbedProfileFamily::solve(dw, std::make_shared<const ZeroEta>(), 0.0, t);
    for (double s : {-7.0, -1.0, 0.0, 0.3, 4.0}) {
      CHECK(f->eval(0.4, s).q == doctest::Approx(dw->value(s)).epsilon(1e-14));
      CHECK(f->eval(0.4, s).q_t == 0.0);
    }
  }
  SUBCASE("bump perturbation") {
    const auto eta = std::make_shared<const BumpEta>(1.0);
    const double eps0 = compute_eps0(*eta, *dw);
    const std::vector<double> tw{-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 4.0};
    const auto f = PerturbedProfileFamily::solve(dw, eta, eps0 / 2, tw);
    CHECK(f->identity_residual_first() <= 1e-7);
    CHECK(f->identity_residual_second_fd() <= 1e-5);
    for (double s : {-1.0, 0.5, 2.0}) CHECK(f->eval_node(0, s).q == doctest::Approx(dw->value(s)).epsilon(1e-13));
    const double C = dw->tail_constant();
    for (std::size_t j = 0; j < tw.size(); ++j) {
      for (double s : {-12.0, -3.0, 0.0, 3.0, 12.0}) {
        const FamilyPoint p = f->eval_node(j, s);
        CHECK(p.q > -1.0);
        CHECK(p.q < 1.0);
        CHECK(p.q_s > 0.0);
        CHECK(p.q_s <= C * std::exp(-std::abs(s) / C));
        CHECK(std::abs(p.q_ss) <= C * std::exp(-std::abs(s) / C));
        if (s > 0) CHECK(1.0 - p.q <= C * std::exp(-s / C));
        if (s < 0) CHECK(p.q + 1.0 <= C * std::exp(s / C));
      }
    }
    try {
      PerturbedProfileFamily::solve(dw, eta, 2 * eps0, tw);
      FAIL("expected admissibility_violation");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::admissibility_violation);
    }
  }
  SUBCASE("radicand failure under the integration policy") {
    try {
      PerturbedProfileFamily::solve(dw, std::make_shared<const BumpEta>(1.0), 5.0, t, AdmissibilityPolicy::integration);
      FAIL("expected a failure");
    } catch (const Error& e) {
      CHECK((e.code() == ErrorCode::admissibility_violation || e.code() == ErrorCode::integration_failure));
    }
  }
}

TEST_CASE("family limits") {
  const auto dw = dw_profile();
  const Hypersurface circle = Hypersurface::sphere(1.0, 2);
  const auto eta = build_eta_L(1.0, circle, dw);
  std::vector<double> t;
  for (int i = 0; i < 21; ++i) t.push_back(0.0 + 2.0 * i / 20.0);
  std::vector<std::shared_ptr<const PerturbedProfileFamily>> fams, zero;
  for (int k = 0; k < 4; ++k) {
    fams.push_back(PerturbedProfileFamily::solve(dw, eta, 1e-2 / std::pow(2.0, k), t, AdmissibilityPolicy::integration));
  }
  const FamilyLimitReport r = verify_family_limits(fams);
  CHECK(r.monotone);
  CHECK(r.ratios_ok);
  for (std::size_t k = 1; k < r.sup_q.size(); ++k) {
    CHECK(r.sup_q[k] / r.sup_q[k - 1] == doctest::Approx(0.5).epsilon(0.1));
  }
  for (int k = 0; k < 3; ++k) {
    zero.push_back(PerturbedProfileFamily::solve(dw, std::make_shared<const ZeroEta>(), 1e-2 / std::pow(2.0, k), t));
  }
  const FamilyLimitReport z = verify_family_limits(zero);
  for (double v : z.sup_q) CHECK(v == 0.0);
  for (double v : z.sup_dtt) CHECK(v == 0.0);
  CHECK(z.violations.empty());
}

TEST_CASE("profile csv export") {
  const auto dw = dw_profile();
  const auto path = std::filesystem::temp_directory_path() / "dgkit_test_profile.csv";
  export_profile_csv(*dw, path.string(), 100);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,s,q,dq,ddq");
  std::filesystem::remove(path);
}
