#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "dgkit/error.hpp"
#include "dgkit/eta_design.hpp"
#include "dgkit/functionals.hpp"
#include "dgkit/radial_analysis.hpp"

using namespace dgkit;

namespace {

constexpr double pi = std::numbers::pi;

std::shared_ptr<const OptimalProfile> dw_profile() {
  static const auto p = OptimalProfile::solve(std::make_shared<const Potential>(Potential::double_well()));
  return p;
}

std::shared_ptr<const RecoveryField> circle_field(double eps) {
  const auto surf = std::make_shared<const Hypersurface>(Hypersurface::sphere(1.0, 2));
  const auto fam = PerturbedProfileFamily::solve(dw_profile(), std::make_shared<const ZeroEta>(), eps, {1.0});
  return std::make_shared<const RecoveryField>(surf, fam);
}

double int_dq4() {
  const GaussRule g = gauss_legendre(8);
  return integrate_panels([](double s) { return std::pow(1.0 / std::cosh(s), 8); }, -40.0, 40.0, 0.25, g);
}

void check_report_invariants(const EnergyReport& r, double sigma) {
  CHECK(r.E == doctest::Approx(r.E_on_A + r.E_on_B).epsilon(1e-12));
  CHECK(r.G == doctest::Approx(r.G_on_A + r.G_on_B).epsilon(1e-12));
  CHECK(r.DG == doctest::Approx(r.G + r.lambda * r.E).epsilon(1e-12));
  CHECK(r.mu_total >= 0.0);
  CHECK(std::abs(r.xi_total) <= sigma * r.mu_total);
  CHECK(r.xi_abs >= std::abs(r.xi_total) * (1 - 1e-12));
}

}  // namespace

TEST_CASE("constant field has no energy") {
  std::vector<double> r, u;
  for (int i = 0; i <= 100; ++i) {
    r.push_back(0.1 + i * 0.01);
    u.push_back(-1.0);
  }
  const RadialField f = RadialField::from_samples(0.01, 2, dw_profile()->potential_ptr(), r, u);
  const EnergyReport rep = evaluate(f, 1.0);
  CHECK(rep.E < 1e-25);
  CHECK(rep.G < 1e-25);
  CHECK(rep.DG < 1e-25);
  CHECK(rep.mu_total < 1e-25);
  CHECK(std::abs(rep.xi_total) < 1e-25);
}

TEST_CASE("circle recovery energy converges to sigma times length") {
  const double target = 16.0 * pi / 3.0;
  double prev = 1e300;
  for (double eps : {0.1, 0.05, 0.025}) {
    const EnergyReport r = evaluate(*circle_field(eps), 1.0);
    check_report_invariants(r, 8.0 / 3.0);
    const double err = std::abs(r.E - target);
    CHECK(err < prev);
    prev = err;
    CHECK(r.G > 0.0);
    CHECK(r.G <= 16.0 * int_dq4() * 2 * pi);
  }
  CHECK(prev <= 1e-6);
}

TEST_CASE("refinement and band localization") {
  const double eps = 0.02;
  const auto f = circle_field(eps);
  const EnergyReport r = evaluate_checked(*f, 1.0);
  const double C = dw_profile()->tail_constant();
  const double reach = std::sqrt(eps) + eps;
  const double leb_b = pi * ((1 + reach) * (1 + reach) - (1 - reach) * (1 - reach)) -
                       pi * ((1 + std::sqrt(eps)) * (1 + std::sqrt(eps)) - (1 - std::sqrt(eps)) * (1 - std::sqrt(eps)));
  CHECK(r.E_on_B <= C * std::exp(-1.0 / (C * std::sqrt(eps))) * leb_b / eps);
  QuadSpec fine;
  fine.panel_width = 0.125;
  fine.order = 12;
  const EnergyReport rf = evaluate(*f, 1.0, RegionSpec::all(), fine);
  CHECK(rf.E == doctest::Approx(r.E).epsilon(1e-6));
  CHECK(rf.G == doctest::Approx(r.G).epsilon(1e-6));
}

TEST_CASE("regions") {
  const auto f = circle_field(0.02);
  const EnergyReport all = evaluate(*f, 1.0);
  const EnergyReport band = evaluate(*f, 1.0, RegionSpec::tube_band(-1.0, 1.0));
  const EnergyReport ann = evaluate(*f, 1.0, RegionSpec::annulus(0.5, 1.5));
  const EnergyReport inner = evaluate(*f, 1.0, RegionSpec::ball(0.5));
  CHECK(band.E < all.E);
  CHECK(band.E > 0.5 * all.E);
  CHECK(ann.E == doctest::Approx(all.E).epsilon(1e-12));
  CHECK(inner.E == 0.0);
  const EnergyReport lo = evaluate(*f, 1.0, RegionSpec::tube_band(-40.0, 0.0));
  const EnergyReport hi = evaluate(*f, 1.0, RegionSpec::tube_band(0.0, 40.0));
  CHECK(lo.E + hi.E == doctest::Approx(all.E).epsilon(1e-12));
  CHECK(RegionSpec::ball(0.5).describe().find("ball") != std::string::npos);
}

TEST_CASE("radial sampling of a recovery field reproduces its energy") {
  const double eps = 0.02;
  const auto f = circle_field(eps);
  const RadialField rf = RadialField::sample_recovery(*f, 0.5, 1.5, 20001);
  const EnergyReport a = evaluate(*f, 1.0);
  const EnergyReport b = evaluate(rf, 1.0);
  CHECK(b.E == doctest::Approx(a.E).epsilon(1e-7));
  CHECK(b.G == doctest::Approx(a.G).epsilon(1e-5));
  check_report_invariants(b, 8.0 / 3.0);
}

TEST_CASE("convergence study with zero perturbation") {
  const StudyResult st = convergence_study(circle_field, {0.1, 0.05, 0.025, 0.0125}, 1.0);
  REQUIRE(st.rows.size() == 4);
  CHECK(st.summary.E.limit == doctest::Approx(16.0 * pi / 3.0).epsilon(1e-6));
  const double two_f0 = 2.0 * F(ZeroEta(), Hypersurface::sphere(1.0, 2), *dw_profile());
  CHECK(st.summary.G.limit > 0.0);
  CHECK(st.summary.G.limit == doctest::Approx(two_f0).epsilon(0.1));
  CHECK(st.summary.G_decreasing);
  CHECK(st.summary.equipartition_monotone);
  CHECK(st.summary.G.order == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("convergence study errors") {
  CHECK_THROWS_AS(convergence_study(circle_field, {0.1, 0.05, 0.025}, 1.0), Error);
  CHECK_THROWS_AS(convergence_study(circle_field, {0.1, 0.05, 0.06, 0.01}, 1.0), Error);
  const FieldBuilder failing = [](double eps) -> std::shared_ptr<const RecoveryField> {
    if (eps < 0.03) fail(ErrorCode::admissibility_violation, "builder refused");
    return circle_field(eps);
  };
  try {
    convergence_study(failing, {0.1, 0.05, 0.025, 0.0125}, 1.0);
    FAIL("expected the builder failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::admissibility_violation);
    CHECK(std::string(e.what()).find("0.025") != std::string::npos);
  }
}

TEST_CASE("ball masses") {
  double prev_xi = 1e300;
  for (double eps : {0.04, 0.02, 0.01}) {
    const auto m = measure_profile(*circle_field(eps), {2.0, 0.5});
    CHECK(m[0].mu / (2 * pi) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(m[1].mu == 0.0);
    CHECK(m[0].exterior <= 1e-12);
    CHECK(m[1].exterior == doctest::Approx(m[0].mu).epsilon(1e-12));
    CHECK(std::abs(m[0].xi) < prev_xi);
    prev_xi = std::abs(m[0].xi);
  }
}

TEST_CASE("report csv") {
  const auto path = std::filesystem::temp_directory_path() / "dgkit_test_reports.csv";
  write_reports_csv({evaluate(*circle_field(0.05), 1.0)}, path.string(), "note");
  std::ifstream in(path);
  std::string c, h;
  std::getline(in, c);
  std::getline(in, h);
  CHECK(c == "# note");
  CHECK(h.rfind("eps,E,G,G_hat,DG,mu_total,xi_total", 0) == 0);
  std::filesystem::remove(path);
}
