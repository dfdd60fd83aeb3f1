#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include <json.hpp>

#include "dgkit/corollary.hpp"
#include "dgkit/error.hpp"
#include "dgkit/radial_analysis.hpp"

using namespace dgkit;

namespace {

std::shared_ptr<const OptimalProfile> dw_profile() {
  static const auto p = OptimalProfile::solve(std::make_shared<const Potential>(Potential::double_well()));
  return p;
}

RadialField shells(std::vector<double> radii, double eps) {
  return RadialField::synthetic_shells(*dw_profile(), std::move(radii), eps, 2, 0.05, 1.3, 0.05 * eps);
}

}  // namespace

TEST_CASE("crossings") {
  const double eps = 4e-3;
  const auto one = find_crossings(shells({1.0}, eps), 0.1);
  REQUIRE(one.radii.size() == 1);
  CHECK(one.radii[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(one.warnings.empty());

  const auto two = find_crossings(shells({1.0, 0.5}, eps), 0.1);
  REQUIRE(two.radii.size() == 2);
  CHECK(two.radii[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(two.radii[1] == doctest::Approx(0.5).epsilon(1e-10));

  const auto inner_only = find_crossings(shells({1.0, 0.5}, eps), 0.75);
  CHECK(inner_only.radii.size() == 1);

  std::vector<double> r, u;
  for (int i = 0; i <= 200; ++i) {
    r.push_back(0.1 + 0.005 * i);
    u.push_back(1.0);
  }
  const auto none = find_crossings(RadialField::from_samples(eps, 2, dw_profile()->potential_ptr(), r, u), 0.1);
  CHECK(none.radii.empty());
  CHECK_THROWS_AS(find_crossings(shells({1.0}, eps), 0.0), Error);
}

TEST_CASE("blow-up windows match the profile") {
  const double eps = 2e-3;
  const auto prof = dw_profile();
  const RadialField f = shells({1.0, 0.5}, eps);
  const BlowUpWindow outer = blow_up(f, *prof, 1.0, 6.0);
  const BlowUpWindow inner = blow_up(f, *prof, 0.5, 6.0);
  CHECK(outer.matched == MatchedProfile::minus);
  CHECK(inner.matched == MatchedProfile::plus);
  CHECK(outer.c1_distance < 1e-6);
  CHECK(inner.c1_distance < 1e-6);
  CHECK(outer.c1_distance == std::min(outer.c1_plus, outer.c1_minus));
  CHECK(outer.energy == doctest::Approx(prof->sigma()).epsilon(1e-3));
  CHECK(std::abs(outer.discrepancy) < 1e-6);
  CHECK(outer.residual_abs < 1e-6);

  const BlowUpWindow shifted = blow_up(f, *prof, 1.0 + 0.5 * eps, 6.0);
  CHECK(shifted.gamma == doctest::Approx(prof->value(-0.5)).epsilon(1e-8));
  CHECK(shifted.c1_distance < 1e-6);

  try {
    blow_up(f, *prof, 0.75, 6.0);
    FAIL("expected invalid_center");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_center);
  }
  CHECK_THROWS_AS(blow_up(f, *prof, 1.299, 6.0), Error);
}

TEST_CASE("window energy tends to sigma as the window grows") {
  const auto prof = dw_profile();
  const RadialField f = shells({1.0}, 1e-3);
  double prev = 1e300;
  for (double m : {1.0, 2.0, 4.0, 8.0}) {
    const double gap = std::abs(blow_up(f, *prof, 1.0, m).energy - prof->sigma());
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("two-shell decomposition") {
  const auto prof = dw_profile();
  const RadialBuilder b = [](double eps) { return std::make_shared<const RadialField>(shells({1.0, 0.5}, eps)); };
  const auto dec = decompose(b, *prof, {8e-3, 4e-3, 2e-3, 1e-3}, 0.1, default_window, 2);
  CHECK(dec.stable);
  REQUIRE(dec.radii.size() == 2);
  CHECK(dec.radii[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(dec.radii[1] == doctest::Approx(0.5).epsilon(1e-8));
  const double sigma = prof->sigma();
  CHECK(dec.masses[0] == doctest::Approx(sigma * 2 * std::numbers::pi * 1.0).epsilon(0.02));
  CHECK(dec.masses[1] == doctest::Approx(sigma * 2 * std::numbers::pi * 0.5).epsilon(0.02));
  CHECK(dec.residual_mass < 0.01);
  CHECK(dec.discrepancy_mass < 0.01);
  for (const auto& row : dec.per_eps) {
    for (double c : row.match_c1) CHECK(c < 1e-4);
  }
  const auto js = nlohmann::json::parse(dec.to_json());
  CHECK(js["radii"].size() == 2);
  CHECK(default_window(1e-2) == doctest::Approx(2.5));
  CHECK_THROWS_AS(decompose(b, *prof, {1e-3, 2e-3}, 0.1), Error);
}

TEST_CASE("unstable crossing count is reported") {
  const auto prof = dw_profile();
  const RadialBuilder b = [](double eps) {
    if (eps > 1.5e-3) return std::make_shared<const RadialField>(shells({1.0, 0.5}, eps));
    return std::make_shared<const RadialField>(shells({1.0}, eps));
  };
  const auto dec = decompose(b, *prof, {8e-3, 4e-3, 2e-3, 1e-3}, 0.1);
  CHECK_FALSE(dec.stable);
  CHECK_FALSE(dec.instability.empty());
}

TEST_CASE("nested family masses split into the Dirac mass") {
  const auto prof = dw_profile();
  const NestedSphereFamily fam = build_nested_family(1, 2);
  const auto t_grid = fam.t_grid();
  const RadialBuilder b = [&](double eps) {
    const auto pf = PerturbedProfileFamily::solve(prof, std::make_shared<const ZeroEta>(), eps, t_grid);
    const RecoveryField f(fam.surface, pf);
    const auto count = static_cast<std::size_t>(std::ceil(0.09 / (0.05 * eps))) + 1;
    return std::make_shared<const RadialField>(RadialField::sample_recovery(f, 0.01, 0.1, count));
  };
  const auto dec = decompose(b, *prof, {1e-4, 5e-5, 2.5e-5, 1.25e-5}, 0.01);
  CHECK(dec.stable);
  REQUIRE(dec.radii.size() == 3);
  double total = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(dec.radii[i] == doctest::Approx(fam.radii[2 - i]).epsilon(1e-6));
    total += dec.masses[i];
  }
  CHECK(total / prof->sigma() == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("out-of-zeros diagnostic") {
  const RadialField f = shells({1.0, 0.5}, 4e-3);
  const auto rep = out_of_zeros_diagnostic(f, 0.6, 0.9);
  CHECK(rep.near_well);
  CHECK(rep.energy < 1e-12);
  CHECK(rep.identity_residual <= 1e-6 * std::max(rep.identity_scale, 1e-300) + 1e-20);
  const auto crossing = out_of_zeros_diagnostic(f, 0.9, 1.1);
  CHECK_FALSE(crossing.near_well);
  CHECK(crossing.identity_residual <= 1e-4 * crossing.identity_scale);
  CHECK_THROWS_AS(out_of_zeros_diagnostic(f, 0.9, 0.6), Error);
}

TEST_CASE("radial csv round trip") {
  const RadialField f = shells({1.0}, 1e-2);
  const auto path = std::filesystem::temp_directory_path() / "dgkit_test_radial.csv";
  f.write_csv(path.string());
  const RadialField g = RadialField::from_csv(path.string(), 1e-2, 2, dw_profile()->potential_ptr());
  REQUIRE(g.r().size() == f.r().size());
  for (double r : {0.3, 0.99, 1.0, 1.013}) {
    CHECK(g.eval(r).f == doctest::Approx(f.eval(r).f).epsilon(1e-12));
    CHECK(g.eval(r).d1 == doctest::Approx(f.eval(r).d1).epsilon(1e-9));
  }
  std::filesystem::remove(path);
  CHECK_THROWS_AS(RadialField::from_csv(path.string(), 1e-2, 2, dw_profile()->potential_ptr()), Error);
}
