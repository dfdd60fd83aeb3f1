#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "dgkit/corollary.hpp"
#include "dgkit/error.hpp"

using namespace dgkit;

namespace {

constexpr double pi = std::numbers::pi;

std::shared_ptr<const OptimalProfile> dw_profile() {
  static const auto p = OptimalProfile::solve(std::make_shared<const Potential>(Potential::double_well()));
  return p;
}

}  // namespace

TEST_CASE("nested radii for k = 1 in the plane") {
  const auto r = nested_radii(1, 2);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == doctest::Approx(1.0 / (12 * pi)).epsilon(1e-14));
  CHECK(r[1] == doctest::Approx(1.0 / (6 * pi)).epsilon(1e-14));
  CHECK(r[2] == doctest::Approx(1.0 / (4 * pi)).epsilon(1e-14));
  CHECK(nested_min_gap(1, 2) == doctest::Approx(1.0 / (12 * pi)).epsilon(1e-12));
}

TEST_CASE("nested radii identity and bounds") {
  for (int n : {2, 3}) {
    const double omega = sphere_area(n);
    for (int k = 1; k <= 6; ++k) {
      const auto r = nested_radii(k, n);
      REQUIRE(r.size() == static_cast<std::size_t>(2 * k + 1));
      double area = 0.0;
      for (int j = -k; j <= k; ++j) {
        const double lhs = omega * std::pow(r[j + k], n - 1);
        const double rhs = 1.0 / (2.0 * k + 1.0) + j / (2.0 * k * (2.0 * k + 1.0));
        CHECK(std::abs(lhs - rhs) <= 1e-12);
        area += lhs;
        if (j > -k) CHECK(r[j + k] > r[j + k - 1]);
      }
      CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(r.back() < 0.3);
      if (n == 2) CHECK(r.back() < 0.08);
    }
  }
  CHECK_THROWS_AS(nested_radii(0, 2), Error);
  CHECK_THROWS_AS(nested_radii(1, 1), Error);
}

TEST_CASE("k rule") {
  const KRule rule{8.0, 3};
  CHECK(k_for_eps(rule, 2, 1e-5) == 1);
  CHECK(k_for_eps(rule, 2, 1e-9) == 3);
  for (double eps : {1e-5, 1e-7, 1e-9, 1e-12}) {
    const int k = k_for_eps(rule, 2, eps);
    CHECK(nested_min_gap(k, 2) > rule.gap_factor * std::sqrt(eps));
    if (k < rule.k_cap) CHECK(nested_min_gap(k + 1, 2) <= rule.gap_factor * std::sqrt(eps));
  }
  try {
    k_for_eps(rule, 2, 1e-3);
    FAIL("expected schedule_error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::schedule_error);
    CHECK(std::string(e.what()).find("0.001") != std::string::npos);
  }
  CHECK_THROWS_AS(k_for_eps(KRule{8.0, 0}, 2, 1e-5), Error);
}

TEST_CASE("nested family") {
  const NestedSphereFamily fam = build_nested_family(2, 2);
  CHECK(fam.radii.size() == 5);
  CHECK(fam.surface->area() == doctest::Approx(1.0).epsilon(1e-12));
  const auto t = fam.t_grid();
  CHECK(t.size() == 5);
  CHECK(std::is_sorted(t.begin(), t.end()));
}

TEST_CASE("small dirac study") {
  DiracOptions opt;
  opt.k_rule = KRule{8.0, 3};
  opt.threads = 2;
  const auto st = dirac_study(dw_profile(), 2, {1e-5, 1e-9, 1e-12}, {0.5, 0.1}, opt);
  REQUIRE(st.rows.size() == 3);
  CHECK(st.rows[0].k == 1);
  CHECK(st.rows[2].k == 3);
  for (const auto& row : st.rows) {
    CAPTURE(row.eps);
    CHECK(std::isfinite(row.report.E + row.report.G));
    CHECK(row.report.E == doctest::Approx(dw_profile()->sigma()).epsilon(0.01));
    for (std::size_t i = 0; i < st.probes.size(); ++i) {
      CHECK(row.mu_in[i] + row.mu_out[i] == doctest::Approx(row.report.mu_total).epsilon(1e-10));
      CHECK(row.mu_in[i] == doctest::Approx(1.0).epsilon(0.01));
    }
  }
  CHECK(st.summary.tail_mu_in_min == doctest::Approx(1.0).epsilon(0.01));
  CHECK(st.summary.tail_exterior_max < 1e-6);
  CHECK(st.summary.G_decreasing_tail);
  CHECK(st.summary.max_E_plus_G >= st.rows[0].report.E + st.rows[0].report.G);

  const auto path = std::filesystem::temp_directory_path() / "dgkit_test_dirac.csv";
  write_dirac_csv(st, path.string(), "dirac");
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 5);
  std::filesystem::remove(path);
}
