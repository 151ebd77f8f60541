#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "beamfold/checks.hpp"
#include "beamfold/newton.hpp"

using namespace beamfold;

TEST_CASE("shape of the exact linear solution") {
  DiscreteProblem dp(catalog_lookup("constant_load"), 501);
  auto sol = newton_solve(dp, 38.4, std::vector<double>(dp.interior(), 0.0));
  auto rep = verify_solution_shape(dp, sol);
  CHECK(rep.symmetry_err <= 1e-10);
  CHECK(rep.symmetry_ok);
  // u'' = lambda (2 - 12x + 12x^2)/24 changes sign at (3 +- sqrt 3)/6
  CHECK(rep.inflection_count == 2);
  CHECK(rep.d2_0 > 0.0);
  CHECK(rep.monotone_left_ok);
  CHECK(rep.pass());
}

TEST_CASE("shape of a singular-model solution") {
  DiscreteProblem dp(catalog_lookup("inverse_square"), 251);
  double lg = 384.0 * 0.1;
  auto sol = solve_at_max(dp, 0.1, lg, linear_predictor(dp, lg));
  auto rep = verify_solution_shape(dp, sol);
  CHECK(rep.pass());
  CHECK(rep.symmetry_err <= 1e-7 * sol.p);
}

TEST_CASE("perturbed node breaks the symmetry check") {
  DiscreteProblem dp(catalog_lookup("constant_load"), 251);
  auto sol = newton_solve(dp, 38.4, std::vector<double>(dp.interior(), 0.0));
  sol.U[40] += 1e-3;
  sol.p = sol.U[dp.mid_index];
  auto rep = verify_solution_shape(dp, sol);
  CHECK_FALSE(rep.symmetry_ok);
  CHECK(rep.symmetry_err >= 0.5e-3);
}

TEST_CASE("energy identity: constant load has E = -lambda^2/288") {
  const double lambda = 38.4;
  DiscreteProblem dp(catalog_lookup("constant_load"), 501);
  auto sol = newton_solve(dp, lambda, std::vector<double>(dp.interior(), 0.0));
  CHECK(-0.5 * sol.d2_0 * sol.d2_0 ==
        doctest::Approx(-lambda * lambda / 288.0).epsilon(1e-3));
  CHECK(energy_residual(dp, sol) <= 5e-3);
}

TEST_CASE("energy identity: zero solution") {
  DiscreteProblem dp(catalog_lookup("constant_load"), 101);
  BeamSolution zero;
  zero.lambda = 0.0;
  zero.U.assign(dp.interior(), 0.0);
  zero.p = 0.0;
  CHECK(energy_residual(dp, zero) == doctest::Approx(0.0));
}

TEST_CASE("energy via Simpson quadrature matches the analytic antiderivative") {
  DiscreteProblem dp(catalog_lookup("inverse_square"), 251);
  double lg = 384.0 * 0.3;
  auto sol = solve_at_max(dp, 0.3, lg, linear_predictor(dp, lg));
  double with_F = energy_residual(dp, sol);

  DiscreteProblem dq = dp;
  dq.nl.F = nullptr;  // force the quadrature path
  double with_quad = energy_residual(dq, sol);
  CHECK(std::abs(with_F - with_quad) <= 1e-5 + 1e-3 * with_F);
}

TEST_CASE("energy identity is O(h^2) with the corrected boundary curvature") {
  double devs[2];
  int idx = 0;
  for (int n : {251, 501}) {
    DiscreteProblem dp(catalog_lookup("inverse_square"), n);
    double lg = 384.0 * 0.3;
    auto sol = solve_at_max(dp, 0.3, lg, linear_predictor(dp, lg));
    devs[idx++] = energy_residual(dp, sol);
  }
  CHECK(devs[1] <= 1e-2);
  CHECK(devs[0] / devs[1] >= 3.0);
  CHECK(devs[0] / devs[1] <= 5.0);
}

TEST_CASE("endpoint profile values and symmetry") {
  DiscreteProblem dp(catalog_lookup("inverse_square"), 501);
  auto prof = endpoint_profile(1.0, dp);
  // w(1/4) = -16/64 + 12/16
  CHECK(prof.w[dp.mid_index / 2] == doctest::Approx(0.5));
  CHECK(prof.w_mid == doctest::Approx(1.0));
  CHECK(std::abs(prof.d2_0 - 24.0) <= 1e-6);
  CHECK(std::abs(prof.d3_mid_left + 96.0) <= 1e-5);
  CHECK(std::abs(prof.d3_mid_right - 96.0) <= 1e-5);
  CHECK(std::abs(prof.wprime0_est) <= 100.0 * dp.h * dp.h);
  const int m = dp.interior();
  for (int i = 0; i < m; ++i) CHECK(prof.w[i] == prof.w[m - 1 - i]);

  auto prof2 = endpoint_profile(2.0, dp);
  CHECK(std::abs(prof2.d2_0 - 48.0) <= 1e-6);
}

TEST_CASE("endpoint profile is annihilated by the stencil away from mid") {
  DiscreteProblem dp(catalog_lookup("constant_load"), 251);
  auto prof = endpoint_profile(1.5, dp);
  const double h4 = std::pow(dp.h, 4);
  auto node = [&](int g) -> double {
    if (g <= 0 || g >= dp.n - 1) return 0.0;
    return prof.w[g - 1];
  };
  const double lattice =
      48.0 * std::numeric_limits<double>::epsilon() * 1.5 / h4;  // nodal quantization
  for (int g = 2; g <= dp.n - 3; ++g) {
    if (std::abs(g - dp.mid_node) <= 2) continue;  // stencil straddles the kink
    double d4 = node(g - 2) - 4 * node(g - 1) + 6 * node(g) - 4 * node(g + 1) + node(g + 2);
    CHECK(std::abs(d4 / h4) <= lattice);
  }
}

TEST_CASE("endpoint profile requires a finite radius") {
  DiscreteProblem dp(catalog_lookup("constant_load"), 101);
  CHECK_THROWS_AS(endpoint_profile(std::numeric_limits<double>::infinity(), dp),
                  std::invalid_argument);
}
