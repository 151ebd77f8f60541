#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "beamfold/banded.hpp"
#include "beamfold/newton.hpp"
#include "beamfold/spectral.hpp"

using namespace beamfold;

TEST_CASE("constant load converges in one step") {
  DiscreteProblem dp(catalog_lookup("constant_load"), 501);
  NewtonConfig cfg;
  std::vector<double> log;
  cfg.residual_log = &log;
  auto sol = newton_solve(dp, 38.4, std::vector<double>(dp.interior(), 0.0), cfg);
  CHECK(log.size() <= 2);  // initial residual, then the post-step floor
  // discrete solution sits lambda h^2/48 above the continuum value at mid
  CHECK(std::abs(sol.p - 0.1) <= 38.4 * dp.h * dp.h / 48.0 * 1.05);
  CHECK(sol.residual_norm <= newton_tolerance(dp, cfg, 38.4, sol.p, sol.p));
}

TEST_CASE("inverse square at small lambda matches the fixed-point oracle") {
  DiscreteProblem dp(catalog_lookup("inverse_square"), 251);
  const double lambda = 1.0;
  auto sol = newton_solve(dp, lambda, std::vector<double>(dp.interior(), 0.0));
  CHECK(sol.p < dp.nl.r);

  // oracle: U <- (D4/h^4)^{-1} lambda f(U), a contraction at this lambda
  BandLU lu(assemble_jacobian(dp, 0.0, std::vector<double>(dp.interior(), 0.0)));
  std::vector<double> U(dp.interior(), 0.0);
  for (int it = 0; it < 400; ++it) {
    std::vector<double> rhs(dp.interior());
    for (int i = 0; i < dp.interior(); ++i) rhs[i] = lambda * dp.nl.eval_f(U[i]);
    auto next = lu.solve(rhs);
    double diff = 0.0;
    for (int i = 0; i < dp.interior(); ++i) {
      diff = std::max(diff, std::abs(next[i] - U[i]));
      U[i] = next[i];
    }
    if (diff < 1e-14) break;
  }
  CHECK(std::abs(U[dp.mid_index] - sol.p) <= 1e-8);
}

TEST_CASE("no converged result beyond the nonexistence bound") {
  DiscreteProblem dp(catalog_lookup("inverse_square"), 101);
  const double bound = lambda_upper_bound(dp.nl, 1.0);
  CHECK_THROWS_AS(
      newton_solve(dp, 2.0 * bound, std::vector<double>(dp.interior(), 0.0)),
      SolveError);
}

TEST_CASE("iterates stay inside the guarded domain") {
  DiscreteProblem dp(catalog_lookup("inverse_square"), 101);
  auto sol = newton_solve(dp, 60.0, linear_predictor(dp, 60.0));
  for (double u : sol.U) {
    CHECK(u >= 0.0);
    CHECK(u < dp.nl.r * (1.0 - kDomainGuard));
  }
}

TEST_CASE("newton quadratic tail") {
  DiscreteProblem dp(catalog_lookup("inverse_square"), 251);
  NewtonConfig cfg;
  std::vector<double> log;
  cfg.residual_log = &log;
  // start far enough from the solution that several full steps are taken
  auto sol = newton_solve(dp, 50.0, linear_predictor(dp, 25.0), cfg);
  (void)sol;
  REQUIRE(log.size() >= 3);
  // superlinear contraction on the last genuine step before the floor
  double r_prev = log[log.size() - 2];
  double r_last = log[log.size() - 1];
  double c = r_last / (r_prev * r_prev);
  CHECK(std::isfinite(c));
  CHECK(r_last <= 0.05 * r_prev);
}

TEST_CASE("solve_at_max: constant load hits the prescribed midpoint") {
  DiscreteProblem dp(catalog_lookup("constant_load"), 501);
  auto sol = solve_at_max(dp, 0.1, 38.0, linear_predictor(dp, 38.0));
  CHECK(std::abs(sol.U[dp.mid_index] - 0.1) <= 1e-12);
  // the discrete midpoint sits lambda h^2/48 above the continuum value, so
  // the fitted lambda shifts by the relative amount (lambda h^2/48)/p
  const double shift = 38.4 * (38.4 * dp.h * dp.h / 48.0) / 0.1;
  CHECK(std::abs(sol.lambda - 38.4) <= 1.1 * shift);
  CHECK(sol.lambda == doctest::Approx(38.4).epsilon(1e-4));
}

TEST_CASE("solve_at_max: small amplitude from the linear predictor") {
  DiscreteProblem dp(catalog_lookup("inverse_square"), 251);
  const double p = 0.01;
  double lambda_g = 384.0 * p / dp.nl.eval_f(0.0);
  auto sol = solve_at_max(dp, p, lambda_g, linear_predictor(dp, lambda_g));
  CHECK(std::abs(sol.U[dp.mid_index] - p) <= 1e-12);
  CHECK(sol.lambda > 0.0);
}

TEST_CASE("solve_at_max: lambda shrinks toward the gap") {
  DiscreteProblem dp(catalog_lookup("inverse_square"), 251);
  double lg = 384.0 * 0.5;
  auto prev2 = solve_at_max(dp, 0.5, lg, linear_predictor(dp, lg));
  auto prev = solve_at_max(dp, 0.52, prev2.lambda, prev2.U);
  BeamSolution at09 = prev, at0999 = prev;
  for (double p : {0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.93, 0.96, 0.98, 0.99,
                   0.995, 0.9965, 0.9975, 0.9983, 0.9988, 0.999}) {
    // secant extrapolation of the two previous solutions, as in continuation
    double t = (p - prev.p) / (prev.p - prev2.p);
    double lam_g = prev.lambda + t * (prev.lambda - prev2.lambda);
    std::vector<double> U_g(prev.U.size());
    for (std::size_t i = 0; i < U_g.size(); ++i)
      U_g[i] = prev.U[i] + t * (prev.U[i] - prev2.U[i]);
    auto sol = solve_at_max(dp, p, lam_g, U_g);
    prev2 = prev;
    prev = sol;
    if (p == 0.9) at09 = prev;
    if (p == 0.999) at0999 = prev;
  }
  CHECK(at0999.lambda > 0.0);
  CHECK(at0999.lambda < at09.lambda);
}

TEST_CASE("solve_at_max then newton_solve reproduces the same solution") {
  DiscreteProblem dp(catalog_lookup("inverse_square"), 251);
  double lg = 384.0 * 0.3;
  auto a = solve_at_max(dp, 0.3, lg, linear_predictor(dp, lg));
  auto b = newton_solve(dp, a.lambda, a.U);
  double diff = 0.0;
  for (int i = 0; i < dp.interior(); ++i) diff = std::max(diff, std::abs(a.U[i] - b.U[i]));
  CHECK(diff <= 1e-9);
}
