#include "beamfold/newton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace beamfold {
namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void clamp_iterate(const DiscreteProblem& dp, std::vector<double>& U) {
  const double cap = dp.nl.finite_radius()
                         ? dp.nl.r * (1.0 - 2.0 * kDomainGuard)
                         : std::numeric_limits<double>::infinity();
  for (double& u : U) {
    if (u < 0.0) u = 0.0;
    if (u > cap) u = cap;
  }
}

// One extra full Newton correction from the converged iterate. The residual
// there is dominated by the nodal-value lattice, and the correction scrubs
// the asymmetric rounding left by the row-ordered banded elimination.
void refine_once(const DiscreteProblem& dp, double lambda, std::vector<double>& U,
                 double& rn, bool clamp) {
  try {
    std::vector<double> R = assemble_residual(dp, lambda, U);
    BandLU lu(assemble_jacobian(dp, lambda, U));
    for (double& x : R) x = -x;
    lu.solve_in_place(R);
    std::vector<double> Un(U.size());
    for (std::size_t i = 0; i < U.size(); ++i) Un[i] = U[i] + R[i];
    if (clamp) clamp_iterate(dp, Un);
    std::vector<double> Rn = assemble_residual(dp, lambda, Un);
    double rnn = max_abs(Rn);
    if (rnn <= rn) {
      U = std::move(Un);
      rn = rnn;
    }
  } catch (const SolveError&) {
  } catch (const DomainError&) {
  }
}

BeamSolution finish(const DiscreteProblem& dp, double lambda, std::vector<double> U,
                    double residual_norm) {
  BeamSolution sol;
  sol.lambda = lambda;
  sol.p = U[dp.mid_index];
  auto [d2, d3] = derived_boundary_values(dp, lambda, U);
  sol.d2_0 = d2;
  sol.d3_0 = d3;
  sol.U = std::move(U);
  sol.residual_norm = residual_norm;
  return sol;
}

}  // namespace

double newton_tolerance(const DiscreteProblem& dp, const NewtonConfig& cfg, double lambda,
                        double p, double max_abs_u) {
  double scale = 1.0;
  double pc = std::min(std::max(p, 0.0), dp.nl.domain_max());
  if (!dp.nl.finite_radius()) pc = std::max(p, 0.0);
  scale = std::max(1.0, std::abs(lambda) * std::abs(dp.nl.eval_f(pc)));
  const double h4 = dp.h * dp.h * dp.h * dp.h;
  const double lattice =
      24.0 * std::numeric_limits<double>::epsilon() * std::max(max_abs_u, 0.0) / h4;
  return std::max(cfg.tol_rel * scale, lattice);
}

std::vector<double> linear_predictor(const DiscreteProblem& dp, double lambda) {
  const int m = dp.interior();
  std::vector<double> U(static_cast<std::size_t>(m));
  const double f0 = dp.nl.eval_f(0.0);
  for (int i = 0; i < m; ++i) {
    int g = i + 1;
    int k = std::min(g, dp.n - 1 - g);  // distance to the nearer wall, in nodes
    double x = k * dp.h;
    U[i] = lambda * f0 * x * x * (1.0 - x) * (1.0 - x) / 24.0;
  }
  return U;
}

BeamSolution newton_solve(const DiscreteProblem& dp, double lambda, std::vector<double> U0,
                          const NewtonConfig& cfg) {
  std::vector<double> U = std::move(U0);
  if (cfg.clamp) clamp_iterate(dp, U);
  if (cfg.residual_log) cfg.residual_log->clear();

  std::vector<double> R = assemble_residual(dp, lambda, U);
  double rn = max_abs(R);
  for (int it = 0; it < cfg.max_iters; ++it) {
    double tol = newton_tolerance(dp, cfg, lambda, U[dp.mid_index], max_abs(U));
    if (cfg.residual_log) cfg.residual_log->push_back(rn);
    if (rn <= tol) {
      refine_once(dp, lambda, U, rn, cfg.clamp);
      return finish(dp, lambda, std::move(U), rn);
    }

    BandLU lu(assemble_jacobian(dp, lambda, U));
    std::vector<double> d(R.size());
    for (std::size_t i = 0; i < R.size(); ++i) d[i] = -R[i];
    lu.solve_in_place(d);

    double t = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 30; ++bt) {
      std::vector<double> Un(U.size());
      for (std::size_t i = 0; i < U.size(); ++i) Un[i] = U[i] + t * d[i];
      if (cfg.clamp) clamp_iterate(dp, Un);
      std::vector<double> Rn;
      try {
        Rn = assemble_residual(dp, lambda, Un);
      } catch (const DomainError&) {
        t *= cfg.damping;
        continue;
      }
      double rnn = max_abs(Rn);
      double tol_n = newton_tolerance(dp, cfg, lambda, Un[dp.mid_index], max_abs(Un));
      if (rnn < rn || rnn <= tol_n) {
        U = std::move(Un);
        R = std::move(Rn);
        rn = rnn;
        accepted = true;
        break;
      }
      t *= cfg.damping;
    }
    if (!accepted)
      throw NoConvergenceError("newton_solve: backtracking stalled at residual " +
                               std::to_string(rn));
  }
  double tol = newton_tolerance(dp, cfg, lambda, U[dp.mid_index], max_abs(U));
  if (rn <= tol) {
    refine_once(dp, lambda, U, rn, cfg.clamp);
    return finish(dp, lambda, std::move(U), rn);
  }
  throw NoConvergenceError("newton_solve: no convergence after " +
                           std::to_string(cfg.max_iters) + " iterations, residual " +
                           std::to_string(rn));
}

BeamSolution solve_at_max(const DiscreteProblem& dp, double p, double lambda_guess,
                          std::vector<double> U0, const NewtonConfig& cfg) {
  if (dp.nl.finite_radius() && !(p < dp.nl.r * (1.0 - kDomainGuard) * (1.0 + 1e-15)))
    throw std::invalid_argument("solve_at_max: p beyond the guarded radius");

  std::vector<double> U = std::move(U0);
  if (cfg.clamp) clamp_iterate(dp, U);
  double lambda = lambda_guess;
  const int mid = dp.mid_index;
  const double g_scale = std::max(std::abs(p), 1e-3);
  const double g_tol = 1e-11 * std::max(1.0, std::abs(p));

  // residual rows and the midpoint constraint live on different scales;
  // the backtracking merit normalizes each before taking the max
  auto merit = [&](double resid_norm, double g, double lam) {
    double r_scale = 1.0;
    try {
      double pc = std::min(std::max(p, 0.0), dp.nl.domain_max());
      r_scale = std::max(1.0, std::abs(lam) * std::abs(dp.nl.eval_f(pc)));
    } catch (const DomainError&) {
    }
    return std::max(resid_norm / r_scale, std::abs(g) / g_scale);
  };

  std::vector<double> R = assemble_residual(dp, lambda, U);
  double rn = max_abs(R);
  double gn = U[mid] - p;
  double mer = merit(rn, gn, lambda);
  for (int it = 0; it < cfg.max_iters; ++it) {
    double tol = newton_tolerance(dp, cfg, lambda, p, max_abs(U));
    if (rn <= tol && std::abs(gn) <= g_tol) {
      if (!(lambda > 0.0))
        throw NegativeLambdaError("solve_at_max: converged with lambda = " +
                                  std::to_string(lambda));
      return finish(dp, lambda, std::move(U), rn);
    }

    BandLU lu(assemble_jacobian(dp, lambda, U));
    std::vector<double> negR(R.size());
    for (std::size_t i = 0; i < R.size(); ++i) negR[i] = -R[i];
    std::vector<double> dRdl(U.size());
    for (std::size_t i = 0; i < U.size(); ++i) dRdl[i] = -dp.nl.eval_f(U[i]);

    // {J dU + dR/dl dl = -R, dU[mid] = -(U[mid]-p)} by border elimination
    std::vector<double> y = lu.solve(negR);
    std::vector<double> z = lu.solve(dRdl);
    if (std::abs(z[mid]) < 1e-300)
      throw SingularMatrixError("solve_at_max: degenerate max-value constraint");
    double dl = (y[mid] + gn) / z[mid];
    std::vector<double> dU(U.size());
    for (std::size_t i = 0; i < U.size(); ++i) dU[i] = y[i] - dl * z[i];

    double t = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 30; ++bt) {
      std::vector<double> Un(U.size());
      for (std::size_t i = 0; i < U.size(); ++i) Un[i] = U[i] + t * dU[i];
      double ln = lambda + t * dl;
      if (cfg.clamp) clamp_iterate(dp, Un);
      std::vector<double> Rn;
      try {
        Rn = assemble_residual(dp, ln, Un);
      } catch (const DomainError&) {
        t *= cfg.damping;
        continue;
      }
      double rnn = max_abs(Rn);
      double gnn = Un[mid] - p;
      double mern = merit(rnn, gnn, ln);
      double tol_n = newton_tolerance(dp, cfg, ln, p, max_abs(Un));
      if (mern < mer || (rnn <= tol_n && std::abs(gnn) <= g_tol)) {
        U = std::move(Un);
        R = std::move(Rn);
        lambda = ln;
        rn = rnn;
        gn = gnn;
        mer = mern;
        accepted = true;
        break;
      }
      t *= cfg.damping;
    }
    if (!accepted)
      throw NoConvergenceError("solve_at_max: backtracking stalled at residual " +
                               std::to_string(rn));
  }
  double tol = newton_tolerance(dp, cfg, lambda, p, max_abs(U));
  if (rn <= tol && std::abs(gn) <= g_tol) {
    if (!(lambda > 0.0))
      throw NegativeLambdaError("solve_at_max: converged with lambda = " +
                                std::to_string(lambda));
    return finish(dp, lambda, std::move(U), rn);
  }
  throw NoConvergenceError("solve_at_max: no convergence after " +
                           std::to_string(cfg.max_iters) + " iterations at p = " +
                           std::to_string(p));
}

}  // namespace beamfold
