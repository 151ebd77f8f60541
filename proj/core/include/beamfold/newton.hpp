#ifndef BEAMFOLD_NEWTON_HPP
#define BEAMFOLD_NEWTON_HPP

#include <vector>

#include "beamfold/mesh.hpp"

namespace beamfold {

struct NewtonConfig {
  double tol_rel = 1e-10;  // scaled by max(1, lambda f(p)); see newton_tolerance
  int max_iters = 25;
  double damping = 0.5;  // backtracking factor in (0,1)
  bool clamp = true;     // project iterates into [0, r(1-2*guard)]
  std::vector<double>* residual_log = nullptr;  // optional per-iteration norms
};

// Residual acceptance threshold. The second term is the float64 lattice
// floor: nodal values quantize at eps*|u|, and the fourth difference divides
// by h^4, so no iterate can realize a smaller residual on this grid.
double newton_tolerance(const DiscreteProblem& dp, const NewtonConfig& cfg, double lambda,
                        double p, double max_abs_u);

// Damped Newton at fixed lambda. Throws NoConvergenceError or
// SingularMatrixError (the latter flags a degenerate solution, expected
// exactly at the fold under natural parameterization).
BeamSolution newton_solve(const DiscreteProblem& dp, double lambda, std::vector<double> U0,
                          const NewtonConfig& cfg = {});

// Bordered solve of {residual(lambda,U) = 0, U[mid] - p = 0} for (U, lambda)
// jointly. Throws NegativeLambdaError if the converged lambda is not
// positive.
BeamSolution solve_at_max(const DiscreteProblem& dp, double p, double lambda_guess,
                          std::vector<double> U0, const NewtonConfig& cfg = {});

// Cold-start profile u = lambda f(0) x^2 (1-x)^2 / 24 evaluated so mirrored
// nodes are bitwise equal; pick lambda = 384 p / f(0) to hit u(1/2) = p.
std::vector<double> linear_predictor(const DiscreteProblem& dp, double lambda);

}  // namespace beamfold

#endif
