#ifndef BEAMFOLD_SPECTRAL_HPP
#define BEAMFOLD_SPECTRAL_HPP

#include <optional>
#include <utility>
#include <vector>

#include "beamfold/mesh.hpp"
#include "beamfold/newton.hpp"

namespace beamfold {

struct EigenEstimate {
  double value = 0.0;
  std::vector<double> vector;  // max-norm normalized, positive at mid
  int iterations = 0;
  double residual = 0.0;  // ||(J - value I) v||_inf
};

// Smallest positive root k1 of cos(k) cosh(k) = 1 on (pi, 2 pi) by bisection
// to the given interval tolerance, and mu1 = k1^4. The bracket endpoints are
// asserted to have opposite signs.
std::pair<double, double> beam_principal_eigenvalue(double tol);

// Nonexistence bound r^2 mu1 / (4 a): no positive solution exists above it
// when f(u) >= a/(r-u). Requires finite r, a > 0.
double lambda_upper_bound(const Nonlinearity& nl, double a);

// Smallest eigenvalue of J = D4/h^4 - lambda diag(f'(U)) by shifted inverse
// power iteration. The cold start uses shift 0 (retrying +-1e-8 ||J|| on
// factorization failure); pass the previous curve point's eigenvalue as
// shift_hint when walking a curve so the iteration stays on the bottom
// branch once it dives past the rest of the spectrum.
EigenEstimate linearized_smallest_eigenvalue(const DiscreteProblem& dp,
                                             const BeamSolution& sol,
                                             std::optional<double> shift_hint = {});

}  // namespace beamfold

#endif
