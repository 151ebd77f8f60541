#ifndef BEAMFOLD_CHECKS_HPP
#define BEAMFOLD_CHECKS_HPP

#include <optional>
#include <vector>

#include "beamfold/curve.hpp"

namespace beamfold {

// Shape verification for a converged solution: symmetry about x = 1/2,
// exactly two inflection points, positive boundary curvature, and monotone
// growth on the left half. Report-only; continuation turns failures into
// step rejection.
ShapeReport verify_solution_shape(const DiscreteProblem& dp, const BeamSolution& sol);

// Max over interior nodes of |E(x) + d2_0^2/2| / max(1, d2_0^2/2) where
// E = u' u''' - (u'')^2/2 - lambda F(u). F falls back to composite Simpson
// quadrature of f when the catalog gives no antiderivative.
double energy_residual(const DiscreteProblem& dp, const BeamSolution& sol);

// Nodal values of the limit profile w(x) = -16 r x^3 + 12 r x^2 mirrored
// about x = 1/2, with derived endpoint data.
struct EndpointProfile {
  double r = 0.0;
  std::vector<double> w;  // interior nodes
  double w_mid = 0.0;     // = r
  double d2_0 = 0.0;      // = 24 r
  double d3_mid_left = 0.0;   // one-sided third difference just left of mid
  double d3_mid_right = 0.0;  // just right of mid
  double wprime0_est = 0.0;   // one-sided w'(0) estimate, O(h^2)
};

EndpointProfile endpoint_profile(double r, const DiscreteProblem& dp);

struct ConvergenceRow {
  double p = 0.0, lambda = 0.0;
  double e0 = 0.0;  // max |u - w|
  double e1 = 0.0;  // max first-difference deviation
  double e2 = 0.0;  // max second-difference deviation
  double d3_mid_left = 0.0;  // one-sided u''' toward mid^-
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;  // tail points with p >= 0.99 r
  bool e0_monotone = false, e1_monotone = false, e2_monotone = false;
  double final_e0 = 0.0;
  double final_d3_mid_left = 0.0;
};

// Tail-of-curve comparison against the limit profile. Requires a traced
// curve whose upper branch reaches p >= 0.99 r with at least 10 such points.
ConvergenceTable endpoint_convergence(const BifurcationCurve& curve, double r,
                                      const DiscreteProblem& dp);

// One-sided 4-point u''' estimate on the mid^- side, anchored a fixed
// physical distance (0.02) left of the midpoint so the stencil stays outside
// the sqrt(1-p/r) transition layer at the tail resolution.
double third_derivative_left_of_mid(const DiscreteProblem& dp, const std::vector<double>& U);

struct AprioriReport {
  double max_p = 0.0;
  std::optional<double> max_p_over_r;  // absent for r = infinity
  double max_abs_d2 = 0.0;             // observed max |u''| over the curve
  double max_abs_d3 = 0.0;             // observed max |u'''| estimate
  double window_lo = 0.0, window_hi = 0.0;
  double max_p_in_window = 0.0;
  bool window_below_tail = false;  // window max strictly below the curve max
  bool all_below_radius = false;   // p < r at every point (finite r)
  bool unbounded_growth = false;   // r = infinity: p exits any fixed ceiling
};

// Monitors the a-priori bounds along a curve. The compact lambda window
// defaults to [0.1 lambda0, lambda0].
AprioriReport apriori_monitor(const BifurcationCurve& curve, const DiscreteProblem& dp,
                              double window_lo_frac = 0.1);

}  // namespace beamfold

#endif
