#ifndef BEAMFOLD_CONTINUATION_HPP
#define BEAMFOLD_CONTINUATION_HPP

#include "beamfold/checks.hpp"
#include "beamfold/curve.hpp"
#include "beamfold/newton.hpp"

namespace beamfold {

enum class TraceMode { MaxValue, Arclength };

struct ContinuationConfig {
  TraceMode mode = TraceMode::MaxValue;

  // Zeroes mean "derive from the nonlinearity": p_start = 1e-3 min(r,1),
  // dp_init = 1e-2 min(r,1), p_max = p_max_fraction*r (u_cap for r = inf),
  // dp_min = 1e-6 span, dp_max = max(dp_init, 1e-2 span).
  double p_start = 0.0;
  double p_max = 0.0;
  double p_max_fraction = 0.999;
  double dp_init = 0.0;
  double dp_min = 0.0;
  double dp_max = 0.0;

  // Termination on the upper branch once lambda falls below
  // lambda_min_rel * (max lambda so far); applied for finite r only.
  double lambda_min_rel = 1e-6;

  // Arclength mode: step in the scaled (U, lambda/lambda_ref) metric.
  double ds_init = 0.0;  // default 1e-2 min(r,1)
  double ds_max = 0.0;   // default 10 * ds_init
  double lambda_cap = 0.0;  // stop when lambda exceeds this (0 = unused)

  NewtonConfig newton;
  bool exploratory = false;  // skip the hypothesis gate and the shape gate
  int max_points = 50000;
};

// Traces the solution curve from small deflection toward p_max, marching the
// midpoint value (default) or pseudo-arclength. Every accepted point must
// pass verify_solution_shape unless the trace is exploratory. Requires a
// passing hypothesis report unless exploratory.
BifurcationCurve trace_curve(const DiscreteProblem& dp, ContinuationConfig cfg = {});

// Quadratic fit of lambda(p) through the three points bracketing the maximum.
// Returns a fold-absent FoldInfo with edge values when lambda is monotone.
FoldInfo locate_fold(const std::vector<CurvePoint>& points);

struct MultiplicityResult {
  int count = 0;
  bool truncated = false;  // query lies below the traced lambda range
};

// Counts transversal crossings of the traced polyline with lambda = lambda_q,
// merging crossings within the fold-fit tolerance.
MultiplicityResult multiplicity_at(const BifurcationCurve& curve, double lambda_q);

// One pseudo-arclength step from the two previous points with secant tangent
// and step length ds in the scaled metric. Throws on Newton failure.
CurvePoint arclength_step(const DiscreteProblem& dp, const CurvePoint& prev_prev,
                          const CurvePoint& prev, double ds, const ContinuationConfig& cfg);

// Fills smallest_eig for every point, walking the curve with warm shifts so
// the iteration follows the bottom eigenvalue branch.
void fill_spectra(const DiscreteProblem& dp, BifurcationCurve& curve);

// Natural-parameter sweep oracle: newton_solve from below with warm starts,
// then bisection on the convergence/divergence boundary. Independent route
// to the fold value for cross-checks.
double lambda_sweep_fold(const DiscreteProblem& dp, double lambda_lo = 0.5,
                         double rel_tol = 1e-6);

// Probes solution existence at five lambda values below the first fold and
// compares each solve against the curve's first polyline crossing. Used to
// vet exploratory traces before their sign-change count is reported.
bool sweep_consistency(const DiscreteProblem& dp, const BifurcationCurve& curve,
                       double rel_p_tol = 0.05);

}  // namespace beamfold

#endif
