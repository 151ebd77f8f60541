#ifndef BEAMFOLD_CURVE_HPP
#define BEAMFOLD_CURVE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "beamfold/mesh.hpp"

namespace beamfold {

// Per-point shape diagnostics; pass() covers the gated items only.
struct ShapeReport {
  double symmetry_err = 0.0;      // max |u(x) - u(1-x)| over nodes
  bool monotone_left_ok = false;  // first differences positive on (0, 1/2)
  double d2_0 = 0.0;
  int inflection_count = 0;       // sign changes of second differences
  double energy_dev = 0.0;        // normalized energy-identity deviation
  double d3_bound = 0.0;          // max |u'''| estimate
  bool symmetry_ok = false;
  bool inflection_ok = false;
  bool d2_ok = false;

  bool pass() const { return symmetry_ok && inflection_ok && d2_ok && monotone_left_ok; }
};

struct CurvePoint {
  double p = 0.0;
  double lambda = 0.0;
  BeamSolution solution;
  std::optional<double> smallest_eig;
  ShapeReport shape;
};

enum class Termination { ReachedPMax, LambdaMin, StepFailure, PointLimit, LambdaCap };

std::string to_string(Termination t);

struct FoldInfo {
  bool present = false;
  double lambda0 = 0.0;  // fitted fold value (or edge value when absent)
  double p0 = 0.0;
  std::size_t index = 0;  // accepted point bracketing the fold
  double fit_tol = 0.0;   // merge tolerance for crossings near the vertex
};

struct BifurcationCurve {
  std::vector<CurvePoint> points;
  FoldInfo fold;
  Termination termination = Termination::StepFailure;
  bool bound_ok = true;  // lambda0 <= r^2 mu1/(4a) + 1e-9 when applicable

  double lambda_max() const;
  // Exactly one interior local maximum of lambda(p) and no interior local
  // minimum, with hysteresis 1e-10 relative on the sign of delta lambda.
  bool single_interior_max() const;
  std::size_t upper_branch_begin() const;  // first index past the fold
};

}  // namespace beamfold

#endif
