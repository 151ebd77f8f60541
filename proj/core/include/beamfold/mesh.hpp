#ifndef BEAMFOLD_MESH_HPP
#define BEAMFOLD_MESH_HPP

#include <utility>
#include <vector>

#include "beamfold/banded.hpp"
#include "beamfold/nonlinearity.hpp"

namespace beamfold {

// Uniform grid for u'''' = lambda f(u) on [0,1] with clamped ends.
// n is odd and at least 11 so that x = 1/2 falls exactly on a node.
// Unknowns are the n-2 interior nodal values; the endpoint values and slopes
// are eliminated through ghost reflection u(-h) = u(h), u(1+h) = u(1-h).
struct DiscreteProblem {
  Nonlinearity nl;
  int n = 0;
  double h = 0.0;
  int mid_node = 0;   // global index of the node at x = 1/2
  int mid_index = 0;  // index of that node in the interior vector

  DiscreteProblem(Nonlinearity nonlinearity, int nodes);

  int interior() const { return n - 2; }
  double x(int interior_index) const { return (interior_index + 1) * h; }
};

// A solution accepted by the Newton layer, with derived boundary diagnostics.
struct BeamSolution {
  double lambda = 0.0;
  std::vector<double> U;  // interior nodal values; endpoints are zero
  double p = 0.0;         // u(1/2) = U[mid_index]
  double d2_0 = 0.0;      // u''(0) estimate
  double d3_0 = 0.0;      // u'''(0) estimate
  double residual_norm = 0.0;
};

// R[i] = (fourth central difference of U at node i)/h^4 - lambda f(U[i]).
// Ghost values are eliminated by reflection; accumulation is long double
// with mirror-symmetric association so symmetric inputs give bitwise
// symmetric residuals.
std::vector<double> assemble_residual(const DiscreteProblem& dp, double lambda,
                                      const std::vector<double>& U);

// Symmetric pentadiagonal J = D4/h^4 - lambda diag(f'(U)), with the ghost
// reflection folded into the first and last interior rows.
BandMatrix assemble_jacobian(const DiscreteProblem& dp, double lambda,
                             const std::vector<double>& U);

// One-sided estimates of u''(0) and u'''(0). Centered differences are taken
// at a node x0 ~ sqrt(h) away from the wall, clear of the ghost-closure
// defect, and carried back to x = 0 with the equation u'''' = lambda f(u)
// supplying the higher Taylor terms. Exact on cubics when lambda = 0.
std::pair<double, double> derived_boundary_values(const DiscreteProblem& dp, double lambda,
                                                  const std::vector<double>& U);

}  // namespace beamfold

#endif
