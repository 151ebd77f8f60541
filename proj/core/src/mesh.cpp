#include "beamfold/mesh.hpp"

#include <algorithm>
#include <cmath>

namespace beamfold {

DiscreteProblem::DiscreteProblem(Nonlinearity nonlinearity, int nodes)
    : nl(std::move(nonlinearity)), n(nodes) {
  if (n < 11 || n % 2 == 0)
    throw std::invalid_argument("DiscreteProblem: n must be odd and at least 11, got " +
                                std::to_string(n));
  h = 1.0 / (n - 1);
  mid_node = (n - 1) / 2;
  mid_index = mid_node - 1;
}

std::vector<double> assemble_residual(const DiscreteProblem& dp, double lambda,
                                      const std::vector<double>& U) {
  const int m = dp.interior();
  if (static_cast<int>(U.size()) != m)
    throw std::invalid_argument("assemble_residual: vector size mismatch");
  const long double h4 = static_cast<long double>(dp.h) * dp.h * dp.h * dp.h;

  // Second differences at every node, ghosts folded in:
  //   s_0 = 2 u_1 (from u(-h) = u(h), u(0) = 0), mirrored at the right end.
  std::vector<long double> s(static_cast<std::size_t>(dp.n));
  s[0] = 2.0L * static_cast<long double>(U[0]);
  s[dp.n - 1] = 2.0L * static_cast<long double>(U[m - 1]);
  for (int g = 1; g <= dp.n - 2; ++g) {
    long double left = (g - 1 >= 1) ? static_cast<long double>(U[g - 2]) : 0.0L;
    long double right = (g + 1 <= dp.n - 2) ? static_cast<long double>(U[g]) : 0.0L;
    // pairwise association keeps mirrored rows bitwise identical
    s[g] = (left + right) - 2.0L * static_cast<long double>(U[g - 1]);
  }

  std::vector<double> R(static_cast<std::size_t>(m));
  for (int g = 1; g <= dp.n - 2; ++g) {
    long double d4 = (s[g - 1] + s[g + 1]) - 2.0L * s[g];
    long double fv = dp.nl.eval_f(U[g - 1]);
    R[g - 1] = static_cast<double>(d4 / h4 - static_cast<long double>(lambda) * fv);
  }
  return R;
}

BandMatrix assemble_jacobian(const DiscreteProblem& dp, double lambda,
                             const std::vector<double>& U) {
  const int m = dp.interior();
  if (static_cast<int>(U.size()) != m)
    throw std::invalid_argument("assemble_jacobian: vector size mismatch");
  const double inv_h4 = 1.0 / (dp.h * dp.h * dp.h * dp.h);
  BandMatrix J(m, 2, 2);
  for (int i = 0; i < m; ++i) {
    double diag = (i == 0 || i == m - 1) ? 7.0 : 6.0;
    J.at(i, i) = diag * inv_h4 - lambda * dp.nl.eval_f1(U[i]);
    if (i + 1 < m) J.at(i, i + 1) = -4.0 * inv_h4;
    if (i + 2 < m) J.at(i, i + 2) = 1.0 * inv_h4;
    if (i - 1 >= 0) J.at(i, i - 1) = -4.0 * inv_h4;
    if (i - 2 >= 0) J.at(i, i - 2) = 1.0 * inv_h4;
  }
  return J;
}

std::pair<double, double> derived_boundary_values(const DiscreteProblem& dp, double lambda,
                                                  const std::vector<double>& U) {
  const int m = dp.interior();
  const double h = dp.h;
  // Anchor node x0 ~ 0.7 sqrt(h): far enough from the wall that centered
  // stencils see only the smooth O(h^2) part of the discrete error.
  int j = std::max(3, static_cast<int>(std::lround(0.7 * std::sqrt(h) / h)));
  j = std::min(j, m - 2);  // keep the 5-point stencil inside the grid

  auto node = [&](int g) -> double {
    if (g <= 0 || g >= dp.n - 1) return 0.0;
    return U[g - 1];
  };
  const double x = j * h;
  const double u0 = node(j);
  const double s = (node(j + 1) - 2.0 * u0 + node(j - 1)) / (h * h);
  const double t =
      (-node(j - 2) + 2.0 * node(j - 1) - 2.0 * node(j + 1) + node(j + 2)) / (2.0 * h * h * h);
  const double g1 = (node(j + 1) - node(j - 1)) / (2.0 * h);

  double f = 0.0, f1 = 0.0;
  if (lambda != 0.0) {
    f = dp.nl.eval_f(std::max(0.0, u0));
    f1 = dp.nl.eval_f1(std::max(0.0, u0));
  }
  const double d4 = lambda * f;        // u''''(x0) from the equation
  const double d5 = lambda * f1 * g1;  // u'''''(x0)
  double d2 = s - x * t + 0.5 * x * x * d4 - (x * x * x / 6.0) * d5;
  double d3 = t - x * d4 + 0.5 * x * x * d5;
  return {d2, d3};
}

}  // namespace beamfold
