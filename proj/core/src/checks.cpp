#include "beamfold/checks.hpp"

#include <algorithm>
#include <cmath>

namespace beamfold {
namespace {

double node_value(const std::vector<double>& U, int n, int g) {
  if (g <= 0 || g >= n - 1) return 0.0;
  return U[g - 1];
}

// Composite Simpson of f over [0, u], 128 panels.
double simpson_F(const Nonlinearity& nl, double u) {
  if (u <= 0.0) return 0.0;
  const int panels = 128;
  const double h = u / panels;
  long double acc = nl.eval_f(0.0) + nl.eval_f(u);
  for (int i = 1; i < panels; ++i)
    acc += nl.eval_f(i * h) * ((i % 2) ? 4.0L : 2.0L);
  long double F = acc * h / 3.0L;
  if (!std::isfinite(static_cast<double>(F)))
    throw DomainError(nl.name + ": quadrature for F failed at u = " + std::to_string(u));
  return static_cast<double>(F);
}

}  // namespace

ShapeReport verify_solution_shape(const DiscreteProblem& dp, const BeamSolution& sol) {
  const int n = dp.n;
  const int m = dp.interior();
  const auto& U = sol.U;
  ShapeReport rep;

  double sym = 0.0;
  for (int i = 0; i < m; ++i) sym = std::max(sym, std::abs(U[i] - U[m - 1 - i]));
  rep.symmetry_err = sym;
  rep.symmetry_ok = sym <= 1e-7 * std::max(sol.p, 0.0);

  rep.monotone_left_ok = true;
  double prev = 0.0;  // u(0)
  for (int g = 1; g <= dp.mid_node; ++g) {
    double cur = node_value(U, n, g);
    if (!(cur > prev)) {
      rep.monotone_left_ok = false;
      break;
    }
    prev = cur;
  }

  // second differences over interior nodes, rounding-noise sign threshold
  std::vector<double> s(static_cast<std::size_t>(m));
  double smax = 0.0;
  for (int g = 1; g <= n - 2; ++g) {
    s[g - 1] = node_value(U, n, g - 1) - 2.0 * node_value(U, n, g) + node_value(U, n, g + 1);
    smax = std::max(smax, std::abs(s[g - 1]));
  }
  const double thresh = 1e-10 * smax;
  int changes = 0;
  int last_sign = 0;
  for (int i = 0; i < m; ++i) {
    if (std::abs(s[i]) <= thresh) continue;
    int sg = s[i] > 0.0 ? 1 : -1;
    if (last_sign != 0 && sg != last_sign) ++changes;
    last_sign = sg;
  }
  rep.inflection_count = changes;
  rep.inflection_ok = changes == 2;

  rep.d2_0 = sol.d2_0;
  rep.d2_ok = sol.d2_0 > 0.0;

  // max |u'''|: interior centered stencils plus the boundary estimate
  double d3max = std::abs(sol.d3_0);
  const double twoh3 = 2.0 * dp.h * dp.h * dp.h;
  for (int g = 2; g <= n - 3; ++g) {
    double t = (-node_value(U, n, g - 2) + 2.0 * node_value(U, n, g - 1) -
                2.0 * node_value(U, n, g + 1) + node_value(U, n, g + 2)) /
               twoh3;
    d3max = std::max(d3max, std::abs(t));
  }
  rep.d3_bound = d3max;

  rep.energy_dev = energy_residual(dp, sol);
  return rep;
}

double energy_residual(const DiscreteProblem& dp, const BeamSolution& sol) {
  const int n = dp.n;
  const auto& U = sol.U;
  const double h = dp.h;
  const double twoh = 2.0 * h, h2 = h * h, twoh3 = 2.0 * h * h * h;
  const bool analytic = dp.nl.has_antiderivative();

  const double e_ref = -0.5 * sol.d2_0 * sol.d2_0;
  const double denom = std::max(1.0, 0.5 * sol.d2_0 * sol.d2_0);
  double worst = 0.0;
  for (int g = 2; g <= n - 3; ++g) {
    double u = node_value(U, n, g);
    double d1 = (node_value(U, n, g + 1) - node_value(U, n, g - 1)) / twoh;
    double d2 = (node_value(U, n, g + 1) - 2.0 * u + node_value(U, n, g - 1)) / h2;
    double d3 = (-node_value(U, n, g - 2) + 2.0 * node_value(U, n, g - 1) -
                 2.0 * node_value(U, n, g + 1) + node_value(U, n, g + 2)) /
                twoh3;
    double F = analytic ? dp.nl.eval_F(u) : simpson_F(dp.nl, u);
    double E = d1 * d3 - 0.5 * d2 * d2 - sol.lambda * F;
    worst = std::max(worst, std::abs(E - e_ref));
  }
  return worst / denom;
}

EndpointProfile endpoint_profile(double r, const DiscreteProblem& dp) {
  if (!std::isfinite(r) || !(r > 0.0))
    throw std::invalid_argument("endpoint_profile requires a finite positive radius");
  const int n = dp.n;
  const int m = dp.interior();
  EndpointProfile prof;
  prof.r = r;
  prof.w.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    int g = i + 1;
    int k = std::min(g, n - 1 - g);
    double x = k * dp.h;
    prof.w[i] = -16.0 * r * x * x * x + 12.0 * r * x * x;
  }
  prof.w_mid = prof.w[dp.mid_index];

  auto node = [&](int g) { return node_value(prof.w, n, g); };
  const double h = dp.h, h3 = h * h * h;
  // cubic pieces make the one-sided stencils exact
  prof.d2_0 = (6.0 * node(1) - 1.5 * node(2) + (2.0 / 9.0) * node(3)) / (h * h);
  int mid = dp.mid_node;
  prof.d3_mid_left = (node(mid) - 3.0 * node(mid - 1) + 3.0 * node(mid - 2) - node(mid - 3)) / h3;
  prof.d3_mid_right = (node(mid + 3) - 3.0 * node(mid + 2) + 3.0 * node(mid + 1) - node(mid)) / h3;
  prof.wprime0_est = (4.0 * node(1) - node(2)) / (2.0 * h);
  return prof;
}

double third_derivative_left_of_mid(const DiscreteProblem& dp, const std::vector<double>& U) {
  const double offset = 0.02;
  int j = dp.mid_node - std::max(2, static_cast<int>(std::lround(offset / dp.h)));
  auto node = [&](int g) { return node_value(U, dp.n, g); };
  const double h3 = dp.h * dp.h * dp.h;
  return (node(j) - 3.0 * node(j - 1) + 3.0 * node(j - 2) - node(j - 3)) / h3;
}

ConvergenceTable endpoint_convergence(const BifurcationCurve& curve, double r,
                                      const DiscreteProblem& dp) {
  if (!std::isfinite(r) || !(r > 0.0))
    throw std::invalid_argument("endpoint_convergence: finite radius required");
  const int n = dp.n;
  EndpointProfile prof = endpoint_profile(r, dp);

  ConvergenceTable table;
  const double h = dp.h;
  for (const CurvePoint& pt : curve.points) {
    if (pt.p < 0.99 * r) continue;
    ConvergenceRow row;
    row.p = pt.p;
    row.lambda = pt.lambda;
    const auto& U = pt.solution.U;
    double e0 = 0.0, e1 = 0.0, e2 = 0.0;
    for (int i = 0; i < dp.interior(); ++i) e0 = std::max(e0, std::abs(U[i] - prof.w[i]));
    for (int g = 1; g <= n - 2; ++g) {
      double du = (node_value(U, n, g + 1) - node_value(U, n, g - 1)) / (2.0 * h);
      double dw = (node_value(prof.w, n, g + 1) - node_value(prof.w, n, g - 1)) / (2.0 * h);
      e1 = std::max(e1, std::abs(du - dw));
      double su = (node_value(U, n, g + 1) - 2.0 * node_value(U, n, g) +
                   node_value(U, n, g - 1)) / (h * h);
      double sw = (node_value(prof.w, n, g + 1) - 2.0 * node_value(prof.w, n, g) +
                   node_value(prof.w, n, g - 1)) / (h * h);
      e2 = std::max(e2, std::abs(su - sw));
    }
    row.e0 = e0;
    row.e1 = e1;
    row.e2 = e2;
    row.d3_mid_left = third_derivative_left_of_mid(dp, U);
    table.rows.push_back(row);
  }
  if (table.rows.size() < 10)
    throw SolveError("endpoint_convergence: curve did not reach the tail region (" +
                     std::to_string(table.rows.size()) + " points with p >= 0.99 r)");

  auto monotone = [&](auto field) {
    for (std::size_t i = 1; i < table.rows.size(); ++i)
      if (field(table.rows[i]) > 1.05 * field(table.rows[i - 1])) return false;
    return true;
  };
  table.e0_monotone = monotone([](const ConvergenceRow& r_) { return r_.e0; });
  table.e1_monotone = monotone([](const ConvergenceRow& r_) { return r_.e1; });
  table.e2_monotone = monotone([](const ConvergenceRow& r_) { return r_.e2; });
  table.final_e0 = table.rows.back().e0;
  table.final_d3_mid_left = table.rows.back().d3_mid_left;
  return table;
}

AprioriReport apriori_monitor(const BifurcationCurve& curve, const DiscreteProblem& dp,
                              double window_lo_frac) {
  AprioriReport rep;
  const bool finite = dp.nl.finite_radius();
  double lam0 = curve.fold.lambda0;
  rep.window_lo = window_lo_frac * lam0;
  rep.window_hi = lam0;

  const double h2 = dp.h * dp.h;
  for (const CurvePoint& pt : curve.points) {
    rep.max_p = std::max(rep.max_p, pt.p);
    const auto& U = pt.solution.U;
    for (int g = 1; g <= dp.n - 2; ++g) {
      double s = (node_value(U, dp.n, g + 1) - 2.0 * node_value(U, dp.n, g) +
                  node_value(U, dp.n, g - 1)) / h2;
      rep.max_abs_d2 = std::max(rep.max_abs_d2, std::abs(s));
    }
    rep.max_abs_d3 = std::max(rep.max_abs_d3, pt.shape.d3_bound);
    if (pt.lambda >= rep.window_lo && pt.lambda <= rep.window_hi)
      rep.max_p_in_window = std::max(rep.max_p_in_window, pt.p);
  }
  if (finite) {
    rep.max_p_over_r = rep.max_p / dp.nl.r;
    rep.all_below_radius = rep.max_p < dp.nl.r;
  } else {
    rep.unbounded_growth = rep.max_p > 1.0;  // grew past any O(1) ceiling
  }
  rep.window_below_tail = rep.max_p_in_window < rep.max_p;
  return rep;
}

}  // namespace beamfold
