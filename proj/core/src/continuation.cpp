#include "beamfold/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "beamfold/spectral.hpp"

namespace beamfold {
namespace {

struct Defaults {
  double p_start, p_max, dp_init, dp_min, dp_max, ds_init, ds_max;
};

Defaults resolve(const DiscreteProblem& dp, const ContinuationConfig& cfg) {
  Defaults d{};
  const double r = dp.nl.r;
  const double rr = std::isfinite(r) ? std::min(r, 1.0) : 1.0;
  d.p_start = cfg.p_start > 0.0 ? cfg.p_start : 1e-3 * rr;
  d.p_max = cfg.p_max > 0.0 ? cfg.p_max
                            : (std::isfinite(r) ? cfg.p_max_fraction * r : dp.nl.u_cap);
  if (!(d.p_start < d.p_max))
    throw std::invalid_argument("trace_curve: p_start must lie below p_max");
  const double span = d.p_max - d.p_start;
  d.dp_init = cfg.dp_init > 0.0 ? cfg.dp_init : 1e-2 * rr;
  d.dp_min = cfg.dp_min > 0.0 ? cfg.dp_min : 1e-6 * span;
  d.dp_max = cfg.dp_max > 0.0 ? cfg.dp_max : std::max(d.dp_init, 1e-2 * span);
  d.ds_init = cfg.ds_init > 0.0 ? cfg.ds_init : 1e-2 * rr;
  d.ds_max = cfg.ds_max > 0.0 ? cfg.ds_max : 10.0 * d.ds_init;
  return d;
}

CurvePoint make_point(const DiscreteProblem& dp, BeamSolution sol) {
  CurvePoint pt;
  pt.p = sol.p;
  pt.lambda = sol.lambda;
  pt.shape = verify_solution_shape(dp, sol);
  pt.solution = std::move(sol);
  return pt;
}

// secant extrapolation of (lambda, U) to the target p
void secant_guess(const CurvePoint& a, const CurvePoint& b, double p_target,
                  double& lambda_g, std::vector<double>& U_g) {
  double t = (p_target - b.p) / (b.p - a.p);
  lambda_g = b.lambda + t * (b.lambda - a.lambda);
  U_g.resize(b.solution.U.size());
  for (std::size_t i = 0; i < U_g.size(); ++i)
    U_g[i] = b.solution.U[i] + t * (b.solution.U[i] - a.solution.U[i]);
}

BifurcationCurve trace_max_value(const DiscreteProblem& dp, const ContinuationConfig& cfg,
                                 const Defaults& d) {
  BifurcationCurve curve;
  const bool finite = dp.nl.finite_radius();

  double p = d.p_start;
  double lambda_g = 384.0 * p / dp.nl.eval_f(0.0);
  BeamSolution seed = solve_at_max(dp, p, lambda_g, linear_predictor(dp, lambda_g), cfg.newton);
  CurvePoint first = make_point(dp, std::move(seed));
  if (!cfg.exploratory && !first.shape.pass())
    throw SolveError("trace_curve: seed point failed shape verification");
  curve.points.push_back(std::move(first));

  double dp_step = d.dp_init;
  int successes = 0;
  double lambda_max = curve.points.back().lambda;

  while (static_cast<int>(curve.points.size()) < cfg.max_points) {
    if (p >= d.p_max * (1.0 - 1e-12)) {
      curve.termination = Termination::ReachedPMax;
      break;
    }
    double remaining = d.p_max - p;
    double step = std::min(dp_step, d.dp_max);
    if (remaining > 8.0 * d.dp_min) step = std::min(step, remaining / 4.0);
    double p_try = (remaining <= 8.0 * d.dp_min || remaining <= step * 1.0001)
                       ? d.p_max
                       : p + step;

    double lambda_try;
    std::vector<double> U_try;
    if (curve.points.size() >= 2) {
      secant_guess(curve.points[curve.points.size() - 2], curve.points.back(), p_try,
                   lambda_try, U_try);
    } else {
      lambda_try = 384.0 * p_try / dp.nl.eval_f(0.0);
      U_try = linear_predictor(dp, lambda_try);
    }

    bool accepted = false;
    try {
      BeamSolution sol = solve_at_max(dp, p_try, lambda_try, std::move(U_try), cfg.newton);
      CurvePoint pt = make_point(dp, std::move(sol));
      if (cfg.exploratory || pt.shape.pass()) {
        curve.points.push_back(std::move(pt));
        accepted = true;
      }
    } catch (const SolveError&) {
    } catch (const DomainError&) {
    }

    if (accepted) {
      p = p_try;
      lambda_max = std::max(lambda_max, curve.points.back().lambda);
      if (++successes >= 3) {
        dp_step = std::min(dp_step * 1.5, d.dp_max);
        successes = 0;
      }
      if (finite && curve.points.back().lambda <= cfg.lambda_min_rel * lambda_max &&
          curve.points.size() > 3) {
        curve.termination = Termination::LambdaMin;
        break;
      }
    } else {
      successes = 0;
      dp_step *= 0.5;
      if (dp_step < d.dp_min) {
        curve.termination = Termination::StepFailure;
        break;
      }
    }
  }
  if (static_cast<int>(curve.points.size()) >= cfg.max_points)
    curve.termination = Termination::PointLimit;
  return curve;
}

BifurcationCurve trace_arclength(const DiscreteProblem& dp, const ContinuationConfig& cfg,
                                 const Defaults& d) {
  BifurcationCurve curve;
  // two max-value seeds provide the first secant tangent
  for (double p : {d.p_start, 2.0 * d.p_start}) {
    double lambda_g = 384.0 * p / dp.nl.eval_f(0.0);
    std::vector<double> U0 = curve.points.empty() ? linear_predictor(dp, lambda_g)
                                                  : curve.points.back().solution.U;
    curve.points.push_back(make_point(dp, solve_at_max(dp, p, lambda_g, std::move(U0),
                                                       cfg.newton)));
  }

  double ds = d.ds_init;
  int fails = 0;
  int sign_changes = 0;
  double last_dl = 0.0;
  while (static_cast<int>(curve.points.size()) < cfg.max_points) {
    const CurvePoint& b = curve.points.back();
    if (b.p >= d.p_max) {
      curve.termination = Termination::ReachedPMax;
      break;
    }
    if (cfg.lambda_cap > 0.0 && b.lambda > cfg.lambda_cap) {
      curve.termination = Termination::LambdaCap;
      break;
    }
    try {
      CurvePoint next = arclength_step(dp, curve.points[curve.points.size() - 2], b, ds, cfg);
      double dl = next.lambda - b.lambda;
      if (last_dl != 0.0 && dl != 0.0 && std::signbit(dl) != std::signbit(last_dl) &&
          std::abs(dl) > 1e-10 * std::max(1.0, std::abs(next.lambda)))
        ++sign_changes;
      if (dl != 0.0) last_dl = dl;
      curve.points.push_back(std::move(next));
      fails = 0;
      ds = std::min(ds * 1.3, d.ds_max);
    } catch (const SolveError&) {
      ++fails;
      ds *= 0.5;
      if (fails > 5) {
        curve.termination = Termination::StepFailure;
        break;
      }
    } catch (const DomainError&) {
      ++fails;
      ds *= 0.5;
      if (fails > 5) {
        curve.termination = Termination::StepFailure;
        break;
      }
    }
  }
  if (static_cast<int>(curve.points.size()) >= cfg.max_points)
    curve.termination = Termination::PointLimit;
  return curve;
}

}  // namespace

std::string to_string(Termination t) {
  switch (t) {
    case Termination::ReachedPMax: return "reached p_max";
    case Termination::LambdaMin: return "lambda_min";
    case Termination::StepFailure: return "step failure";
    case Termination::PointLimit: return "point limit";
    case Termination::LambdaCap: return "lambda cap";
  }
  return "unknown";
}

double BifurcationCurve::lambda_max() const {
  double m = 0.0;
  for (const auto& pt : points) m = std::max(m, pt.lambda);
  return m;
}

bool BifurcationCurve::single_interior_max() const {
  int maxima = 0, minima = 0;
  int last_sign = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    double dl = points[i].lambda - points[i - 1].lambda;
    double scale = std::max(1.0, std::abs(points[i].lambda));
    if (std::abs(dl) <= 1e-10 * scale) continue;
    int sg = dl > 0.0 ? 1 : -1;
    if (last_sign == 1 && sg == -1) ++maxima;
    if (last_sign == -1 && sg == 1) ++minima;
    last_sign = sg;
  }
  if (minima > 0) return false;
  return maxima <= 1;
}

std::size_t BifurcationCurve::upper_branch_begin() const {
  return fold.present ? fold.index + 1 : points.size();
}

FoldInfo locate_fold(const std::vector<CurvePoint>& points) {
  FoldInfo info;
  if (points.size() < 3) {
    if (!points.empty()) {
      info.lambda0 = points.back().lambda;
      info.p0 = points.back().p;
      info.index = points.size() - 1;
    }
    return info;
  }
  std::size_t imax = 0;
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].lambda > points[imax].lambda) imax = i;
  if (imax == 0 || imax + 1 == points.size()) {
    // monotone curve: no interior sign change of delta lambda
    info.lambda0 = points[imax].lambda;
    info.p0 = points[imax].p;
    info.index = imax;
    return info;
  }
  const double p1 = points[imax - 1].p, p2 = points[imax].p, p3 = points[imax + 1].p;
  const double l1 = points[imax - 1].lambda, l2 = points[imax].lambda,
               l3 = points[imax + 1].lambda;
  // Lagrange quadratic through the bracket; vertex of the parabola
  const double d21 = (l2 - l1) / (p2 - p1);
  const double d32 = (l3 - l2) / (p3 - p2);
  const double a = (d32 - d21) / (p3 - p1);
  info.present = true;
  info.index = imax;
  if (a >= 0.0) {  // degenerate fit; fall back to the highest point
    info.lambda0 = l2;
    info.p0 = p2;
    info.fit_tol = 1e-12 * std::max(1.0, l2);
    return info;
  }
  // vertex of l(p) = l1 + d21 (p-p1) + a (p-p1)(p-p2)
  const double p0 = 0.5 * (p1 + p2 - d21 / a);
  info.p0 = p0;
  info.lambda0 = l1 + d21 * (p0 - p1) + a * (p0 - p1) * (p0 - p2);
  info.fit_tol = std::max((info.lambda0 - l2) + 1e-12 * std::max(1.0, info.lambda0),
                          1e-12 * std::max(1.0, info.lambda0));
  return info;
}

BifurcationCurve trace_curve(const DiscreteProblem& dp, ContinuationConfig cfg) {
  if (!cfg.exploratory) {
    HypothesisReport rep = check_hypotheses(dp.nl, 10000);
    if (!rep.all_ok()) {
      std::string msg = "trace_curve: hypothesis check failed for '" + dp.nl.name + "':";
      for (const auto& nn : rep.notes) msg += " " + nn + ";";
      throw HypothesisError(msg);
    }
  }
  Defaults d = resolve(dp, cfg);
  BifurcationCurve curve = cfg.mode == TraceMode::MaxValue ? trace_max_value(dp, cfg, d)
                                                           : trace_arclength(dp, cfg, d);
  curve.fold = locate_fold(curve.points);

  if (!cfg.exploratory && dp.nl.finite_radius() && curve.fold.present) {
    HypothesisReport rep = check_hypotheses(dp.nl, 10000);
    if (rep.a_estimate && *rep.a_estimate > 0.0) {
      double bound = lambda_upper_bound(dp.nl, *rep.a_estimate);
      curve.bound_ok = curve.fold.lambda0 <= bound + 1e-9;
    }
  }
  return curve;
}

MultiplicityResult multiplicity_at(const BifurcationCurve& curve, double lambda_q) {
  MultiplicityResult res;
  const auto& pts = curve.points;
  if (pts.empty()) return res;

  if (curve.fold.present) {
    const double tol = curve.fold.fit_tol;
    if (lambda_q > curve.fold.lambda0 + tol) return res;  // count 0
    if (lambda_q >= curve.fold.lambda0 - tol) {
      res.count = 1;  // crossings merged at the vertex
      return res;
    }
  }
  int count = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    double a = pts[i - 1].lambda - lambda_q;
    double b = pts[i].lambda - lambda_q;
    if ((a <= 0.0) != (b <= 0.0)) ++count;
  }
  // truncation: the query lies below the traced range on either branch
  if (lambda_q < pts.back().lambda || lambda_q < pts.front().lambda) res.truncated = true;
  res.count = count;
  return res;
}

CurvePoint arclength_step(const DiscreteProblem& dp, const CurvePoint& prev_prev,
                          const CurvePoint& prev, double ds, const ContinuationConfig& cfg) {
  const std::size_t m = prev.solution.U.size();
  const double lscale = std::max(1.0, std::abs(prev.lambda));

  // secant tangent in the scaled metric
  std::vector<double> tu(m);
  long double nrm2 = 0.0L;
  for (std::size_t i = 0; i < m; ++i) {
    tu[i] = prev.solution.U[i] - prev_prev.solution.U[i];
    nrm2 += static_cast<long double>(tu[i]) * tu[i];
  }
  double tl = (prev.lambda - prev_prev.lambda) / lscale;
  nrm2 += static_cast<long double>(tl) * tl;
  double nrm = std::sqrt(static_cast<double>(nrm2));
  if (!(nrm > 0.0)) throw SolveError("arclength_step: coincident previous points");
  for (double& t : tu) t /= nrm;
  tl /= nrm;

  // predictor
  std::vector<double> U(m);
  for (std::size_t i = 0; i < m; ++i) U[i] = prev.solution.U[i] + ds * tu[i];
  double lambda = prev.lambda + ds * tl * lscale;
  const double cap = dp.nl.finite_radius() ? dp.nl.r * (1.0 - 2.0 * kDomainGuard)
                                           : std::numeric_limits<double>::infinity();
  for (double& u : U) u = std::clamp(u, 0.0, cap);

  const NewtonConfig& ncfg = cfg.newton;
  for (int it = 0; it < ncfg.max_iters; ++it) {
    std::vector<double> R = assemble_residual(dp, lambda, U);
    long double g = -static_cast<long double>(ds);
    for (std::size_t i = 0; i < m; ++i)
      g += static_cast<long double>(U[i] - prev.solution.U[i]) * tu[i];
    g += static_cast<long double>((lambda - prev.lambda) / lscale) * tl;

    double rn = 0.0;
    for (double x : R) rn = std::max(rn, std::abs(x));
    rn = std::max(rn, std::abs(static_cast<double>(g)));
    double maxu = 0.0;
    for (double x : U) maxu = std::max(maxu, std::abs(x));
    double tol = newton_tolerance(dp, ncfg, lambda, maxu, maxu);
    if (rn <= tol) {
      BeamSolution sol;
      sol.lambda = lambda;
      sol.p = U[dp.mid_index];
      auto [d2, d3] = derived_boundary_values(dp, lambda, U);
      sol.d2_0 = d2;
      sol.d3_0 = d3;
      sol.residual_norm = rn;
      sol.U = std::move(U);
      CurvePoint pt;
      pt.p = sol.p;
      pt.lambda = sol.lambda;
      pt.shape = verify_solution_shape(dp, sol);
      pt.solution = std::move(sol);
      return pt;
    }

    BandLU lu(assemble_jacobian(dp, lambda, U));
    std::vector<double> negR(m);
    for (std::size_t i = 0; i < m; ++i) negR[i] = -R[i];
    std::vector<double> c(m);
    for (std::size_t i = 0; i < m; ++i) c[i] = -dp.nl.eval_f(U[i]);
    std::vector<double> y = lu.solve(negR);
    std::vector<double> z = lu.solve(c);
    long double ty = 0.0L, tz = 0.0L;
    for (std::size_t i = 0; i < m; ++i) {
      ty += static_cast<long double>(tu[i]) * y[i];
      tz += static_cast<long double>(tu[i]) * z[i];
    }
    long double denom = tz - static_cast<long double>(tl) / lscale;
    if (!(std::abs(static_cast<double>(denom)) > 1e-300))
      throw SingularMatrixError("arclength_step: degenerate constraint");
    double dl = static_cast<double>((ty + g) / denom);
    for (std::size_t i = 0; i < m; ++i)
      U[i] = std::clamp(U[i] + (y[i] - dl * z[i]), 0.0, cap);
    lambda += dl;
  }
  throw NoConvergenceError("arclength_step: no convergence");
}

void fill_spectra(const DiscreteProblem& dp, BifurcationCurve& curve) {
  std::optional<double> hint;
  for (CurvePoint& pt : curve.points) {
    try {
      EigenEstimate est = linearized_smallest_eigenvalue(dp, pt.solution, hint);
      pt.smallest_eig = est.value;
      hint = est.value;
    } catch (const SolveError&) {
      if (hint) {
        // warm shift failed; retry cold before giving this point up
        try {
          EigenEstimate est = linearized_smallest_eigenvalue(dp, pt.solution);
          pt.smallest_eig = est.value;
          hint = est.value;
          continue;
        } catch (const SolveError&) {
        }
      }
      pt.smallest_eig.reset();
      hint.reset();
    }
  }
}

bool sweep_consistency(const DiscreteProblem& dp, const BifurcationCurve& curve,
                       double rel_p_tol) {
  if (curve.points.size() < 4) return false;
  // first-branch maximum: lambda at the first interior sign change (or the
  // global max for monotone prefixes)
  double first_max = curve.points.front().lambda;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    if (curve.points[i].lambda < curve.points[i - 1].lambda) break;
    first_max = curve.points[i].lambda;
  }
  const double fracs[] = {0.15, 0.35, 0.55, 0.75, 0.95};
  for (double fr : fracs) {
    double lam_q = fr * first_max;
    // first polyline crossing
    double p_cross = -1.0;
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
      double a = curve.points[i - 1].lambda - lam_q;
      double b = curve.points[i].lambda - lam_q;
      if ((a <= 0.0) != (b <= 0.0)) {
        double t = a / (a - b);
        p_cross = curve.points[i - 1].p + t * (curve.points[i].p - curve.points[i - 1].p);
        break;
      }
    }
    if (p_cross < 0.0) return false;
    try {
      BeamSolution sol = newton_solve(dp, lam_q, linear_predictor(dp, lam_q));
      if (std::abs(sol.p - p_cross) > rel_p_tol * std::max(p_cross, 1e-6)) return false;
    } catch (const std::exception&) {
      return false;
    }
  }
  return true;
}

double lambda_sweep_fold(const DiscreteProblem& dp, double lambda_lo, double rel_tol) {
  NewtonConfig ncfg;
  double lo = lambda_lo;
  BeamSolution base = newton_solve(dp, lo, linear_predictor(dp, lo), ncfg);
  std::vector<double> warm = base.U;

  double hi = 0.0;
  while (hi == 0.0) {
    double next = lo * 1.3;
    try {
      BeamSolution sol = newton_solve(dp, next, warm, ncfg);
      lo = next;
      warm = sol.U;
    } catch (const SolveError&) {
      hi = next;
    } catch (const DomainError&) {
      hi = next;
    }
    if (lo > 1e8) throw SolveError("lambda_sweep_fold: no divergence found");
  }
  while (hi - lo > rel_tol * hi) {
    double mid = 0.5 * (lo + hi);
    try {
      BeamSolution sol = newton_solve(dp, mid, warm, ncfg);
      lo = mid;
      warm = sol.U;
    } catch (const SolveError&) {
      hi = mid;
    } catch (const DomainError&) {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace beamfold
