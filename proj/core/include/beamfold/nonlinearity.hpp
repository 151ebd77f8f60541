#ifndef BEAMFOLD_NONLINEARITY_HPP
#define BEAMFOLD_NONLINEARITY_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "beamfold/errors.hpp"

namespace beamfold {

// Relative guard on the singularity radius: evaluators are only queried on
// [0, r*(1 - kDomainGuard)]; queries beyond raise DomainError.
inline constexpr double kDomainGuard = 1e-8;

// Sampling window for entries without a finite singularity radius.
inline constexpr double kInfiniteRadiusCap = 50.0;

// A force law f on [0, r) with first and second derivatives and an optional
// analytic antiderivative F(u) = int_0^u f. Immutable after construction.
struct Nonlinearity {
  std::string name;
  std::map<std::string, double> params;
  double r = std::numeric_limits<double>::infinity();
  std::function<double(double)> f, f1, f2;
  std::function<double(double)> F;  // empty when no closed form is supplied
  std::optional<double> exact_a;    // closed-form inf of (r-u) f(u) when known
  double u_cap = kInfiniteRadiusCap;

  bool finite_radius() const { return std::isfinite(r); }

  // Largest admissible argument: r*(1-guard) for finite r, u_cap otherwise
  // (u_cap only bounds hypothesis sampling; evaluation beyond it is legal).
  double domain_max() const { return finite_radius() ? r * (1.0 - kDomainGuard) : u_cap; }

  double eval_f(double u) const { return eval(f, u, "f"); }
  double eval_f1(double u) const { return eval(f1, u, "f'"); }
  double eval_f2(double u) const { return eval(f2, u, "f''"); }
  bool has_antiderivative() const { return static_cast<bool>(F); }
  double eval_F(double u) const { return eval(F, u, "F"); }

 private:
  double eval(const std::function<double(double)>& g, double u, const char* which) const;
};

struct HypothesisReport {
  bool positivity_ok = false;
  bool increasing_ok = false;
  bool convex_ok = false;
  double min_f = 0.0;   // worst-case margins over the sampled domain
  double min_f1 = 0.0;
  double min_f2 = 0.0;
  std::optional<double> a_estimate;  // absent when r = infinity
  bool a_is_exact = false;
  bool liminf_ok = false;  // (r-u) f(u) bounded away from zero on the samples
  std::vector<std::string> notes;

  bool all_ok() const;
};

// Catalog of force laws. Known names:
//   inverse_square, constant_load, exponential, power{p},
//   cnt_actuator{beta_n,n}, nanobridge_single{beta_vdw,alpha,delta,k},
//   nanobridge_two{beta_vdw,alpha,delta,k},
//   casimir_actuator{beta_cas,alpha,delta,gamma}, regularized{eps,m}
// Throws std::invalid_argument on unknown names or bad parameters.
Nonlinearity catalog_lookup(const std::string& name,
                            const std::map<std::string, double>& params = {});

std::vector<std::string> catalog_names();

// Samples f, f', f'' on [guard, r*(1-guard)] (or [0, u_cap] for r = inf) and
// reports sign margins. For finite r the constant a with f(u) >= a/(r-u) is
// estimated from 1e4 samples of (r-u) f(u) plus golden-section refinement.
// Requires n_samples >= 100. Throws DomainError if an evaluator returns a
// non-finite value inside the guarded domain.
HypothesisReport check_hypotheses(const Nonlinearity& nl, int n_samples);

struct TangentBoundResult {
  bool ok = false;
  double worst_u = 0.0;       // first violating sample, if any
  double f_value = 0.0;
  double bound_value = 0.0;
  explicit operator bool() const { return ok; }
};

// Checks f(u) >= (4a/r^2) u on sampled points, up to relative tolerance 1e-12.
// Requires finite r and a > 0.
TangentBoundResult tangent_bound_check(const Nonlinearity& nl, double a);

}  // namespace beamfold

#endif
