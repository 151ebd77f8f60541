#include "beamfold/nonlinearity.hpp"

#include <cmath>
#include <sstream>

namespace beamfold {
namespace {

double require(const std::map<std::string, double>& params, const std::string& key,
               const std::string& entry) {
  auto it = params.find(key);
  if (it == params.end())
    throw std::invalid_argument("catalog entry '" + entry + "' requires parameter '" + key + "'");
  return it->second;
}

double require_positive(const std::map<std::string, double>& params, const std::string& key,
                        const std::string& entry) {
  double v = require(params, key, entry);
  if (!(v > 0.0))
    throw std::invalid_argument("catalog entry '" + entry + "': parameter '" + key +
                                "' must be positive, got " + std::to_string(v));
  return v;
}

double require_nonneg(const std::map<std::string, double>& params, const std::string& key,
                      const std::string& entry) {
  double v = require(params, key, entry);
  if (!(v >= 0.0))
    throw std::invalid_argument("catalog entry '" + entry + "': parameter '" + key +
                                "' must be nonnegative, got " + std::to_string(v));
  return v;
}

// Radius for the nanobridge entries. Their log term blows up both at the
// structural gap closure and wherever the log argument crosses 1; the
// declared radius is the first of the two. c0 is the log argument at u = 0.
double log_term_radius(double structural, double c0, const std::string& entry) {
  if (c0 > 1.0) return structural * (1.0 - 1.0 / c0);
  if (c0 < 1.0) return structural;
  throw std::invalid_argument("catalog entry '" + entry +
                              "': log argument equals 1 at u = 0 (k on the domain boundary)");
}

}  // namespace

double Nonlinearity::eval(const std::function<double(double)>& g, double u,
                          const char* which) const {
  if (!g) throw DomainError(name + ": evaluator '" + std::string(which) + "' not provided");
  if (u < 0.0)
    throw DomainError(name + ": evaluation at u = " + std::to_string(u) + " < 0");
  if (finite_radius() && u > r * (1.0 - kDomainGuard) * (1.0 + 1e-15))
    throw DomainError(name + ": evaluation at u = " + std::to_string(u) +
                      " beyond guarded radius " + std::to_string(r * (1.0 - kDomainGuard)));
  double v = g(u);
  if (!std::isfinite(v))
    throw DomainError(name + ": evaluator '" + std::string(which) +
                      "' returned non-finite value at u = " + std::to_string(u));
  return v;
}

bool HypothesisReport::all_ok() const {
  bool base = positivity_ok && increasing_ok && convex_ok;
  if (a_estimate.has_value()) return base && liminf_ok;
  return base;
}

Nonlinearity catalog_lookup(const std::string& name,
                            const std::map<std::string, double>& params) {
  Nonlinearity nl;
  nl.name = name;
  nl.params = params;

  if (name == "inverse_square") {
    nl.r = 1.0;
    nl.f = [](double u) { return 1.0 / ((1.0 - u) * (1.0 - u)); };
    nl.f1 = [](double u) { return 2.0 / std::pow(1.0 - u, 3); };
    nl.f2 = [](double u) { return 6.0 / std::pow(1.0 - u, 4); };
    nl.F = [](double u) { return 1.0 / (1.0 - u) - 1.0; };
    nl.exact_a = 1.0;  // (1-u) f = 1/(1-u), increasing, infimum at u = 0
  } else if (name == "constant_load") {
    nl.f = [](double) { return 1.0; };
    nl.f1 = [](double) { return 0.0; };
    nl.f2 = [](double) { return 0.0; };
    nl.F = [](double u) { return u; };
  } else if (name == "exponential") {
    nl.f = [](double u) { return std::exp(u); };
    nl.f1 = [](double u) { return std::exp(u); };
    nl.f2 = [](double u) { return std::exp(u); };
    nl.F = [](double u) { return std::expm1(u); };
  } else if (name == "power") {
    double p = require(params, "p", name);
    if (!(p > 1.0))
      throw std::invalid_argument("catalog entry 'power': p must exceed 1");
    nl.f = [p](double u) { return std::pow(1.0 + u, p); };
    nl.f1 = [p](double u) { return p * std::pow(1.0 + u, p - 1.0); };
    nl.f2 = [p](double u) { return p * (p - 1.0) * std::pow(1.0 + u, p - 2.0); };
    nl.F = [p](double u) { return (std::pow(1.0 + u, p + 1.0) - 1.0) / (p + 1.0); };
  } else if (name == "cnt_actuator") {
    double beta = require_positive(params, "beta_n", name);
    double nn = require_positive(params, "n", name);
    nl.r = 1.0;
    nl.f = [beta, nn](double u) { return beta * std::pow(1.0 - u, -nn); };
    nl.f1 = [beta, nn](double u) { return beta * nn * std::pow(1.0 - u, -nn - 1.0); };
    nl.f2 = [beta, nn](double u) {
      return beta * nn * (nn + 1.0) * std::pow(1.0 - u, -nn - 2.0);
    };
    if (std::abs(nn - 1.0) > 1e-12) {
      nl.F = [beta, nn](double u) {
        return beta * (std::pow(1.0 - u, 1.0 - nn) - 1.0) / (nn - 1.0);
      };
    } else {
      nl.F = [beta](double u) { return -beta * std::log1p(-u); };
    }
    if (nn >= 1.0) nl.exact_a = beta;  // (1-u) f = beta (1-u)^{1-n} nondecreasing
  } else if (name == "nanobridge_single") {
    double beta = require_positive(params, "beta_vdw", name);
    double alpha = require_positive(params, "alpha", name);
    double delta = require_nonneg(params, "delta", name);
    double k = require_positive(params, "k", name);
    // log term: alpha / ((1+delta)(1-u) ln^2[2k(1-u)]); the argument 2k(1-u)
    // crosses 1 at u = 1 - 1/(2k), which caps the radius when 2k > 1.
    nl.r = log_term_radius(1.0, 2.0 * k, name);
    double c1 = beta / (k * (1.0 + delta));
    double c2 = alpha / (1.0 + delta);
    auto lg = [k](double u) { return std::log(2.0 * k * (1.0 - u)); };
    nl.f = [c1, c2, k, lg](double u) {
      double L = lg(u);
      return c1 * std::pow(1.0 - u, -4.0) + c2 / ((1.0 - u) * L * L);
    };
    nl.f1 = [c1, c2, k, lg](double u) {
      double s = 1.0 - u, L = lg(u);
      return 4.0 * c1 * std::pow(s, -5.0) + c2 * (L + 2.0) / (s * s * L * L * L);
    };
    nl.f2 = [c1, c2, k, lg](double u) {
      double s = 1.0 - u, L = lg(u);
      return 20.0 * c1 * std::pow(s, -6.0) +
             c2 * (2.0 * L * L + 6.0 * L + 6.0) / (s * s * s * L * L * L * L);
    };
    nl.F = [c1, c2, k, lg](double u) {
      double L0 = std::log(2.0 * k);
      return c1 * (std::pow(1.0 - u, -3.0) - 1.0) / 3.0 + c2 * (1.0 / lg(u) - 1.0 / L0);
    };
  } else if (name == "nanobridge_two") {
    double beta = require_positive(params, "beta_vdw", name);
    double alpha = require_positive(params, "alpha", name);
    double delta = require_nonneg(params, "delta", name);
    double k = require_positive(params, "k", name);
    // terms blow up where 1-2u -> 0, i.e. u = 1/2; the log argument k(1-2u)
    // crosses 1 earlier when k > 1.
    nl.r = log_term_radius(0.5, k, name);
    double c1 = beta / (2.0 * (1.0 + delta));
    double c2 = alpha / (2.0 * (1.0 + delta));
    auto lg = [k](double u) { return std::log(k * (1.0 - 2.0 * u)); };
    nl.f = [c1, c2, lg](double u) {
      double s = 1.0 - 2.0 * u, L = lg(u);
      return c1 * std::pow(s, -2.5) + c2 / (s * L * L);
    };
    nl.f1 = [c1, c2, lg](double u) {
      double s = 1.0 - 2.0 * u, L = lg(u);
      return 5.0 * c1 * std::pow(s, -3.5) + 2.0 * c2 * (L + 2.0) / (s * s * L * L * L);
    };
    nl.f2 = [c1, c2, lg](double u) {
      double s = 1.0 - 2.0 * u, L = lg(u);
      return 35.0 * c1 * std::pow(s, -4.5) +
             4.0 * c2 * (2.0 * L * L + 6.0 * L + 6.0) / (s * s * s * L * L * L * L);
    };
    nl.F = [c1, c2, k, lg](double u) {
      double L0 = std::log(k);
      return c1 * (std::pow(1.0 - 2.0 * u, -1.5) - 1.0) / 3.0 +
             0.5 * c2 * (1.0 / lg(u) - 1.0 / L0);
    };
  } else if (name == "casimir_actuator") {
    double beta = require_positive(params, "beta_cas", name);
    double alpha = require_positive(params, "alpha", name);
    double delta = require_nonneg(params, "delta", name);
    double gamma = require_nonneg(params, "gamma", name);
    nl.r = 1.0;
    double c4 = beta / (1.0 + delta);
    double c2 = alpha / (1.0 + delta);
    double c1 = alpha * gamma / (1.0 + delta);
    nl.f = [c4, c2, c1](double u) {
      double s = 1.0 - u;
      return c4 / (s * s * s * s) + c2 / (s * s) + c1 / s;
    };
    nl.f1 = [c4, c2, c1](double u) {
      double s = 1.0 - u;
      return 4.0 * c4 / std::pow(s, 5) + 2.0 * c2 / (s * s * s) + c1 / (s * s);
    };
    nl.f2 = [c4, c2, c1](double u) {
      double s = 1.0 - u;
      return 20.0 * c4 / std::pow(s, 6) + 6.0 * c2 / std::pow(s, 4) + 2.0 * c1 / (s * s * s);
    };
    nl.F = [c4, c2, c1](double u) {
      double s = 1.0 - u;
      return c4 * (1.0 / (s * s * s) - 1.0) / 3.0 + c2 * (1.0 / s - 1.0) - c1 * std::log(s);
    };
    nl.exact_a = c4 + c2 + c1;  // (1-u) f(u) has all terms nondecreasing
  } else if (name == "regularized") {
    double eps = require_positive(params, "eps", name);
    double m = require(params, "m", name);
    if (!(m > 2.0))
      throw std::invalid_argument("catalog entry 'regularized': m must exceed 2");
    if (!(eps < 1.0))
      throw std::invalid_argument("catalog entry 'regularized': eps must be below 1");
    double c = std::pow(eps, m - 2.0);
    nl.r = 1.0;
    nl.f = [c, m](double u) {
      double s = 1.0 - u;
      return 1.0 / (s * s) - c * std::pow(s, -m);
    };
    nl.f1 = [c, m](double u) {
      double s = 1.0 - u;
      return 2.0 / (s * s * s) - c * m * std::pow(s, -m - 1.0);
    };
    nl.f2 = [c, m](double u) {
      double s = 1.0 - u;
      return 6.0 / (s * s * s * s) - c * m * (m + 1.0) * std::pow(s, -m - 2.0);
    };
    nl.F = [c, m](double u) {
      double s = 1.0 - u;
      return (1.0 / s - 1.0) - c * (std::pow(s, 1.0 - m) - 1.0) / (m - 1.0);
    };
  } else {
    throw std::invalid_argument("unknown catalog entry '" + name + "'");
  }

  // Antiderivative consistency: central difference of F against f at 100
  // points over the lower 90% of the sampling window.
  if (nl.has_antiderivative()) {
    double hi = 0.9 * (nl.finite_radius() ? nl.r * (1.0 - kDomainGuard) : nl.u_cap);
    double step = 1e-7 * std::max(hi, 1.0);
    for (int i = 1; i <= 100; ++i) {
      double u = hi * i / 101.0;
      if (u - step < 0.0) continue;
      double fd = (nl.eval_F(u + step) - nl.eval_F(u - step)) / (2.0 * step);
      double fv = nl.eval_f(u);
      if (std::abs(fd - fv) > 1e-6 * std::max(1.0, std::abs(fv)))
        throw std::invalid_argument("catalog entry '" + name +
                                    "': antiderivative inconsistent with f near u = " +
                                    std::to_string(u));
    }
  }
  return nl;
}

std::vector<std::string> catalog_names() {
  return {"inverse_square", "constant_load",     "exponential",
          "power",          "cnt_actuator",      "nanobridge_single",
          "nanobridge_two", "casimir_actuator",  "regularized"};
}

HypothesisReport check_hypotheses(const Nonlinearity& nl, int n_samples) {
  if (n_samples < 100)
    throw std::invalid_argument("check_hypotheses: n_samples must be at least 100");
  HypothesisReport rep;
  const bool finite = nl.finite_radius();
  const double lo = finite ? kDomainGuard * nl.r : 0.0;
  const double hi = nl.domain_max();

  double min_f = std::numeric_limits<double>::infinity();
  double min_f1 = min_f, min_f2 = min_f;
  for (int i = 0; i <= n_samples; ++i) {
    double u = lo + (hi - lo) * i / n_samples;
    min_f = std::min(min_f, nl.eval_f(u));
    min_f1 = std::min(min_f1, nl.eval_f1(u));
    min_f2 = std::min(min_f2, nl.eval_f2(u));
  }
  rep.min_f = min_f;
  rep.min_f1 = min_f1;
  rep.min_f2 = min_f2;
  // Margins may legitimately sit at zero (e.g. a constant load), so the
  // conditions are tested non-strictly; genuine violations are negative.
  const double tol1 = -1e-12 * std::max(1.0, std::abs(min_f1));
  const double tol2 = -1e-12 * std::max(1.0, std::abs(min_f2));
  rep.positivity_ok = min_f > 0.0;
  rep.increasing_ok = min_f1 >= tol1;
  rep.convex_ok = min_f2 >= tol2;
  if (!rep.positivity_ok) rep.notes.push_back("f(u) > 0 violated, min f = " + std::to_string(min_f));
  if (!rep.increasing_ok)
    rep.notes.push_back("f'(u) > 0 violated, min f' = " + std::to_string(min_f1));
  if (!rep.convex_ok)
    rep.notes.push_back("f''(u) > 0 violated, min f'' = " + std::to_string(min_f2));

  if (finite) {
    // inf of g(u) = (r-u) f(u): coarse scan then golden-section refinement.
    auto g = [&](double u) { return (nl.r - u) * nl.eval_f(u); };
    const int scan = std::max(n_samples, 10000);
    double best = std::numeric_limits<double>::infinity();
    int besti = 0;
    for (int i = 0; i <= scan; ++i) {
      double u = lo + (hi - lo) * i / scan;
      double v = g(u);
      if (v < best) {
        best = v;
        besti = i;
      }
    }
    double a = lo + (hi - lo) * std::max(0, besti - 1) / scan;
    double b = lo + (hi - lo) * std::min(scan, besti + 1) / scan;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double g1 = g(x1), g2 = g(x2);
    for (int it = 0; it < 50; ++it) {
      if (g1 < g2) {
        b = x2; x2 = x1; g2 = g1;
        x1 = b - gr * (b - a); g1 = g(x1);
      } else {
        a = x1; x1 = x2; g1 = g2;
        x2 = a + gr * (b - a); g2 = g(x2);
      }
    }
    best = std::min({best, g1, g2});
    rep.liminf_ok = best > 0.0;
    if (nl.exact_a.has_value()) {
      rep.a_estimate = *nl.exact_a;
      rep.a_is_exact = true;
    } else {
      rep.a_estimate = best;
    }
    if (!rep.liminf_ok)
      rep.notes.push_back("liminf (r-u) f(u) > 0 violated, sampled inf = " +
                          std::to_string(best));
  }
  return rep;
}

TangentBoundResult tangent_bound_check(const Nonlinearity& nl, double a) {
  if (!nl.finite_radius())
    throw std::invalid_argument("tangent_bound_check requires a finite singularity radius");
  if (!(a > 0.0)) throw std::invalid_argument("tangent_bound_check requires a > 0");
  TangentBoundResult res;
  res.ok = true;
  const double slope = 4.0 * a / (nl.r * nl.r);
  const double hi = nl.domain_max();
  const int scan = 10000;
  for (int i = 0; i <= scan; ++i) {
    double u = hi * i / scan;
    double fv = nl.eval_f(u);
    double bound = slope * u;
    if (fv < bound * (1.0 - 1e-12)) {
      res.ok = false;
      res.worst_u = u;
      res.f_value = fv;
      res.bound_value = bound;
      return res;
    }
  }
  return res;
}

}  // namespace beamfold
