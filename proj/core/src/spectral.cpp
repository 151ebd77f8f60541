#include "beamfold/spectral.hpp"

#include <cassert>
#include <memory>
#include <cmath>
#include <limits>

namespace beamfold {
namespace {

double rayleigh(const BandMatrix& J, const std::vector<double>& v) {
  const int n = J.size();
  long double num = 0.0L, den = 0.0L;
  for (int i = 0; i < n; ++i) {
    long double Jv = 0.0L;
    int jlo = std::max(0, i - J.lower());
    int jhi = std::min(n - 1, i + J.upper());
    for (int j = jlo; j <= jhi; ++j) Jv += static_cast<long double>(J.at(i, j)) * v[j];
    num += static_cast<long double>(v[i]) * Jv;
    den += static_cast<long double>(v[i]) * v[i];
  }
  return static_cast<double>(num / den);
}

double residual_norm(const BandMatrix& J, double value, const std::vector<double>& v) {
  const int n = J.size();
  long double worst = 0.0L;
  for (int i = 0; i < n; ++i) {
    long double acc = 0.0L;
    int jlo = std::max(0, i - J.lower());
    int jhi = std::min(n - 1, i + J.upper());
    for (int j = jlo; j <= jhi; ++j) acc += static_cast<long double>(J.at(i, j)) * v[j];
    acc -= static_cast<long double>(value) * v[i];
    worst = std::max(worst, std::abs(acc));
  }
  return static_cast<double>(worst);
}

BandMatrix shifted(const BandMatrix& J, double sigma) {
  BandMatrix A = J;
  for (int i = 0; i < J.size(); ++i) A.at(i, i) -= sigma;
  return A;
}

void normalize(std::vector<double>& v, int mid) {
  double mx = 0.0;
  for (double x : v) mx = std::max(mx, std::abs(x));
  double sgn = (v[mid] >= 0.0) ? 1.0 : -1.0;
  double s = sgn / mx;
  for (double& x : v) x *= s;
}

}  // namespace

std::pair<double, double> beam_principal_eigenvalue(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("beam_principal_eigenvalue: tol must be positive");
  auto g = [](double k) { return std::cos(k) * std::cosh(k) - 1.0; };
  double a = std::acos(-1.0);  // pi
  double b = 2.0 * a;
  // first positive root of cos cosh = 1 lies in (pi, 2 pi); hard assumption
  assert(g(a) < 0.0 && g(b) > 0.0);
  if (!(g(a) < 0.0 && g(b) > 0.0))
    throw std::logic_error("beam_principal_eigenvalue: bracket does not change sign");
  while (b - a > tol) {
    double m = 0.5 * (a + b);
    if (g(m) < 0.0)
      a = m;
    else
      b = m;
  }
  double k1 = 0.5 * (a + b);
  return {k1, k1 * k1 * k1 * k1};
}

double lambda_upper_bound(const Nonlinearity& nl, double a) {
  if (!nl.finite_radius())
    throw std::invalid_argument("lambda_upper_bound requires a finite singularity radius");
  if (!(a > 0.0)) throw std::invalid_argument("lambda_upper_bound requires a > 0");
  auto [k1, mu1] = beam_principal_eigenvalue(1e-12);
  (void)k1;
  return nl.r * nl.r * mu1 / (4.0 * a);
}

EigenEstimate linearized_smallest_eigenvalue(const DiscreteProblem& dp,
                                             const BeamSolution& sol,
                                             std::optional<double> shift_hint) {
  const BandMatrix J = assemble_jacobian(dp, sol.lambda, sol.U);
  const int m = J.size();
  const double jnorm = J.inf_norm();

  double sigma = shift_hint.value_or(0.0);
  std::unique_ptr<BandLU> lu;
  const double bumps[] = {0.0, 1e-8 * jnorm, -1e-8 * jnorm};
  for (double bump : bumps) {
    try {
      lu = std::make_unique<BandLU>(shifted(J, sigma + bump));
      sigma += bump;
      break;
    } catch (const SingularMatrixError&) {
      continue;
    }
  }
  if (!lu)
    throw NoConvergenceError("linearized_smallest_eigenvalue: shifted operator singular");

  // symmetric positive seed with good overlap with the ground mode
  std::vector<double> v(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    int g = i + 1;
    int k = std::min(g, dp.n - 1 - g);
    double x = k * dp.h;
    v[i] = x * x * (1.0 - x) * (1.0 - x);
  }
  normalize(v, dp.mid_index);

  // The eigenvector components quantize at double precision, so residuals
  // bottom out near eps * ||J||; once the eigenvalue stalls, polish a few
  // more sweeps and keep the best iterate.
  const double res_floor = 2.0 * std::numeric_limits<double>::epsilon() * jnorm;
  const int polish_sweeps = 8;
  double value = sigma;
  double best_res = std::numeric_limits<double>::infinity();
  double best_value = 0.0;
  std::vector<double> best_v;
  int stalled_at = 0;
  EigenEstimate est;
  for (int it = 1; it <= 500; ++it) {
    std::vector<double> w = lu->solve(v);
    normalize(w, dp.mid_index);
    double next = rayleigh(J, w);
    v = std::move(w);
    bool stalled =
        it >= 2 && std::abs(next - value) <= 1e-10 * std::max(1.0, std::abs(next));
    value = next;
    if (stalled && stalled_at == 0) stalled_at = it;
    if (stalled_at == 0) continue;
    double res = residual_norm(J, value, v);
    if (res < best_res) {
      best_res = res;
      best_value = value;
      best_v = v;
    }
    double target = 1e-8 * std::abs(value) + 1e-12;
    if (best_res <= target || it >= stalled_at + polish_sweeps) {
      if (best_res > target + res_floor) break;  // genuinely unconverged
      est.value = best_value;
      est.vector = std::move(best_v);
      est.iterations = it;
      est.residual = best_res;
      return est;
    }
  }
  throw NoConvergenceError(
      "linearized_smallest_eigenvalue: no convergence after 500 iterations");
}

}  // namespace beamfold
