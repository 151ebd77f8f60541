#include "beamfold/banded.hpp"

#include <algorithm>
#include <stdexcept>
#include <cmath>
#include <utility>

namespace beamfold {

BandMatrix::BandMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), width_(2 * kl + ku + 1),
      a_(static_cast<std::size_t>(n) * (2 * kl + ku + 1), 0.0) {}

double BandMatrix::inf_norm() const {
  double nrm = 0.0;
  for (int i = 0; i < n_; ++i) {
    double row = 0.0;
    int jlo = std::max(0, i - kl_);
    int jhi = std::min(n_ - 1, i + ku_);
    for (int j = jlo; j <= jhi; ++j) row += std::abs(at(i, j));
    nrm = std::max(nrm, row);
  }
  return nrm;
}

std::vector<double> BandMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    long double acc = 0.0L;
    int jlo = std::max(0, i - kl_);
    int jhi = std::min(n_ - 1, i + ku_);
    for (int j = jlo; j <= jhi; ++j)
      acc += static_cast<long double>(at(i, j)) * x[j];
    y[i] = static_cast<double>(acc);
  }
  return y;
}

BandLU::BandLU(BandMatrix A) : a_(std::move(A)), piv_(a_.size()), norm_(a_.inf_norm()) {
  const int n = a_.size();
  const int kl = a_.lower();
  const int ku = a_.upper();
  const double tiny = 1e-14 * std::max(norm_, 1e-300);

  for (int k = 0; k < n; ++k) {
    int pmax = std::min(n - 1, k + kl);
    int piv = k;
    double best = std::abs(a_.at(k, k));
    for (int r = k + 1; r <= pmax; ++r) {
      double v = std::abs(a_.at(r, k));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best <= tiny)
      throw SingularMatrixError("banded LU: pivot below threshold at column " + std::to_string(k));
    piv_[k] = piv;
    int jhi = std::min(n - 1, k + ku + kl);
    if (piv != k)
      for (int j = k; j <= jhi; ++j) std::swap(a_.at(k, j), a_.at(piv, j));
    double d = a_.at(k, k);
    for (int r = k + 1; r <= pmax; ++r) {
      double m = a_.at(r, k) / d;
      a_.at(r, k) = m;
      if (m != 0.0)
        for (int j = k + 1; j <= jhi; ++j) a_.at(r, j) -= m * a_.at(k, j);
    }
  }
}

void BandLU::solve_in_place(std::vector<double>& b) const {
  const int n = a_.size();
  const int kl = a_.lower();
  const int ku = a_.upper();
  for (int k = 0; k < n; ++k) {
    if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
    int rhi = std::min(n - 1, k + kl);
    for (int r = k + 1; r <= rhi; ++r) b[r] -= a_.at(r, k) * b[k];
  }
  for (int k = n - 1; k >= 0; --k) {
    int jhi = std::min(n - 1, k + ku + kl);
    double s = b[k];
    for (int j = k + 1; j <= jhi; ++j) s -= a_.at(k, j) * b[j];
    b[k] = s / a_.at(k, k);
  }
}

std::vector<double> BandLU::solve(std::vector<double> b) const {
  solve_in_place(b);
  return b;
}

std::pair<std::vector<double>, double> bordered_solve(
    const BandLU& lu, const std::vector<double>& rhs,
    const std::vector<double>& border_col, const std::vector<double>& border_row,
    double corner, double rhs_tail) {
  std::vector<double> y = lu.solve(rhs);
  std::vector<double> z = lu.solve(border_col);
  long double ry = 0.0L, rz = 0.0L;
  for (std::size_t i = 0; i < border_row.size(); ++i) {
    ry += static_cast<long double>(border_row[i]) * y[i];
    rz += static_cast<long double>(border_row[i]) * z[i];
  }
  long double denom = static_cast<long double>(corner) - rz;
  if (!(std::abs(static_cast<double>(denom)) > 1e-300))
    throw SingularMatrixError("bordered solve: degenerate border");
  double xi = static_cast<double>((static_cast<long double>(rhs_tail) - ry) / denom);
  std::vector<double> x(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = y[i] - xi * z[i];
  return {std::move(x), xi};
}

std::vector<double> banded_solve(const BandedSystem& sys) {
  const auto n = static_cast<std::size_t>(sys.A.size());
  if (sys.rhs.size() != n)
    throw std::invalid_argument("banded_solve: rhs size mismatch");
  if (sys.has_border && (sys.border_col.size() != n || sys.border_row.size() != n))
    throw std::invalid_argument("banded_solve: border size mismatch");
  BandLU lu(sys.A);
  if (!sys.has_border) return lu.solve(sys.rhs);
  auto [x, xi] = bordered_solve(lu, sys.rhs, sys.border_col, sys.border_row,
                                sys.corner, sys.rhs_tail);
  x.push_back(xi);
  return x;
}

}  // namespace beamfold
