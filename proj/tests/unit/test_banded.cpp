#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "beamfold/banded.hpp"

using namespace beamfold;

namespace {

// dense Gaussian elimination with partial pivoting, used as the oracle
std::vector<double> dense_solve(std::vector<std::vector<double>> A, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int r = k + 1; r < n; ++r)
      if (std::abs(A[r][k]) > std::abs(A[piv][k])) piv = r;
    std::swap(A[k], A[piv]);
    std::swap(b[k], b[piv]);
    for (int r = k + 1; r < n; ++r) {
      double m = A[r][k] / A[k][k];
      for (int j = k; j < n; ++j) A[r][j] -= m * A[k][j];
      b[r] -= m * b[k];
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    for (int j = k + 1; j < n; ++j) b[k] -= A[k][j] * b[j];
    b[k] /= A[k][k];
  }
  return b;
}

BandMatrix beam_matrix(int n) {
  const int m = n - 2;
  const double h = 1.0 / (n - 1);
  const double s = 1.0 / (h * h * h * h);
  BandMatrix A(m, 2, 2);
  for (int i = 0; i < m; ++i) {
    A.at(i, i) = ((i == 0 || i == m - 1) ? 7.0 : 6.0) * s;
    if (i + 1 < m) A.at(i, i + 1) = -4.0 * s;
    if (i >= 1) A.at(i, i - 1) = -4.0 * s;
    if (i + 2 < m) A.at(i, i + 2) = 1.0 * s;
    if (i >= 2) A.at(i, i - 2) = 1.0 * s;
  }
  return A;
}

}  // namespace

TEST_CASE("identity system returns the rhs") {
  const int n = 9;
  BandMatrix A(n, 2, 2);
  for (int i = 0; i < n; ++i) A.at(i, i) = 1.0;
  BandedSystem sys(A);
  sys.rhs = {1, -2, 3, -4, 5, -6, 7, -8, 9};
  auto x = banded_solve(sys);
  for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(sys.rhs[i]).epsilon(1e-15));
}

TEST_CASE("clamped beam operator with unit load reproduces x^2(1-x)^2/24") {
  const int n = 501;
  BandedSystem sys(beam_matrix(n));
  sys.rhs.assign(n - 2, 1.0);
  auto x = banded_solve(sys);
  const double h = 1.0 / (n - 1);
  double worst = 0.0;
  for (int i = 0; i < n - 2; ++i) {
    double xi = (i + 1) * h;
    worst = std::max(worst, std::abs(x[i] - xi * xi * (1 - xi) * (1 - xi) / 24.0));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("random diagonally dominant pentadiagonal: multiply-back residual") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const int n = 200;
  BandMatrix A(n, 2, 2);
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j) {
      if (j == i) continue;
      double v = dist(rng);
      A.at(i, j) = v;
      off += std::abs(v);
    }
    A.at(i, i) = off + 1.0 + std::abs(dist(rng));
  }
  BandedSystem sys(A);
  sys.rhs.resize(n);
  for (auto& v : sys.rhs) v = dist(rng);
  auto x = banded_solve(sys);

  auto back = A.multiply(x);
  double xnorm = 0.0, rnorm = 0.0;
  for (int i = 0; i < n; ++i) {
    xnorm = std::max(xnorm, std::abs(x[i]));
    rnorm = std::max(rnorm, std::abs(back[i] - sys.rhs[i]));
  }
  CHECK(rnorm <= 1e-10 * A.inf_norm() * std::max(xnorm, 1.0));
}

TEST_CASE("partial pivoting matches the dense oracle on a pivot-hungry matrix") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const int n = 40;
  BandMatrix A(n, 2, 2);
  std::vector<std::vector<double>> D(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j) {
      double v = dist(rng);
      if (i == j) v *= 1e-6;  // force off-diagonal pivots
      A.at(i, j) = v;
      D[i][j] = v;
    }
  std::vector<double> b(n);
  for (auto& v : b) v = dist(rng);
  BandedSystem sys(A);
  sys.rhs = b;
  auto x = banded_solve(sys);
  auto ref = dense_solve(D, b);
  for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(ref[i]).epsilon(1e-8));
}

TEST_CASE("bordered system matches a dense solve of the extended matrix") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const int n = 12;
  BandMatrix A(n, 2, 2);
  std::vector<std::vector<double>> D(n + 1, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j) {
      double v = dist(rng) + (i == j ? 6.0 : 0.0);
      A.at(i, j) = v;
      D[i][j] = v;
    }
  }
  BandedSystem sys(A);
  sys.has_border = true;
  sys.rhs.resize(n);
  sys.border_col.resize(n);
  sys.border_row.resize(n);
  for (int i = 0; i < n; ++i) {
    sys.rhs[i] = dist(rng);
    sys.border_col[i] = dist(rng);
    sys.border_row[i] = dist(rng);
    D[i][n] = sys.border_col[i];
    D[n][i] = sys.border_row[i];
  }
  sys.corner = 0.5;
  sys.rhs_tail = dist(rng);
  D[n][n] = sys.corner;
  std::vector<double> b = sys.rhs;
  b.push_back(sys.rhs_tail);
  auto x = banded_solve(sys);
  auto ref = dense_solve(D, b);
  REQUIRE(x.size() == static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) CHECK(x[i] == doctest::Approx(ref[i]).epsilon(1e-9));
}

TEST_CASE("singular matrix raises") {
  const int n = 6;
  BandMatrix A(n, 2, 2);
  for (int i = 0; i < n; ++i) A.at(i, i) = 1.0;
  A.at(3, 3) = 0.0;  // zero row within the band
  A.at(3, 2) = 0.0;
  A.at(3, 4) = 0.0;
  BandedSystem sys(A);
  sys.rhs.assign(n, 1.0);
  CHECK_THROWS_AS(banded_solve(sys), SingularMatrixError);
}
