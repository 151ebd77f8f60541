#ifndef BEAMFOLD_BANDED_HPP
#define BEAMFOLD_BANDED_HPP

#include <cstddef>
#include <vector>

#include "beamfold/errors.hpp"

namespace beamfold {

// General banded matrix with kl sub- and ku superdiagonals, row-major band
// storage with kl extra superdiagonals of fill space for pivoting.
class BandMatrix {
 public:
  BandMatrix(int n, int kl, int ku);

  int size() const { return n_; }
  int lower() const { return kl_; }
  int upper() const { return ku_; }

  // (i, j) must satisfy -kl <= j - i <= ku for writes; fill columns up to
  // ku + kl are reachable internally during factorization.
  double& at(int i, int j) { return a_[idx(i, j)]; }
  double at(int i, int j) const {
    int d = j - i;
    if (d < -kl_ || d > ku_ + kl_) return 0.0;
    return a_[idx(i, j)];
  }

  double inf_norm() const;

  // y = A x (uses only the declared band, not fill space)
  std::vector<double> multiply(const std::vector<double>& x) const;

 private:
  friend class BandLU;
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * width_ + static_cast<std::size_t>(j - i + kl_);
  }
  int n_, kl_, ku_, width_;
  std::vector<double> a_;
};

// LU factorization with partial pivoting of a BandMatrix.
// Pivots smaller than 1e-14 times the matrix scale raise SingularMatrixError.
class BandLU {
 public:
  explicit BandLU(BandMatrix A);

  void solve_in_place(std::vector<double>& b) const;
  std::vector<double> solve(std::vector<double> b) const;
  double matrix_inf_norm() const { return norm_; }

 private:
  BandMatrix a_;
  std::vector<int> piv_;
  double norm_;
};

// Pentadiagonal (or pentadiagonal-plus-border) coefficient storage with a
// right-hand side. Border width is at most 1.
struct BandedSystem {
  BandMatrix A;
  std::vector<double> rhs;

  bool has_border = false;
  std::vector<double> border_col;  // extra column c
  std::vector<double> border_row;  // extra row d^T
  double corner = 0.0;             // bottom-right entry
  double rhs_tail = 0.0;           // last rhs entry of the bordered system

  explicit BandedSystem(BandMatrix mat) : A(std::move(mat)) {}
};

// Solves the (possibly bordered) system. Bordered systems are reduced by
// block elimination of the border: two banded solves plus a scalar equation.
// Returns n values, or n+1 with the border variable appended.
std::vector<double> banded_solve(const BandedSystem& sys);

// Block elimination against an existing factorization. Returns {x, xi}.
std::pair<std::vector<double>, double> bordered_solve(
    const BandLU& lu, const std::vector<double>& rhs,
    const std::vector<double>& border_col, const std::vector<double>& border_row,
    double corner, double rhs_tail);

}  // namespace beamfold

#endif
