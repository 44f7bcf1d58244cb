#pragma once

#include <span>
#include <vector>

#include "dcv/core.hpp"

namespace dcv {

/// Square complex band matrix with kl sub- and ku super-diagonals.
class BandMatrix {
 public:
  BandMatrix(int n, int kl, int ku);

  int size() const noexcept { return n_; }
  int lower() const noexcept { return kl_; }
  int upper() const noexcept { return ku_; }
  bool in_band(int i, int j) const noexcept { return j - i <= ku_ && i - j <= kl_; }

  /// Entries outside the band read as zero.
  cplx operator()(int i, int j) const;
  /// Throws ConfigError outside the band.
  cplx& at(int i, int j);

  std::vector<cplx> multiply(std::span<const cplx> x) const;
  double norm1() const;
  CMat to_dense() const;

 private:
  int n_, kl_, ku_;
  std::vector<cplx> data_;  // row-major, width kl + ku + 1
};

/// LU factorization with partial pivoting, kept in band form.
/// U carries kl extra super-diagonals of fill.
class BandLU {
 public:
  explicit BandLU(const BandMatrix& a);

  bool singular() const noexcept { return singular_; }
  std::vector<cplx> solve(std::span<const cplx> b) const;
  /// Solves A^H y = b.
  std::vector<cplx> solve_adjoint(std::span<const cplx> b) const;
  /// 1-norm condition estimate (Hager's method); infinity when singular.
  double condition_estimate() const;

 private:
  cplx& u(int i, int j) { return upper_[static_cast<std::size_t>(i) * uw_ + (j - i)]; }
  cplx u(int i, int j) const { return upper_[static_cast<std::size_t>(i) * uw_ + (j - i)]; }

  int n_, kl_, uw_;
  double norm1_;
  bool singular_ = false;
  std::vector<cplx> upper_;   // row i, columns i .. i + uw - 1
  std::vector<cplx> lower_;   // multipliers of step k, rows k+1 .. k+kl
  std::vector<int> pivots_;
};

}  // namespace dcv
