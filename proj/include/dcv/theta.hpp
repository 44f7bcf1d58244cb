#pragma once

#include <utility>
#include <vector>

#include "dcv/core.hpp"
#include "dcv/quad_lagrangian.hpp"
#include "dcv/stencil_ops.hpp"

namespace dcv {

/// How rows whose stencil reaches past [a,b] are closed.
///  Windowed:     the characteristic windows drop every out-of-range term.
///  Extrapolated: the full stencil is kept and each value beyond an endpoint
///                is a polynomial extrapolation (degree 2N+1) of the nearest
///                in-range nodes.
enum class BoundaryClosure { Windowed, Extrapolated };

/// Theta(x)(t_k) = sum_l blocks[l + 2N] x_{k+l} + source, l = -2N..2N.
struct ThetaRow {
  int reach = 0;  ///< 2N
  std::vector<CMat> blocks;
  CVec source;

  const CMat& block(int l) const { return blocks[static_cast<std::size_t>(l + reach)]; }
};

/// Samples the lagrangian once and produces the affine rows of Theta.
class ThetaBuilder {
 public:
  ThetaBuilder(const QuadraticLagrangian& L, const Stencil& s, const Grid& grid,
               BoundaryClosure closure = BoundaryClosure::Windowed);

  const Grid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return dim_; }
  int reach() const noexcept { return 2 * n_; }
  BoundaryClosure closure() const noexcept { return closure_; }

  ThetaRow row(int k) const;

  /// Residual of the closed rows at every node 0..M.
  Path residual(const Path& x) const;

  /// Weights expressing ghost node m (m < 0 or m > M) through in-range nodes.
  std::vector<std::pair<int, double>> ghost_weights(int m) const;

 private:
  const RMat& p_at(int k) const { return p_[static_cast<std::size_t>(k + n_)]; }
  const RMat& r_at(int k) const { return r_[static_cast<std::size_t>(k + n_)]; }
  const RVec& j1_at(int k) const { return j1_[static_cast<std::size_t>(k + n_)]; }

  Grid grid_;
  Stencil stencil_;
  BoundaryClosure closure_;
  int n_;
  int dim_;
  std::vector<RMat> p_, r_, q_;
  std::vector<RVec> j1_, j2_;
};

}  // namespace dcv
