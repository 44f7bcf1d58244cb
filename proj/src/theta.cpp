#include "dcv/theta.hpp"

#include <cmath>

namespace dcv {

ThetaBuilder::ThetaBuilder(const QuadraticLagrangian& L, const Stencil& s, const Grid& grid,
                           BoundaryClosure closure)
    : grid_(grid), stencil_(s), closure_(closure), n_(s.half_width()), dim_(L.dim()) {
  if (std::abs(s.step() - grid.step()) > 1e-12 * grid.step()) {
    throw StepMismatch("stencil step does not match grid step");
  }
  const int m = grid.intervals();
  if (closure == BoundaryClosure::Extrapolated && m < 2 * n_ + 1) {
    throw ConfigError("extrapolated closure needs at least 2N+1 intervals");
  }
  // P and R are read at t_k -+ j eps with |j| <= N; J1 likewise through Box_-eps.
  const bool ghosts = closure == BoundaryClosure::Extrapolated;
  const RMat zero_m = RMat::Zero(dim_, dim_);
  const RVec zero_v = RVec::Zero(dim_);
  for (int k = -n_; k <= m + n_; ++k) {
    const bool inside = k >= 0 && k <= m;
    const double t = grid.node(k);
    p_.push_back(inside || ghosts ? L.P(t) : zero_m);
    r_.push_back(inside || ghosts ? L.R(t) : zero_m);
    j1_.push_back(inside || ghosts ? L.J1(t) : zero_v);
  }
  for (int k = 0; k <= m; ++k) {
    q_.push_back(L.Q(grid.node(k)));
    j2_.push_back(L.J2(grid.node(k)));
  }
}

ThetaRow ThetaBuilder::row(int k) const {
  const bool windowed = closure_ == BoundaryClosure::Windowed;
  auto open = [&](int l) { return !windowed || window(grid_, l, k) == 1; };
  const auto c = [&](int l) { return stencil_.coeff(l); };

  ThetaRow row;
  row.reach = 2 * n_;
  row.blocks.assign(static_cast<std::size_t>(4 * n_ + 1), CMat::Zero(dim_, dim_));
  auto block = [&](int l) -> CMat& { return row.blocks[static_cast<std::size_t>(l + 2 * n_)]; };

  // sum_{j,l} c_{l+j} c_j chi_j chi_{-l} P(t - j eps) x(t + l eps)
  for (int j = -n_; j <= n_; ++j) {
    if (!open(j)) continue;
    for (int l = -2 * n_; l <= 2 * n_; ++l) {
      if (std::abs(l + j) > n_ || !open(-l)) continue;
      block(l) += (c(l + j) * c(j)) * p_at(k - j).cast<cplx>();
    }
  }
  block(0) += q_[static_cast<std::size_t>(k)].cast<cplx>();
  // sum_l chi_{-l} (c_l R(t) - c_{-l} R(t + l eps)) x(t + l eps)
  for (int l = -n_; l <= n_; ++l) {
    if (!open(-l)) continue;
    block(l) += c(l) * r_at(k).cast<cplx>() - c(-l) * r_at(k + l).cast<cplx>();
  }
  row.source = j2_[static_cast<std::size_t>(k)].cast<cplx>();
  for (int l = -n_; l <= n_; ++l) {
    if (!open(l)) continue;
    row.source += c(l) * j1_at(k - l).cast<cplx>();
  }
  return row;
}

std::vector<std::pair<int, double>> ThetaBuilder::ghost_weights(int m) const {
  const int degree = 2 * n_ + 1;
  const int first = m < 0 ? 0 : grid_.intervals() - degree;
  std::vector<std::pair<int, double>> weights;
  for (int i = first; i <= first + degree; ++i) {
    double w = 1.0;
    for (int j = first; j <= first + degree; ++j) {
      if (j != i) w *= static_cast<double>(m - j) / static_cast<double>(i - j);
    }
    weights.emplace_back(i, w);
  }
  return weights;
}

Path ThetaBuilder::residual(const Path& x) const {
  if (!(x.grid() == grid_)) throw ConfigError("path grid differs from the residual grid");
  if (x.dim() != dim_) throw ConfigError("path and lagrangian dimensions differ");
  const int m = grid_.intervals();
  Path out(grid_, dim_);
  for (int k = 0; k <= m; ++k) {
    const ThetaRow r = row(k);
    CVec acc = r.source;
    for (int l = -r.reach; l <= r.reach; ++l) {
      const int node = k + l;
      if (node >= 0 && node <= m) {
        acc += r.block(l) * x[node];
      } else if (closure_ == BoundaryClosure::Extrapolated) {
        for (const auto& [i, w] : ghost_weights(node)) acc += w * (r.block(l) * x[i]);
      }
    }
    out[k] = std::move(acc);
  }
  return out;
}

}  // namespace dcv
