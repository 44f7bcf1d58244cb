#pragma once

#include <vector>

#include "dcv/core.hpp"
#include "dcv/stencil_ops.hpp"

namespace dcv::leibniz {

/// Coefficients of the product rule
///   W(fg) = W(f)g + fW(g) + d1 W(f)W(g) + d2 W~(f)W(g) + d3 W(f)W~(g) + d4 W~(f)W~(g)
/// with W = Box^[r,s] and W~ = Box^[rp,sp].
struct LeibnizCoefficients {
  cplx d1, d2, d3, d4;
  cplx r, s, rp, sp;
  double eps = 0.0;

  /// Closed form of the 4x4 system determinant: -(r sp - s rp)^4.
  cplx det() const;
};

/// Throws ConfigError when r sp = s rp.
LeibnizCoefficients coefficients(cplx r, cplx s, cplx rp, cplx sp, double eps);

/// Matrix and right-hand side of the linear system the d coefficients solve.
Eigen::Matrix4cd system_matrix(cplx r, cplx s, cplx rp, cplx sp);
Eigen::Vector4cd system_rhs(cplx r, cplx s, double eps);

struct LeibnizCheck {
  double residual = 0.0;  ///< max |LHS - RHS| over fully interior nodes
  double scale = 1.0;     ///< max(1, max_k |f_k| |g_k|)
  LeibnizCoefficients coefficients;
};

/// Nodes where every window of a two-point operator equals 1: k = 1..M-1.
std::vector<int> interior_nodes(const Grid& grid);

/// Right-hand side of the general product rule, at interior nodes.
std::vector<cplx> product_rule_rhs(const LeibnizCoefficients& c, const Path& f, const Path& g);

/// Right-hand side written with the conjugate operator Box^[conj r, conj s]
/// and the explicit conjugate-pair coefficients, at interior nodes.
std::vector<cplx> conjugate_product_rule_rhs(cplx r, cplx s, const Path& f, const Path& g);

/// Product-rule residual with the conjugate partner operator. f and g must be
/// real scalar paths on the same grid; s/r must not be real.
LeibnizCheck leibniz_residual(cplx r, cplx s, const Path& f, const Path& g);

/// Product-rule residual with an explicit partner operator Box^[rp,sp].
LeibnizCheck leibniz_residual(cplx r, cplx s, cplx rp, cplx sp, const Path& f, const Path& g);

}  // namespace dcv::leibniz
