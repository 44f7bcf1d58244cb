#pragma once

#include <cstdint>
#include <functional>
#include <string_view>

#include <json.hpp>

#include "dcv/core.hpp"
#include "dcv/stencil_ops.hpp"

namespace dcv {

using MatrixFn = std::function<RMat(double)>;
using VectorFn = std::function<RVec(double)>;
using ScalarFn = std::function<double(double)>;

/// Time-dependent coefficients of
///   L = 1/2 v'Pv + 1/2 x'Qx + x'Rv + J1'v + J2'x + J3.
/// The derivative callables are optional; they are needed only by the
/// classical residuals.
struct QuadraticCoefficients {
  int dim = 1;
  MatrixFn P, Q, R;
  VectorFn J1, J2;
  ScalarFn J3;
  MatrixFn P_dot, R_dot;
  VectorFn J1_dot;
};

/// Quadratic lagrangian with P, Q symmetric and R skew-symmetric, checked at
/// every queried time (and at t = 0 on construction).
class QuadraticLagrangian {
 public:
  explicit QuadraticLagrangian(QuadraticCoefficients c);

  /// Constant coefficients; derivative callables are set to zero.
  static QuadraticLagrangian constant(const RMat& P, const RMat& Q, const RMat& R, const RVec& J1,
                                      const RVec& J2, double J3 = 0.0);

  int dim() const noexcept { return c_.dim; }
  RMat P(double t) const;
  RMat Q(double t) const;
  RMat R(double t) const;
  RVec J1(double t) const;
  RVec J2(double t) const;
  double J3(double t) const;

  bool has_derivatives() const noexcept;
  RMat P_dot(double t) const;
  RMat R_dot(double t) const;
  RVec J1_dot(double t) const;

 private:
  QuadraticCoefficients c_;
};

/// Presets: "harmonic" (P = p, Q = q), "free" (P = 1, Q = 0), "lq2d"
/// (P = I, Q = I, R = [[0,1],[-1,0]]), "varying" (P = 2 + sin t, Q = cos t).
QuadraticLagrangian lagrangian_preset(std::string_view key, double p = 1.0, double q = -1.0);

/// Constant-coefficient lagrangian from {"P": [[..]], "Q": .., "R": .., "J1": [..], "J2": [..], "J3": x}.
/// Missing Q, R, J1, J2, J3 default to zero.
QuadraticLagrangian lagrangian_from_json(const nlohmann::json& j);

/// Preset key or inline JSON object.
QuadraticLagrangian parse_lagrangian(std::string_view spec, double p = 1.0, double q = -1.0);

/// Lagrangian given only through callables: value and the two partial gradients.
struct GeneralLagrangian {
  int dim = 1;
  std::function<cplx(double, const CVec&, const CVec&)> value;
  std::function<CVec(double, const CVec&, const CVec&)> grad_x;
  std::function<CVec(double, const CVec&, const CVec&)> grad_v;
};

GeneralLagrangian as_general(const QuadraticLagrangian& L);

/// Max relative discrepancy between the supplied gradients and central
/// differences of the value, over random probes.
double gradient_check(const GeneralLagrangian& L, int probes, std::uint64_t seed, double h = 1e-4);

cplx evaluate(const QuadraticLagrangian& L, double t, const CVec& x, const CVec& v);

/// Classical residual -P x'' + (-P' + 2R) x' + (R' + Q) x - J1' + J2 at t.
RVec cel_residual(const QuadraticLagrangian& L, const VectorFn& x, const VectorFn& x_dot,
                  const VectorFn& x_ddot, double t);

/// Theta(x) at every node, with the characteristic windows of the operator.
Path del_residual_quadratic(const QuadraticLagrangian& L, const Stencil& s, const Path& x);

/// Classical residual with x', x'' replaced by Box x and Box(Box x).
Path cel_discretized_residual(const QuadraticLagrangian& L, const Stencil& s, const Path& x);

/// Box_-eps [dL/dv(t, x, Box x)] + dL/dx(t, x, Box x), at every node.
Path del_residual_general(const GeneralLagrangian& L, const Stencil& s, const Path& x);

/// Left rectangle rule: eps * sum_{k<M} L(t_k, x_k, (Box x)_k).
cplx discrete_action(const QuadraticLagrangian& L, const Stencil& s, const Path& x);

}  // namespace dcv
