#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dcv/core.hpp"
#include "dcv/quad_lagrangian.hpp"
#include "dcv/stencil_ops.hpp"

namespace dcv {

/// Scalar C^2 test function with its first two derivatives.
struct SmoothFunction {
  std::string name;
  std::function<double(double)> f, df, ddf;
};

/// "sin", "poly3", "exp", "kink" (C^2 cubic spline with a kink in f'').
SmoothFunction test_function(std::string_view key);
std::vector<std::string> test_function_keys();

using StencilFamily = std::function<Stencil(double eps)>;

/// Stencil family from a named key or inline JSON (gamma fixed, step varies).
StencilFamily stencil_family(std::string_view spec);

enum class Verdict { Exact, Converging, Diverging, Stalled };

std::string to_string(Verdict v);

struct SweepOptions {
  double a = 0.0;
  double b = 1.0;
  std::vector<int> intervals;  ///< strictly increasing M values
  double delta = -1.0;         ///< interior margin; negative means (b - a) / 10
  double exact_tol = 1e-10;
};

struct SweepReport {
  std::vector<double> eps;
  std::vector<int> intervals;
  std::vector<double> errors;
  double delta = 0.0;
  double order = 0.0;  ///< NaN when it cannot be fitted
  Verdict verdict = Verdict::Stalled;
  nlohmann::json stencil;
  std::string subject;

  bool converges() const noexcept { return verdict == Verdict::Exact || verdict == Verdict::Converging; }
};

nlohmann::json to_json(const SweepReport& r);

/// Sup over nodes in [a + delta, b - delta] of |Box_eps x - x'| (Shift::Plus)
/// or |Box_-eps x + x'| (Shift::Minus).
SweepReport operator_consistency_sweep(const StencilFamily& family, const SmoothFunction& x,
                                       const SweepOptions& opt, Shift direction = Shift::Plus);

/// Sup over nodes in [a + delta, b - delta] of |Theta(x) - classical residual|,
/// with x(t) = f(t) in every component.
SweepReport del_convergence_sweep(const QuadraticLagrangian& L, const StencilFamily& family,
                                  const SmoothFunction& x, const SweepOptions& opt);

struct KernelBound {
  double sup_g = 0.0;
  double bound = 0.0;
  bool holds = false;
};

/// Taylor-remainder kernel G(s, t) of Box_eps, for a node t_k and any s:
///   Box x(t) = (Box 1) x(t) + (Box t - t Box 1) x'(t) + int G(s, t) x''(s) ds.
/// Terms with l < 0 carry the orientation sign of their integral over
/// [t + l eps, t]. At a breakpoint the one-sided value from the right is returned.
cplx kernel_value(const Stencil& s, const Grid& grid, int k, double s_point);

/// Sup of |G| over s in [a, b] and nodes t in [a + delta, b - delta] against
/// 2 max(b - a, 2|a|, 2|b|) |Box_eps 1| + N eps sum|c_l| + eps sum|l c_l|.
KernelBound kernel_bound_check(const Stencil& s, const Grid& grid, double delta);

/// Least-squares slope of log(error) against log(eps). Needs three or more
/// points with positive errors.
double estimate_order(const std::vector<double>& eps, const std::vector<double>& errors);
double estimate_order(const SweepReport& report);

Verdict classify_sweep(const std::vector<double>& errors, double order, double exact_tol);

}  // namespace dcv
