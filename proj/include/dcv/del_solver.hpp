#pragma once

#include <array>
#include <vector>

#include "dcv/banded.hpp"
#include "dcv/core.hpp"
#include "dcv/quad_lagrangian.hpp"
#include "dcv/stencil_ops.hpp"
#include "dcv/theta.hpp"

namespace dcv {

/// Theta(x) = 0 at interior nodes, written as A u = rhs for the interior
/// unknowns u = (x_1, ..., x_{M-1}); component j of node k sits at (k-1) d + j.
struct BandedSystem {
  Grid grid;
  int dim;
  BandMatrix matrix;
  std::vector<cplx> rhs;
  BoundaryClosure closure;

  int unknowns() const noexcept { return matrix.size(); }
};

BandedSystem assemble_system(const QuadraticLagrangian& L, const Stencil& s, const Grid& grid,
                             const CVec& alpha, const CVec& beta,
                             BoundaryClosure closure = BoundaryClosure::Extrapolated);

struct BvpSolution {
  Path path;
  double condition = 0.0;  ///< 1-norm condition estimate of the system
  double residual = 0.0;   ///< max |A u - rhs| after the solve
};

inline constexpr double kSingularCondition = 1e12;

/// Critical path with x_0 = alpha and x_M = beta. Requires 4 N eps <= b - a.
/// Throws SingularSystem when the condition estimate exceeds 1e12 and
/// NumericalError when the post-solve residual exceeds 1e-9 * scale.
BvpSolution solve_bvp(const QuadraticLagrangian& L, const Stencil& s, const Grid& grid,
                      const CVec& alpha, const CVec& beta,
                      BoundaryClosure closure = BoundaryClosure::Extrapolated);

/// Characteristic polynomial of the constant-coefficient oscillator recurrence,
/// normalized to the gamma form (multiplied by eps^2 / p).
struct CharPolynomial {
  std::array<cplx, 5> quartic;  ///< coefficients of lambda^4 .. lambda^0
  std::array<cplx, 3> reduced;  ///< E(mu): coefficients of mu^2, mu^1, mu^0
  double p = 1.0, q = 0.0, eps = 0.0;
  cplx gamma_m1, gamma_0, gamma_p1;

  cplx eval_quartic(cplx lambda) const;
  cplx eval_reduced(cplx mu) const;
};

CharPolynomial oscillator_char_poly(const Stencil& s, double p, double q);

struct RootModuli {
  std::array<cplx, 4> roots;     ///< infinite roots are reported as (inf, 0)
  std::array<double, 4> moduli;  ///< ascending
  bool all_unit = false;
  bool degenerate = false;       ///< gamma_1 gamma_-1 = 0, direct root finder used
};

inline constexpr double kUnitModulusTol = 1e-9;

RootModuli unit_modulus_roots(const CharPolynomial& cp, double tol = kUnitModulusTol);

/// Roots of a polynomial given highest degree first, via companion-matrix
/// eigenvalues. Leading zeros are stripped.
std::vector<cplx> polynomial_roots(std::vector<cplx> coeffs);

/// The four inequalities on (gamma_-1, gamma_0, gamma_1) together with the
/// realness of the reduced quadratic's coefficients.
bool general_oscillation_test(cplx gamma_m1, cplx gamma_0, cplx gamma_p1, double tol = 1e-12);

}  // namespace dcv
