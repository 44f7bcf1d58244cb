#include "dcv/del_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace dcv {

namespace {

void check_boundary(const CVec& v, int dim, const char* name) {
  if (v.size() != dim) throw ConfigError(std::string(name) + " has the wrong dimension");
}

}  // namespace

BandedSystem assemble_system(const QuadraticLagrangian& L, const Stencil& s, const Grid& grid,
                             const CVec& alpha, const CVec& beta, BoundaryClosure closure) {
  const int d = L.dim();
  check_boundary(alpha, d, "alpha");
  check_boundary(beta, d, "beta");
  const int m = grid.intervals();
  if (m < 2) throw ConfigError("the grid needs at least one interior node");

  const ThetaBuilder theta(L, s, grid, closure);
  const int n = s.half_width();
  const int band = (2 * n + 1) * d - 1;
  const int unknowns = (m - 1) * d;
  BandedSystem sys{grid, d, BandMatrix(unknowns, band, band), std::vector<cplx>(unknowns), closure};

  for (int k = 1; k < m; ++k) {
    const ThetaRow row = theta.row(k);
    const int r0 = (k - 1) * d;
    CVec rhs = -row.source;
    auto scatter = [&](int node, const CMat& blk) {
      if (node == 0) {
        rhs -= blk * alpha;
      } else if (node == m) {
        rhs -= blk * beta;
      } else {
        const int c0 = (node - 1) * d;
        for (int i = 0; i < d; ++i) {
          for (int j = 0; j < d; ++j) sys.matrix.at(r0 + i, c0 + j) += blk(i, j);
        }
      }
    };
    for (int l = -row.reach; l <= row.reach; ++l) {
      const CMat& blk = row.block(l);
      if (blk.isZero(0.0)) continue;
      const int node = k + l;
      if (node >= 0 && node <= m) {
        scatter(node, blk);
      } else if (closure == BoundaryClosure::Extrapolated) {
        for (const auto& [i, w] : theta.ghost_weights(node)) scatter(i, w * blk);
      }
    }
    for (int i = 0; i < d; ++i) sys.rhs[static_cast<std::size_t>(r0 + i)] = rhs(i);
  }
  return sys;
}

BvpSolution solve_bvp(const QuadraticLagrangian& L, const Stencil& s, const Grid& grid,
                      const CVec& alpha, const CVec& beta, BoundaryClosure closure) {
  const int n = s.half_width();
  if (4 * n * grid.step() > grid.length() * (1.0 + 1e-12)) {
    throw ConfigError("the interval must hold at least 4N steps");
  }
  const BandedSystem sys = assemble_system(L, s, grid, alpha, beta, closure);
  const BandLU lu(sys.matrix);
  const double cond = lu.condition_estimate();
  if (lu.singular() || !(cond <= kSingularCondition)) {
    throw SingularSystem("the discrete Euler-Lagrange system is singular", cond);
  }
  const std::vector<cplx> u = lu.solve(sys.rhs);

  const std::vector<cplx> au = sys.matrix.multiply(u);
  double residual = 0.0, u_max = 0.0, rhs_max = 0.0, row_max = 0.0;
  for (int i = 0; i < sys.unknowns(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    residual = std::max(residual, std::abs(au[idx] - sys.rhs[idx]));
    u_max = std::max(u_max, std::abs(u[idx]));
    rhs_max = std::max(rhs_max, std::abs(sys.rhs[idx]));
    double row_sum = 0.0;
    for (int j = std::max(0, i - sys.matrix.lower()); j <= std::min(sys.unknowns() - 1, i + sys.matrix.upper()); ++j) {
      row_sum += std::abs(sys.matrix(i, j));
    }
    row_max = std::max(row_max, row_sum);
  }
  const double scale = std::max({1.0, row_max * u_max, rhs_max});
  if (!(residual <= 1e-9 * scale)) {
    throw NumericalError("post-solve residual " + std::to_string(residual) + " exceeds tolerance");
  }

  const int d = L.dim();
  const int m = grid.intervals();
  Path x(grid, d);
  x[0] = alpha;
  x[m] = beta;
  for (int k = 1; k < m; ++k) {
    CVec v(d);
    for (int j = 0; j < d; ++j) v(j) = u[static_cast<std::size_t>((k - 1) * d + j)];
    x[k] = std::move(v);
  }
  return BvpSolution{std::move(x), cond, residual};
}

cplx CharPolynomial::eval_quartic(cplx lambda) const {
  cplx acc{};
  for (const cplx& c : quartic) acc = acc * lambda + c;
  return acc;
}

cplx CharPolynomial::eval_reduced(cplx mu) const {
  return (reduced[0] * mu + reduced[1]) * mu + reduced[2];
}

CharPolynomial oscillator_char_poly(const Stencil& s, double p, double q) {
  if (s.half_width() != 1) throw ConfigError("the oscillator polynomial needs N = 1");
  if (p == 0.0) throw ConfigError("p must be nonzero");
  CharPolynomial cp;
  cp.p = p;
  cp.q = q;
  cp.eps = s.step();
  cp.gamma_m1 = s.gamma(-1);
  cp.gamma_0 = s.gamma(0);
  cp.gamma_p1 = s.gamma(1);
  const cplx g1 = cp.gamma_p1, g0 = cp.gamma_0, gm = cp.gamma_m1;
  const double shift = q / p * cp.eps * cp.eps;
  const cplx outer = g1 * gm;
  const cplx inner = g0 * (g1 + gm);
  const cplx middle = gm * gm + g0 * g0 + g1 * g1 + shift;
  cp.quartic = {outer, inner, middle, inner, outer};
  cp.reduced = {outer, inner, middle - 2.0 * outer};
  return cp;
}

std::vector<cplx> polynomial_roots(std::vector<cplx> coeffs) {
  double top = 0.0;
  for (const cplx& c : coeffs) top = std::max(top, std::abs(c));
  if (top == 0.0) throw NumericalError("the zero polynomial has no roots");
  const double cut = 1e-14 * top;
  auto first = std::find_if(coeffs.begin(), coeffs.end(), [&](cplx c) { return std::abs(c) > cut; });
  coeffs.erase(coeffs.begin(), first);
  std::vector<cplx> roots;
  while (coeffs.size() > 1 && std::abs(coeffs.back()) <= cut) {
    coeffs.pop_back();
    roots.emplace_back(0.0, 0.0);
  }
  const int deg = static_cast<int>(coeffs.size()) - 1;
  if (deg <= 0) return roots;
  CMat companion = CMat::Zero(deg, deg);
  for (int j = 0; j < deg; ++j) companion(0, j) = -coeffs[static_cast<std::size_t>(j + 1)] / coeffs[0];
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<CMat> es(companion, false);
  if (es.info() != Eigen::Success) throw NumericalError("companion eigenvalues did not converge");
  for (int i = 0; i < deg; ++i) roots.push_back(es.eigenvalues()(i));
  return roots;
}

RootModuli unit_modulus_roots(const CharPolynomial& cp, double tol) {
  RootModuli out;
  double scale = 0.0;
  for (const cplx& c : cp.quartic) scale = std::max(scale, std::abs(c));
  std::vector<cplx> roots;
  if (std::abs(cp.reduced[0]) > 1e-14 * std::max(scale, 1.0)) {
    const cplx a = cp.reduced[0], b = cp.reduced[1], c = cp.reduced[2];
    const cplx disc = std::sqrt(b * b - 4.0 * a * c);
    // Pick the numerically stable pair of roots.
    const cplx qq = -0.5 * (b + (std::real(std::conj(b) * disc) >= 0.0 ? disc : -disc));
    std::array<cplx, 2> mus;
    if (qq == cplx{}) {
      mus = {cplx{}, cplx{}};
    } else {
      mus = {qq / a, c / qq};
    }
    for (const cplx& mu : mus) {
      const cplx root = std::sqrt(mu * mu - 4.0);
      const cplx l1 = 0.5 * (mu + root), l2 = 0.5 * (mu - root);
      // l1 l2 = 1; take the larger one directly and invert it.
      const cplx big = std::abs(l1) >= std::abs(l2) ? l1 : l2;
      roots.push_back(big);
      roots.push_back(1.0 / big);
    }
  } else {
    out.degenerate = true;
    roots = polynomial_roots({cp.quartic.begin(), cp.quartic.end()});
    const double inf = std::numeric_limits<double>::infinity();
    while (roots.size() < 4) roots.emplace_back(inf, 0.0);
  }
  std::sort(roots.begin(), roots.end(), [](cplx x, cplx y) { return std::abs(x) < std::abs(y); });
  out.all_unit = true;
  for (std::size_t i = 0; i < 4; ++i) {
    out.roots[i] = roots[i];
    out.moduli[i] = std::isinf(roots[i].real()) ? roots[i].real() : std::abs(roots[i]);
    if (!(std::abs(out.moduli[i] - 1.0) <= tol)) out.all_unit = false;
  }
  return out;
}

bool general_oscillation_test(cplx gamma_m1, cplx gamma_0, cplx gamma_p1, double tol) {
  const cplx a = gamma_p1 * gamma_m1;
  const cplx b = gamma_0 * (gamma_p1 + gamma_m1);
  const cplx c = gamma_0 * gamma_0 + gamma_p1 * gamma_p1 + gamma_m1 * gamma_m1 - 2.0 * a;
  const double scale = std::max({1.0, std::abs(a), std::abs(b), std::abs(c)});
  const double t = tol * scale;
  if (std::abs(a.imag()) > t || std::abs(b.imag()) > t || std::abs(c.imag()) > t) return false;
  const double al = a.real(), be = b.real(), ga = c.real();
  const double sgn = al > 0.0 ? 1.0 : (al < 0.0 ? -1.0 : 0.0);
  return 4.0 * std::abs(al) - std::abs(be) >= -t && 4.0 * std::abs(al) - std::abs(ga) >= -t &&
         be * be - 4.0 * al * ga >= -t * scale &&
         16.0 * std::abs(al) + 4.0 * ga * sgn - 8.0 * std::abs(be) >= -t;
}

}  // namespace dcv
