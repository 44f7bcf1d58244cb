#pragma once

// Independent reference implementations used only by the tests.

#include <cmath>
#include <random>
#include <vector>

#include "dcv/quad_lagrangian.hpp"
#include "dcv/stencil_ops.hpp"

namespace oracle {

using namespace dcv;

/// Box_eps by direct summation: a term is kept when its sample lies on the grid.
inline Path box_plus(const Stencil& s, const Path& x) {
  const int m = x.grid().intervals(), n = s.half_width();
  Path out(x.grid(), x.dim());
  for (int k = 0; k <= m; ++k) {
    CVec acc = CVec::Zero(x.dim());
    for (int l = -n; l <= n; ++l) {
      if (k + l >= 0 && k + l <= m) acc += s.coeff(l) * x[k + l];
    }
    out[k] = acc;
  }
  return out;
}

inline Path box_minus(const Stencil& s, const Path& x) {
  const int m = x.grid().intervals(), n = s.half_width();
  Path out(x.grid(), x.dim());
  for (int k = 0; k <= m; ++k) {
    CVec acc = CVec::Zero(x.dim());
    for (int l = -n; l <= n; ++l) {
      if (k - l >= 0 && k - l <= m) acc += s.coeff(l) * x[k - l];
    }
    out[k] = acc;
  }
  return out;
}

inline Path pointwise(const Path& x, const std::function<CVec(int, const CVec&)>& f) {
  Path out(x.grid(), x.dim());
  for (int k = 0; k < x.size(); ++k) out[k] = f(k, x[k]);
  return out;
}

/// Box_-eps(P Box x - R x + J1) + R Box x + Q x + J2, built from the
/// operator alone.
inline Path theta_by_composition(const QuadraticLagrangian& L, const Stencil& s, const Path& x) {
  const Grid& g = x.grid();
  const Path bx = box_plus(s, x);
  Path momentum(g, x.dim()), force(g, x.dim());
  for (int k = 0; k < x.size(); ++k) {
    const double t = g.node(k);
    const CMat P = L.P(t).cast<cplx>(), Q = L.Q(t).cast<cplx>(), R = L.R(t).cast<cplx>();
    momentum[k] = P * bx[k] - R * x[k] + L.J1(t).cast<cplx>();
    force[k] = R * bx[k] + Q * x[k] + L.J2(t).cast<cplx>();
  }
  return box_minus(s, momentum) + force;
}

inline double max_abs_diff(const Path& a, const Path& b) {
  double m = 0.0;
  for (int k = 0; k < a.size(); ++k) m = std::max(m, (a[k] - b[k]).cwiseAbs().maxCoeff());
  return m;
}

inline Stencil random_stencil(std::mt19937_64& rng, int n, double eps, bool complex = true) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> g;
  for (int i = 0; i < 2 * n + 1; ++i) g.emplace_back(u(rng), complex ? u(rng) : 0.0);
  return Stencil(g, eps);
}

/// Random stencil projected onto sum gamma = 0, 1/2 sum l (gamma_l - gamma_-l) = 1.
inline Stencil random_consistent_stencil(std::mt19937_64& rng, int n, double eps) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> g;
  for (int i = 0; i < 2 * n + 1; ++i) g.emplace_back(u(rng), u(rng));
  cplx total{}, moment{};
  for (int l = -n; l <= n; ++l) {
    total += g[l + n];
    moment += static_cast<double>(l) * g[l + n];
  }
  // Shift the l = 0 entry to kill the sum, then the outer pair to fix the moment.
  g[n] -= total;
  const cplx fix = (1.0 - moment) / (2.0 * n);
  g[2 * n] += fix;
  g[0] -= fix;
  return Stencil(g, eps);
}

inline RMat random_symmetric(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> nd;
  RMat a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = nd(rng);
  return (a + a.transpose()) / 2.0;
}

inline RMat random_skew(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> nd;
  RMat a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = nd(rng);
  return (a - a.transpose()) / 2.0;
}

inline RVec random_vector(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> nd;
  RVec v(d);
  for (int i = 0; i < d; ++i) v(i) = nd(rng);
  return v;
}

/// Time-dependent lagrangian with smooth random coefficients of dimension d.
inline QuadraticLagrangian random_lagrangian(std::mt19937_64& rng, int d) {
  const RMat P0 = random_symmetric(rng, d) + 3.0 * RMat::Identity(d, d), P1 = random_symmetric(rng, d);
  const RMat Q0 = random_symmetric(rng, d), Q1 = random_symmetric(rng, d);
  const RMat R0 = random_skew(rng, d), R1 = random_skew(rng, d);
  const RVec J10 = random_vector(rng, d), J20 = random_vector(rng, d);
  QuadraticCoefficients c;
  c.dim = d;
  c.P = [=](double t) { return RMat(P0 + std::sin(t) * P1); };
  c.Q = [=](double t) { return RMat(Q0 + std::cos(t) * Q1); };
  c.R = [=](double t) { return RMat(std::cos(t) * R0 + t * R1); };
  c.J1 = [=](double t) { return RVec(std::exp(t) * J10); };
  c.J2 = [=](double t) { return RVec(t * t * J20); };
  c.J3 = [](double t) { return std::sin(t); };
  c.P_dot = [=](double t) { return RMat(std::cos(t) * P1); };
  c.R_dot = [=](double t) { return RMat(-std::sin(t) * R0 + R1); };
  c.J1_dot = [=](double t) { return RVec(std::exp(t) * J10); };
  return QuadraticLagrangian(std::move(c));
}

inline Path random_path(std::mt19937_64& rng, const Grid& g, int d, bool complex = false) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<CVec> v;
  for (int k = 0; k <= g.intervals(); ++k) {
    CVec x(d);
    for (int i = 0; i < d; ++i) x(i) = cplx(u(rng), complex ? u(rng) : 0.0);
    v.push_back(x);
  }
  return Path(g, std::move(v));
}

}  // namespace oracle
