#include "dcv/quad_lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dcv/theta.hpp"

namespace dcv {

namespace {

constexpr double kSymmetryTol = 1e-12;

void check_shape(const RMat& m, int dim, const char* name) {
  if (m.rows() != dim || m.cols() != dim) {
    throw ConfigError(std::string(name) + " must be " + std::to_string(dim) + "x" + std::to_string(dim));
  }
}

void check_shape(const RVec& v, int dim, const char* name) {
  if (v.size() != dim) throw ConfigError(std::string(name) + " must have length " + std::to_string(dim));
}

double asymmetry(const RMat& m, double sign) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - sign * m.transpose()).cwiseAbs().maxCoeff() / scale;
}

RMat require_symmetric(RMat m, int dim, const char* name, double t) {
  check_shape(m, dim, name);
  if (asymmetry(m, 1.0) > kSymmetryTol) {
    throw ConfigError(std::string(name) + " is not symmetric at t = " + std::to_string(t));
  }
  return m;
}

template <typename Fn>
const Fn& require_fn(const Fn& f, const char* name) {
  if (!f) throw ConfigError(std::string("lagrangian is missing ") + name);
  return f;
}

RMat matrix_from_json(const nlohmann::json& j, const char* name) {
  const int rows = static_cast<int>(j.size());
  RMat m(rows, rows);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j.at(i).size()) != rows) throw ConfigError(std::string(name) + " must be square");
    for (int k = 0; k < rows; ++k) m(i, k) = j.at(i).at(k).get<double>();
  }
  return m;
}

RVec vector_from_json(const nlohmann::json& j) {
  RVec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
  return v;
}

CMat complexify(const RMat& m) { return m.cast<cplx>(); }

}  // namespace

QuadraticLagrangian::QuadraticLagrangian(QuadraticCoefficients c) : c_(std::move(c)) {
  if (c_.dim < 1) throw ConfigError("lagrangian dimension must be positive");
  require_fn(c_.P, "P");
  require_fn(c_.Q, "Q");
  require_fn(c_.R, "R");
  require_fn(c_.J1, "J1");
  require_fn(c_.J2, "J2");
  require_fn(c_.J3, "J3");
  (void)P(0.0);
  (void)Q(0.0);
  (void)R(0.0);
  (void)J1(0.0);
  (void)J2(0.0);
}

QuadraticLagrangian QuadraticLagrangian::constant(const RMat& P, const RMat& Q, const RMat& R,
                                                  const RVec& J1, const RVec& J2, double J3) {
  const int d = static_cast<int>(P.rows());
  QuadraticCoefficients c;
  c.dim = d;
  c.P = [P](double) { return P; };
  c.Q = [Q](double) { return Q; };
  c.R = [R](double) { return R; };
  c.J1 = [J1](double) { return J1; };
  c.J2 = [J2](double) { return J2; };
  c.J3 = [J3](double) { return J3; };
  c.P_dot = [d](double) { return RMat::Zero(d, d).eval(); };
  c.R_dot = c.P_dot;
  c.J1_dot = [d](double) { return RVec::Zero(d).eval(); };
  return QuadraticLagrangian(std::move(c));
}

RMat QuadraticLagrangian::P(double t) const { return require_symmetric(c_.P(t), c_.dim, "P", t); }
RMat QuadraticLagrangian::Q(double t) const { return require_symmetric(c_.Q(t), c_.dim, "Q", t); }

RMat QuadraticLagrangian::R(double t) const {
  RMat m = c_.R(t);
  check_shape(m, c_.dim, "R");
  if (asymmetry(m, -1.0) > kSymmetryTol) {
    throw ConfigError("R is not skew-symmetric at t = " + std::to_string(t) +
                      " (its symmetric part only adds a null lagrangian)");
  }
  return m;
}

RVec QuadraticLagrangian::J1(double t) const {
  RVec v = c_.J1(t);
  check_shape(v, c_.dim, "J1");
  return v;
}

RVec QuadraticLagrangian::J2(double t) const {
  RVec v = c_.J2(t);
  check_shape(v, c_.dim, "J2");
  return v;
}

double QuadraticLagrangian::J3(double t) const { return c_.J3(t); }

bool QuadraticLagrangian::has_derivatives() const noexcept {
  return static_cast<bool>(c_.P_dot) && static_cast<bool>(c_.R_dot) && static_cast<bool>(c_.J1_dot);
}

RMat QuadraticLagrangian::P_dot(double t) const {
  return require_symmetric(require_fn(c_.P_dot, "dP/dt")(t), c_.dim, "dP/dt", t);
}

RMat QuadraticLagrangian::R_dot(double t) const {
  RMat m = require_fn(c_.R_dot, "dR/dt")(t);
  check_shape(m, c_.dim, "dR/dt");
  return m;
}

RVec QuadraticLagrangian::J1_dot(double t) const {
  RVec v = require_fn(c_.J1_dot, "dJ1/dt")(t);
  check_shape(v, c_.dim, "dJ1/dt");
  return v;
}

QuadraticLagrangian lagrangian_preset(std::string_view key, double p, double q) {
  if (key == "harmonic") {
    return QuadraticLagrangian::constant(RMat::Constant(1, 1, p), RMat::Constant(1, 1, q),
                                         RMat::Zero(1, 1), RVec::Zero(1), RVec::Zero(1));
  }
  if (key == "free") {
    return QuadraticLagrangian::constant(RMat::Ones(1, 1), RMat::Zero(1, 1), RMat::Zero(1, 1),
                                         RVec::Zero(1), RVec::Zero(1));
  }
  if (key == "lq2d") {
    RMat r(2, 2);
    r << 0.0, 1.0, -1.0, 0.0;
    return QuadraticLagrangian::constant(RMat::Identity(2, 2), RMat::Identity(2, 2), r,
                                         RVec::Zero(2), RVec::Zero(2));
  }
  if (key == "varying") {
    QuadraticCoefficients c;
    c.dim = 1;
    c.P = [](double t) { return RMat::Constant(1, 1, 2.0 + std::sin(t)); };
    c.Q = [](double t) { return RMat::Constant(1, 1, std::cos(t)); };
    c.R = [](double) { return RMat::Zero(1, 1).eval(); };
    c.J1 = [](double) { return RVec::Zero(1).eval(); };
    c.J2 = c.J1;
    c.J3 = [](double) { return 0.0; };
    c.P_dot = [](double t) { return RMat::Constant(1, 1, std::cos(t)); };
    c.R_dot = c.R;
    c.J1_dot = c.J1;
    return QuadraticLagrangian(std::move(c));
  }
  throw ConfigError("unknown lagrangian preset '" + std::string(key) + "'");
}

QuadraticLagrangian lagrangian_from_json(const nlohmann::json& j) {
  try {
    const RMat P = matrix_from_json(j.at("P"), "P");
    const auto d = P.rows();
    const RMat Q = j.contains("Q") ? matrix_from_json(j.at("Q"), "Q") : RMat::Zero(d, d).eval();
    const RMat R = j.contains("R") ? matrix_from_json(j.at("R"), "R") : RMat::Zero(d, d).eval();
    const RVec J1 = j.contains("J1") ? vector_from_json(j.at("J1")) : RVec::Zero(d).eval();
    const RVec J2 = j.contains("J2") ? vector_from_json(j.at("J2")) : RVec::Zero(d).eval();
    return QuadraticLagrangian::constant(P, Q, R, J1, J2, j.value("J3", 0.0));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("lagrangian JSON: ") + e.what());
  }
}

QuadraticLagrangian parse_lagrangian(std::string_view spec, double p, double q) {
  const auto first = spec.find_first_not_of(" \t\n");
  if (first != std::string_view::npos && spec[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(spec);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("lagrangian JSON: ") + e.what());
    }
    return lagrangian_from_json(j);
  }
  return lagrangian_preset(spec, p, q);
}

GeneralLagrangian as_general(const QuadraticLagrangian& L) {
  GeneralLagrangian g;
  g.dim = L.dim();
  g.value = [L](double t, const CVec& x, const CVec& v) { return evaluate(L, t, x, v); };
  // dL/dx = Qx + Rv + J2,  dL/dv = Pv - Rx + J1
  g.grad_x = [L](double t, const CVec& x, const CVec& v) -> CVec {
    return complexify(L.Q(t)) * x + complexify(L.R(t)) * v + L.J2(t).cast<cplx>();
  };
  g.grad_v = [L](double t, const CVec& x, const CVec& v) -> CVec {
    return complexify(L.P(t)) * v - complexify(L.R(t)) * x + L.J1(t).cast<cplx>();
  };
  return g;
}

double gradient_check(const GeneralLagrangian& L, int probes, std::uint64_t seed, double h) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int p = 0; p < probes; ++p) {
    const double t = normal(rng);
    CVec x(L.dim), v(L.dim);
    for (int i = 0; i < L.dim; ++i) {
      x(i) = normal(rng);
      v(i) = normal(rng);
    }
    const CVec gx = L.grad_x(t, x, v), gv = L.grad_v(t, x, v);
    for (int i = 0; i < L.dim; ++i) {
      CVec xp = x, xm = x, vp = v, vm = v;
      xp(i) += h;
      xm(i) -= h;
      vp(i) += h;
      vm(i) -= h;
      const cplx fdx = (L.value(t, xp, v) - L.value(t, xm, v)) / (2.0 * h);
      const cplx fdv = (L.value(t, x, vp) - L.value(t, x, vm)) / (2.0 * h);
      worst = std::max(worst, std::abs(fdx - gx(i)) / std::max(1.0, std::abs(gx(i))));
      worst = std::max(worst, std::abs(fdv - gv(i)) / std::max(1.0, std::abs(gv(i))));
    }
  }
  return worst;
}

cplx evaluate(const QuadraticLagrangian& L, double t, const CVec& x, const CVec& v) {
  const CMat P = complexify(L.P(t)), Q = complexify(L.Q(t)), R = complexify(L.R(t));
  const CVec J1 = L.J1(t).cast<cplx>(), J2 = L.J2(t).cast<cplx>();
  // Bilinear (transpose, not adjoint) so that complex paths stay holomorphic.
  return 0.5 * (v.transpose() * P * v)(0) + 0.5 * (x.transpose() * Q * x)(0) +
         (x.transpose() * R * v)(0) + (J1.transpose() * v)(0) + (J2.transpose() * x)(0) + L.J3(t);
}

RVec cel_residual(const QuadraticLagrangian& L, const VectorFn& x, const VectorFn& x_dot,
                  const VectorFn& x_ddot, double t) {
  if (!L.has_derivatives()) throw ConfigError("classical residual needs dP/dt, dR/dt and dJ1/dt");
  return -L.P(t) * x_ddot(t) + (-L.P_dot(t) + 2.0 * L.R(t)) * x_dot(t) + (L.R_dot(t) + L.Q(t)) * x(t) -
         L.J1_dot(t) + L.J2(t);
}

Path del_residual_quadratic(const QuadraticLagrangian& L, const Stencil& s, const Path& x) {
  if (x.dim() != L.dim()) throw ConfigError("path and lagrangian dimensions differ");
  return ThetaBuilder(L, s, x.grid(), BoundaryClosure::Windowed).residual(x);
}

Path cel_discretized_residual(const QuadraticLagrangian& L, const Stencil& s, const Path& x) {
  if (x.dim() != L.dim()) throw ConfigError("path and lagrangian dimensions differ");
  if (!L.has_derivatives()) throw ConfigError("classical residual needs dP/dt, dR/dt and dJ1/dt");
  const Path bx = apply(s, x);
  const Path bbx = apply(s, bx);
  Path out(x.grid(), x.dim());
  for (int k = 0; k < x.size(); ++k) {
    const double t = x.grid().node(k);
    out[k] = -complexify(L.P(t)) * bbx[k] + complexify(-L.P_dot(t) + 2.0 * L.R(t)) * bx[k] +
             complexify(L.R_dot(t) + L.Q(t)) * x[k] + (L.J2(t) - L.J1_dot(t)).cast<cplx>();
  }
  return out;
}

Path del_residual_general(const GeneralLagrangian& L, const Stencil& s, const Path& x) {
  if (x.dim() != L.dim) throw ConfigError("path and lagrangian dimensions differ");
  const Path v = apply(s, x);
  Path momentum(x.grid(), x.dim());
  Path force(x.grid(), x.dim());
  for (int k = 0; k < x.size(); ++k) {
    const double t = x.grid().node(k);
    momentum[k] = L.grad_v(t, x[k], v[k]);
    force[k] = L.grad_x(t, x[k], v[k]);
  }
  return apply(s, momentum, Shift::Minus) + force;
}

cplx discrete_action(const QuadraticLagrangian& L, const Stencil& s, const Path& x) {
  const Path v = apply(s, x);
  cplx sum{};
  for (int k = 0; k < x.grid().intervals(); ++k) sum += evaluate(L, x.grid().node(k), x[k], v[k]);
  return x.grid().step() * sum;
}

}  // namespace dcv
