#include <doctest.h>

#include <cmath>
#include <random>

#include "dcv/quad_lagrangian.hpp"
#include "dcv/theta.hpp"
#include "oracles.hpp"

using namespace dcv;
using doctest::Approx;

namespace {

CVec vec1(cplx v) { return CVec::Constant(1, v); }

double theta_scale(const QuadraticLagrangian& L, const Stencil& s, const Path& x) {
  double csum = 0.0;
  for (int l = -s.half_width(); l <= s.half_width(); ++l) csum += std::abs(s.coeff(l));
  double coef = 1.0;
  for (int k = 0; k <= x.grid().intervals(); ++k) {
    const double t = x.grid().node(k);
    coef = std::max({coef, L.P(t).cwiseAbs().maxCoeff(), L.Q(t).cwiseAbs().maxCoeff(),
                     L.R(t).cwiseAbs().maxCoeff(), L.J1(t).cwiseAbs().maxCoeff(), L.J2(t).cwiseAbs().maxCoeff()});
  }
  return std::max(1.0, (csum * csum + csum + 1.0) * coef * std::max(1.0, x.sup_norm()) * x.dim());
}

}  // namespace

TEST_CASE("evaluate examples") {
  const auto L = lagrangian_preset("harmonic", 1.0, -1.0);
  CHECK(std::abs(evaluate(L, 0.0, vec1(1.0), vec1(0.0)) - (-0.5)) < 1e-15);
  const double w = 1.7, t = 0.4;
  const auto H = lagrangian_preset("harmonic", 1.0, -w * w);
  const cplx val = evaluate(H, t, vec1(std::sin(w * t)), vec1(w * std::cos(w * t)));
  CHECK(std::abs(val - 0.5 * w * w * (std::cos(w * t) * std::cos(w * t) - std::sin(w * t) * std::sin(w * t))) < 1e-13);
  const auto L2 = lagrangian_preset("lq2d");
  CVec x(2);
  x << 0.3, -1.2;
  // x'Rx vanishes, so only the P and Q halves remain.
  CHECK(std::abs(evaluate(L2, 0.0, x, x) - x.squaredNorm()) < 1e-14);
}

TEST_CASE("symmetry checks") {
  RMat R(2, 2);
  R << 0.0, 1.0, 1.0, 0.0;
  CHECK_THROWS_AS(QuadraticLagrangian::constant(RMat::Identity(2, 2), RMat::Identity(2, 2), R, RVec::Zero(2),
                                                RVec::Zero(2)),
                  ConfigError);
  RMat P(2, 2);
  P << 1.0, 0.5, 0.0, 1.0;
  CHECK_THROWS_AS(QuadraticLagrangian::constant(P, RMat::Identity(2, 2), RMat::Zero(2, 2), RVec::Zero(2),
                                                RVec::Zero(2)),
                  ConfigError);
  QuadraticCoefficients c;
  c.dim = 1;
  c.P = [](double t) { return RMat::Constant(1, 1, 1.0 + t); };
  c.Q = c.P;
  c.R = [](double t) { return RMat::Constant(1, 1, t); };  // skew only at t = 0
  c.J1 = [](double) { return RVec::Zero(1).eval(); };
  c.J2 = c.J1;
  c.J3 = [](double) { return 0.0; };
  const QuadraticLagrangian L(c);
  CHECK_NOTHROW(L.R(0.0));
  CHECK_THROWS_AS(L.R(0.5), ConfigError);
  CHECK_FALSE(L.has_derivatives());
  CHECK_THROWS_AS(L.P_dot(0.0), ConfigError);
}

TEST_CASE("presets and JSON specs") {
  CHECK(lagrangian_preset("lq2d").dim() == 2);
  CHECK_THROWS_AS(lagrangian_preset("quartic"), ConfigError);
  const auto L = parse_lagrangian(R"({"P": [[2]], "Q": [[-3]], "J2": [0.5], "J3": 1.5})");
  CHECK(L.P(0.3)(0, 0) == 2.0);
  CHECK(L.Q(0.3)(0, 0) == -3.0);
  CHECK(L.R(0.3)(0, 0) == 0.0);
  CHECK(L.J2(0.0)(0) == 0.5);
  CHECK(L.J3(0.0) == 1.5);
  CHECK(L.has_derivatives());
  CHECK_THROWS_AS(parse_lagrangian(R"({"Q": [[1]]})"), ConfigError);
  CHECK_THROWS_AS(parse_lagrangian(R"({"P": [[1, 0]]})"), ConfigError);
}

TEST_CASE("classical residual examples") {
  const double w = 1.3;
  const auto H = lagrangian_preset("harmonic", 1.0, -w * w);
  const VectorFn x = [w](double t) { return RVec::Constant(1, std::sin(w * t)); };
  const VectorFn xd = [w](double t) { return RVec::Constant(1, w * std::cos(w * t)); };
  const VectorFn xdd = [w](double t) { return RVec::Constant(1, -w * w * std::sin(w * t)); };
  for (double t : {0.0, 0.3, 1.7}) CHECK(std::abs(cel_residual(H, x, xd, xdd, t)(0)) < 1e-14);

  const auto L2 = lagrangian_preset("lq2d");
  const VectorFn y = [](double t) { return RVec((RVec(2) << t, 0.0).finished()); };
  const VectorFn yd = [](double) { return RVec((RVec(2) << 1.0, 0.0).finished()); };
  const VectorFn ydd = [](double) { return RVec::Zero(2).eval(); };
  const RVec r = cel_residual(L2, y, yd, ydd, 0.7);
  CHECK(r(0) == Approx(0.7));
  CHECK(r(1) == Approx(-2.0));
  const VectorFn zero = [](double) { return RVec::Zero(2).eval(); };
  CHECK(cel_residual(L2, zero, zero, zero, 0.2).norm() == 0.0);
}

TEST_CASE("Theta agrees with the composition route") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + trial % 3, n = 1 + trial % 2;
    const int m = 4 * n + (trial * 7) % (64 - 4 * n + 1);
    const Grid g(-0.3, 1.2, m);
    const auto L = oracle::random_lagrangian(rng, d);
    const Stencil s = oracle::random_stencil(rng, n, g.step());
    const Path x = oracle::random_path(rng, g, d, true);
    const Path theta = del_residual_quadratic(L, s, x);
    const Path comp = oracle::theta_by_composition(L, s, x);
    CHECK(oracle::max_abs_diff(theta, comp) <= 1e-12 * theta_scale(L, s, x));
  }
}

TEST_CASE("Theta examples") {
  const Grid g(0.0, 1.0, 20);
  const auto H = lagrangian_preset("harmonic", 1.0, -1.0);
  const Stencil sym = named_stencil("symmetric", g.step());
  CHECK(del_residual_quadratic(H, sym, Path(g, 1)).sup_norm() == 0.0);
  const Path lin = Path::scalar(g, [](double t) { return cplx(t); });
  const Path th = del_residual_quadratic(H, sym, lin);
  for (int k = 0; k <= 20; ++k) {
    if (g.in_safety_interval(k, 1)) CHECK(std::abs(th[k](0) + g.node(k)) < 1e-12);
  }
}

TEST_CASE("general route matches the quadratic route") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 3, n = 1 + trial % 2;
    const Grid g(0.0, 1.0, 16 + trial);
    const auto L = oracle::random_lagrangian(rng, d);
    const Stencil s = oracle::random_stencil(rng, n, g.step());
    const Path x = oracle::random_path(rng, g, d, true);
    const Path quad = del_residual_quadratic(L, s, x);
    const Path gen = del_residual_general(as_general(L), s, x);
    CHECK(oracle::max_abs_diff(quad, gen) <= 1e-10 * theta_scale(L, s, x));
  }
}

TEST_CASE("general route: lagrangian independent of x and v") {
  GeneralLagrangian L;
  L.dim = 2;
  L.value = [](double t, const CVec&, const CVec&) { return cplx(std::cos(t)); };
  L.grad_x = [](double, const CVec&, const CVec&) { return CVec(CVec::Zero(2)); };
  L.grad_v = L.grad_x;
  std::mt19937_64 rng(107);
  const Grid g(0.0, 1.0, 12);
  const Path x = oracle::random_path(rng, g, 2);
  CHECK(del_residual_general(L, named_stencil("cresson", g.step()), x).sup_norm() == 0.0);
}

TEST_CASE("free particle: general residual on a line vanishes inside the safety interval") {
  const auto L = as_general(lagrangian_preset("free"));
  for (int m : {20, 40, 80}) {
    const Grid g(0.0, 1.0, m);
    const Path x = Path::scalar(g, [](double t) { return cplx(2.0 * t - 1.0); });
    const Path r = del_residual_general(L, named_stencil("cresson", g.step()), x);
    for (int k = 0; k <= m; ++k) {
      if (g.in_safety_interval(k, 1)) CHECK(std::abs(r[k](0)) < 1e-9);
    }
  }
}

TEST_CASE("gradient check of wrapped quadratic lagrangians") {
  std::mt19937_64 rng(109);
  for (int d = 1; d <= 3; ++d) {
    const auto L = as_general(oracle::random_lagrangian(rng, d));
    CHECK(gradient_check(L, 20, 7, 1e-4) < 1e-6);
  }
  GeneralLagrangian wrong = as_general(lagrangian_preset("harmonic", 1.0, -1.0));
  wrong.grad_x = [](double, const CVec& x, const CVec&) { return CVec(2.0 * x); };
  CHECK(gradient_check(wrong, 5, 7, 1e-4) > 0.1);
}

TEST_CASE("discretized classical residual versus Theta, constant coefficients") {
  std::mt19937_64 rng(113);
  const Grid g(0.0, 1.0, 30);
  const RMat P = oracle::random_symmetric(rng, 2) + 3.0 * RMat::Identity(2, 2);
  const auto L = QuadraticLagrangian::constant(P, oracle::random_symmetric(rng, 2), oracle::random_skew(rng, 2),
                                               oracle::random_vector(rng, 2), oracle::random_vector(rng, 2));
  const Path x = oracle::random_path(rng, g, 2, true);
  // Antisymmetric stencils: Box_-eps = -Box_eps, so the two forms coincide.
  const Stencil sym = named_stencil("symmetric", g.step());
  const Path a = del_residual_quadratic(L, sym, x), b = cel_discretized_residual(L, sym, x);
  double worst = 0.0;
  for (int k = 0; k <= 30; ++k) {
    if (g.in_safety_interval(k, 1)) worst = std::max(worst, (a[k] - b[k]).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-10 * theta_scale(L, sym, x));
  // Other consistent operators: the forms differ, though both approximate the classical residual.
  const Stencil cre = named_stencil("cresson", g.step());
  const Path c = del_residual_quadratic(L, cre, x), e = cel_discretized_residual(L, cre, x);
  CHECK(oracle::max_abs_diff(c, e) > 1.0);
}

TEST_CASE("discretized classical residual: zero path and time-varying gap") {
  const auto V = lagrangian_preset("varying");
  const Grid g0(0.0, 1.0, 10);
  CHECK(cel_discretized_residual(V, named_stencil("symmetric", g0.step()), Path(g0, 1)).sup_norm() == 0.0);
  std::vector<double> gaps;
  for (int m : {40, 80, 160}) {
    const Grid g(0.0, 1.0, m);
    const Stencil s = named_stencil("symmetric", g.step());
    const Path x = Path::scalar(g, [](double t) { return cplx(std::sin(t)); });
    const Path a = del_residual_quadratic(V, s, x), b = cel_discretized_residual(V, s, x);
    double gap = 0.0;
    for (int k = 0; k <= m; ++k) {
      if (g.node(k) >= 0.1 && g.node(k) <= 0.9) gap = std::max(gap, std::abs(a[k](0) - b[k](0)));
    }
    gaps.push_back(gap);
  }
  CHECK(gaps[0] > gaps[1]);
  CHECK(gaps[1] > gaps[2]);
  CHECK(gaps[2] > 0.0);
}

TEST_CASE("discrete action examples") {
  QuadraticCoefficients c;
  c.dim = 1;
  c.P = [](double) { return RMat::Ones(1, 1).eval(); };
  c.Q = [](double) { return RMat::Zero(1, 1).eval(); };
  c.R = c.Q;
  c.J1 = [](double) { return RVec::Zero(1).eval(); };
  c.J2 = c.J1;
  c.J3 = [](double) { return 2.5; };
  const QuadraticLagrangian L(c);
  const Grid g(-1.0, 3.0, 16);
  CHECK(std::abs(discrete_action(L, named_stencil("forward", g.step()), Path(g, 1)) - 2.5 * 4.0) < 1e-12);

  const auto F = lagrangian_preset("free");
  const Path lin = Path::scalar(g, [](double t) { return cplx(t); });
  // Forward difference: every node k < M sees the full window, so the sum is exact.
  CHECK(std::abs(discrete_action(F, named_stencil("forward", g.step()), lin) - 2.0) < 1e-12);
  // Symmetric difference: node 0 loses x_-1, giving v_0 = 1/2 + a / (2 eps).
  const double eps = g.step();
  const double v0 = 0.5 + g.a() / (2.0 * eps);
  const double expected = eps * (0.5 * v0 * v0 + 0.5 * (g.intervals() - 1));
  CHECK(std::abs(discrete_action(F, named_stencil("symmetric", eps), lin) - expected) < 1e-12);
}

TEST_CASE("action gradient equals eps Theta away from the right end") {
  std::mt19937_64 rng(127);
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 1 + trial % 2, n = 1 + trial % 2;
    const Grid g(0.0, 1.0, 12 + trial);
    const auto L = trial % 3 == 0 ? oracle::random_lagrangian(rng, d)
                                  : QuadraticLagrangian::constant(oracle::random_symmetric(rng, d) + 3.0 * RMat::Identity(d, d),
                                                                  oracle::random_symmetric(rng, d), oracle::random_skew(rng, d),
                                                                  oracle::random_vector(rng, d), oracle::random_vector(rng, d));
    const Stencil s = oracle::random_stencil(rng, n, g.step());
    Path x = oracle::random_path(rng, g, d, true);
    const Path theta = del_residual_quadratic(L, s, x);
    const int m = g.intervals();
    for (int node = 1; node <= m - n - 1; ++node) {
      for (int j = 0; j < d; ++j) {
        // The action is quadratic, so a unit central difference is exact.
        Path xp = x, xm = x;
        xp[node](j) += 1.0;
        xm[node](j) -= 1.0;
        const cplx grad = (discrete_action(L, s, xp) - discrete_action(L, s, xm)) / 2.0;
        CHECK(std::abs(grad - g.step() * theta[node](j)) <= 1e-10 * g.step() * theta_scale(L, s, x));
      }
    }
  }
}
