#include <doctest.h>

#include <random>

#include "dcv/leibniz.hpp"
#include "oracles.hpp"

using namespace dcv;
namespace lz = dcv::leibniz;

namespace {

const cplx I{0.0, 1.0};

cplx random_cplx(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return {u(rng), u(rng)};
}

}  // namespace

TEST_CASE("Cresson coefficients") {
  const double eps = 0.05;
  const cplx r = (1.0 - I) / 2.0, s = (1.0 + I) / 2.0;
  const lz::LeibnizCoefficients c = lz::coefficients(r, s, std::conj(r), std::conj(s), eps);
  CHECK(std::abs(c.d1 - I * eps / 2.0) < 1e-15);
  CHECK(std::abs(c.d2 + I * eps / 2.0) < 1e-15);
  CHECK(std::abs(c.d3 + I * eps / 2.0) < 1e-15);
  CHECK(std::abs(c.d4 + I * eps / 2.0) < 1e-15);
}

TEST_CASE("determinant of the trivial quadruple") {
  CHECK(std::abs(lz::coefficients(1.0, 0.0, 0.0, 1.0, 0.1).det() - (-1.0)) < 1e-15);
  CHECK(std::abs(lz::system_matrix(1.0, 0.0, 0.0, 1.0).determinant() - (-1.0)) < 1e-14);
}

TEST_CASE("closed form solves the linear system") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const cplx r = random_cplx(rng), s = random_cplx(rng), rp = random_cplx(rng), sp = random_cplx(rng);
    const double eps = 0.01 + 0.1 * trial / 100.0;
    const lz::LeibnizCoefficients c = lz::coefficients(r, s, rp, sp, eps);
    CHECK(c.d2 == c.d3);
    const Eigen::Matrix4cd A = lz::system_matrix(r, s, rp, sp);
    const Eigen::Vector4cd rhs = lz::system_rhs(r, s, eps);
    const Eigen::Vector4cd solved = A.fullPivLu().solve(rhs);
    const Eigen::Vector4cd closed(c.d1, c.d2, c.d3, c.d4);
    CHECK((solved - closed).norm() <= 1e-9 * std::max(1.0, closed.norm()));
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff() * closed.cwiseAbs().maxCoeff());
    CHECK((A * closed - rhs).cwiseAbs().maxCoeff() <= 1e-12 * scale);
  }
}

TEST_CASE("determinant identity") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const cplx r = random_cplx(rng), s = random_cplx(rng), rp = random_cplx(rng), sp = random_cplx(rng);
    const cplx w = r * sp - s * rp;
    const cplx det = lz::system_matrix(r, s, rp, sp).determinant();
    CHECK(std::abs(det + std::pow(w, 4)) <= 1e-9 * std::abs(std::pow(w, 4)));
  }
}

TEST_CASE("singular parameters are rejected") {
  CHECK_THROWS_AS(lz::coefficients(1.0, 2.0, 2.0, 4.0, 0.1), ConfigError);
}

TEST_CASE("product rule on random paths") {
  std::mt19937_64 rng(47);
  const Grid g(0.0, 1.0, 64);
  const std::vector<std::pair<cplx, cplx>> params{{(1.0 - I) / 2.0, (1.0 + I) / 2.0}, {1.0 + I, 1.0 - 2.0 * I}};
  for (const auto& [r, s] : params) {
    for (int trial = 0; trial < 50; ++trial) {
      const Path f = oracle::random_path(rng, g, 1), h = oracle::random_path(rng, g, 1);
      const lz::LeibnizCheck chk = lz::leibniz_residual(r, s, f, h);
      CHECK(chk.residual <= 1e-12 * chk.scale);
      const lz::LeibnizCheck gen = lz::leibniz_residual(r, s, std::conj(r), std::conj(s), f, h);
      CHECK(gen.residual <= 1e-12 * gen.scale);
    }
  }
}

TEST_CASE("general partner operator") {
  std::mt19937_64 rng(53);
  const Grid g(-1.0, 2.0, 40);
  for (int trial = 0; trial < 30; ++trial) {
    const cplx r = random_cplx(rng), s = random_cplx(rng), rp = random_cplx(rng), sp = random_cplx(rng);
    const Path f = oracle::random_path(rng, g, 1), h = oracle::random_path(rng, g, 1);
    const lz::LeibnizCheck chk = lz::leibniz_residual(r, s, rp, sp, f, h);
    const lz::LeibnizCoefficients& c = chk.coefficients;
    const double coef = std::max({1.0, std::abs(c.d1), std::abs(c.d2), std::abs(c.d4)}) *
                        std::max({std::abs(r), std::abs(s), std::abs(rp), std::abs(sp), 1.0});
    CHECK(chk.residual <= 1e-11 * chk.scale * coef * coef / g.step());
  }
}

TEST_CASE("both evaluation routes agree with the conjugate partner") {
  std::mt19937_64 rng(59);
  const Grid g(0.0, 1.0, 32);
  const cplx r{0.3, -1.1}, s{-0.4, 0.7};
  const Path f = oracle::random_path(rng, g, 1), h = oracle::random_path(rng, g, 1);
  const auto c = lz::coefficients(r, s, std::conj(r), std::conj(s), g.step());
  const std::vector<cplx> general = lz::product_rule_rhs(c, f, h);
  const std::vector<cplx> explicit_route = lz::conjugate_product_rule_rhs(r, s, f, h);
  REQUIRE(general.size() == explicit_route.size());
  for (std::size_t i = 0; i < general.size(); ++i) {
    CHECK(std::abs(general[i] - explicit_route[i]) <= 1e-12 * std::max(1.0, std::abs(general[i])) / g.step());
  }
}

TEST_CASE("zero paths give zero residual") {
  const Grid g(0.0, 1.0, 16);
  const Path z(g, 1);
  CHECK(lz::leibniz_residual((1.0 - I) / 2.0, (1.0 + I) / 2.0, z, z).residual == 0.0);
}

TEST_CASE("residual scales linearly under f -> lambda f") {
  std::mt19937_64 rng(61);
  const Grid g(0.0, 1.0, 24);
  const cplx r{1.0, 1.0}, s{1.0, -2.0};
  const Path f = oracle::random_path(rng, g, 1), h = oracle::random_path(rng, g, 1);
  const auto base = lz::leibniz_residual(r, s, f, h);
  const auto scaled = lz::leibniz_residual(r, s, f * cplx(1000.0), h);
  CHECK(scaled.residual <= 1e-12 * scaled.scale);
  CHECK(base.residual <= 1e-12 * base.scale);
}

TEST_CASE("conjugate route hypotheses") {
  const Grid g(0.0, 1.0, 16);
  std::mt19937_64 rng(67);
  const Path f = oracle::random_path(rng, g, 1), h = oracle::random_path(rng, g, 1);
  CHECK_THROWS_AS(lz::leibniz_residual(1.0, 2.0, f, h), ConfigError);
  const Path complex_f = oracle::random_path(rng, g, 1, true);
  CHECK_THROWS_AS(lz::leibniz_residual(1.0 + I, 1.0 - I * 2.0, complex_f, h), ConfigError);
  const Path two_d = oracle::random_path(rng, g, 2);
  CHECK_THROWS_AS(lz::leibniz_residual(1.0 + I, 1.0 - I * 2.0, two_d, two_d), ConfigError);
}

TEST_CASE("interior nodes exclude the endpoints") {
  const auto nodes = lz::interior_nodes(Grid(0.0, 1.0, 5));
  CHECK(nodes == std::vector<int>{1, 2, 3, 4});
}
