#include "dcv/leibniz.hpp"

#include <algorithm>
#include <cmath>

namespace dcv::leibniz {

namespace {

void require_real_scalar_pair(const Path& f, const Path& g) {
  if (f.dim() != 1 || g.dim() != 1) throw ConfigError("product rule is checked on scalar paths");
  if (!(f.grid() == g.grid())) throw ConfigError("f and g must share a grid");
  for (int k = 0; k < f.size(); ++k) {
    if (f[k](0).imag() != 0.0 || g[k](0).imag() != 0.0) {
      throw ConfigError("product rule is checked on real-valued paths");
    }
  }
}

Path pointwise_product(const Path& f, const Path& g) {
  Path out(f.grid(), 1);
  for (int k = 0; k < f.size(); ++k) out[k](0) = f[k](0) * g[k](0);
  return out;
}

double product_scale(const Path& f, const Path& g) {
  double scale = 1.0;
  for (int k = 0; k < f.size(); ++k) scale = std::max(scale, std::abs(f[k](0)) * std::abs(g[k](0)));
  return scale;
}

LeibnizCheck check_against(cplx r, cplx s, const Path& f, const Path& g,
                           const std::vector<cplx>& rhs, LeibnizCoefficients coeffs) {
  const Stencil w = two_point(r, s, f.grid().step());
  const Path lhs = apply(w, pointwise_product(f, g));
  LeibnizCheck out;
  out.coefficients = coeffs;
  out.scale = product_scale(f, g);
  const auto nodes = interior_nodes(f.grid());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out.residual = std::max(out.residual, std::abs(lhs[nodes[i]](0) - rhs[i]));
  }
  return out;
}

}  // namespace

cplx LeibnizCoefficients::det() const {
  const cplx root = r * sp - s * rp;
  return -(root * root * root * root);
}

LeibnizCoefficients coefficients(cplx r, cplx s, cplx rp, cplx sp, double eps) {
  const cplx root = r * sp - s * rp;
  if (std::abs(root) <= 1e-14 * std::max({1.0, std::abs(r * sp), std::abs(s * rp)})) {
    throw ConfigError("product-rule system is singular: r sp = s rp");
  }
  const cplx delta = root * root;
  LeibnizCoefficients c;
  c.r = r;
  c.s = s;
  c.rp = rp;
  c.sp = sp;
  c.eps = eps;
  c.d1 = eps * (r * sp * sp - s * rp * rp) / delta;
  c.d2 = eps * r * s * (rp - sp) / delta;
  c.d3 = c.d2;
  c.d4 = eps * r * s * (s - r) / delta;
  return c;
}

Eigen::Matrix4cd system_matrix(cplx r, cplx s, cplx rp, cplx sp) {
  Eigen::Matrix4cd m;
  m << r * r, r * rp, r * rp, rp * rp,
       r * s, s * rp, r * sp, rp * sp,
       r * s, r * sp, s * rp, rp * sp,
       s * s, s * sp, s * sp, sp * sp;
  return m;
}

Eigen::Vector4cd system_rhs(cplx r, cplx s, double eps) {
  return {r * eps, 0.0, 0.0, -s * eps};
}

std::vector<int> interior_nodes(const Grid& grid) {
  std::vector<int> nodes;
  for (int k = 1; k < grid.intervals(); ++k) nodes.push_back(k);
  return nodes;
}

std::vector<cplx> product_rule_rhs(const LeibnizCoefficients& c, const Path& f, const Path& g) {
  const double eps = f.grid().step();
  const Stencil w = two_point(c.r, c.s, eps);
  const Stencil wt = two_point(c.rp, c.sp, eps);
  const Path wf = apply(w, f), wg = apply(w, g), wtf = apply(wt, f), wtg = apply(wt, g);
  std::vector<cplx> rhs;
  for (int k : interior_nodes(f.grid())) {
    rhs.push_back(wf[k](0) * g[k](0) + f[k](0) * wg[k](0) + c.d1 * wf[k](0) * wg[k](0) +
                  c.d2 * wtf[k](0) * wg[k](0) + c.d3 * wf[k](0) * wtg[k](0) +
                  c.d4 * wtf[k](0) * wtg[k](0));
  }
  return rhs;
}

std::vector<cplx> conjugate_product_rule_rhs(cplx r, cplx s, const Path& f, const Path& g) {
  const double eps = f.grid().step();
  const cplx rb = std::conj(r), sb = std::conj(s);
  const cplx denom = (r * sb - rb * s) * (r * sb - rb * s);
  const cplx same = eps * (r * sb * sb - rb * rb * s) / denom;
  const cplx conj_pair = -eps * r * s * (r - s) / denom;
  const cplx mixed = eps * r * s * (rb - sb) / denom;

  const Stencil w = two_point(r, s, eps);
  const Stencil wb = w.conjugate();
  const Path wf = apply(w, f), wg = apply(w, g), wbf = apply(wb, f), wbg = apply(wb, g);
  std::vector<cplx> rhs;
  for (int k : interior_nodes(f.grid())) {
    rhs.push_back(f[k](0) * wg[k](0) + g[k](0) * wf[k](0) + same * wf[k](0) * wg[k](0) +
                  conj_pair * wbf[k](0) * wbg[k](0) +
                  mixed * (wf[k](0) * wbg[k](0) + wbf[k](0) * wg[k](0)));
  }
  return rhs;
}

LeibnizCheck leibniz_residual(cplx r, cplx s, const Path& f, const Path& g) {
  require_real_scalar_pair(f, g);
  if (r == cplx{} || s == cplx{}) throw ConfigError("r and s must be nonzero");
  const cplx ratio = s / r;
  if (std::abs(ratio.imag()) <= 1e-12 * std::abs(ratio)) {
    throw ConfigError("conjugate product rule needs s/r outside the real line");
  }
  const auto coeffs = coefficients(r, s, std::conj(r), std::conj(s), f.grid().step());
  return check_against(r, s, f, g, conjugate_product_rule_rhs(r, s, f, g), coeffs);
}

LeibnizCheck leibniz_residual(cplx r, cplx s, cplx rp, cplx sp, const Path& f, const Path& g) {
  require_real_scalar_pair(f, g);
  const auto coeffs = coefficients(r, s, rp, sp, f.grid().step());
  return check_against(r, s, f, g, product_rule_rhs(coeffs, f, g), coeffs);
}

}  // namespace dcv::leibniz
