#include "dcv/convergence_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dcv {

namespace {

std::vector<int> margin_nodes(const Grid& grid, double delta) {
  const double slack = 1e-12 * grid.length();
  std::vector<int> nodes;
  for (int k = 0; k <= grid.intervals(); ++k) {
    const double t = grid.node(k);
    if (t >= grid.a() + delta - slack && t <= grid.b() - delta + slack) nodes.push_back(k);
  }
  if (nodes.empty()) throw ConfigError("no grid node lies in [a + delta, b - delta]");
  return nodes;
}

double resolve_delta(const SweepOptions& opt) {
  if (!(opt.b > opt.a)) throw ConfigError("sweep interval must satisfy a < b");
  const double delta = opt.delta < 0.0 ? (opt.b - opt.a) / 10.0 : opt.delta;
  if (!(delta > 0.0) || 2.0 * delta >= opt.b - opt.a) throw ConfigError("delta must lie in (0, (b - a) / 2)");
  return delta;
}

void check_intervals(const std::vector<int>& ms) {
  if (ms.empty()) throw ConfigError("sweep needs at least one M");
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms[i] < 1) throw ConfigError("M must be positive");
    if (i > 0 && ms[i] <= ms[i - 1]) throw ConfigError("M values must be strictly increasing");
  }
}

template <class ErrorAt>
SweepReport run_sweep(const StencilFamily& family, const SweepOptions& opt, std::string subject,
                      ErrorAt&& error_at) {
  check_intervals(opt.intervals);
  SweepReport rep;
  rep.delta = resolve_delta(opt);
  rep.subject = std::move(subject);
  for (int m : opt.intervals) {
    const Grid grid(opt.a, opt.b, m);
    const Stencil s = family(grid.step());
    if (!(2.0 * s.half_width() * grid.step() < rep.delta)) {
      throw ConfigError("delta too small for the stencil width: need 2 N eps < delta");
    }
    if (rep.stencil.is_null()) rep.stencil = to_json(s);
    rep.eps.push_back(grid.step());
    rep.intervals.push_back(m);
    rep.errors.push_back(error_at(s, grid, margin_nodes(grid, rep.delta)));
  }
  rep.order = std::numeric_limits<double>::quiet_NaN();
  const bool all_positive = std::all_of(rep.errors.begin(), rep.errors.end(), [](double e) { return e > 0.0; });
  if (rep.errors.size() >= 3 && all_positive) rep.order = estimate_order(rep.eps, rep.errors);
  rep.verdict = classify_sweep(rep.errors, rep.order, opt.exact_tol);
  return rep;
}

// Kernel evaluated with the indicator intervals closed on the side the limit comes from.
cplx kernel_side(const Stencil& st, const Grid& grid, int k, double s, bool from_right) {
  if (s < grid.a() || s > grid.b()) return {};
  const double t = grid.node(k);
  const double eps = st.step();
  const double u = (s - t) / eps;
  const int n = st.half_width();
  cplx acc{};
  for (int l = -n; l <= n; ++l) {
    if (l == 0 || window(grid, -l, k) == 0) continue;
    const double lo = std::min(0, l), hi = std::max(0, l);
    const bool inside = from_right ? (u >= lo && u < hi) : (u > lo && u <= hi);
    if (inside) acc += (l > 0 ? 1.0 : -1.0) * (t + l * eps - s) * st.coeff(l);
  }
  return acc;
}

}  // namespace

SmoothFunction test_function(std::string_view key) {
  if (key == "sin") {
    return {"sin", [](double t) { return std::sin(t); }, [](double t) { return std::cos(t); },
            [](double t) { return -std::sin(t); }};
  }
  if (key == "poly3") {
    return {"poly3", [](double t) { return ((t - 2.0) * t + 1.0) * t + 1.0; },
            [](double t) { return (3.0 * t - 4.0) * t + 1.0; }, [](double t) { return 6.0 * t - 4.0; }};
  }
  if (key == "exp") {
    return {"exp", [](double t) { return std::exp(t); }, [](double t) { return std::exp(t); },
            [](double t) { return std::exp(t); }};
  }
  if (key == "kink") {
    auto plus = [](double t) { return std::max(t - 0.5, 0.0); };
    return {"kink", [plus](double t) { return t + std::pow(plus(t), 3); },
            [plus](double t) { return 1.0 + 3.0 * plus(t) * plus(t); },
            [plus](double t) { return 6.0 * plus(t); }};
  }
  throw ConfigError("unknown test function '" + std::string(key) + "'");
}

std::vector<std::string> test_function_keys() { return {"sin", "poly3", "exp", "kink"}; }

StencilFamily stencil_family(std::string_view spec) {
  std::string owned(spec);
  parse_stencil(owned, 1.0);
  return [owned](double eps) { return parse_stencil(owned, eps); };
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Exact: return "exact";
    case Verdict::Converging: return "converging";
    case Verdict::Diverging: return "diverging";
    case Verdict::Stalled: return "stalled";
  }
  return "stalled";
}

nlohmann::json to_json(const SweepReport& r) {
  nlohmann::json j;
  j["subject"] = r.subject;
  j["stencil"] = r.stencil;
  j["delta"] = r.delta;
  j["M"] = r.intervals;
  j["eps"] = r.eps;
  j["errors"] = r.errors;
  j["order"] = std::isnan(r.order) ? nlohmann::json(nullptr) : nlohmann::json(r.order);
  j["verdict"] = to_string(r.verdict);
  return j;
}

SweepReport operator_consistency_sweep(const StencilFamily& family, const SmoothFunction& x,
                                       const SweepOptions& opt, Shift direction) {
  const double sign = direction == Shift::Plus ? 1.0 : -1.0;
  auto error_at = [&](const Stencil& s, const Grid& grid, const std::vector<int>& nodes) {
    const Path px = Path::scalar(grid, [&](double t) { return cplx(x.f(t)); });
    const Path bx = apply(s, px, direction);
    double err = 0.0;
    for (int k : nodes) err = std::max(err, std::abs(bx[k](0) - sign * x.df(grid.node(k))));
    return err;
  };
  return run_sweep(family, opt, x.name, error_at);
}

SweepReport del_convergence_sweep(const QuadraticLagrangian& L, const StencilFamily& family,
                                  const SmoothFunction& x, const SweepOptions& opt) {
  if (!L.has_derivatives()) throw ConfigError("the classical residual needs coefficient derivatives");
  const int d = L.dim();
  const VectorFn xf = [&](double t) { return RVec::Constant(d, x.f(t)); };
  const VectorFn xd = [&](double t) { return RVec::Constant(d, x.df(t)); };
  const VectorFn xdd = [&](double t) { return RVec::Constant(d, x.ddf(t)); };
  auto error_at = [&](const Stencil& s, const Grid& grid, const std::vector<int>& nodes) {
    const Path px = Path::sample(grid, d, [&](double t) { return CVec(xf(t).cast<cplx>()); });
    const Path theta = del_residual_quadratic(L, s, px);
    double err = 0.0;
    for (int k : nodes) {
      const RVec cel = cel_residual(L, xf, xd, xdd, grid.node(k));
      err = std::max(err, (theta[k] - cel.cast<cplx>()).cwiseAbs().maxCoeff());
    }
    return err;
  };
  return run_sweep(family, opt, x.name, error_at);
}

cplx kernel_value(const Stencil& s, const Grid& grid, int k, double s_point) {
  return kernel_side(s, grid, k, s_point, true);
}

KernelBound kernel_bound_check(const Stencil& s, const Grid& grid, double delta) {
  if (std::abs(s.step() - grid.step()) > 1e-12 * grid.step()) {
    throw StepMismatch("stencil step does not match grid step");
  }
  const int n = s.half_width();
  const double eps = s.step();
  KernelBound out;
  double box_one = 0.0;
  for (int k : margin_nodes(grid, delta)) {
    const double t = grid.node(k);
    cplx b1{};
    for (int l = -n; l <= n; ++l) b1 += s.coeff(l) * static_cast<double>(window(grid, -l, k));
    box_one = std::max(box_one, std::abs(b1));
    // G(., t) is piecewise linear with breakpoints t + j eps.
    for (int j = -n; j <= n; ++j) {
      const double sp = t + j * eps;
      out.sup_g = std::max({out.sup_g, std::abs(kernel_side(s, grid, k, sp, true)),
                            std::abs(kernel_side(s, grid, k, sp, false))});
    }
  }
  double sum_c = 0.0, sum_lc = 0.0;
  for (int l = -n; l <= n; ++l) {
    sum_c += std::abs(s.coeff(l));
    sum_lc += std::abs(static_cast<double>(l) * s.coeff(l));
  }
  const double a = grid.a(), b = grid.b();
  out.bound = 2.0 * std::max({b - a, 2.0 * std::abs(a), 2.0 * std::abs(b)}) * box_one + n * eps * sum_c + eps * sum_lc;
  out.holds = out.sup_g <= out.bound * (1.0 + 1e-12);
  return out;
}

double estimate_order(const std::vector<double>& eps, const std::vector<double>& errors) {
  if (eps.size() != errors.size()) throw ConfigError("eps and error lists differ in length");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (errors[i] > 0.0 && eps[i] > 0.0) {
      xs.push_back(std::log(eps[i]));
      ys.push_back(std::log(errors[i]));
    }
  }
  if (xs.size() < 3) throw NumericalError("order fit needs three points with positive errors");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / n;
    my += ys[i] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw NumericalError("order fit needs distinct eps values");
  return sxy / sxx;
}

double estimate_order(const SweepReport& report) { return estimate_order(report.eps, report.errors); }

Verdict classify_sweep(const std::vector<double>& errors, double order, double exact_tol) {
  if (errors.empty()) return Verdict::Stalled;
  if (std::all_of(errors.begin(), errors.end(), [&](double e) { return e <= exact_tol; })) return Verdict::Exact;
  if (order >= 0.5 && errors.back() < errors.front()) return Verdict::Converging;
  if (errors.back() > errors.front()) return Verdict::Diverging;
  return Verdict::Stalled;
}

}  // namespace dcv
