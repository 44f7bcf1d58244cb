#include "dcv/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <variant>

#include "dcv/convergence_lab.hpp"
#include "dcv/del_solver.hpp"
#include "dcv/leibniz.hpp"
#include "dcv/quad_lagrangian.hpp"
#include "dcv/stencil_ops.hpp"
#include "dcv/theta.hpp"

namespace dcv::cli {

using nlohmann::json;

namespace {

json pair(cplx z) { return json::array({z.real() + 0.0, z.imag() + 0.0}); }

json pair_or_null(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return nullptr;
  return pair(z);
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

cplx read_cplx(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError("complex values are numbers or [re, im] pairs");
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x + 0.0);
  return buf;
}

using Cell = std::variant<int, double, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void write(std::ostream& os) const {
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << ',';
        if (const int* v = std::get_if<int>(&row[i])) {
          os << *v;
        } else if (const double* d = std::get_if<double>(&row[i])) {
          os << fmt(*d);
        } else {
          os << std::get<std::string>(row[i]);
        }
      }
      os << '\n';
    }
  }
};

struct Outcome {
  json summary;
  std::optional<Table> table;
};

Grid single_grid(const ExperimentConfig& c) {
  if (!(c.b > c.a)) throw ConfigError("the interval must satisfy a < b");
  if (c.eps) {
    const double eps = *c.eps;
    if (!(eps > 0.0)) throw ConfigError("eps must be positive");
    const double ratio = (c.b - c.a) / eps;
    const long m = std::lround(ratio);
    if (m < 1 || std::abs(ratio - static_cast<double>(m)) > 1e-9 * ratio) {
      throw StepMismatch("eps does not divide b - a");
    }
    return Grid(c.a, c.b, static_cast<int>(m));
  }
  if (c.M.size() != 1) throw ConfigError("this command takes a single M");
  return Grid(c.a, c.b, c.M.front());
}

// Step for grid-free commands: eps as given, else from the single M.
double stencil_step(const ExperimentConfig& c) {
  if (!c.eps) return single_grid(c).step();
  if (!(*c.eps > 0.0)) throw ConfigError("eps must be positive");
  return *c.eps;
}

Shift parse_shift(const std::string& s) {
  if (s == "plus") return Shift::Plus;
  if (s == "minus") return Shift::Minus;
  throw ConfigError("shift must be 'plus' or 'minus'");
}

BoundaryClosure parse_closure(const std::string& s) {
  if (s == "extrapolated") return BoundaryClosure::Extrapolated;
  if (s == "windowed") return BoundaryClosure::Windowed;
  throw ConfigError("closure must be 'extrapolated' or 'windowed'");
}

CVec boundary_vector(const std::vector<double>& v, int dim, const char* name) {
  if (v.size() == 1) return CVec::Constant(dim, v.front());
  if (static_cast<int>(v.size()) != dim) throw ConfigError(std::string(name) + " needs 1 or d entries");
  CVec out(dim);
  for (int i = 0; i < dim; ++i) out(i) = v[static_cast<std::size_t>(i)];
  return out;
}

std::vector<std::string> component_header(const std::string& prefix, int dim, bool complex_parts) {
  std::vector<std::string> h;
  for (int j = 0; j < dim; ++j) {
    const std::string base = dim == 1 ? prefix : prefix + std::to_string(j);
    if (complex_parts) {
      h.push_back(base + "_re");
      h.push_back(base + "_im");
    } else {
      h.push_back(base);
    }
  }
  return h;
}

void append(std::vector<Cell>& row, const CVec& v) {
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    row.emplace_back(v(j).real());
    row.emplace_back(v(j).imag());
  }
}

Outcome op_classify(const ExperimentConfig& c) {
  const Stencil st = parse_stencil(c.stencil, stencil_step(c));
  const Classification cl = classify(st, c.tol);
  return {json{{"stencil", to_json(st)},
               {"in_O_tilde", cl.in_o_tilde},
               {"defect", json::array({pair(cl.defect.first), pair(cl.defect.second)})}},
          std::nullopt};
}

Outcome op_decompose(const ExperimentConfig& c) {
  const Stencil st = parse_stencil(c.stencil, stencil_step(c));
  const StencilDecomposition dec = decompose(st, c.tol);
  json k = json::array();
  for (const cplx& z : dec.k) k.push_back(pair(z));
  json member = nullptr;
  if (st.half_width() == 1) {
    if (auto m = unit_circle_family_member(st, c.tol)) member = *m;
  }
  return {json{{"stencil", to_json(st)},
               {"k", k},
               {"residual", dec.residual},
               {"exact", dec.exact},
               {"unit_circle_k", member}},
          std::nullopt};
}

Outcome op_apply(const ExperimentConfig& c) {
  const Grid grid = single_grid(c);
  const Stencil st = parse_stencil(c.stencil, grid.step());
  const SmoothFunction fn = test_function(c.fn);
  const Shift dir = parse_shift(c.shift);
  const Path x = Path::scalar(grid, [&](double t) { return cplx(fn.f(t)); });
  const Path bx = apply(st, x, dir);
  const double sign = dir == Shift::Plus ? 1.0 : -1.0;
  Table table{{"k", "t", "x", "box_re", "box_im", "derivative"}, {}};
  double err_interior = 0.0;
  for (int k = 0; k <= grid.intervals(); ++k) {
    const double t = grid.node(k);
    const double der = sign * fn.df(t);
    table.rows.push_back({k, t, fn.f(t), bx[k](0).real(), bx[k](0).imag(), der});
    if (grid.in_safety_interval(k, st.half_width())) err_interior = std::max(err_interior, std::abs(bx[k](0) - der));
  }
  return {json{{"stencil", to_json(st)}, {"fn", fn.name}, {"shift", c.shift}, {"M", grid.intervals()},
               {"max_error_safety_interval", err_interior}},
          table};
}

Outcome leibniz_check(const ExperimentConfig& c) {
  const Grid grid = single_grid(c);
  if (c.rp.has_value() != c.sp.has_value()) throw ConfigError("rp and sp go together");
  if (c.samples < 1) throw ConfigError("samples must be positive");
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  auto random_path = [&] {
    std::vector<CVec> v;
    for (int k = 0; k <= grid.intervals(); ++k) v.push_back(CVec::Constant(1, unif(rng)));
    return Path(grid, std::move(v));
  };
  Table table{{"sample", "residual", "scale", "relative"}, {}};
  double worst = 0.0;
  std::optional<leibniz::LeibnizCoefficients> coeffs;
  for (int i = 0; i < c.samples; ++i) {
    const Path f = random_path();
    const Path g = random_path();
    const leibniz::LeibnizCheck chk = c.rp ? leibniz::leibniz_residual(c.r, c.s, *c.rp, *c.sp, f, g)
                                           : leibniz::leibniz_residual(c.r, c.s, f, g);
    coeffs = chk.coefficients;
    worst = std::max(worst, chk.residual / chk.scale);
    table.rows.push_back({i, chk.residual, chk.scale, chk.residual / chk.scale});
  }
  const auto& d = *coeffs;
  return {json{{"r", pair(d.r)},
               {"s", pair(d.s)},
               {"rp", pair(d.rp)},
               {"sp", pair(d.sp)},
               {"eps", d.eps},
               {"d", json::array({pair(d.d1), pair(d.d2), pair(d.d3), pair(d.d4)})},
               {"det", pair(d.det())},
               {"samples", c.samples},
               {"seed", c.seed},
               {"max_relative_residual", worst}},
          table};
}

Outcome del_residual(const ExperimentConfig& c) {
  const Grid grid = single_grid(c);
  const QuadraticLagrangian L = parse_lagrangian(c.lagrangian, c.p, c.q);
  const Stencil st = parse_stencil(c.stencil, grid.step());
  const SmoothFunction fn = test_function(c.fn);
  const int d = L.dim();
  const Path x = Path::sample(grid, d, [&](double t) { return CVec(CVec::Constant(d, fn.f(t))); });
  const Path theta = ThetaBuilder(L, st, grid, parse_closure(c.closure)).residual(x);
  Table table{{"k", "t"}, {}};
  for (auto& h : component_header("theta", d, true)) table.header.push_back(h);
  const bool with_cel = L.has_derivatives();
  if (with_cel) {
    for (auto& h : component_header("cel", d, false)) table.header.push_back(h);
  }
  const VectorFn xf = [&](double t) { return RVec::Constant(d, fn.f(t)); };
  const VectorFn xd = [&](double t) { return RVec::Constant(d, fn.df(t)); };
  const VectorFn xdd = [&](double t) { return RVec::Constant(d, fn.ddf(t)); };
  for (int k = 0; k <= grid.intervals(); ++k) {
    const double t = grid.node(k);
    std::vector<Cell> row{k, t};
    append(row, theta[k]);
    if (with_cel) {
      const RVec cel = cel_residual(L, xf, xd, xdd, t);
      for (int j = 0; j < d; ++j) row.emplace_back(cel(j));
    }
    table.rows.push_back(std::move(row));
  }
  return {json{{"stencil", to_json(st)}, {"lagrangian", c.lagrangian}, {"fn", fn.name},
               {"closure", c.closure}, {"M", grid.intervals()}, {"sup_theta", theta.sup_norm()}},
          table};
}

Outcome del_solve(const ExperimentConfig& c) {
  const Grid grid = single_grid(c);
  const QuadraticLagrangian L = parse_lagrangian(c.lagrangian, c.p, c.q);
  const Stencil st = parse_stencil(c.stencil, grid.step());
  const BoundaryClosure closure = parse_closure(c.closure);
  const int d = L.dim();
  const BvpSolution sol =
      solve_bvp(L, st, grid, boundary_vector(c.alpha, d, "alpha"), boundary_vector(c.beta, d, "beta"), closure);
  const Path theta = ThetaBuilder(L, st, grid, closure).residual(sol.path);
  Table table{{"k", "t"}, {}};
  for (auto& h : component_header("x", d, true)) table.header.push_back(h);
  for (auto& h : component_header("theta", d, true)) table.header.push_back(h);
  for (int k = 0; k <= grid.intervals(); ++k) {
    std::vector<Cell> row{k, grid.node(k)};
    append(row, sol.path[k]);
    append(row, theta[k]);
    table.rows.push_back(std::move(row));
  }
  return {json{{"stencil", to_json(st)}, {"lagrangian", c.lagrangian}, {"closure", c.closure},
               {"M", grid.intervals()}, {"condition", sol.condition}, {"residual", sol.residual}},
          table};
}

Outcome oscillator_roots(const ExperimentConfig& c) {
  const Stencil st = parse_stencil(c.stencil, stencil_step(c));
  const CharPolynomial cp = oscillator_char_poly(st, c.p, c.q);
  const RootModuli rm = unit_modulus_roots(cp, c.tol);
  json moduli = json::array(), roots = json::array(), quartic = json::array(), reduced = json::array();
  for (std::size_t i = 0; i < 4; ++i) {
    moduli.push_back(number_or_null(rm.moduli[i]));
    roots.push_back(pair_or_null(rm.roots[i]));
  }
  for (const cplx& z : cp.quartic) quartic.push_back(pair(z));
  for (const cplx& z : cp.reduced) reduced.push_back(pair(z));
  return {json{{"stencil", to_json(st)},
               {"p", c.p},
               {"q", c.q},
               {"eps", st.step()},
               {"quartic", quartic},
               {"reduced", reduced},
               {"roots", roots},
               {"moduli", moduli},
               {"all_unit", rm.all_unit},
               {"degenerate", rm.degenerate},
               {"oscillation_test", general_oscillation_test(cp.gamma_m1, cp.gamma_0, cp.gamma_p1)}},
          std::nullopt};
}

Outcome converge_sweep(const ExperimentConfig& c) {
  if (c.eps) throw ConfigError("converge sweep takes an M list, not eps");
  SweepOptions opt;
  opt.a = c.a;
  opt.b = c.b;
  opt.intervals = c.M;
  opt.delta = c.delta;
  const StencilFamily family = stencil_family(c.stencil);
  const SmoothFunction fn = test_function(c.fn);
  SweepReport rep;
  if (c.mode == "operator") {
    rep = operator_consistency_sweep(family, fn, opt, parse_shift(c.shift));
  } else if (c.mode == "del") {
    rep = del_convergence_sweep(parse_lagrangian(c.lagrangian, c.p, c.q), family, fn, opt);
  } else {
    throw ConfigError("mode must be 'operator' or 'del'");
  }
  Table table{{"M", "eps", "error"}, {}};
  for (std::size_t i = 0; i < rep.errors.size(); ++i) table.rows.push_back({rep.intervals[i], rep.eps[i], rep.errors[i]});
  json summary = to_json(rep);
  summary["mode"] = c.mode;
  if (c.mode == "del") summary["lagrangian"] = c.lagrangian;
  return {summary, table};
}

Outcome dispatch(const ExperimentConfig& c) {
  if (c.command == "op classify") return op_classify(c);
  if (c.command == "op apply") return op_apply(c);
  if (c.command == "op decompose") return op_decompose(c);
  if (c.command == "leibniz check") return leibniz_check(c);
  if (c.command == "del residual") return del_residual(c);
  if (c.command == "del solve") return del_solve(c);
  if (c.command == "oscillator roots") return oscillator_roots(c);
  if (c.command == "converge sweep") return converge_sweep(c);
  throw ConfigError("unknown command '" + c.command + "'");
}

std::string default_stem(const std::string& command) {
  std::string s = command;
  for (char& ch : s) {
    if (ch == ' ') ch = '_';
  }
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << content;
  if (!f) throw ConfigError("cannot write " + path.string());
}

}  // namespace

std::vector<std::string> commands() {
  return {"op classify",  "op apply",  "op decompose",     "leibniz check",
          "del residual", "del solve", "oscillator roots", "converge sweep"};
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["command"] = c.command;
  j["stencil"] = c.stencil;
  j["lagrangian"] = c.lagrangian;
  j["p"] = c.p;
  j["q"] = c.q;
  j["a"] = c.a;
  j["b"] = c.b;
  j["M"] = c.M;
  j["eps"] = c.eps ? json(*c.eps) : json(nullptr);
  j["fn"] = c.fn;
  j["shift"] = c.shift;
  j["closure"] = c.closure;
  j["mode"] = c.mode;
  j["delta"] = c.delta;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["r"] = pair(c.r);
  j["s"] = pair(c.s);
  j["rp"] = c.rp ? pair(*c.rp) : json(nullptr);
  j["sp"] = c.sp ? pair(*c.sp) : json(nullptr);
  j["samples"] = c.samples;
  j["tol"] = c.tol;
  j["seed"] = c.seed;
  j["out_dir"] = c.out_dir;
  j["stem"] = c.stem;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known{"command", "stencil", "lagrangian", "p",     "q",      "a",
                                              "b",       "M",       "eps",        "fn",    "shift",  "closure",
                                              "mode",    "delta",   "alpha",      "beta",  "r",      "s",
                                              "rp",      "sp",      "samples",    "tol",   "seed",   "out_dir",
                                              "stem"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  try {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) j.at(key).get_to(field);
    };
    get("command", c.command);
    if (j.contains("stencil") && j["stencil"].is_object()) {
      c.stencil = j["stencil"].dump();
    } else {
      get("stencil", c.stencil);
    }
    if (j.contains("lagrangian") && j["lagrangian"].is_object()) {
      c.lagrangian = j["lagrangian"].dump();
    } else {
      get("lagrangian", c.lagrangian);
    }
    get("p", c.p);
    get("q", c.q);
    get("a", c.a);
    get("b", c.b);
    if (j.contains("M")) c.M = j["M"].is_array() ? j["M"].get<std::vector<int>>() : std::vector<int>{j["M"].get<int>()};
    if (j.contains("eps") && !j["eps"].is_null()) c.eps = j["eps"].get<double>();
    get("fn", c.fn);
    get("shift", c.shift);
    get("closure", c.closure);
    get("mode", c.mode);
    get("delta", c.delta);
    get("alpha", c.alpha);
    get("beta", c.beta);
    if (j.contains("r")) c.r = read_cplx(j["r"]);
    if (j.contains("s")) c.s = read_cplx(j["s"]);
    if (j.contains("rp") && !j["rp"].is_null()) c.rp = read_cplx(j["rp"]);
    if (j.contains("sp") && !j["sp"].is_null()) c.sp = read_cplx(j["sp"]);
    get("samples", c.samples);
    get("tol", c.tol);
    get("seed", c.seed);
    get("out_dir", c.out_dir);
    get("stem", c.stem);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config " + path);
  try {
    return config_from_json(json::parse(f));
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    Outcome res = dispatch(config);
    res.summary["command"] = config.command;
    const std::string summary = res.summary.dump(2) + "\n";
    if (!config.out_dir.empty()) {
      const std::filesystem::path dir(config.out_dir);
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      if (ec) throw ConfigError("cannot create output directory " + dir.string());
      const std::string stem = config.stem.empty() ? default_stem(config.command) : config.stem;
      if (res.table) {
        std::ostringstream csv;
        res.table->write(csv);
        write_file(dir / (stem + ".csv"), csv.str());
      }
      write_file(dir / (stem + ".json"), summary);
      out << summary;
    } else if (res.table) {
      res.table->write(out);
    } else {
      out << summary;
    }
    return kOk;
  } catch (const SingularSystem& e) {
    err << "error: " << e.what() << " (condition estimate " << fmt(e.condition()) << ")\n";
    return kNumericalError;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace dcv::cli
