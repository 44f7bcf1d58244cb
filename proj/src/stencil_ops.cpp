#include "dcv/stencil_ops.hpp"

#include <algorithm>
#include <cmath>

namespace dcv {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_matching_step(const Stencil& s, const Grid& g) {
  if (std::abs(s.step() - g.step()) > 1e-12 * g.step()) {
    throw StepMismatch("stencil step " + std::to_string(s.step()) + " does not match grid step " +
                       std::to_string(g.step()));
  }
}

}  // namespace

Grid::Grid(double a, double b, int intervals) : a_(a), b_(b), m_(intervals) {
  if (!(b > a)) throw ConfigError("grid requires a < b");
  if (intervals < 1) throw ConfigError("grid requires at least one interval");
}

std::optional<std::pair<double, double>> Grid::safety_interval(int half_width) const {
  if (4 * half_width > m_) return std::nullopt;
  return std::pair{node(2 * half_width), node(m_ - 2 * half_width)};
}

Stencil::Stencil(std::vector<cplx> gamma, double eps) : gamma_(std::move(gamma)), eps_(eps) {
  if (gamma_.size() < 3 || gamma_.size() % 2 == 0) {
    throw ConfigError("stencil needs 2N+1 coefficients with N >= 1, got " +
                      std::to_string(gamma_.size()));
  }
  if (!(eps > 0.0)) throw ConfigError("stencil step must be positive");
  n_ = static_cast<int>(gamma_.size() / 2);
}

Stencil Stencil::conjugate() const {
  std::vector<cplx> g(gamma_.size());
  std::transform(gamma_.begin(), gamma_.end(), g.begin(), [](cplx z) { return std::conj(z); });
  return Stencil(std::move(g), eps_);
}

Path::Path(Grid grid, int dim)
    : grid_(grid), dim_(dim), values_(static_cast<std::size_t>(grid.size()), CVec::Zero(dim)) {
  if (dim < 1) throw ConfigError("path dimension must be positive");
}

Path::Path(Grid grid, std::vector<CVec> values) : grid_(grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.size()) {
    throw ConfigError("path needs one value per grid node");
  }
  dim_ = static_cast<int>(values_.front().size());
  if (dim_ < 1) throw ConfigError("path dimension must be positive");
  for (const auto& v : values_) {
    if (v.size() != dim_) throw ConfigError("path values have inconsistent dimension");
  }
}

Path Path::sample(const Grid& grid, int dim, const std::function<CVec(double)>& f) {
  std::vector<CVec> values;
  values.reserve(static_cast<std::size_t>(grid.size()));
  for (int k = 0; k < grid.size(); ++k) {
    CVec v = f(grid.node(k));
    if (v.size() != dim) throw ConfigError("sampled function returned wrong dimension");
    values.push_back(std::move(v));
  }
  return Path(grid, std::move(values));
}

Path Path::scalar(const Grid& grid, const std::function<cplx(double)>& f) {
  return sample(grid, 1, [&](double t) {
    CVec v(1);
    v(0) = f(t);
    return v;
  });
}

double Path::sup_norm() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, v.cwiseAbs().maxCoeff());
  return m;
}

Path& Path::operator+=(const Path& other) {
  if (!(grid_ == other.grid_) || dim_ != other.dim_) throw ConfigError("path shape mismatch");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

Path& Path::operator*=(cplx factor) {
  for (auto& v : values_) v *= factor;
  return *this;
}

Path apply(const Stencil& s, const Path& x, Shift direction) {
  const Grid& g = x.grid();
  require_matching_step(s, g);
  const int n = s.half_width();
  const int sign = direction == Shift::Plus ? 1 : -1;
  Path out(g, x.dim());
  for (int k = 0; k < g.size(); ++k) {
    CVec acc = CVec::Zero(x.dim());
    for (int l = -n; l <= n; ++l) {
      // Plus reads x_{k+l} under chi_{-l}; Minus reads x_{k-l} under chi_{l}.
      if (window(g, -sign * l, k) == 0) continue;
      acc += s.coeff(l) * x[k + sign * l];
    }
    out[k] = std::move(acc);
  }
  return out;
}

Stencil two_point(cplx r, cplx s, double eps) { return Stencil({-s, s - r, r}, eps); }

Stencil named_stencil(std::string_view key, double eps) {
  if (key == "forward") return two_point(1.0, 0.0, eps);
  if (key == "backward") return two_point(0.0, 1.0, eps);
  if (key == "symmetric") return two_point(0.5, 0.5, eps);
  if (key == "cresson") return two_point({0.5, -0.5}, {0.5, 0.5}, eps);
  throw ConfigError("unknown stencil key '" + std::string(key) + "'");
}

std::vector<std::string> named_stencil_keys() {
  return {"forward", "backward", "symmetric", "cresson"};
}

Classification classify(const Stencil& s, double tol) {
  const int n = s.half_width();
  cplx total{};
  cplx moment{};
  for (int l = -n; l <= n; ++l) {
    total += s.gamma(l);
    moment += 0.5 * static_cast<double>(l) * (s.gamma(l) - s.gamma(-l));
  }
  Classification c;
  c.defect = {total, moment - 1.0};
  c.in_o_tilde = std::abs(c.defect.first) <= tol && std::abs(c.defect.second) <= tol;
  return c;
}

StencilDecomposition decompose(const Stencil& s, double tol) {
  const int n = s.half_width();
  const int rows = 2 * n + 1;
  const int cols = 2 * n - 1;
  CMat basis = CMat::Zero(rows, cols);
  // Column for shift l holds Box^[1,-1] read at t - l eps: offsets -l-1, -l, -l+1.
  for (int l = -(n - 1); l <= n - 1; ++l) {
    const int col = l + n - 1;
    basis(-l - 1 + n, col) = 1.0;
    basis(-l + n, col) = -2.0;
    basis(-l + 1 + n, col) = 1.0;
  }
  CVec target(rows);
  for (int l = -n; l <= n; ++l) target(l + n) = s.gamma(l);
  // Subtract the forward difference (gamma_0, gamma_1) = (-1, 1).
  target(n) += 1.0;
  target(n + 1) -= 1.0;

  const CVec k = basis.completeOrthogonalDecomposition().solve(target);
  StencilDecomposition out;
  out.k.assign(k.data(), k.data() + k.size());
  out.residual = (basis * k - target).norm();
  out.exact = out.residual <= tol;
  return out;
}

Stencil unit_circle_family(double k, double eps) {
  return Stencil({-0.5 + kI * k, -2.0 * kI * k, 0.5 + kI * k}, eps);
}

std::optional<double> unit_circle_family_member(const Stencil& s, double tol) {
  if (s.half_width() != 1) throw ConfigError("unit-circle family is defined for N = 1 only");
  const Eigen::Vector3cd base(-0.5, 0.0, 0.5);
  const Eigen::Vector3cd dir = kI * Eigen::Vector3cd(1.0, -2.0, 1.0);
  const Eigen::Vector3cd g(s.gamma(-1), s.gamma(0), s.gamma(1));
  const Eigen::Vector3cd diff = g - base;
  // Real least squares over k: minimize |diff - k dir|^2.
  const double k = dir.dot(diff).real() / dir.squaredNorm();
  if ((diff - k * dir).norm() > tol) return std::nullopt;
  return k;
}

nlohmann::json to_json(const Stencil& s) {
  nlohmann::json gamma = nlohmann::json::array();
  // Adding 0.0 folds -0.0 into 0.0.
  for (cplx z : s.gammas()) gamma.push_back({z.real() + 0.0, z.imag() + 0.0});
  return {{"N", s.half_width()}, {"gamma", gamma}, {"eps", s.step()}};
}

Stencil stencil_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("N").get<int>();
    const auto& arr = j.at("gamma");
    if (!arr.is_array() || static_cast<int>(arr.size()) != 2 * n + 1) {
      throw ConfigError("stencil JSON: gamma must have 2N+1 entries");
    }
    std::vector<cplx> gamma;
    for (const auto& z : arr) {
      if (z.is_number()) {
        gamma.emplace_back(z.get<double>(), 0.0);
      } else {
        gamma.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
      }
    }
    return Stencil(std::move(gamma), j.value("eps", 1.0));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("stencil JSON: ") + e.what());
  }
}

Stencil parse_stencil(std::string_view spec, double eps) {
  const auto first = spec.find_first_not_of(" \t\n");
  if (first != std::string_view::npos && spec[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(spec);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("stencil JSON: ") + e.what());
    }
    return stencil_from_json(j).with_step(eps);
  }
  return named_stencil(spec, eps);
}

}  // namespace dcv
