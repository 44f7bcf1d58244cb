#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dcv/core.hpp"

namespace dcv {

/// Uniform sampling of [a,b] with M intervals. The step is always (b-a)/M.
class Grid {
 public:
  Grid(double a, double b, int intervals);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  int intervals() const noexcept { return m_; }
  int size() const noexcept { return m_ + 1; }
  double step() const noexcept { return (b_ - a_) / m_; }
  double length() const noexcept { return b_ - a_; }
  /// t_k = a + k*eps. Valid for any integer k, including ghost nodes.
  double node(int k) const noexcept { return a_ + k * step(); }

  /// [a + 2N eps, b - 2N eps], or nothing when 4 N eps > b - a.
  std::optional<std::pair<double, double>> safety_interval(int half_width) const;
  bool in_safety_interval(int k, int half_width) const noexcept {
    return k >= 2 * half_width && k <= m_ - 2 * half_width;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double a_;
  double b_;
  int m_;
};

/// Characteristic window chi_l evaluated at node t_k: 1 iff
/// t_k lies in [max(a, a + l eps), min(b, b + l eps)].
inline int window(const Grid& grid, int l, int k) noexcept {
  return (k - l >= 0 && k - l <= grid.intervals()) ? 1 : 0;
}

/// Scale-derivative operator: coefficients gamma_l for l = -N..N and step eps.
/// The applied coefficients are c_l = gamma_l / eps.
class Stencil {
 public:
  Stencil(std::vector<cplx> gamma, double eps);

  int half_width() const noexcept { return n_; }
  double step() const noexcept { return eps_; }
  std::span<const cplx> gammas() const noexcept { return gamma_; }
  /// gamma_l, zero outside -N..N.
  cplx gamma(int l) const noexcept {
    return (l < -n_ || l > n_) ? cplx{} : gamma_[static_cast<std::size_t>(l + n_)];
  }
  /// c_l = gamma_l / eps, zero outside -N..N.
  cplx coeff(int l) const noexcept { return gamma(l) / eps_; }

  Stencil with_step(double eps) const { return Stencil(gamma_, eps); }
  /// Complex conjugate operator (conjugated gammas, same step).
  Stencil conjugate() const;

 private:
  std::vector<cplx> gamma_;
  double eps_;
  int n_;
};

/// Samples of a C^d-valued function on every node of a grid.
class Path {
 public:
  Path(Grid grid, int dim);
  Path(Grid grid, std::vector<CVec> values);

  static Path sample(const Grid& grid, int dim, const std::function<CVec(double)>& f);
  static Path scalar(const Grid& grid, const std::function<cplx(double)>& f);

  const Grid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return dim_; }
  int size() const noexcept { return static_cast<int>(values_.size()); }
  const CVec& operator[](int k) const { return values_[static_cast<std::size_t>(k)]; }
  CVec& operator[](int k) { return values_[static_cast<std::size_t>(k)]; }
  const std::vector<CVec>& values() const noexcept { return values_; }

  const CVec& alpha() const { return values_.front(); }
  const CVec& beta() const { return values_.back(); }

  /// Sup over nodes of the max-norm of the values.
  double sup_norm() const;

  Path& operator+=(const Path& other);
  Path& operator*=(cplx factor);
  friend Path operator+(Path lhs, const Path& rhs) { return lhs += rhs; }
  friend Path operator-(Path lhs, const Path& rhs) { return lhs += rhs * cplx{-1.0}; }
  friend Path operator*(Path lhs, cplx factor) { return lhs *= factor; }

 private:
  Grid grid_;
  int dim_;
  std::vector<CVec> values_;
};

enum class Shift { Plus, Minus };

/// Shift::Plus:  (Box_eps x)(t_k)  = sum_l c_l x_{k+l} chi_{-l}(t_k)
/// Shift::Minus: (Box_-eps x)(t_k) = sum_l c_l x_{k-l} chi_{l}(t_k)
/// The coefficients c_l are kept; only the shifts and windows are mirrored.
Path apply(const Stencil& s, const Path& x, Shift direction = Shift::Plus);

/// Two-point operator Box^[r,s]: gamma = (-s, s - r, r).
Stencil two_point(cplx r, cplx s, double eps);

/// Named operators: "forward", "backward", "symmetric", "cresson".
Stencil named_stencil(std::string_view key, double eps);
std::vector<std::string> named_stencil_keys();

struct Classification {
  bool in_o_tilde = false;
  /// (sum gamma_l, 1/2 sum l (gamma_l - gamma_-l) - 1)
  std::pair<cplx, cplx> defect;
};

inline constexpr double kDefaultTolerance = 1e-9;

Classification classify(const Stencil& s, double tol = kDefaultTolerance);

struct StencilDecomposition {
  std::vector<cplx> k;  ///< k_1 .. k_{2N-1}
  double residual = 0.0;
  bool exact = false;  ///< residual <= tol
};

/// Least-squares fit of s as the forward difference plus shifted Box^[1,-1]
/// second-difference stencils. The residual vanishes exactly on the consistent
/// affine subspace.
StencilDecomposition decompose(const Stencil& s, double tol = kDefaultTolerance);

/// Real k with s = Box^[1/2,1/2] + i k Box^[1,-1], if one fits within tol.
std::optional<double> unit_circle_family_member(const Stencil& s, double tol = kDefaultTolerance);

/// Member of the unit-circle family for a given real k.
Stencil unit_circle_family(double k, double eps);

/// {"N": int, "gamma": [[re, im], ...], "eps": float}
nlohmann::json to_json(const Stencil& s);
Stencil stencil_from_json(const nlohmann::json& j);

/// Accepts a named key or an inline JSON object.
Stencil parse_stencil(std::string_view spec, double eps);

}  // namespace dcv
