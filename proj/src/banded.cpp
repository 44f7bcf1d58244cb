#include "dcv/banded.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dcv {

BandMatrix::BandMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), data_(static_cast<std::size_t>(n) * (kl + ku + 1)) {
  if (n < 1 || kl < 0 || ku < 0) throw ConfigError("invalid band matrix shape");
}

cplx BandMatrix::operator()(int i, int j) const {
  if (!in_band(i, j)) return {};
  return data_[static_cast<std::size_t>(i) * (kl_ + ku_ + 1) + (j - i + kl_)];
}

cplx& BandMatrix::at(int i, int j) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || !in_band(i, j)) {
    throw ConfigError("band matrix entry (" + std::to_string(i) + "," + std::to_string(j) +
                      ") outside the band");
  }
  return data_[static_cast<std::size_t>(i) * (kl_ + ku_ + 1) + (j - i + kl_)];
}

std::vector<cplx> BandMatrix::multiply(std::span<const cplx> x) const {
  std::vector<cplx> y(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    const int lo = std::max(0, i - kl_), hi = std::min(n_ - 1, i + ku_);
    cplx acc{};
    for (int j = lo; j <= hi; ++j) acc += (*this)(i, j) * x[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = acc;
  }
  return y;
}

double BandMatrix::norm1() const {
  double best = 0.0;
  for (int j = 0; j < n_; ++j) {
    double col = 0.0;
    for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i) col += std::abs((*this)(i, j));
    best = std::max(best, col);
  }
  return best;
}

CMat BandMatrix::to_dense() const {
  CMat m = CMat::Zero(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j) m(i, j) = (*this)(i, j);
  return m;
}

BandLU::BandLU(const BandMatrix& a)
    : n_(a.size()),
      kl_(a.lower()),
      uw_(a.lower() + a.upper() + 1),
      norm1_(a.norm1()),
      upper_(static_cast<std::size_t>(a.size()) * (a.lower() + a.upper() + 1)),
      lower_(static_cast<std::size_t>(a.size()) * a.lower()),
      pivots_(static_cast<std::size_t>(a.size())) {
  // Working rows hold columns i - kl .. i + kl + ku.
  const int width = 2 * kl_ + a.upper() + 1;
  std::vector<cplx> work(static_cast<std::size_t>(n_) * width);
  auto w = [&](int i, int j) -> cplx& {
    return work[static_cast<std::size_t>(i) * width + (j - i + kl_)];
  };
  for (int i = 0; i < n_; ++i)
    for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + a.upper()); ++j) w(i, j) = a(i, j);

  for (int k = 0; k < n_; ++k) {
    const int last_row = std::min(n_ - 1, k + kl_);
    const int last_col = std::min(n_ - 1, k + uw_ - 1);
    int p = k;
    for (int i = k + 1; i <= last_row; ++i)
      if (std::abs(w(i, k)) > std::abs(w(p, k))) p = i;
    pivots_[static_cast<std::size_t>(k)] = p;
    if (w(p, k) == cplx{}) {
      singular_ = true;
      continue;
    }
    if (p != k)
      for (int j = k; j <= last_col; ++j) std::swap(w(k, j), w(p, j));
    for (int i = k + 1; i <= last_row; ++i) {
      const cplx m = w(i, k) / w(k, k);
      lower_[static_cast<std::size_t>(k) * kl_ + (i - k - 1)] = m;
      w(i, k) = 0.0;
      if (m == cplx{}) continue;
      for (int j = k + 1; j <= last_col; ++j) w(i, j) -= m * w(k, j);
    }
  }
  for (int i = 0; i < n_; ++i)
    for (int j = i; j <= std::min(n_ - 1, i + uw_ - 1); ++j) u(i, j) = w(i, j);
}

std::vector<cplx> BandLU::solve(std::span<const cplx> b) const {
  if (singular_) throw SingularSystem("band LU: zero pivot", std::numeric_limits<double>::infinity());
  std::vector<cplx> x(b.begin(), b.end());
  for (int k = 0; k < n_; ++k) {
    std::swap(x[static_cast<std::size_t>(k)], x[static_cast<std::size_t>(pivots_[static_cast<std::size_t>(k)])]);
    for (int i = k + 1; i <= std::min(n_ - 1, k + kl_); ++i)
      x[static_cast<std::size_t>(i)] -= lower_[static_cast<std::size_t>(k) * kl_ + (i - k - 1)] * x[static_cast<std::size_t>(k)];
  }
  for (int k = n_ - 1; k >= 0; --k) {
    cplx acc = x[static_cast<std::size_t>(k)];
    for (int j = k + 1; j <= std::min(n_ - 1, k + uw_ - 1); ++j) acc -= u(k, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(k)] = acc / u(k, k);
  }
  return x;
}

std::vector<cplx> BandLU::solve_adjoint(std::span<const cplx> b) const {
  if (singular_) throw SingularSystem("band LU: zero pivot", std::numeric_limits<double>::infinity());
  std::vector<cplx> y(b.begin(), b.end());
  // U^H is lower triangular.
  for (int i = 0; i < n_; ++i) {
    cplx acc = y[static_cast<std::size_t>(i)];
    for (int j = std::max(0, i - uw_ + 1); j < i; ++j) acc -= std::conj(u(j, i)) * y[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = acc / std::conj(u(i, i));
  }
  for (int k = n_ - 1; k >= 0; --k) {
    cplx acc = y[static_cast<std::size_t>(k)];
    for (int i = k + 1; i <= std::min(n_ - 1, k + kl_); ++i)
      acc -= std::conj(lower_[static_cast<std::size_t>(k) * kl_ + (i - k - 1)]) * y[static_cast<std::size_t>(i)];
    y[static_cast<std::size_t>(k)] = acc;
    std::swap(y[static_cast<std::size_t>(k)], y[static_cast<std::size_t>(pivots_[static_cast<std::size_t>(k)])]);
  }
  return y;
}

double BandLU::condition_estimate() const {
  if (singular_) return std::numeric_limits<double>::infinity();
  const auto n = static_cast<std::size_t>(n_);
  std::vector<cplx> x(n, cplx{1.0 / n_});
  double estimate = 0.0;
  for (int iter = 0; iter < 5; ++iter) {
    const auto y = solve(x);
    double norm = 0.0;
    for (const auto& v : y) norm += std::abs(v);
    estimate = std::max(estimate, norm);
    std::vector<cplx> sign(n);
    for (std::size_t i = 0; i < n; ++i) sign[i] = y[i] == cplx{} ? cplx{1.0} : y[i] / std::abs(y[i]);
    const auto z = solve_adjoint(sign);
    std::size_t jmax = 0;
    cplx ztx{};
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(z[i]) > std::abs(z[jmax])) jmax = i;
      ztx += std::conj(z[i]) * x[i];
    }
    if (iter > 0 && std::abs(z[jmax]) <= ztx.real()) break;
    std::fill(x.begin(), x.end(), cplx{});
    x[jmax] = 1.0;
  }
  if (!std::isfinite(estimate)) return std::numeric_limits<double>::infinity();
  return norm1_ * estimate;
}

}  // namespace dcv
