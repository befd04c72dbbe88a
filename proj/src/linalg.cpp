#include "sovi/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "sovi/kernels.hpp"

namespace sovi {

DenseMatrix::DenseMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n_ * n_) {
    throw std::invalid_argument("DenseMatrix: expected " + std::to_string(n_ * n_) +
                                " entries, got " + std::to_string(entries_.size()));
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n);
  for (std::size_t k = 0; k < n; ++k) m(k, k) = 1.0;
  return m;
}

double DenseMatrix::norm_inf() const {
  double best = 0.0;
  for (std::size_t r = 0; r < n_; ++r) {
    double s = 0.0;
    for (double v : row(r)) s += std::fabs(v);
    best = std::max(best, s);
  }
  return best;
}

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
  if (x.size() != n_) throw std::invalid_argument("DenseMatrix::multiply: size mismatch");
  const auto& k = kernels::active();
  std::vector<double> y(n_);
  for (std::size_t r = 0; r < n_; ++r) y[r] = k.dot(row(r).data(), x.data(), n_);
  return y;
}

std::vector<double> solve_linear(DenseMatrix a, std::span<const double> b) {
  const std::size_t n = a.dim();
  if (b.size() != n) {
    throw std::invalid_argument("solve_linear: matrix is " + std::to_string(n) + "x" +
                                std::to_string(n) + " but right-hand side has " +
                                std::to_string(b.size()) + " entries");
  }
  if (n == 0) return {};

  const auto& k = kernels::active();
  const double threshold = kSingularPivotTolerance * a.norm_inf();
  std::vector<double> y(b.begin(), b.end());

  // In-place LU: after column `col`, rows below hold the eliminated values and
  // the multipliers are applied to y immediately (forward substitution fused).
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double pivot_abs = std::fabs(a(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      if (double v = std::fabs(a(r, col)); v > pivot_abs) {
        pivot = r;
        pivot_abs = v;
      }
    }
    if (!(pivot_abs > threshold)) {
      throw SingularSystemError("singular system: pivot " + std::to_string(pivot_abs) +
                                " in column " + std::to_string(col) + " is below " +
                                std::to_string(threshold));
    }
    if (pivot != col) {
      std::swap_ranges(a.row(col).begin(), a.row(col).end(), a.row(pivot).begin());
      std::swap(y[col], y[pivot]);
    }
    const double inv = 1.0 / a(col, col);
    const std::size_t tail = n - col - 1;
    const double* pivot_tail = a.row(col).data() + col + 1;
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a(r, col) * inv;
      if (factor == 0.0) continue;
      a(r, col) = 0.0;
      k.axpy(-factor, pivot_tail, a.row(r).data() + col + 1, tail);
      y[r] -= factor * y[col];
    }
  }

  for (std::size_t r = n; r-- > 0;) {
    const std::size_t tail = n - r - 1;
    const double s = k.dot(a.row(r).data() + r + 1, y.data() + r + 1, tail);
    y[r] = (y[r] - s) / a(r, r);
  }
  return y;
}

double max_norm(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("max_norm: empty input");
  return kernels::active().max_abs(x.data(), x.size());
}

double max_norm(const QTable& q) { return max_norm(q.flat()); }
double max_norm(const ValueFn& v) { return max_norm(std::span<const double>(v.values)); }

double max_norm_diff(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("max_norm_diff: size mismatch");
  if (x.empty()) throw std::invalid_argument("max_norm_diff: empty input");
  return kernels::active().max_abs_diff(x.data(), y.data(), x.size());
}

double max_norm_diff(const QTable& x, const QTable& y) {
  if (x.num_states() != y.num_states() || x.num_actions() != y.num_actions()) {
    throw std::invalid_argument("max_norm_diff: Q-table shapes differ");
  }
  return max_norm_diff(x.flat(), y.flat());
}

double max_norm_diff(const ValueFn& x, const ValueFn& y) {
  return max_norm_diff(std::span<const double>(x.values), std::span<const double>(y.values));
}

}  // namespace sovi
