#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "sovi/mdp.hpp"

namespace sovi {

/// Square row-major matrix.
class DenseMatrix {
 public:
  explicit DenseMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}
  DenseMatrix(std::size_t n, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);

  std::size_t dim() const { return n_; }
  double operator()(std::size_t r, std::size_t c) const { return entries_[r * n_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return entries_[r * n_ + c]; }
  std::span<const double> row(std::size_t r) const { return {entries_.data() + r * n_, n_}; }
  std::span<double> row(std::size_t r) { return {entries_.data() + r * n_, n_}; }
  std::span<const double> flat() const { return entries_; }

  /// max_r sum_c |a(r, c)|
  double norm_inf() const;

  std::vector<double> multiply(std::span<const double> x) const;

 private:
  std::size_t n_;
  std::vector<double> entries_;
};

class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pivots smaller than this times ||A||_inf are treated as singular.
inline constexpr double kSingularPivotTolerance = 1e-12;

/// Solves A y = b by LU factorization with partial (row) pivoting. Throws
/// SingularSystemError when a pivot falls below the tolerance and
/// std::invalid_argument on a shape mismatch.
std::vector<double> solve_linear(DenseMatrix a, std::span<const double> b);

/// Maximum absolute entry. Throws std::invalid_argument on empty input.
double max_norm(std::span<const double> x);
double max_norm(const QTable& q);
double max_norm(const ValueFn& v);

/// ||x - y||_inf for equally sized inputs.
double max_norm_diff(std::span<const double> x, std::span<const double> y);
double max_norm_diff(const QTable& x, const QTable& y);
double max_norm_diff(const ValueFn& x, const ValueFn& y);

}  // namespace sovi
