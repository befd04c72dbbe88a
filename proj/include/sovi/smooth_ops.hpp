#pragma once

// Exact Bellman operators, the log-sum-exp smoothing of max, the smoothed
// Q-operator U and its Jacobian.

#include <cstddef>
#include <span>
#include <vector>

#include "sovi/mdp.hpp"

namespace sovi {

/// Sharpness of the log-sum-exp approximation; larger is closer to max.
class SmoothingParam {
 public:
  explicit SmoothingParam(double n);
  double value() const { return n_; }

 private:
  double n_;
};

/// Dense |S||A| x |S||A| matrix, rows and columns indexed by flat(i, a).
class JacobianMatrix {
 public:
  explicit JacobianMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim, 0.0) {}

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
  double& operator()(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }
  std::span<const double> row(std::size_t r) const { return {entries_.data() + r * dim_, dim_}; }
  std::span<double> row(std::size_t r) { return {entries_.data() + r * dim_, dim_}; }
  std::span<const double> flat() const { return entries_; }

 private:
  std::size_t dim_;
  std::vector<double> entries_;
};

/// (1/N) log sum_i exp(N x_i), evaluated as m + (1/N) log sum_i exp(N (x_i - m))
/// with m = max x, so it never overflows for finite input.
/// Throws std::invalid_argument on empty input.
double log_sum_exp(std::span<const double> x, SmoothingParam n);

/// exp(N (x_c - m)) / sum_b exp(N (x_b - m)). Throws on empty input.
std::vector<double> softmax_row(std::span<const double> x, SmoothingParam n);
void softmax_row(std::span<const double> x, SmoothingParam n, std::span<double> out);

/// (TV)(i) = max_a { r(i,a) + gamma sum_j p(j|i,a) V(j) }.
ValueFn bellman_T(const Mdp& m, const ValueFn& v);

/// Q(i,a) <- r(i,a) + gamma sum_j p(j|i,a) max_b Q(j,b).
QTable bellman_Q(const Mdp& m, const QTable& q);

/// Q(i,a) <- r(i,a) + gamma sum_j p(j|i,a) log_sum_exp(Q(j,.), N).
QTable smoothed_U(const Mdp& m, const QTable& q, SmoothingParam n);

/// J(flat(i,a), flat(k,c)) = gamma p(k|i,a) softmax(Q(k,.), N)[c].
/// Entries are nonnegative and every row sums to gamma.
JacobianMatrix jacobian_U(const Mdp& m, const QTable& q, SmoothingParam n);

/// Variants taking a precomputed expected_reward(m); the solvers use these
/// inside their loops.
ValueFn bellman_T(const Mdp& m, const QTable& expected_r, const ValueFn& v);
QTable bellman_Q(const Mdp& m, const QTable& expected_r, const QTable& q);
QTable smoothed_U(const Mdp& m, const QTable& expected_r, const QTable& q, SmoothingParam n);

}  // namespace sovi
