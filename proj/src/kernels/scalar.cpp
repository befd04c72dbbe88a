#include "sovi/kernels.hpp"

#include <cmath>

namespace sovi::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += a[k] * b[k];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

double max_scalar(const double* x, std::size_t n) {
  double m = x[0];
  for (std::size_t k = 1; k < n; ++k) m = x[k] > m ? x[k] : m;
  return m;
}

double max_abs_scalar(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) m = std::max(m, std::fabs(x[k]));
  return m;
}

double max_abs_diff_scalar(const double* x, const double* y, std::size_t n) {
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) m = std::max(m, std::fabs(x[k] - y[k]));
  return m;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::Scalar,      "scalar",          dot_scalar,
                                 axpy_scalar,      max_scalar,        max_abs_scalar,
                                 max_abs_diff_scalar};
  return table;
}

}  // namespace sovi::kernels
