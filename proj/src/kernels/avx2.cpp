// Compiled with -mavx2 -mfma. Only reached through the dispatch table after a
// runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "sovi/kernels.hpp"

namespace sovi::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sw = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sw));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d sw = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, sw));
}

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), acc1);
  }
  for (; k + 4 <= n; k += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) acc += a[k] * b[k];
  return acc;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k));
    _mm256_storeu_pd(y + k, vy);
  }
  for (; k < n; ++k) y[k] += alpha * x[k];
}

double max_avx2(const double* x, std::size_t n) {
  if (n < 4) {
    double m = x[0];
    for (std::size_t k = 1; k < n; ++k) m = x[k] > m ? x[k] : m;
    return m;
  }
  __m256d vm = _mm256_loadu_pd(x);
  std::size_t k = 4;
  for (; k + 4 <= n; k += 4) vm = _mm256_max_pd(vm, _mm256_loadu_pd(x + k));
  double m = hmax(vm);
  for (; k < n; ++k) m = x[k] > m ? x[k] : m;
  return m;
}

double max_abs_avx2(const double* x, std::size_t n) {
  __m256d vm = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) vm = _mm256_max_pd(vm, abs_pd(_mm256_loadu_pd(x + k)));
  double m = hmax(vm);
  for (; k < n; ++k) m = std::max(m, std::fabs(x[k]));
  return m;
}

double max_abs_diff_avx2(const double* x, const double* y, std::size_t n) {
  __m256d vm = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k));
    vm = _mm256_max_pd(vm, abs_pd(d));
  }
  double m = hmax(vm);
  for (; k < n; ++k) m = std::max(m, std::fabs(x[k] - y[k]));
  return m;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{Isa::Avx2,     "avx2",   dot_avx2,          axpy_avx2,
                                 max_avx2,      max_abs_avx2, max_abs_diff_avx2};
  return table;
}

}  // namespace sovi::kernels
