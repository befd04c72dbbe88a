#pragma once

// Data-parallel double-precision kernels used by the Bellman operators and
// the dense LU solve. Every routine has a scalar reference implementation;
// an AVX2+FMA variant is selected at runtime when the CPU supports it.

#include <cstddef>
#include <string_view>
#include <vector>

namespace sovi::kernels {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  Isa isa;
  const char* name;
  // sum_k a[k] * b[k]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[k] += alpha * x[k]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // max_k x[k]; n >= 1
  double (*max)(const double* x, std::size_t n);
  // max_k |x[k]|; 0 for n == 0
  double (*max_abs)(const double* x, std::size_t n);
  // max_k |x[k] - y[k]|; 0 for n == 0
  double (*max_abs_diff)(const double* x, const double* y, std::size_t n);
};

const KernelTable& scalar_table();
#if defined(SOVI_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

/// True when the variant was compiled in and the running CPU can execute it.
bool isa_available(Isa isa);

/// Every ISA usable on this machine, scalar first.
std::vector<Isa> available_isas();

/// The table used by the library. Chosen on first use: the `SOVI_KERNELS`
/// environment variable (`scalar`, `avx2`, `auto`) wins, otherwise the
/// widest available ISA.
const KernelTable& active();

/// Overrides the active table. Throws std::invalid_argument if `isa` is not
/// available. Not synchronized with concurrent solver runs; call it before
/// starting any.
void select(Isa isa);

/// Parses "scalar" / "avx2" / "auto"; "auto" yields the widest available ISA.
Isa parse_isa(std::string_view name);

std::string_view isa_name(Isa isa);

}  // namespace sovi::kernels
