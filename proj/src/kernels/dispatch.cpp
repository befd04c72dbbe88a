#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "sovi/kernels.hpp"

namespace sovi::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(SOVI_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& table_for(Isa isa) {
  switch (isa) {
#if defined(SOVI_HAVE_AVX2)
    case Isa::Avx2:
      return avx2_table();
#endif
    default:
      return scalar_table();
  }
}

Isa widest() { return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar; }

const KernelTable* initial_table() {
  Isa isa = widest();
  if (const char* env = std::getenv("SOVI_KERNELS"); env != nullptr && *env != '\0') {
    isa = parse_isa(env);
    if (!isa_available(isa)) {
      throw std::invalid_argument(std::string("SOVI_KERNELS=") + env +
                                  " is not supported on this CPU");
    }
  }
  return &table_for(isa);
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> ptr{initial_table()};
  return ptr;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
      return cpu_has_avx2();
  }
  return false;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out{Isa::Scalar};
  if (isa_available(Isa::Avx2)) out.push_back(Isa::Avx2);
  return out;
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("kernel ISA '" + std::string(isa_name(isa)) +
                                "' is not available on this machine");
  }
  current().store(&table_for(isa), std::memory_order_release);
}

Isa parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::Scalar;
  if (name == "avx2") return Isa::Avx2;
  if (name == "auto") return widest();
  throw std::invalid_argument("unknown kernel ISA '" + std::string(name) +
                              "' (expected scalar, avx2 or auto)");
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace sovi::kernels
