#include <atomic>
#include <cstdlib>
#include <string>

#include "hcd/simd/kernels.hpp"

namespace hcd::simd {

namespace {

Isa detect() {
  if (const char* forced = std::getenv("HCD_SIMD"); forced && std::string(forced) == "scalar") return Isa::scalar;
  return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool isa_supported(Isa isa) {
  if (isa == Isa::scalar) return true;
#if defined(HCD_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) { current().store(isa_supported(isa) ? isa : Isa::scalar, std::memory_order_relaxed); }

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

#if defined(HCD_HAVE_AVX2)
#define HCD_DISPATCH(fn, ...) \
  return active_isa() == Isa::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__)
#else
#define HCD_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

double dot(std::span<const double> a, std::span<const double> b) { HCD_DISPATCH(dot, a, b); }
void axpy(double alpha, std::span<const double> x, std::span<double> y) { HCD_DISPATCH(axpy, alpha, x, y); }
void scale(double alpha, std::span<double> x) { HCD_DISPATCH(scale, alpha, x); }
double squared_distance(std::span<const double> a, std::span<const double> b) {
  HCD_DISPATCH(squared_distance, a, b);
}

#undef HCD_DISPATCH

}  // namespace hcd::simd
