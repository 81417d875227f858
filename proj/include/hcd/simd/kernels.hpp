#pragma once

// Dense double-precision kernels used by the Lanczos reorthogonalization and
// by k-means. Each kernel has a scalar reference implementation and, on
// x86-64 builds, an AVX2+FMA variant; the public entry points dispatch to the
// best variant the running CPU supports. Set HCD_SIMD=scalar in the
// environment to force the reference path.

#include <span>
#include <string_view>

namespace hcd::simd {

enum class Isa { scalar, avx2 };

/// Variant used by the dispatching entry points.
Isa active_isa();
/// Overrides the dispatch choice (tests). Requesting an unsupported ISA
/// falls back to scalar.
void set_isa(Isa isa);
bool isa_supported(Isa isa);
std::string_view isa_name(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
/// x *= alpha
void scale(double alpha, std::span<double> x);
double squared_distance(std::span<const double> a, std::span<const double> b);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scale(double alpha, std::span<double> x);
double squared_distance(std::span<const double> a, std::span<const double> b);
}  // namespace scalar

#if defined(HCD_HAVE_AVX2)
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scale(double alpha, std::span<double> x);
double squared_distance(std::span<const double> a, std::span<const double> b);
}  // namespace avx2
#endif

}  // namespace hcd::simd
