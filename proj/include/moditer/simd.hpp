#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference version and an
// AVX2+FMA version; the dispatcher picks one at first use from the CPU flags
// (override with MODITER_SIMD=scalar|avx2). Equivalence is tested in
// tests/test_simd.cpp.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace moditer::simd {

enum class Isa { Scalar, Avx2 };

/// Structure-of-arrays view of complex data.
struct CSpan {
    std::span<const double> re;
    std::span<const double> im;
    std::size_t size() const { return re.size(); }
};

struct MutCSpan {
    std::span<double> re;
    std::span<double> im;
    std::size_t size() const { return re.size(); }
};

/// out[p] = sum_k c[k] q[p]^k  (Horner), for every point p.
using QEvalFn = void (*)(CSpan coeffs, CSpan q, MutCSpan out);
/// sum_k a[k] b[k]
using DotFn = std::complex<double> (*)(CSpan a, CSpan b);

namespace scalar {
void qseries_eval(CSpan coeffs, CSpan q, MutCSpan out);
std::complex<double> complex_dot(CSpan a, CSpan b);
}  // namespace scalar

namespace avx2 {
void qseries_eval(CSpan coeffs, CSpan q, MutCSpan out);
std::complex<double> complex_dot(CSpan a, CSpan b);
}  // namespace avx2

bool cpu_has_avx2();
Isa active_isa();
std::string_view isa_name(Isa isa);

void qseries_eval(CSpan coeffs, CSpan q, MutCSpan out);
std::complex<double> complex_dot(CSpan a, CSpan b);

}  // namespace moditer::simd
