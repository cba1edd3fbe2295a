#include "moditer/simd.hpp"

#include <cstdlib>
#include <string>

namespace moditer::simd {

bool cpu_has_avx2() {
#if defined(MODITER_HAVE_AVX2)
    static const bool has = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    }();
    return has;
#else
    return false;
#endif
}

Isa active_isa() {
    static const Isa isa = [] {
        const char* env = std::getenv("MODITER_SIMD");
        const std::string want = env ? env : "auto";
        if (want == "scalar") return Isa::Scalar;
        return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
    }();
    return isa;
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

#if defined(MODITER_HAVE_AVX2)
void qseries_eval(CSpan coeffs, CSpan q, MutCSpan out) {
    static const QEvalFn fn = active_isa() == Isa::Avx2 ? &avx2::qseries_eval : &scalar::qseries_eval;
    fn(coeffs, q, out);
}

std::complex<double> complex_dot(CSpan a, CSpan b) {
    static const DotFn fn = active_isa() == Isa::Avx2 ? &avx2::complex_dot : &scalar::complex_dot;
    return fn(a, b);
}
#else
void qseries_eval(CSpan coeffs, CSpan q, MutCSpan out) { scalar::qseries_eval(coeffs, q, out); }
std::complex<double> complex_dot(CSpan a, CSpan b) { return scalar::complex_dot(a, b); }
#endif

}  // namespace moditer::simd
