// Compiled with -mavx2 -mfma; only reached when the dispatcher saw both flags.
#include "moditer/simd.hpp"

#include <immintrin.h>

namespace moditer::simd::avx2 {

void qseries_eval(CSpan coeffs, CSpan q, MutCSpan out) {
    const std::size_t n = coeffs.size();
    const std::size_t np = q.size();
    std::size_t p = 0;
    for (; p + 4 <= np; p += 4) {
        const __m256d qr = _mm256_loadu_pd(q.re.data() + p);
        const __m256d qi = _mm256_loadu_pd(q.im.data() + p);
        __m256d ar = _mm256_setzero_pd();
        __m256d ai = _mm256_setzero_pd();
        for (std::size_t k = n; k-- > 0;) {
            const __m256d cr = _mm256_broadcast_sd(coeffs.re.data() + k);
            const __m256d ci = _mm256_broadcast_sd(coeffs.im.data() + k);
            const __m256d tr = _mm256_fmadd_pd(ar, qr, _mm256_fnmadd_pd(ai, qi, cr));
            const __m256d ti = _mm256_fmadd_pd(ar, qi, _mm256_fmadd_pd(ai, qr, ci));
            ar = tr;
            ai = ti;
        }
        _mm256_storeu_pd(out.re.data() + p, ar);
        _mm256_storeu_pd(out.im.data() + p, ai);
    }
    if (p < np) {
        scalar::qseries_eval(coeffs, {q.re.subspan(p), q.im.subspan(p)}, {out.re.subspan(p), out.im.subspan(p)});
    }
}

namespace {
double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}
}  // namespace

std::complex<double> complex_dot(CSpan a, CSpan b) {
    const std::size_t n = a.size();
    __m256d sr = _mm256_setzero_pd();
    __m256d si = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d xr = _mm256_loadu_pd(a.re.data() + k);
        const __m256d xi = _mm256_loadu_pd(a.im.data() + k);
        const __m256d yr = _mm256_loadu_pd(b.re.data() + k);
        const __m256d yi = _mm256_loadu_pd(b.im.data() + k);
        sr = _mm256_fmadd_pd(xr, yr, _mm256_fnmadd_pd(xi, yi, sr));
        si = _mm256_fmadd_pd(xr, yi, _mm256_fmadd_pd(xi, yr, si));
    }
    std::complex<double> tail{0.0, 0.0};
    if (k < n) {
        tail = scalar::complex_dot({a.re.subspan(k), a.im.subspan(k)}, {b.re.subspan(k), b.im.subspan(k)});
    }
    return {hsum(sr) + tail.real(), hsum(si) + tail.imag()};
}

}  // namespace moditer::simd::avx2
