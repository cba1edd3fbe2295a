#include "moditer/simd.hpp"

namespace moditer::simd::scalar {

void qseries_eval(CSpan coeffs, CSpan q, MutCSpan out) {
    const std::size_t n = coeffs.size();
    for (std::size_t p = 0; p < q.size(); ++p) {
        const double qr = q.re[p], qi = q.im[p];
        double ar = 0.0, ai = 0.0;
        for (std::size_t k = n; k-- > 0;) {
            const double tr = ar * qr - ai * qi + coeffs.re[k];
            const double ti = ar * qi + ai * qr + coeffs.im[k];
            ar = tr;
            ai = ti;
        }
        out.re[p] = ar;
        out.im[p] = ai;
    }
}

std::complex<double> complex_dot(CSpan a, CSpan b) {
    double sr = 0.0, si = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        sr += a.re[k] * b.re[k] - a.im[k] * b.im[k];
        si += a.re[k] * b.im[k] + a.im[k] * b.re[k];
    }
    return {sr, si};
}

}  // namespace moditer::simd::scalar
