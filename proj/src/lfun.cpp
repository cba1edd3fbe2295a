#include "moditer/lfun.hpp"

#include "moditer/errors.hpp"
#include "moditer/identities.hpp"
#include "moditer/iterint.hpp"
#include "moditer/simd.hpp"

#include <algorithm>
#include <cmath>

namespace moditer {

namespace {

// W_1[U] for U = 0..C: the inner sums of the nested convolution times U^{-s_1}.
std::vector<cplx> outer_shells(const LSpec& spec, long C) {
    const std::size_t n = spec.forms.size();
    const std::size_t len = static_cast<std::size_t>(C) + 1;
    std::vector<double> wre(len, 0.0), wim(len, 0.0);  // W stored reversed: R[j] = W[C - j]
    std::vector<double> are(len), aim(len);
    std::vector<double> nre(len), nim(len);
    auto coeff = [&](std::size_t form, std::size_t m) -> cplx {
        const auto& c = spec.forms[form].coeffs;
        return m < c.size() ? c[m] : cplx{};
    };
    {
        const std::size_t k = n - 1;
        for (std::size_t U = 1; U <= static_cast<std::size_t>(C); ++U) {
            const cplx w = coeff(k, U) * cpow(static_cast<double>(U), -spec.s[k]);
            wre[C - U] = w.real();
            wim[C - U] = w.imag();
        }
    }
    for (std::size_t k = n - 1; k-- > 0;) {
        for (std::size_t m = 0; m < len; ++m) {
            const cplx a = coeff(k, m);
            are[m] = a.real();
            aim[m] = a.imag();
        }
        std::fill(nre.begin(), nre.end(), 0.0);
        std::fill(nim.begin(), nim.end(), 0.0);
        for (std::size_t U = 2; U <= static_cast<std::size_t>(C); ++U) {
            // sum_{m=1}^{U-1} a_m W[U - m]; W[U - m] = R[C - U + m]
            const std::size_t cnt = U - 1;
            const std::size_t off = static_cast<std::size_t>(C) - U + 1;
            const cplx dot = simd::complex_dot({std::span<const double>(are).subspan(1, cnt),
                                                std::span<const double>(aim).subspan(1, cnt)},
                                               {std::span<const double>(wre).subspan(off, cnt),
                                                std::span<const double>(wim).subspan(off, cnt)});
            const cplx w = dot * cpow(static_cast<double>(U), -spec.s[k]);
            nre[C - U] = w.real();
            nim[C - U] = w.imag();
        }
        wre.swap(nre);
        wim.swap(nim);
    }
    std::vector<cplx> W(len);
    for (std::size_t U = 0; U < len; ++U) W[U] = {wre[C - U], wim[C - U]};
    return W;
}

cplx prefactor(const LSpec& spec) {
    cplx S{};
    for (const auto& x : spec.s) S += x;
    return cpow(-2.0 * kPi * kI, -S);
}

// Neville extrapolation of values v(h_i) to h = 0; also returns the change from the last order.
std::pair<cplx, double> extrapolate_to_zero(const std::vector<double>& h, std::vector<cplx> v) {
    const std::size_t n = h.size();
    cplx prev = v[0];
    double change = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        for (std::size_t i = 0; i + k < n; ++i) v[i] = (h[i + k] * v[i] - h[i] * v[i + 1]) / (h[i + k] - h[i]);
        change = std::abs(v[0] - prev);
        prev = v[0];
    }
    return {v[0], change};
}

}  // namespace

std::string method_name(LMethod m) {
    switch (m) {
        case LMethod::Sharp: return "sharp";
        case LMethod::Smoothed: return "smoothed";
        case LMethod::Auto: return "auto";
    }
    return "?";
}

void LSpec::validate() const {
    if (forms.empty()) throw DomainError("L-function needs at least one form");
    if (forms.size() != s.size()) throw DomainError("one exponent per form is required");
    for (const auto& f : forms) {
        if (f.level != forms.front().level) throw DomainError("all forms must share one level");
        if (f.coeffs.empty()) throw DomainError("form has no coefficients");
    }
}

LResult L_direct(const LSpec& spec, long cutoff, LMethod method, bool allow_outside) {
    spec.validate();
    if (cutoff < 2) throw DomainError("cutoff must be >= 2");
    for (const auto& f : spec.forms)
        if (!f.finite_expansion && static_cast<long>(f.coeffs.size()) <= cutoff)
            throw DomainError("form '" + f.label + "' has " + std::to_string(f.coeffs.size()) +
                              " coefficients; the cutoff needs " + std::to_string(cutoff + 1));
    const std::size_t n = spec.forms.size();
    int kmax = 0;
    bool cuspidal = true;
    for (const auto& f : spec.forms) {
        kmax = std::max(kmax, f.weight);
        cuspidal = cuspidal && f.a0() == cplx{};
    }
    if (method == LMethod::Auto) {
        if (spec.s[0].real() > kmax + static_cast<double>(n))
            method = LMethod::Sharp;
        else if (cuspidal)
            method = LMethod::Smoothed;
        else if (allow_outside)
            method = LMethod::Sharp;
        else
            throw DomainError("Re s_1 = " + format15(spec.s[0].real()) + " is outside the direct-summation region (> " +
                              std::to_string(kmax + static_cast<int>(n)) + ") and the forms are not all cuspidal");
    }
    if (method == LMethod::Smoothed && !cuspidal)
        throw DomainError("smoothed summation is only valid for cusp forms");

    const std::vector<cplx> W = outer_shells(spec, cutoff);
    const cplx pref = prefactor(spec);
    LResult out;
    out.method = method;
    out.cutoff = cutoff;
    if (method == LMethod::Sharp) {
        // ascending shells, compensated summation
        cplx sum{}, comp{};
        for (long U = 1; U <= cutoff; ++U) {
            const cplx y = W[U] - comp;
            const cplx t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        // tail from the decay rate between the windows [0.45C, 0.5C] and [0.9C, C]
        auto window = [&](double lo, double hi) {
            double acc = 0;
            long cnt = 0;
            for (long U = static_cast<long>(lo * cutoff); U <= static_cast<long>(hi * cutoff); ++U, ++cnt)
                acc += std::abs(W[U]);
            return cnt ? acc / cnt : 0.0;
        };
        const double w1 = window(0.45, 0.5), w2 = window(0.9, 1.0);
        const double d = (w1 > 0 && w2 > 0) ? std::log2(w1 / w2) : INFINITY;
        double tail = 0.0;
        if (w2 > 0) tail = d > 1.05 ? cutoff * w2 / (d - 1.0) : INFINITY;
        out.value = pref * sum;
        out.tail = std::abs(pref) * tail;
        out.last_shell = std::abs(pref * W[cutoff]);
        return out;
    }
    // smoothed: S(X) = sum W[U] e^{-U/X} is a polynomial-like series in h = 1/X
    const double Xmax = static_cast<double>(cutoff) / 36.0;
    const int points = 8;
    std::vector<double> h;
    std::vector<cplx> v;
    for (int k = 1; k <= points; ++k) {
        const double X = Xmax * k / points;
        cplx sum{};
        for (long U = 1; U <= cutoff; ++U) sum += W[U] * std::exp(-static_cast<double>(U) / X);
        h.push_back(1.0 / X);
        v.push_back(sum);
    }
    const auto [val, change] = extrapolate_to_zero(h, v);
    out.value = pref * val;
    out.tail = std::abs(pref) * change;
    out.last_shell = std::abs(pref * W[cutoff]) * std::exp(-36.0);
    return out;
}

TermsValue evaluate_terms(const TermList& terms, const std::vector<ModularForm>& forms, cplx s,
                          const NumericsConfig& cfg) {
    std::vector<cplx> a0;
    for (const auto& f : forms) a0.push_back(f.a0());
    TermsValue out{};
    for (const auto& t : terms.terms) {
        const cplx c = t.coef.evaluate(s, a0, cfg.pole_eps);
        if (c == cplx{}) continue;
        const auto ex = t.target.exponents(s);
        if (terms.kind == TermList::Kind::L) {
            LSpec spec;
            for (std::size_t i = 0; i < t.target.slots.size(); ++i) {
                spec.forms.push_back(forms.at(t.target.slots[i] - 1));
                spec.s.push_back(ex[i]);
            }
            const LResult r = L_direct(spec, cfg.cutoff);
            out.value += c * r.value;
            out.error += std::abs(c) * r.tail;
        } else {
            IterSpec spec;
            for (std::size_t i = 0; i < t.target.slots.size(); ++i) spec.kernels.push_back({forms.at(t.target.slots[i] - 1), ex[i]});
            const IterResult r = iterint_full(spec, cfg);
            out.value += c * r.value;
            out.error += std::abs(c) * r.error;
        }
        ++out.evaluated;
    }
    return out;
}

ContinuedResult L_continued(const std::vector<ModularForm>& forms, cplx s, const std::vector<long>& alphas,
                            const NumericsConfig& cfg) {
    if (forms.empty()) throw DomainError("L-function needs at least one form");
    if (alphas.size() + 1 != forms.size()) throw DomainError("need alpha_2..alpha_n, one per form after the first");
    const TermsValue v = evaluate_terms(thS_expand(static_cast<int>(forms.size()), alphas), forms, s, cfg);
    return {v.value, v.error, v.evaluated};
}

}  // namespace moditer
