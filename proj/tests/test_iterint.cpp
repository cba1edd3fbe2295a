#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "moditer/errors.hpp"
#include "moditer/iterint.hpp"

#include <functional>
#include <random>

using namespace moditer;

namespace {

NumericsConfig cfg_default() { return NumericsConfig{}; }

KernelSpec kern(const ModularForm& f, cplx s) { return {f, s}; }

bool close(cplx a, cplx b, double rel, double abs_floor = 0.0) {
    return std::abs(a - b) <= rel * std::max(std::abs(b), abs_floor);
}

// Real-variable Mellin oracle for a level-1 cusp form of even weight k:
// I(f; s) = -i^s int_1^inf f(iy) (y^{s-1} + i^k y^{k-1-s}) dy, from f(i/y) = i^k y^k f(iy).
cplx mellin_oracle(const ModularForm& f, cplx s) {
    const double k = f.weight;
    const double sign = (f.weight / 2) % 2 == 0 ? 1.0 : -1.0;
    // plain composite Gauss-Legendre (5 nodes) on [1, 12] in y, series summed by hand
    const double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
    const double ws[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                          0.2369268850561891};
    cplx acc{};
    const int panels = 2000;
    const double a = 1.0, b = 12.0, h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        for (int i = 0; i < 5; ++i) {
            const double y = a + h * (p + 0.5 * (xs[i] + 1.0));
            double fy = 0;
            for (std::size_t m = 1; m < f.coeffs.size(); ++m) fy += f.coeffs[m].real() * std::exp(-2 * kPi * m * y);
            acc += 0.5 * h * ws[i] * fy * (std::pow(y, s - 1.0) + sign * std::pow(y, k - 1.0 - s));
        }
    }
    return -cpow(kI, s) * acc;
}

// all interleavings of two kernel lists
void shuffles(const std::vector<KernelSpec>& a, const std::vector<KernelSpec>& b, std::size_t i, std::size_t j,
              std::vector<KernelSpec>& cur, std::vector<IterSpec>& out) {
    if (i == a.size() && j == b.size()) {
        out.push_back({cur});
        return;
    }
    if (i < a.size()) {
        cur.push_back(a[i]);
        shuffles(a, b, i + 1, j, cur, out);
        cur.pop_back();
    }
    if (j < b.size()) {
        cur.push_back(b[j]);
        shuffles(a, b, i, j + 1, cur, out);
        cur.pop_back();
    }
}

}  // namespace

TEST_CASE("single exponential kernel from i-infinity") {
    ModularForm e;
    e.coeffs = {0.0, 1.0};
    e.finite_expansion = true;
    const auto r = nested_quadrature({{kern(e, 1.0)}}, Endpoint::infinity(), kI, cfg_default());
    const cplx expect = std::exp(-2 * kPi) / (2 * kPi * kI);
    CHECK(close(r.value, expect, 1e-12));
    CHECK(std::abs(expect - cplx{0, -2.9724e-4}) < 1e-7);
}

TEST_CASE("constant kernels: quadrature against the closed form") {
    const auto r = nested_quadrature({{KernelSpec::one(-2.0)}}, Endpoint::infinity(), kI, cfg_default());
    CHECK(close(r.value, 0.5, 1e-10));
    const cplx s1[] = {-1.0, -1.0};
    CHECK(close(ones_closed_form(kI, s1), -0.5, 1e-15));
    const cplx s2[] = {-2.0};
    CHECK(close(ones_closed_form(kI / 2.0, s2), 2.0, 1e-15));
    const cplx s3[] = {1.0, -1.0};
    CHECK_THROWS_AS(ones_closed_form(kI, s3), PoleError);
    try {
        ones_closed_form(kI, s3);
    } catch (const PoleError& e) {
        CHECK(e.divisor() == "s_1+s_2=0");
    }
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> d(-1.5, 1.5);
    for (int t = 0; t < 5; ++t) {
        // trailing partial sums kept in (-3, -0.5)
        const cplx s3v{-0.5 - std::abs(d(rng)), d(rng) * 0.3};
        const cplx s2v = cplx{-0.6 - 0.2 * std::abs(d(rng)), d(rng) * 0.3} - s3v;
        const cplx sv[] = {cplx{d(rng) * 0.2, d(rng) * 0.2} - 0.4, s2v, s3v};
        IterSpec spec{{KernelSpec::one(sv[0]), KernelSpec::one(sv[1]), KernelSpec::one(sv[2])}};
        const cplx b{0.3 * d(rng), 1.0 + 0.3 * std::abs(d(rng))};
        const auto q = nested_quadrature(spec, Endpoint::infinity(), b, cfg_default());
        CHECK(close(q.value, ones_closed_form(b, sv), 1e-8));
    }
    IterSpec bad{{KernelSpec::one(-1.0), KernelSpec::one(0.5)}};
    CHECK_THROWS_AS(nested_quadrature(bad, Endpoint::infinity(), kI, cfg_default()), DivergenceError);
}

TEST_CASE("length-1 modular integral against a real Mellin oracle") {
    const auto D = builtin_modular_form("delta", 64);
    for (cplx s : {cplx{6.0}, cplx{8.0}, cplx{2.0}, cplx{5.5, 0.7}}) {
        const auto r = iterint_full({{kern(D, s)}}, cfg_default());
        CHECK(close(r.value, mellin_oracle(D, s), 1e-9));
    }
}

TEST_CASE("functional equation for delta") {
    const auto D = builtin_modular_form("delta", 64);
    for (double s : {5.0, 5.5, 6.5}) {
        const cplx lhs = completed_Z({{kern(D, s)}}, cfg_default()).value;
        const cplx rhs = minus_one_pow(s) * completed_Z(fricke_dual({{kern(D, s)}}), cfg_default()).value;
        CHECK(close(lhs, rhs, 1e-9));
    }
}

TEST_CASE("functional equation at level 4 with constant terms, length 2") {
    const auto F = builtin_modular_form("F", 64);
    const auto G = builtin_modular_form("G", 64);
    for (auto [s1, s2] : {std::pair<cplx, cplx>{{0.7, 0.3}, {1.4, -0.2}}, {{2.5, 0.0}, {0.3, 0.1}}}) {
        IterSpec spec{{kern(F, s1), kern(G, s2)}};
        const cplx lhs = completed_Z(spec, cfg_default()).value;
        const cplx rhs = minus_one_pow(s1 + s2) * completed_Z(fricke_dual(spec), cfg_default()).value;
        CHECK(close(lhs, rhs, 1e-9));
    }
}

TEST_CASE("split point independence: direct quadrature agrees for cusp forms") {
    // for two cusp forms I_{i inf}^b can be integrated directly; compare with composition at c
    const auto D = builtin_modular_form("delta", 64);
    IterSpec spec{{kern(D, {3.0, 0.5}), kern(D, {6.0, -1.0})}};
    const cplx b{0.0, 0.7};
    const auto direct = nested_quadrature(spec, Endpoint::infinity(), b, cfg_default());
    // composition: sum_j I_c^b(f_1..f_j) I_{i inf}^c(f_{j+1}..f_n)
    const cplx c{0.0, 1.3};
    cplx comp{};
    for (int j = 0; j <= 2; ++j) {
        IterSpec lo, hi;
        lo.kernels.assign(spec.kernels.begin(), spec.kernels.begin() + j);
        hi.kernels.assign(spec.kernels.begin() + j, spec.kernels.end());
        const cplx lv = lo.kernels.empty() ? cplx{1.0} : nested_quadrature(lo, Endpoint::point(c), b, cfg_default()).value;
        const cplx hv = hi.kernels.empty() ? cplx{1.0} : nested_quadrature(hi, Endpoint::infinity(), c, cfg_default()).value;
        comp += lv * hv;
    }
    CHECK(close(direct.value, comp, 1e-9));
}

TEST_CASE("shuffle, reversal and composition on finite segments") {
    const auto D = builtin_modular_form("delta", 64);
    const auto E4 = cusp_part(builtin_modular_form("E4", 64)).cusp;
    const auto E6 = cusp_part(builtin_modular_form("E6", 64)).cusp;
    const ModularForm pool[] = {D, E4, E6};
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> pick(0, 2);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    auto rand_kernel = [&] { return kern(pool[pick(rng)], {u(rng), u(rng)}); };
    const cplx a{0.1, 2.0}, m{0.1, 1.4}, b{0.1, 0.8};
    auto I = [&](const std::vector<KernelSpec>& k, cplx from, cplx to) {
        if (k.empty()) return cplx{1.0};
        return nested_quadrature({k}, Endpoint::point(from), to, cfg_default()).value;
    };
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<KernelSpec> A{rand_kernel()}, B{rand_kernel(), rand_kernel()};
        std::vector<IterSpec> sh;
        std::vector<KernelSpec> cur;
        shuffles(A, B, 0, 0, cur, sh);
        CHECK(sh.size() == 3);
        cplx sum{};
        for (const auto& s : sh) sum += I(s.kernels, a, b);
        CHECK(close(I(A, a, b) * I(B, a, b), sum, 1e-9));

        // reversal: path b -> a in the outer-first notation keeps the kernel order reversed
        std::vector<KernelSpec> rev(B.rbegin(), B.rend());
        CHECK(close(I(B, b, a), I(rev, a, b), 1e-9));

        // composition at m: innermost kernels run on the first leg
        std::vector<KernelSpec> W{rand_kernel(), rand_kernel(), rand_kernel()};
        cplx comp{};
        for (int j = 0; j <= 3; ++j) {
            std::vector<KernelSpec> outer(W.begin(), W.begin() + j), inner(W.begin() + j, W.end());
            comp += I(outer, m, b) * I(inner, a, m);
        }
        CHECK(close(I(W, a, b), comp, 1e-9));
    }
}

TEST_CASE("poles on divisors only") {
    const auto E4 = builtin_modular_form("E4", 64);
    try {
        iterint_full({{kern(E4, 4.0)}}, cfg_default());
        FAIL("expected a pole");
    } catch (const PoleError& e) {
        CHECK(e.divisor() == "s_1=k_1");
    }
    try {
        iterint_full({{kern(E4, 0.0)}}, cfg_default());
        FAIL("expected a pole");
    } catch (const PoleError& e) {
        CHECK(e.divisor() == "s_1=0");
    }
    CHECK_NOTHROW(iterint_full({{kern(E4, 2.5)}}, cfg_default()));
    const auto D = builtin_modular_form("delta", 64);
    CHECK_NOTHROW(iterint_full({{kern(D, 12.0)}}, cfg_default()));
    CHECK_NOTHROW(iterint_full({{kern(D, 0.0)}}, cfg_default()));
    IterSpec two{{kern(E4, 1.0), kern(E4, 2.0)}};
    CHECK(pole_divisors(two).size() == 4);
    CHECK_THROWS_AS(iterint_full({{kern(E4, 1.0), kern(E4, -1.0)}}, cfg_default()), PoleError);
}

TEST_CASE("length-1 E4 integral has the expected closed form") {
    // I = -i^s [ int_1^inf E4^0 (y^{s-1} + y^{3-s}) dy - 1/s - 1/(4-s) ]
    const auto E4 = builtin_modular_form("E4", 64);
    const auto cusp = cusp_part(E4).cusp;
    for (cplx s : {cplx{2.5}, cplx{6.0, 0.5}}) {
        const cplx oracle = mellin_oracle(cusp, s) - cpow(kI, s) * (-1.0 / s - 1.0 / (4.0 - s));
        CHECK(close(iterint_full({{kern(E4, s)}}, cfg_default()).value, oracle, 1e-9));
    }
}

TEST_CASE("tilde integral Fourier series") {
    const auto D = builtin_modular_form("delta", 64);
    const auto cfg = cfg_default();
    // binomial oracle: (z1 - z)^{alpha-1} expanded into plain kernels
    auto oracle_len1 = [&](int alpha, cplx z) {
        cplx acc{};
        double binom = 1;
        for (int j = 0; j < alpha; ++j) {
            // C(alpha-1, j) z1^{alpha-1-j} (-z)^j
            const auto r = nested_quadrature({{kern(D, double(alpha - j))}}, Endpoint::infinity(), z, cfg);
            acc += binom * std::pow(-z, j) * r.value;
            binom = binom * (alpha - 1 - j) / (j + 1);
        }
        return acc;
    };
    for (cplx z : {kI, cplx{0.3, 0.9}}) {
        const cplx f = tilde_I_fourier({{D, 2}}, z, cfg);
        CHECK(close(f, oracle_len1(2, z), 1e-8));
        CHECK(close(tilde_I_fourier({{D, 2}}, z + 1.0, cfg), f, 1e-12));
    }
    // length 1 closed form: -Gamma(alpha)(-2 pi i m)^{-alpha} q^m summed
    CHECK(std::abs(tilde_I_fourier({{D, 3}}, cplx{0, 8.0}, cfg)) < 1e-20);

    // length 3 with a constant in the middle, vs. the expanded nested quadrature
    // (z1 - z)^{a1-1}(z2 - z1)^{a2-1}(z3 - z2)^{a3-1}
    const int a1 = 2, a2 = 1, a3 = 2;
    const cplx z{0.1, 0.9};
    cplx oracle{};
    for (int j1 = 0; j1 < a1; ++j1)
        for (int j2 = 0; j2 < a2; ++j2)
            for (int j3 = 0; j3 < a3; ++j3) {
                auto C = [](int n, int k) {
                    double c = 1;
                    for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
                    return c;
                };
                // z1^{a1-1-j1} (-z)^{j1} * z2^{a2-1-j2} (-z1)^{j2} * z3^{a3-1-j3} (-z2)^{j3}
                const double sign = ((j2 + j3) % 2) ? -1.0 : 1.0;
                const double e1 = a1 - 1 - j1 + j2, e2 = a2 - 1 - j2 + j3, e3 = a3 - 1 - j3;
                IterSpec spec{{kern(D, e1 + 1), KernelSpec::one(e2 + 1), kern(D, e3 + 1)}};
                const cplx v = nested_quadrature(spec, Endpoint::infinity(), z, cfg).value;
                oracle += C(a1 - 1, j1) * C(a2 - 1, j2) * C(a3 - 1, j3) * sign * std::pow(-z, j1) * v;
            }
    const cplx fourier = tilde_I_fourier({{D, a1}, {std::nullopt, a2}, {D, a3}}, z, cfg);
    CHECK(close(fourier, oracle, 1e-8));
    CHECK_THROWS_AS(tilde_I_fourier({{builtin_modular_form("E4", 10), 2}}, kI, cfg), DomainError);
    CHECK_THROWS_AS(tilde_I_fourier({{D, 2}, {std::nullopt, 1}}, kI, cfg), DomainError);
}
