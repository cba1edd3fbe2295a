#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "moditer/simd.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace moditer::simd;

namespace {

struct Soa {
    std::vector<double> re, im;
    explicit Soa(std::size_t n) : re(n), im(n) {}
    CSpan view() const { return {re, im}; }
    MutCSpan mut() { return {re, im}; }
};

Soa random_soa(std::size_t n, std::mt19937& rng, double scale) {
    std::uniform_real_distribution<double> d(-scale, scale);
    Soa s(n);
    for (std::size_t i = 0; i < n; ++i) s.re[i] = d(rng), s.im[i] = d(rng);
    return s;
}

}  // namespace

TEST_CASE("reports an isa") {
    const auto name = isa_name(active_isa());
    CHECK((name == "avx2" || name == "scalar"));
}

TEST_CASE("scalar horner matches std::complex") {
    std::mt19937 rng(1);
    auto c = random_soa(17, rng, 3.0);
    auto q = random_soa(5, rng, 0.7);
    Soa out(5);
    scalar::qseries_eval(c.view(), q.view(), out.mut());
    for (std::size_t p = 0; p < 5; ++p) {
        std::complex<double> acc = 0, qp = 1, qq{q.re[p], q.im[p]};
        for (std::size_t k = 0; k < 17; ++k) acc += std::complex<double>{c.re[k], c.im[k]} * qp, qp *= qq;
        CHECK(std::abs(acc - std::complex<double>{out.re[p], out.im[p]}) <= 1e-12 * (1 + std::abs(acc)));
    }
}

#if defined(MODITER_HAVE_AVX2)
TEST_CASE("avx2 kernels agree with the scalar reference") {
    if (!cpu_has_avx2()) return;
    std::mt19937 rng(42);
    for (std::size_t npts : {0u, 1u, 3u, 4u, 5u, 8u, 13u, 64u}) {
        for (std::size_t ncoef : {1u, 2u, 7u, 65u, 300u}) {
            auto c = random_soa(ncoef, rng, 5.0);
            auto q = random_soa(npts, rng, 0.6);
            Soa a(npts), b(npts);
            scalar::qseries_eval(c.view(), q.view(), a.mut());
            avx2::qseries_eval(c.view(), q.view(), b.mut());
            for (std::size_t p = 0; p < npts; ++p) {
                const double mag = std::hypot(a.re[p], a.im[p]) + 1.0;
                CHECK(std::abs(a.re[p] - b.re[p]) <= 1e-13 * mag * ncoef);
                CHECK(std::abs(a.im[p] - b.im[p]) <= 1e-13 * mag * ncoef);
            }
        }
    }
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 100u, 1001u}) {
        auto x = random_soa(n, rng, 2.0);
        auto y = random_soa(n, rng, 2.0);
        const auto s = scalar::complex_dot(x.view(), y.view());
        const auto v = avx2::complex_dot(x.view(), y.view());
        CHECK(std::abs(s - v) <= 1e-13 * (1.0 + n));
    }
}
#endif

TEST_CASE("dispatched entry points match the reference") {
    std::mt19937 rng(3);
    auto c = random_soa(40, rng, 1.0);
    auto q = random_soa(9, rng, 0.5);
    Soa a(9), b(9);
    scalar::qseries_eval(c.view(), q.view(), a.mut());
    qseries_eval(c.view(), q.view(), b.mut());
    for (std::size_t p = 0; p < 9; ++p) CHECK(std::abs(a.re[p] - b.re[p]) <= 1e-12);
    const auto d1 = scalar::complex_dot(c.view(), c.view());
    const auto d2 = complex_dot(c.view(), c.view());
    CHECK(std::abs(d1 - d2) <= 1e-12 * (1 + std::abs(d1)));
}
