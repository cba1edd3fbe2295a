#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "moditer/errors.hpp"
#include "moditer/quadrature.hpp"

#include <cmath>

using namespace moditer;
using namespace moditer::quad;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    const auto& gl = rule(20);
    double sum_w = 0;
    for (double w : gl.w) sum_w += w;
    CHECK(sum_w == doctest::Approx(2.0).epsilon(1e-14));
    for (int d = 0; d <= 39; ++d) {
        double acc = 0;
        for (int i = 0; i < 20; ++i) acc += gl.w[i] * std::pow(gl.x[i], d);
        const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
        CHECK(std::abs(acc - exact) < 1e-13);
    }
}

TEST_CASE("integration matrix gives indefinite integrals at the nodes") {
    const auto& gl = rule(20);
    for (int d = 0; d <= 19; ++d) {
        for (int i = 0; i < 20; ++i) {
            double acc = 0;
            for (int j = 0; j < 20; ++j) acc += gl.S[i * 20 + j] * std::pow(gl.x[j], d);
            const double exact = (std::pow(gl.x[i], d + 1) - std::pow(-1.0, d + 1)) / (d + 1);
            CHECK(std::abs(acc - exact) < 1e-13);
        }
    }
}

TEST_CASE("iterated integrals of constants are simplex volumes") {
    // int_{0 < t1 < ... < tk < 1} dt = 1/k!
    auto nodes = discretise(segment(0.0, 1.0), uniform_mesh(3), rule(20));
    std::vector<std::vector<cplx>> letters(6, std::vector<cplx>(nodes.size(), 1.0));
    auto v = iterated(nodes, letters);
    double fact = 1;
    for (int k = 1; k <= 6; ++k) {
        fact *= k;
        CHECK(std::abs(v[k - 1] - 1.0 / fact) < 1e-14);
    }
}

TEST_CASE("ordering: innermost letter is nearest the start") {
    // int_{0<t1<t2<1} t1 dt1 dt2 = int_0^1 t2^2/2 = 1/6 ; reversed gives int t2 (t2) dt2... = 1/3
    auto nodes = discretise(segment(0.0, 1.0), uniform_mesh(2), rule(20));
    std::vector<cplx> t(nodes.z.begin(), nodes.z.end()), one(nodes.size(), 1.0);
    CHECK(std::abs(iterated(nodes, {t, one})[1] - 1.0 / 6.0) < 1e-14);
    CHECK(std::abs(iterated(nodes, {one, t})[1] - 1.0 / 3.0) < 1e-14);
}

TEST_CASE("complex path and exponential letters") {
    // int_a^b e^{2 pi i z} dz along a vertical segment
    const cplx a{0.3, 3.0}, b{0.3, 0.5};
    auto nodes = discretise(segment(a, b), uniform_mesh(8), rule(20));
    std::vector<cplx> e(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) e[i] = std::exp(2.0 * kPi * kI * nodes.z[i]);
    const cplx exact = (std::exp(2.0 * kPi * kI * b) - std::exp(2.0 * kPi * kI * a)) / (2.0 * kPi * kI);
    CHECK(std::abs(iterated(nodes, {e})[0] - exact) < 1e-14);
}

TEST_CASE("graded mesh resolves an algebraic endpoint singularity") {
    // int_0^1 t^{-1/2} dt = 2, int_0^1 (1-t)^{-0.7} dt = 1/0.3
    for (int P : {32, 64}) {
        auto n0 = discretise(segment(0.0, 1.0), graded_mesh_start(P), rule(20));
        std::vector<cplx> f(n0.size());
        for (std::size_t i = 0; i < n0.size(); ++i) f[i] = 1.0 / std::sqrt(n0.param[i]);
        CHECK(std::abs(iterated(n0, {f})[0] - 2.0) < 1e-10);
        // reversed parametrisation: t = 1 - u, u from 1 down to 0 graded at u = 0
        auto n1 = discretise(segment(1.0, 0.0), graded_mesh_start(P, 200), rule(20));
        f.assign(n1.size(), 0.0);
        for (std::size_t i = 0; i < n1.size(); ++i) f[i] = -std::pow(n1.param[i], -0.7);
        CHECK(std::abs(iterated(n1, {f})[0] - 1.0 / 0.3) < 1e-8);
    }
}

TEST_CASE("ray from infinity") {
    // int_{i inf}^{i} z^{-3} dz = [-z^{-2}/2] = -(i^{-2})/2 = 1/2
    auto nodes = discretise(ray_from_infinity(kI), graded_mesh_start(64), rule(20));
    std::vector<cplx> f(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) f[i] = std::pow(nodes.z[i], -3);
    CHECK(std::abs(iterated(nodes, {f})[0] - 0.5) < 1e-12);
}

TEST_CASE("refinement converges or throws") {
    auto r = refine([](int P) { return std::vector<cplx>{1.0 + 1.0 / (double(P) * P * P * P * P)}; }, 8, 4096, 1e-8);
    CHECK(std::abs(r.values[0] - 1.0) < 1e-8);
    CHECK_THROWS_AS(refine([](int P) { return std::vector<cplx>{1.0 * P}; }, 8, 64, 1e-8), AccuracyError);
}
