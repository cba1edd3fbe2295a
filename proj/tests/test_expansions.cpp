#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "moditer/identities.hpp"
#include "moditer/iterint.hpp"
#include "moditer/lfun.hpp"

using namespace moditer;

// Numerical checks of the expansions: iterated integrals on one side, multiple
// L-values on the other, each computed by its own evaluator.

namespace {

const ModularForm& E4() {
    static const ModularForm f = builtin_modular_form("E4", 2400);
    return f;
}
const ModularForm& Delta() {
    static const ModularForm f = builtin_modular_form("delta", 2400);
    return f;
}

IterResult I2(const ModularForm& f1, const ModularForm& f2, cplx s1, cplx s2) {
    return iterint_full({{{f1, s1}, {f2, s2}}}, NumericsConfig{});
}

}  // namespace

TEST_CASE("I as a combination of L-values, cusp forms") {
    for (auto [s, a] : {std::pair{8.0, 2L}, std::pair{9.0, 3L}}) {
        CAPTURE(s);
        const cplx lhs = I2(Delta(), Delta(), s, double(a)).value;
        const TermsValue rhs = evaluate_terms(thI_expand(2, {a}), {Delta(), Delta()}, s, NumericsConfig{});
        CHECK(std::abs(lhs - rhs.value) < 1e-5 * std::abs(lhs));
    }
}

TEST_CASE("I as a combination of L-values, Eisenstein series") {
    const cplx s{8.0};
    const cplx lhs = I2(E4(), E4(), s, 2.0).value;
    // the five terms written out
    NumericsConfig cfg;
    auto L = [&](std::vector<ModularForm> f, std::vector<cplx> ex) { return L_direct({std::move(f), std::move(ex)}, cfg.cutoff).value; };
    const cplx a0 = 1.0;
    const cplx five = gamma(s + 1.0) * L({E4(), E4()}, {s + 1.0, 1.0}) + gamma(s) * L({E4(), E4()}, {s, 2.0}) -
                      a0 * gamma(s + 2.0) / 2.0 * L({E4()}, {s + 2.0}) + a0 * gamma(s + 1.0) * L({E4()}, {s + 2.0}) +
                      a0 * gamma(s) * L({E4()}, {s + 2.0});
    CHECK(std::abs(lhs - five) < 1e-4 * std::abs(lhs));
    const TermsValue generic = evaluate_terms(thI_expand(2, {2}), {E4(), E4()}, s, cfg);
    CHECK(std::abs(generic.value - five) < 1e-12 * std::abs(five));
}

TEST_CASE("L as a combination of iterated integrals, Eisenstein series") {
    const cplx s{8.0};
    NumericsConfig cfg;
    const cplx lhs = gamma(s) * L_direct({{E4(), E4()}, {s, 2.0}}, cfg.cutoff).value;  // Gamma^{(s,2)} = Gamma(s)
    const cplx I1 = iterint_full({{{E4(), s + 2.0}}}, cfg).value;
    const cplx rhs = I2(E4(), E4(), s, 2.0).value - I2(E4(), E4(), s + 1.0, 1.0).value + 0.5 * I1 + I1 / (s * (s + 1.0));
    CHECK(std::abs(lhs - rhs) < 1e-4 * std::abs(lhs));
    const ContinuedResult c = L_continued({E4(), E4()}, s, {2}, cfg);
    CHECK(std::abs(gamma(s) * c.value - rhs) < 1e-10 * std::abs(rhs));
}

TEST_CASE("round trip through both expansions, cusp forms") {
    const cplx s{9.0};
    NumericsConfig cfg;
    const std::vector<ModularForm> forms{Delta(), Delta()};
    const cplx direct = L_direct({forms, {s, 2.0}}, cfg.cutoff).value;
    const TermList ths = thS_expand(2, {2});
    cplx back{};
    for (const auto& t : ths.terms) {
        const cplx c = t.coef.evaluate(s, std::vector<cplx>{0.0, 0.0});
        if (c == cplx{}) continue;
        std::vector<ModularForm> sub;
        for (int slot : t.target.slots) sub.push_back(forms[slot - 1]);
        back += c * evaluate_terms(thI_expand(static_cast<int>(sub.size()), t.target.rest), sub,
                                   s + double(t.target.s_offset), cfg)
                        .value;
    }
    CHECK(std::abs(back - direct) < 1e-5 * std::abs(direct));
}
