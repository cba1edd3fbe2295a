#pragma once

#include "moditer/forms.hpp"
#include "moditer/identities.hpp"
#include "moditer/numerics.hpp"

#include <string>
#include <vector>

namespace moditer {

/// L(f_1, ..., f_n; s_1, ..., s_n) =
///   (-2 pi i)^{-(s_1+...+s_n)} sum_{m_i > 0} a_{m_1} ... a_{m_n} / ((m_1+...+m_n)^{s_1} ... m_n^{s_n}).
struct LSpec {
    std::vector<ModularForm> forms;
    std::vector<cplx> s;
    void validate() const;
};

enum class LMethod {
    Sharp,     // plain sum over shells m_1 + ... + m_n <= cutoff
    Smoothed,  // shells weighted by e^{-U/X}, extrapolated to X -> infinity (cusp forms only)
    Auto,      // Sharp when Re s_1 > max weight + n, Smoothed for cusp forms, otherwise refuse
};

struct LResult {
    cplx value;
    double tail = 0.0;        // estimated truncation / extrapolation error
    double last_shell = 0.0;  // |contribution of the last shell| (Sharp) or of the cutoff region
    LMethod method = LMethod::Sharp;
    long cutoff = 0;
};

/// Truncated summation. With Auto, refuses (DomainError) outside the heuristic
/// convergence region unless allow_outside is set, in which case Sharp is used.
LResult L_direct(const LSpec& spec, long cutoff, LMethod method = LMethod::Auto, bool allow_outside = false);

/// Analytic continuation through the thS expansion: L(f_1..f_n; s, alpha_2..alpha_n)
/// as a combination of iterated integrals, each evaluated by iterint_full.
struct ContinuedResult {
    cplx value;
    double error = 0.0;
    std::size_t terms = 0;
};
ContinuedResult L_continued(const std::vector<ModularForm>& forms, cplx s, const std::vector<long>& alphas,
                            const NumericsConfig& cfg);

/// Numeric value of a symbolic term list at s: L-terms by L_direct (Auto, cutoff
/// from cfg), I-terms by iterint_full. Forms are indexed 1-based by the targets.
struct TermsValue {
    cplx value;
    double error = 0.0;
    std::size_t evaluated = 0;
};
TermsValue evaluate_terms(const TermList& terms, const std::vector<ModularForm>& forms, cplx s,
                          const NumericsConfig& cfg);

std::string method_name(LMethod m);

}  // namespace moditer
