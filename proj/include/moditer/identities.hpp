#pragma once

#include "moditer/numerics.hpp"
#include "moditer/qseries.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace moditer {

/// Split of n slots into l cuspidal slots with n_1, ..., n_{l+1} constant slots
/// around them: n_1 constants, cusp, n_2 constants, cusp, ..., cusp, n_{l+1} constants.
struct Composition {
    int n = 0;
    std::vector<int> parts;  // n_1..n_{l+1}

    int l() const { return static_cast<int>(parts.size()) - 1; }
    /// 1-based positions of the cuspidal slots (n_1', ..., n_l').
    std::vector<int> cusp_positions() const;
    int trailing() const { return parts.back(); }
    bool pure() const;  // every slot cuspidal
    void validate() const;
};

/// All compositions of n with l cuspidal slots, in lexicographic order of parts.
std::vector<Composition> compositions(int n, int l);

/// j_2..j_m with 0 <= j_r < bounds_r + j_{r+1}, j_{m+1} = 0; bounds[0] is bound_2.
/// Generated right to left, returned sorted lexicographically.
std::vector<std::vector<long>> enumerate_jtuples(const std::vector<long>& bounds);

struct IndexPair {
    Composition comp;
    std::vector<long> j;  // j_2..j_{n_l'}
};
/// All (composition, j-tuple) pairs for length n, l slots, alphas = alpha_2..alpha_n.
/// The bound at the last cuspidal slot is the merged alpha_{n_l', n}.
std::vector<IndexPair> enumerate_indices(int n, int l, const std::vector<long>& alphas);

struct ABValue {
    cplx A;
    cplx B;
    bool pole = false;
};
/// A = product of a_0 over the constant slots; B = 1 / (s_n (s_n + s_{n-1}) ...) over
/// the trailing constant block (1 if empty). pole is set when a partial sum vanishes.
ABValue coeff_A_B(const Composition& comp, std::span<const cplx> a0, std::span<const cplx> s, double pole_eps = 1e-12);

/// Exact coefficient in a free variable s:
///   rat * Gamma(s)^gamma_pow * prod (s + shift)^exp * prod a0[slot]^pow.
struct Coefficient {
    Rational rat = 1;
    int gamma_pow = 0;
    std::map<int, int> linear;  // shift -> exponent
    std::map<int, int> a0;      // 1-based form index -> power

    Coefficient& operator*=(const Coefficient& o);
    friend Coefficient operator*(Coefficient a, const Coefficient& b) { return a *= b; }
    /// Gamma(s + shift)^pow rewritten as Gamma(s)^pow times linear factors.
    Coefficient& times_gamma(int shift, int pow = 1);
    /// (s+shift)(s+shift+1)...(s+shift+len-1)
    Coefficient& times_rising(int shift, long len);
    Coefficient& times_a0(int form, int pow = 1);

    bool same_shape(const Coefficient& o) const;
    /// Throws PoleError when a negative power of a vanishing factor appears.
    cplx evaluate(cplx s, std::span<const cplx> a0_values, double pole_eps = 1e-12) const;
    /// Exact value at an integer s (a0 factors must be absent). Throws PoleError.
    Rational exact_at(long s) const;
    std::string to_string() const;
};

/// Exponents (s + s_offset, rest...) on the forms slots[i] (1-based).
struct Target {
    std::vector<int> slots;
    long s_offset = 0;
    std::vector<long> rest;

    std::vector<cplx> exponents(cplx s) const;
    auto operator<=>(const Target&) const = default;
};

struct Term {
    Coefficient coef;
    Target target;
};

/// Linear combination of L-values (kind L) or iterated integrals (kind I).
struct TermList {
    enum class Kind { L, I } kind = Kind::L;
    std::vector<Term> terms;

    void add(const Coefficient& c, const Target& t) { terms.push_back({c, t}); }
    void append(const TermList& o, const Coefficient& factor);
    /// Merges equal targets with equal coefficient shape, drops zero terms, sorts.
    void simplify();
    /// Drops terms carrying a0 of a form whose constant term is zero.
    void drop_vanishing(std::span<const cplx> a0_values);
    std::string to_string() const;
};

/// I(f_1..f_n; s, alpha) as a combination of multiple L-values.
TermList thI_expand(int n, const std::vector<long>& alphas);
/// L(f_1..f_n; s, alpha) as a combination of iterated integrals I(f_..; s + j, ...).
TermList thS_expand(int n, const std::vector<long>& alphas);

/// The iterated integral of a word whose constant slots carry the form 1 and
/// cuspidal slots carry cusp parts (positions given 1-based, last position = word
/// length) written as L-values. Exponents (s + s_offset, rest...).
TermList mixed_to_L(const std::vector<int>& slots, const std::vector<int>& cusp_positions, long s_offset,
                    const std::vector<long>& rest);

/// Term of the F <-> F~ binomial transforms: c z^zpow F(...; -, alpha) or F~.
struct FTerm {
    Rational c;
    long zpow = 0;
    bool tilde = false;
    std::vector<long> alpha;  // alpha_2..alpha_n
    auto operator<=>(const FTerm&) const = default;
};
/// F -> sum of z^j F~ (with C(alpha_k + j_{k+1} - 1, j_k)).
std::vector<FTerm> F_to_Ftilde(const std::vector<FTerm>& in);
/// F~ -> sum of z^j F (with (-1)^{j_k} C(alpha_k - 1, j_k)).
std::vector<FTerm> Ftilde_to_F(const std::vector<FTerm>& in);
/// Merges equal (zpow, tilde, alpha) and drops zeros.
std::vector<FTerm> normalise(std::vector<FTerm> in);

Rational binomial(long n, long k);
Rational factorial(long n);

}  // namespace moditer
