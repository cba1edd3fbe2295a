#pragma once

#include "moditer/forms.hpp"
#include "moditer/numerics.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace moditer {

/// One layer f(z) z^s dz/z. An empty form means the constant function 1.
struct KernelSpec {
    std::optional<ModularForm> form;
    cplx s;

    static KernelSpec one(cplx s) { return {std::nullopt, s}; }
    bool is_one() const { return !form.has_value(); }
    int weight() const { return form ? form->weight : 0; }
    cplx a0() const { return form ? form->a0() : cplx{1.0}; }
};

/// I(f_1, ..., f_n; s_1, ..., s_n) with f_1 outermost and f_n innermost
/// (the variable of f_n runs nearest the lower endpoint).
struct IterSpec {
    std::vector<KernelSpec> kernels;

    std::size_t size() const { return kernels.size(); }
    /// Common level of the forms (1 when all layers are constant).
    int level() const;
    /// Throws DomainError for empty specs, mixed levels or non-finite exponents.
    void validate() const;
};

/// Lower endpoint: a finite point in H or the cusp i-infinity.
struct Endpoint {
    bool infinite = true;
    cplx z;
    static Endpoint infinity() { return {true, {}}; }
    static Endpoint point(cplx z) { return {false, z}; }
};

struct IterResult {
    cplx value;
    double error = 0.0;          // quadrature change at the last refinement, summed over pieces
    int panels = 0;              // largest panel count used
    double height = 0.0;         // truncation height actually used (0 when none)
    std::vector<std::string> divisors;  // pole divisors consulted
};

/// Direct Gauss-Legendre evaluation of I_a^b along a straight path. With a = i-infinity:
/// a cuspidal innermost layer is cut at height Y (raised when the tail bound asks for it),
/// otherwise the path is the ray z = b/u and every trailing partial sum of exponents
/// over the non-decaying innermost block must have negative real part (DivergenceError).
IterResult nested_quadrature(const IterSpec& spec, Endpoint a, cplx b, const NumericsConfig& cfg);

/// b^{s_1+...+s_n} / (s_n (s_n + s_{n-1}) ... (s_n + ... + s_1)); PoleError on a vanishing factor.
cplx ones_closed_form(cplx b, std::span<const cplx> s, double pole_eps = 1e-10);

/// I_{i inf}^0 by splitting at i/sqrt(N): upper pieces near i-infinity, lower pieces
/// reflected by the Fricke involution, constant terms folded in closed form.
IterResult iterint_full(const IterSpec& spec, const NumericsConfig& cfg);

/// N^{(s_1+...+s_n)/2} I_{i inf}^0.
IterResult completed_Z(const IterSpec& spec, const NumericsConfig& cfg);

/// (f~_n, ..., f~_1; k_n - s_n, ..., k_1 - s_1).
IterSpec fricke_dual(const IterSpec& spec);

/// Divisors where iterint_full may have poles: s_m + ... + s_n = 0 and
/// s_1 + ... + s_m = k_1 + ... + k_m for m = 1..n.
std::vector<std::string> pole_divisors(const IterSpec& spec);

/// A slot of the tilde integral: a cuspidal form or the constant 1, with a positive integer exponent.
struct TildeSlot {
    std::optional<ModularForm> form;
    int alpha = 1;
};

/// Fourier-series evaluation of the tilde integral from i-infinity to z, kernels
/// f_i(z_i) (z_i - z_{i-1})^{alpha_i - 1} dz_i with z_0 = z. The last slot must be
/// a form and every form must be cuspidal (DomainError otherwise).
cplx tilde_I_fourier(const std::vector<TildeSlot>& slots, cplx z, const NumericsConfig& cfg);

}  // namespace moditer
