#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>

namespace moditer {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr cplx kI{0.0, 1.0};

/// Reproducibility contract for every numeric result. All evaluators take it by
/// const reference; nothing reads global state.
struct NumericsConfig {
    int order = 64;             // q-expansion truncation M
    double height = 12.0;       // Im z at which paths towards i-infinity are cut
    int panels = 64;            // initial panels per path segment
    int max_panels = 4096;      // refinement stops here with AccuracyError
    int nodes = 20;             // Gauss-Legendre nodes per panel
    double tol = 1e-8;          // relative tolerance for quadrature refinement
    long cutoff = 2000;         // shell cutoff for Dirichlet sums
    double pole_eps = 1e-10;    // distance below which a partial sum counts as zero
    bool refuse_truncation = true;  // evaluate_at throws when the tail bound exceeds tol

    /// Throws DomainError when an invariant is broken.
    void validate(int level = 1) const;

    /// Fixed tag describing the branch choices for z^s, (-1)^s and (-2 pi i)^s.
    static constexpr const char* branch_tag() { return "principal-log;(-1)^s=exp(i*pi*s)"; }
};

/// z^s = exp(s Log z) with the principal logarithm, Arg in (-pi, pi].
cplx cpow(cplx z, cplx s);

/// (-1)^s := exp(i pi s).
cplx minus_one_pow(cplx s);

/// True when z is within eps of an integer n <= 0.
bool near_nonpositive_integer(cplx z, double eps = 1e-12);

cplx log_gamma(cplx z);
cplx gamma(cplx z);

/// Gamma^{(s_1..s_n)} = (-1)^n Gamma(s_1) ... Gamma(s_n).
cplx signed_gamma(std::span<const cplx> args);

/// Stable formatting at 15 significant digits, used by all reports.
std::string format15(double x);
double round15(double x);

}  // namespace moditer
