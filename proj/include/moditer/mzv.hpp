#pragma once

#include "moditer/numerics.hpp"

#include <string>
#include <vector>

namespace moditer {

/// zeta(k_1, ..., k_d) = sum_{0 < n_1 < ... < n_d} n_1^{-k_1} ... n_d^{-k_d};
/// admissible when k_d >= 2. The other common convention (n_1 > ... > n_d,
/// so that zeta(2,1) = zeta(3)) is reached through from_descending.
struct MzvIndex {
    std::vector<int> k;

    int weight() const;
    int depth() const { return static_cast<int>(k.size()); }
    bool admissible() const;
    /// DomainError for empty or non-positive entries; DivergenceError when inadmissible.
    void validate() const;
    std::string to_string() const;

    static MzvIndex from_descending(std::vector<int> k);
    /// "2,1" read in the given convention.
    static MzvIndex parse(const std::string& text, bool descending);
};

struct MzvValue {
    double value = 0.0;
    double error = 0.0;
};

/// Nested partial sums up to n_d <= cutoff plus an integral estimate of the
/// remaining tail in the last variable.
MzvValue mzv_series(const MzvIndex& idx, long cutoff = 1000000);

/// Iterated integral of omega_1 omega_0^{k_1 - 1} ... omega_1 omega_0^{k_d - 1}
/// over [0, 1] (first letter innermost at 0), split at 1/2 with the upper half
/// integrated backwards from 1.
MzvValue mzv_p1_integral(const MzvIndex& idx, const NumericsConfig& cfg);

struct ModularMzv {
    MzvValue value;  // prefactor * raw
    cplx raw;        // the iterated integral of F dz, (G - 16F) dz from i-infinity to 0
    cplx prefactor;  // (2 pi i)^w 16^d
};
/// Pullback along lambda = 16F/G of the same word, on the imaginary axis from
/// i-infinity to 0, split at i/2; the lower half is mapped to [i/2, i-infinity)
/// by z -> -1/(4z).
ModularMzv mzv_modular_integral(const MzvIndex& idx, const NumericsConfig& cfg);

/// lambda(z) = 16 F(z) / G(z).
cplx hauptmodul_lambda(cplx z, const NumericsConfig& cfg);

}  // namespace moditer
