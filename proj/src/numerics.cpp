#include "moditer/numerics.hpp"

#include "moditer/errors.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace moditer {

void NumericsConfig::validate(int level) const {
    if (order < 1) throw DomainError("order must be >= 1");
    if (panels < 4) throw DomainError("panels must be >= 4");
    if (max_panels < panels) throw DomainError("max_panels must be >= panels");
    if (nodes < 4 || nodes > 64) throw DomainError("nodes per panel must lie in [4, 64]");
    if (!(tol > 0.0)) throw DomainError("tolerance must be > 0");
    if (cutoff < 1) throw DomainError("cutoff must be >= 1");
    if (!(height > 1.0 / std::sqrt(static_cast<double>(level))))
        throw DomainError("height must exceed 1/sqrt(N)");
}

cplx cpow(cplx z, cplx s) {
    if (z == cplx{0.0, 0.0}) {
        if (s.real() > 0.0) return {0.0, 0.0};
        throw DomainError("0^s with Re(s) <= 0");
    }
    return std::exp(s * std::log(z));
}

cplx minus_one_pow(cplx s) { return std::exp(kI * kPi * s); }

bool near_nonpositive_integer(cplx z, double eps) {
    if (std::abs(z.imag()) > eps) return false;
    const double r = std::round(z.real());
    return r <= 0.0 && std::abs(z.real() - r) <= eps;
}

namespace {

// Lanczos, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

cplx log_gamma_right(cplx z) {
    // valid for Re z >= 0.5
    z -= 1.0;
    cplx x = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    const cplx t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

cplx log_gamma(cplx z) {
    if (near_nonpositive_integer(z, 0.0)) throw PoleError("Gamma pole", "Gamma argument in Z<=0");
    if (z.real() < 0.5) {
        // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return std::log(kPi) - std::log(std::sin(kPi * z)) - log_gamma_right(1.0 - z);
    }
    return log_gamma_right(z);
}

cplx gamma(cplx z) {
    if (z.imag() == 0.0 && z.real() > 0.0 && z.real() <= 170.0 && z.real() == std::floor(z.real()))
        return {std::tgamma(z.real()), 0.0};
    if (z.imag() == 0.0 && z.real() <= 170.0) {
        if (near_nonpositive_integer(z, 0.0)) throw PoleError("Gamma pole", "Gamma argument in Z<=0");
        return {std::tgamma(z.real()), 0.0};
    }
    return std::exp(log_gamma(z));
}

cplx signed_gamma(std::span<const cplx> args) {
    cplx out = (args.size() % 2 == 0) ? 1.0 : -1.0;
    for (const auto& a : args) out *= gamma(a);
    return out;
}

std::string format15(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

double round15(double x) {
    if (!std::isfinite(x)) return x;
    return std::strtod(format15(x).c_str(), nullptr);
}

}  // namespace moditer
