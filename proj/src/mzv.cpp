#include "moditer/mzv.hpp"

#include "moditer/errors.hpp"
#include "moditer/forms.hpp"
#include "moditer/iterint.hpp"
#include "moditer/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace moditer {

int MzvIndex::weight() const {
    int w = 0;
    for (int x : k) w += x;
    return w;
}

bool MzvIndex::admissible() const { return !k.empty() && k.back() >= 2; }

void MzvIndex::validate() const {
    if (k.empty()) throw DomainError("empty MZV index");
    for (int x : k)
        if (x < 1) throw DomainError("MZV index entries must be positive");
    if (!admissible()) throw DivergenceError("MZV index " + to_string() + " is not admissible (last entry must be >= 2)");
}

std::string MzvIndex::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < k.size(); ++i) os << (i ? "," : "") << k[i];
    return os.str();
}

MzvIndex MzvIndex::from_descending(std::vector<int> k) {
    return MzvIndex{std::vector<int>(k.rbegin(), k.rend())};
}

MzvIndex MzvIndex::parse(const std::string& text, bool descending) {
    std::vector<int> k;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            const int v = std::stoi(item, &pos);
            if (pos != item.size()) throw ParseError("bad MZV index entry '" + item + "'");
            k.push_back(v);
        } catch (const std::logic_error&) {
            throw ParseError("bad MZV index entry '" + item + "'");
        }
    }
    return descending ? from_descending(std::move(k)) : MzvIndex{std::move(k)};
}

namespace {

struct Neumaier {
    double sum = 0.0, comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

}  // namespace

MzvValue mzv_series(const MzvIndex& idx, long cutoff) {
    idx.validate();
    if (cutoff < 10) throw DomainError("MZV cutoff must be at least 10");
    const int d = idx.depth();
    const std::size_t len = static_cast<std::size_t>(cutoff) + 2;
    // Z_r(n) = sum_{m < n} m^{-k_r} Z_{r-1}(m), Z_0 = 1; at_end[r] = Z_r(N+1)
    std::vector<double> prev(len, 1.0), cur(len);
    std::vector<double> at_end{1.0};
    for (int r = 0; r + 1 < d; ++r) {
        Neumaier acc;
        cur[0] = cur[1] = 0.0;
        for (std::size_t n = 2; n < len; ++n) {
            acc.add(std::pow(static_cast<double>(n - 1), -idx.k[r]) * prev[n - 1]);
            cur[n] = acc.value();
        }
        prev.swap(cur);
        at_end.push_back(prev[cutoff + 1]);
    }
    const int kd = idx.k.back();
    Neumaier total;
    for (long n = cutoff; n >= 1; --n) total.add(std::pow(static_cast<double>(n), -kd) * prev[n]);
    // Tail: freeze the sums at N + 1/2 and integrate the growth of every level,
    // sum_r Z_{d-1-r}(N+1) int_{a<y_r<...<y_0} y_0^{-k_d} ... y_r^{-k_{d-r}}, which is
    // a^{r+1-(k_d+...+k_{d-r})} / prod_i (partial sums of k_{d-j} - 1).
    const double a = cutoff + 0.5;
    double tail = 0.0, last = 0.0;
    double denom = 1.0, ksum = 0.0, esum = 0.0;
    for (int r = 0; r < d; ++r) {
        const int k = idx.k[d - 1 - r];
        ksum += k;
        esum += k - 1.0;
        denom *= esum;
        last = at_end[d - 1 - r] * std::pow(a, r + 1.0 - ksum) / denom;
        tail += last;
    }
    MzvValue out;
    out.value = total.value() + tail;
    // neglected: midpoint-rule and frozen-coefficient corrections, relative size ~ log(N)/N of the tail
    out.error = std::abs(tail) * (std::log(a) + 1.0) / a + 1e-15 * std::abs(out.value);
    return out;
}

namespace {

// word letters, innermost first: true = omega_1, false = omega_0
std::vector<bool> word_of(const MzvIndex& idx) {
    std::vector<bool> w;
    for (int k : idx.k) {
        w.push_back(true);
        for (int i = 1; i < k; ++i) w.push_back(false);
    }
    return w;
}

}  // namespace

MzvValue mzv_p1_integral(const MzvIndex& idx, const NumericsConfig& cfg) {
    idx.validate();
    const std::vector<bool> word = word_of(idx);
    const std::size_t n = word.size();
    const auto& gl = quad::rule(cfg.nodes);
    auto eval = [&](int P) {
        const auto mesh = quad::uniform_mesh(P);
        // [0, 1/2] forward: t = tau / 2
        const quad::PathNodes fwd = quad::discretise(quad::segment(0.0, 0.5), mesh, gl);
        std::vector<std::vector<cplx>> letters;
        for (bool one : word) {
            std::vector<cplx> v(fwd.size());
            for (std::size_t i = 0; i < fwd.size(); ++i) {
                const double t = 0.5 * fwd.param[i];
                v[i] = one ? 1.0 / (1.0 - t) : 1.0 / t;
            }
            letters.push_back(std::move(v));
        }
        const std::vector<cplx> lower = quad::iterated(fwd, letters);
        // [1/2, 1] backwards from 1: t = 1 - u, u = tau / 2, word reversed
        const quad::PathNodes bwd = quad::discretise(quad::segment(1.0, 0.5), mesh, gl);
        letters.clear();
        for (std::size_t r = n; r-- > 0;) {
            std::vector<cplx> v(bwd.size());
            for (std::size_t i = 0; i < bwd.size(); ++i) {
                const double u = 0.5 * bwd.param[i];
                v[i] = word[r] ? 1.0 / u : 1.0 / (1.0 - u);
            }
            letters.push_back(std::move(v));
        }
        const std::vector<cplx> upper = quad::iterated(bwd, letters);
        // I_0^1 = sum_j I_0^{1/2}(w_1..w_j) I_{1/2}^1(w_{j+1}..w_n), the latter = (-1)^{n-j} I_1^{1/2}(reversed)
        auto lower_at = [&](std::size_t j) { return j == 0 ? cplx{1.0} : lower[j - 1]; };
        auto upper_at = [&](std::size_t r) { return r == 0 ? cplx{1.0} : upper[r - 1]; };
        cplx total{};
        for (std::size_t j = 0; j <= n; ++j) total += lower_at(j) * upper_at(n - j) * (((n - j) % 2) ? -1.0 : 1.0);
        return std::vector<cplx>{total};
    };
    const quad::Refined r = quad::refine(eval, 2, cfg.max_panels, cfg.tol);
    return {r.values[0].real(), r.error};
}

cplx hauptmodul_lambda(cplx z, const NumericsConfig& cfg) {
    static const ModularForm F = builtin_modular_form("F", 64);
    static const ModularForm G = builtin_modular_form("G", 64);
    return 16.0 * evaluate_at(F, z, cfg).value / evaluate_at(G, z, cfg).value;
}

ModularMzv mzv_modular_integral(const MzvIndex& idx, const NumericsConfig& cfg) {
    idx.validate();
    const int M = std::max(cfg.order, 64);
    const ModularForm F = builtin_modular_form("F", M);
    const ModularForm H = builtin_modular_form("G-16F", M);
    auto scaled = [](ModularForm f, double c, const std::string& label) {
        for (auto& a : f.coeffs) a *= c;
        f.fricke_coeffs.reset();
        f.label = label;
        return f;
    };
    // z -> -1/(4w): F dz -> -(1/16)(G - 16F)(w) dw, (G - 16F) dz -> -16 F(w) dw
    const ModularForm F_image = scaled(H, -1.0 / 16.0, "-(G-16F)/16");
    const ModularForm H_image = scaled(F, -16.0, "-16F");
    const std::vector<bool> word = word_of(idx);
    const std::size_t n = word.size();
    const cplx mid{0.0, 0.5};
    const cplx one{1.0, 0.0};

    // upper[j] = I_{i inf}^{i/2}(w_1..w_j), w_1 innermost
    std::vector<cplx> upper(n + 1, cplx{1.0});
    std::vector<cplx> lower(n + 1, cplx{1.0});  // lower[j] = I_{i/2}^0(w_{j+1}..w_n)
    double err = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
        IterSpec spec;
        for (std::size_t r = j; r-- > 0;) spec.kernels.push_back({word[r] ? F : H, one});
        const IterResult res = nested_quadrature(spec, Endpoint::infinity(), mid, cfg);
        upper[j] = res.value;
        err += res.error;
    }
    for (std::size_t j = 0; j < n; ++j) {
        // I_{i/2}^0(w_{j+1}..w_n) = I_{i/2}^{i inf}(images) = (-1)^{n-j} I_{i inf}^{i/2}(images reversed)
        IterSpec spec;
        for (std::size_t r = j; r < n; ++r) spec.kernels.push_back({word[r] ? F_image : H_image, one});
        const IterResult res = nested_quadrature(spec, Endpoint::infinity(), mid, cfg);
        lower[j] = res.value * (((n - j) % 2) ? -1.0 : 1.0);
        err += res.error;
    }
    cplx raw{};
    for (std::size_t j = 0; j <= n; ++j) raw += upper[j] * lower[j];
    ModularMzv out;
    out.raw = raw;
    out.prefactor = std::pow(2.0 * kPi * kI, idx.weight()) * std::pow(16.0, idx.depth());
    const cplx v = out.prefactor * raw;
    out.value = {v.real(), std::abs(out.prefactor) * err + std::abs(v.imag())};
    return out;
}

}  // namespace moditer
