#include "moditer/iterint.hpp"

#include "moditer/errors.hpp"
#include "moditer/quadrature.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace moditer {

namespace {

// One layer as the integrator sees it; coeffs == nullptr is the constant 1.
struct Letter {
    const std::vector<cplx>* coeffs = nullptr;
    bool finite = false;
    cplx s;
};

bool all_zero(const std::vector<cplx>& c) {
    for (const auto& x : c)
        if (x != cplx{}) return false;
    return true;
}

bool decays(const Letter& l) { return l.coeffs && (*l.coeffs)[0] == cplx{}; }

std::string sum_name(int first, int last) {
    std::ostringstream os;
    for (int i = first; i <= last; ++i) os << (i > first ? "+" : "") << "s_" << i;
    return os.str();
}

std::string weight_sum_name(int first, int last) {
    std::ostringstream os;
    for (int i = first; i <= last; ++i) os << (i > first ? "+" : "") << "k_" << i;
    return os.str();
}

// Values of every layer at the nodes, innermost layer first.
std::vector<std::vector<cplx>> letter_values(const std::vector<Letter>& word, const quad::PathNodes& nodes,
                                             const NumericsConfig& cfg) {
    const std::size_t m = word.size();
    std::vector<std::vector<cplx>> out(m);
    for (std::size_t r = 0; r < m; ++r) {
        const Letter& l = word[m - 1 - r];
        auto& v = out[r];
        v.resize(nodes.size());
        std::vector<cplx> fz;
        if (l.coeffs) fz = evaluate_coeffs(*l.coeffs, nodes.z, cfg, nullptr, l.finite);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const cplx f = l.coeffs ? fz[i] : cplx{1.0};
            v[i] = f == cplx{} ? cplx{} : f * cpow(nodes.z[i], l.s - 1.0);
        }
    }
    return out;
}

// Smallest q-power present in a cusp form and its coefficient.
std::pair<int, double> leading_term(const std::vector<cplx>& c) {
    for (std::size_t k = 1; k < c.size(); ++k)
        if (c[k] != cplx{}) return {static_cast<int>(k), std::abs(c[k])};
    return {-1, 0.0};
}

IterResult integrate_word(const std::vector<Letter>& word, Endpoint a, cplx b, const NumericsConfig& cfg) {
    if (word.empty()) return {cplx{1.0}, 0.0, 0, 0.0, {}};
    for (const auto& l : word)
        if (l.coeffs && all_zero(*l.coeffs)) return {cplx{}, 0.0, 0, 0.0, {}};
    if (!(b.imag() > 0.0)) throw DomainError("upper endpoint must lie in the upper half-plane");
    const int nodes_per_panel = cfg.nodes;

    if (!a.infinite) {
        if (!(a.z.imag() > 0.0)) throw DomainError("lower endpoint must lie in the upper half-plane");
        auto eval = [&](int P) {
            auto nodes = quad::discretise(quad::segment(a.z, b), quad::uniform_mesh(P), quad::rule(nodes_per_panel));
            return std::vector<cplx>{quad::iterated(nodes, letter_values(word, nodes, cfg)).back()};
        };
        auto r = quad::refine(eval, cfg.panels, cfg.max_panels, cfg.tol);
        return {r.values[0], r.error, r.panels, 0.0, {}};
    }

    if (decays(word.back())) {
        // cut the path at height Y; tail of the innermost layer ~ |a_v| e^{-2 pi v Y} Y^{Re s - 1} / (2 pi v)
        const auto [v, av] = leading_term(*word.back().coeffs);
        const double re_s = word.back().s.real();
        double Y = std::max(cfg.height, 2.0 * b.imag());
        auto tail = [&](double y) {
            return av * std::exp(-2.0 * kPi * v * y) * std::pow(y, re_s - 1.0) / (2.0 * kPi * v);
        };
        while (tail(Y) > 1e-3 * cfg.tol && Y < 1e4) Y *= 1.25;
        const cplx top{b.real(), Y};
        auto eval = [&](int P) {
            auto nodes = quad::discretise(quad::segment(top, b), quad::uniform_mesh(P), quad::rule(nodes_per_panel));
            return std::vector<cplx>{quad::iterated(nodes, letter_values(word, nodes, cfg)).back()};
        };
        auto r = quad::refine(eval, cfg.panels, cfg.max_panels, cfg.tol);
        return {r.values[0], r.error + tail(Y), r.panels, Y, {}};
    }

    // innermost block does not decay: need every trailing partial sum over it to have Re < 0
    cplx partial{};
    for (std::size_t i = word.size(); i-- > 0;) {
        if (decays(word[i])) break;
        partial += word[i].s;
        if (!(partial.real() < 0.0))
            throw DivergenceError("integral from i-infinity diverges: a trailing partial sum of exponents over the "
                                  "non-decaying innermost layers has real part >= 0");
    }
    auto eval = [&](int P) {
        auto nodes = quad::discretise(quad::ray_from_infinity(b), quad::graded_mesh_start(P, 200),
                                      quad::rule(nodes_per_panel));
        return std::vector<cplx>{quad::iterated(nodes, letter_values(word, nodes, cfg)).back()};
    };
    auto r = quad::refine(eval, cfg.panels, cfg.max_panels, cfg.tol);
    return {r.values[0], r.error, r.panels, 0.0, {}};
}

std::vector<Letter> letters_of(const IterSpec& spec) {
    std::vector<Letter> w;
    for (const auto& k : spec.kernels) {
        if (k.form)
            w.push_back({&k.form->coeffs, k.form->finite_expansion, k.s});
        else
            w.push_back({nullptr, true, k.s});
    }
    return w;
}

// A slot of a piece integrated from i-infinity to c: cusp part and constant term separated.
struct Slot {
    std::vector<cplx> cusp;  // empty when the slot has no cuspidal part
    bool finite = false;
    cplx a0;
    cplx t;
};

// I_{i inf}^c over the slots (outermost first), expanded multilinearly in f = f^0 + a0.
// `divisor(i)` names the divisor for a vanishing trailing sum starting at slot i.
IterResult upper_piece(const std::vector<Slot>& slots, cplx c, const NumericsConfig& cfg,
                       const std::function<std::string(std::size_t)>& divisor) {
    const std::size_t m = slots.size();
    IterResult out{cplx{}, 0.0, 0, 0.0, {}};
    if (m == 0) {
        out.value = 1.0;
        return out;
    }
    for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
        // bit i set: slot i contributes its cusp part, otherwise its constant term
        cplx coef{1.0};
        bool skip = false;
        for (std::size_t i = 0; i < m && !skip; ++i) {
            if (mask >> i & 1ul) {
                if (slots[i].cusp.empty()) skip = true;
            } else {
                coef *= slots[i].a0;
                if (slots[i].a0 == cplx{}) skip = true;
            }
        }
        if (skip) continue;
        // fold the innermost block of constants in closed form
        std::size_t first_const = m;
        while (first_const > 0 && !(mask >> (first_const - 1) & 1ul)) --first_const;
        cplx partial{}, denom{1.0};
        for (std::size_t i = m; i-- > first_const;) {
            partial += slots[i].t;
            if (std::abs(partial) < cfg.pole_eps)
                throw PoleError("pole: trailing exponent sum vanishes on divisor " + divisor(i), divisor(i));
            denom *= partial;
        }
        if (first_const == 0) {
            out.value += coef * cpow(c, partial) / denom;
            continue;
        }
        std::vector<Letter> word;
        for (std::size_t i = 0; i < first_const; ++i) {
            if (mask >> i & 1ul)
                word.push_back({&slots[i].cusp, slots[i].finite, slots[i].t});
            else
                word.push_back({nullptr, true, slots[i].t});
        }
        word.back().s += partial;
        const IterResult r = integrate_word(word, Endpoint::infinity(), c, cfg);
        const cplx w = coef / denom;
        out.value += w * r.value;
        out.error += std::abs(w) * r.error;
        out.panels = std::max(out.panels, r.panels);
        out.height = std::max(out.height, r.height);
    }
    return out;
}

Slot slot_of(const std::optional<ModularForm>& f, cplx t) {
    Slot s;
    s.t = t;
    if (!f) {
        s.a0 = 1.0;
        s.finite = true;
        return s;
    }
    s.a0 = f->a0();
    s.finite = f->finite_expansion;
    s.cusp = f->coeffs;
    s.cusp[0] = 0.0;
    if (all_zero(s.cusp)) s.cusp.clear();
    return s;
}

}  // namespace

int IterSpec::level() const {
    int N = 0;
    for (const auto& k : kernels) {
        if (!k.form) continue;
        if (N == 0)
            N = k.form->level;
        else if (N != k.form->level)
            throw DomainError("all forms of an iterated integral must share one level");
    }
    return N == 0 ? 1 : N;
}

void IterSpec::validate() const {
    if (kernels.empty()) throw DomainError("iterated integral needs at least one kernel");
    (void)level();
    for (const auto& k : kernels) {
        if (!std::isfinite(k.s.real()) || !std::isfinite(k.s.imag())) throw DomainError("exponent must be finite");
        if (k.form && k.form->coeffs.empty()) throw DomainError("form has no coefficients");
    }
}

IterResult nested_quadrature(const IterSpec& spec, Endpoint a, cplx b, const NumericsConfig& cfg) {
    spec.validate();
    cfg.validate(spec.level());
    return integrate_word(letters_of(spec), a, b, cfg);
}

cplx ones_closed_form(cplx b, std::span<const cplx> s, double pole_eps) {
    if (s.empty()) return 1.0;
    if (b == cplx{}) throw DomainError("closed form needs b != 0");
    const int n = static_cast<int>(s.size());
    cplx partial{}, denom{1.0};
    for (int i = n; i-- > 0;) {
        partial += s[i];
        if (std::abs(partial) < pole_eps) {
            const std::string d = sum_name(i + 1, n) + "=0";
            throw PoleError("pole: partial sum vanishes on divisor " + d, d);
        }
        denom *= partial;
    }
    return cpow(b, partial) / denom;
}

std::vector<std::string> pole_divisors(const IterSpec& spec) {
    const int n = static_cast<int>(spec.size());
    std::vector<std::string> d;
    for (int m = n; m >= 1; --m) d.push_back(sum_name(m, n) + "=0");
    for (int m = 1; m <= n; ++m) d.push_back(sum_name(1, m) + "=" + weight_sum_name(1, m));
    return d;
}

IterSpec fricke_dual(const IterSpec& spec) {
    IterSpec out;
    for (std::size_t i = spec.size(); i-- > 0;) {
        const auto& k = spec.kernels[i];
        KernelSpec d;
        if (k.form) d.form = fricke_image(*k.form);
        d.s = static_cast<double>(k.weight()) - k.s;
        out.kernels.push_back(std::move(d));
    }
    return out;
}

IterResult iterint_full(const IterSpec& spec, const NumericsConfig& cfg) {
    spec.validate();
    const int N = spec.level();
    cfg.validate(N);
    const int n = static_cast<int>(spec.size());
    const cplx c = kI / std::sqrt(static_cast<double>(N));

    // lower pieces need the reflected forms
    std::vector<std::optional<ModularForm>> reflected(n);
    for (int i = 0; i < n; ++i)
        if (spec.kernels[i].form) reflected[i] = fricke_image(*spec.kernels[i].form);

    IterResult total{cplx{}, 0.0, 0, 0.0, pole_divisors(spec)};
    for (int j = 0; j <= n; ++j) {
        // upper: I_{i inf}^c(f_{j+1}, ..., f_n; s_{j+1}, ..., s_n)
        std::vector<Slot> up;
        for (int i = j; i < n; ++i) up.push_back(slot_of(spec.kernels[i].form, spec.kernels[i].s));
        auto up_name = [j, n](std::size_t i) { return sum_name(j + 1 + static_cast<int>(i), n) + "=0"; };
        // lower: I_c^0(f_1..f_j; s) = e^{i pi S} N^{K/2 - S} I_{i inf}^c(f~_j, ..., f~_1; k_j - s_j, ..., k_1 - s_1)
        std::vector<Slot> low;
        cplx S{}, K{};
        for (int i = j; i-- > 0;) {
            const auto& k = spec.kernels[i];
            low.push_back(slot_of(reflected[i], static_cast<double>(k.weight()) - k.s));
            S += k.s;
            K += static_cast<double>(k.weight());
        }
        auto low_name = [j](std::size_t i) {
            const int m = j - static_cast<int>(i);  // slot i holds f~_{j-i}
            return sum_name(1, m) + "=" + weight_sum_name(1, m);
        };
        const IterResult u = upper_piece(up, c, cfg, up_name);
        if (u.value == cplx{} && u.error == 0.0) continue;
        const IterResult l = upper_piece(low, c, cfg, low_name);
        const cplx factor = minus_one_pow(S) * std::exp((0.5 * K - S) * std::log(static_cast<double>(N)));
        const cplx lv = factor * l.value;
        total.value += lv * u.value;
        total.error += std::abs(lv) * u.error + std::abs(factor) * l.error * std::abs(u.value);
        total.panels = std::max({total.panels, u.panels, l.panels});
        total.height = std::max({total.height, u.height, l.height});
    }
    return total;
}

IterResult completed_Z(const IterSpec& spec, const NumericsConfig& cfg) {
    IterResult r = iterint_full(spec, cfg);
    cplx S{};
    for (const auto& k : spec.kernels) S += k.s;
    const cplx scale = std::exp(0.5 * S * std::log(static_cast<double>(spec.level())));
    r.value *= scale;
    r.error *= std::abs(scale);
    return r;
}

cplx tilde_I_fourier(const std::vector<TildeSlot>& slots, cplx z, const NumericsConfig& cfg) {
    if (slots.empty()) return 1.0;
    if (!slots.back().form) throw DomainError("the innermost slot of a tilde integral must be a cusp form");
    if (!(z.imag() > 0.0)) throw DomainError("evaluation point must lie in the upper half-plane");
    // group constants with the form that follows them; beta = sum of alphas over the group
    struct Group {
        const ModularForm* form;
        int beta;
    };
    std::vector<Group> groups;
    int pending = 0, total_alpha = 0;
    std::vector<cplx> gamma_args;
    for (const auto& s : slots) {
        if (s.alpha < 1) throw DomainError("tilde exponents must be positive integers");
        pending += s.alpha;
        total_alpha += s.alpha;
        gamma_args.emplace_back(static_cast<double>(s.alpha), 0.0);
        if (s.form) {
            if (s.form->a0() != cplx{}) throw DomainError("tilde Fourier expansion needs cuspidal forms");
            groups.push_back({&*s.form, pending});
            pending = 0;
        }
    }
    std::size_t M = static_cast<std::size_t>(std::max(cfg.order, 1));
    for (const auto& g : groups) M = std::min(M, g.form->coeffs.size() - 1);
    // W_l[U] = a_U U^{-beta_l}; W_k[U] = U^{-beta_k} sum_m a_m W_{k+1}[U - m]
    std::vector<cplx> W(M + 1, cplx{}), next(M + 1);
    const auto& last = groups.back();
    for (std::size_t U = 1; U <= M; ++U) W[U] = last.form->coeffs[U] * std::pow(static_cast<double>(U), -last.beta);
    for (std::size_t g = groups.size() - 1; g-- > 0;) {
        const auto& a = groups[g].form->coeffs;
        for (std::size_t U = 0; U <= M; ++U) {
            cplx acc{};
            for (std::size_t m = 1; m < U; ++m) acc += a[m] * W[U - m];
            next[U] = U == 0 ? cplx{} : acc * std::pow(static_cast<double>(U), -groups[g].beta);
        }
        W.swap(next);
    }
    const cplx q = std::exp(2.0 * kPi * kI * z);
    cplx sum{}, qp{1.0};
    for (std::size_t U = 1; U <= M; ++U) {
        qp *= q;
        sum += W[U] * qp;
    }
    const cplx pref = signed_gamma(gamma_args) / cpow(-2.0 * kPi * kI, static_cast<double>(total_alpha));
    return pref * sum;
}

}  // namespace moditer
