#include "moditer/identities.hpp"

#include "moditer/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace moditer {

Rational factorial(long n) {
    if (n < 0) throw DomainError("factorial of a negative integer");
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return Rational(r);
}

Rational binomial(long n, long k) {
    if (k < 0) return 0;
    if (n >= 0) {
        if (k > n) return 0;
        Integer r;
        mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
        return Rational(r);
    }
    // C(n, k) = (-1)^k C(k - n - 1, k)
    Rational r = binomial(k - n - 1, k);
    return (k % 2) ? Rational(-r) : r;
}

// ---- compositions and j-tuples -------------------------------------------

std::vector<int> Composition::cusp_positions() const {
    std::vector<int> p;
    int acc = 0;
    for (int j = 0; j < l(); ++j) {
        acc += parts[j] + 1;
        p.push_back(acc);
    }
    return p;
}

bool Composition::pure() const {
    return std::all_of(parts.begin(), parts.end(), [](int x) { return x == 0; });
}

void Composition::validate() const {
    if (l() < 1 || l() > n) throw DomainError("composition needs 1 <= l <= n");
    int sum = 0;
    for (int p : parts) {
        if (p < 0) throw DomainError("composition parts must be >= 0");
        sum += p;
    }
    if (sum != n - l()) throw DomainError("composition parts must sum to n - l");
}

std::vector<Composition> compositions(int n, int l) {
    if (l < 1 || l > n) throw DomainError("need 1 <= l <= n");
    std::vector<Composition> out;
    std::vector<int> parts(static_cast<std::size_t>(l) + 1, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i + 1 == parts.size()) {
            parts[i] = left;
            out.push_back({n, parts});
            return;
        }
        for (int v = 0; v <= left; ++v) {
            parts[i] = v;
            rec(i + 1, left - v);
        }
    };
    rec(0, n - l);
    return out;
}

std::vector<std::vector<long>> enumerate_jtuples(const std::vector<long>& bounds) {
    const std::size_t m = bounds.size();
    std::vector<std::vector<long>> out;
    std::vector<long> j(m, 0);
    // position i holds j_{i+2}; its bound is bounds[i] + j_{i+3}
    std::function<void(std::size_t)> rec = [&](std::size_t left) {
        if (left == 0) {
            out.push_back(j);
            return;
        }
        const std::size_t i = left - 1;
        const long next = (i + 1 < m) ? j[i + 1] : 0;
        for (long v = 0; v < bounds[i] + next; ++v) {
            j[i] = v;
            rec(i);
        }
    };
    rec(m);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// independent ranges 0 <= j_i < bounds_i
std::vector<std::vector<long>> box_tuples(const std::vector<long>& bounds) {
    std::vector<std::vector<long>> out{{}};
    for (long b : bounds) {
        std::vector<std::vector<long>> next;
        for (const auto& t : out)
            for (long v = 0; v < b; ++v) {
                auto u = t;
                u.push_back(v);
                next.push_back(std::move(u));
            }
        out.swap(next);
    }
    return out;
}

long sum_range(const std::vector<long>& alphas, int from, int to) {  // alpha_from..alpha_to, 1-based, alphas[0] = alpha_2
    long acc = 0;
    for (int i = from; i <= to; ++i) acc += alphas[static_cast<std::size_t>(i) - 2];
    return acc;
}

}  // namespace

std::vector<IndexPair> enumerate_indices(int n, int l, const std::vector<long>& alphas) {
    if (static_cast<int>(alphas.size()) != n - 1) throw DomainError("need alpha_2..alpha_n");
    for (long a : alphas)
        if (a < 1) throw DomainError("alphas must be positive integers");
    std::vector<IndexPair> out;
    for (auto& comp : compositions(n, l)) {
        const int last = comp.cusp_positions().back();
        std::vector<long> bounds;
        for (int r = 2; r < last; ++r) bounds.push_back(alphas[r - 2]);
        if (last >= 2) bounds.push_back(sum_range(alphas, last, n));
        for (auto& j : enumerate_jtuples(bounds)) out.push_back({comp, std::move(j)});
    }
    return out;
}

ABValue coeff_A_B(const Composition& comp, std::span<const cplx> a0, std::span<const cplx> s, double pole_eps) {
    comp.validate();
    if (static_cast<int>(a0.size()) != comp.n || static_cast<int>(s.size()) != comp.n)
        throw DomainError("a0 and s must have one entry per slot");
    ABValue out{cplx{1.0, 0.0}, cplx{1.0, 0.0}, false};
    const auto cusp = comp.cusp_positions();
    for (int i = 1; i <= comp.n; ++i)
        if (std::find(cusp.begin(), cusp.end(), i) == cusp.end()) out.A *= a0[i - 1];
    cplx partial{};
    for (int k = 0; k < comp.trailing(); ++k) {
        partial += s[comp.n - 1 - k];
        if (std::abs(partial) < pole_eps) {
            out.pole = true;
            out.B = cplx{INFINITY, 0.0};
            return out;
        }
        out.B /= partial;
    }
    return out;
}

// ---- exact coefficients ----------------------------------------------------

Coefficient& Coefficient::operator*=(const Coefficient& o) {
    rat *= o.rat;
    gamma_pow += o.gamma_pow;
    for (auto [k, e] : o.linear)
        if ((linear[k] += e) == 0) linear.erase(k);
    for (auto [k, e] : o.a0)
        if ((a0[k] += e) == 0) a0.erase(k);
    return *this;
}

Coefficient& Coefficient::times_gamma(int shift, int pow) {
    gamma_pow += pow;
    if (shift > 0)
        for (int i = 0; i < shift; ++i)
            if ((linear[i] += pow) == 0) linear.erase(i);
    if (shift < 0)
        for (int i = shift; i < 0; ++i)
            if ((linear[i] -= pow) == 0) linear.erase(i);
    return *this;
}

Coefficient& Coefficient::times_rising(int shift, long len) {
    for (long i = 0; i < len; ++i) {
        const int k = shift + static_cast<int>(i);
        if ((linear[k] += 1) == 0) linear.erase(k);
    }
    return *this;
}

Coefficient& Coefficient::times_a0(int form, int pow) {
    if ((a0[form] += pow) == 0) a0.erase(form);
    return *this;
}

bool Coefficient::same_shape(const Coefficient& o) const {
    return gamma_pow == o.gamma_pow && linear == o.linear && a0 == o.a0;
}

namespace {

// (s + N) with s at the integer -N: order of vanishing of the whole coefficient there.
int vanishing_order(const Coefficient& c, long N) {
    int ord = -c.gamma_pow;
    auto it = c.linear.find(static_cast<int>(N));
    if (it != c.linear.end()) ord += it->second;
    return ord;
}

}  // namespace

cplx Coefficient::evaluate(cplx s, std::span<const cplx> a0_values, double pole_eps) const {
    cplx v{rat.get_d(), 0.0};
    for (auto [slot, e] : a0) {
        if (slot < 1 || slot > static_cast<int>(a0_values.size())) throw DomainError("a0 slot out of range");
        for (int i = 0; i < e; ++i) v *= a0_values[slot - 1];
    }
    if (v == cplx{}) return v;
    const double nearest = std::round(s.real());
    const bool at_integer = std::abs(s - cplx{nearest, 0.0}) < pole_eps;
    if (at_integer) {
        const long sv = static_cast<long>(nearest);
        // exact evaluation with the possible Gamma pole at s <= 0 regularised
        if (sv <= 0) {
            const long N = -sv;
            const int ord = vanishing_order(*this, N);
            if (ord < 0) throw PoleError("coefficient has a pole at s = " + std::to_string(sv), "s=" + std::to_string(sv));
            if (ord > 0) return cplx{};
            const double res = ((N % 2) ? -1.0 : 1.0) / factorial(N).get_d();  // lim (s + N) Gamma(s)
            for (int i = 0; i < std::abs(gamma_pow); ++i) v = gamma_pow > 0 ? v * res : v / res;
            for (auto [k, e] : linear) {
                if (k == N) continue;
                const double f = static_cast<double>(k - N);
                for (int i = 0; i < std::abs(e); ++i) v = e > 0 ? v * f : v / f;
            }
            return v;
        }
        for (auto [k, e] : linear)
            if (k + sv == 0 && e < 0)
                throw PoleError("coefficient has a pole at s = " + std::to_string(sv), "s=" + std::to_string(sv));
    }
    if (gamma_pow != 0) {
        const cplx g = gamma(s);
        for (int i = 0; i < std::abs(gamma_pow); ++i) v = gamma_pow > 0 ? v * g : v / g;
    }
    for (auto [k, e] : linear) {
        const cplx f = s + static_cast<double>(k);
        for (int i = 0; i < std::abs(e); ++i) v = e > 0 ? v * f : v / f;
    }
    return v;
}

Rational Coefficient::exact_at(long s) const {
    if (!a0.empty()) throw DomainError("exact evaluation needs a coefficient without a0 factors");
    Rational v = rat;
    if (v == 0) return v;
    auto mul_pow = [&v](const Rational& f, int e) {
        for (int i = 0; i < std::abs(e); ++i) {
            if (e > 0)
                v *= f;
            else
                v /= f;
        }
    };
    if (s <= 0) {
        const long N = -s;
        const int ord = vanishing_order(*this, N);
        if (ord < 0) throw PoleError("coefficient has a pole at s = " + std::to_string(s), "s=" + std::to_string(s));
        if (ord > 0) return 0;
        Rational res = factorial(N);
        res = 1 / res;
        if (N % 2) res = -res;
        mul_pow(res, gamma_pow);
        for (auto [k, e] : linear)
            if (k != N) mul_pow(Rational(k - N), e);
        return v;
    }
    for (auto [k, e] : linear) {
        if (k + s == 0) {
            if (e < 0) throw PoleError("coefficient has a pole at s = " + std::to_string(s), "s=" + std::to_string(s));
            return 0;
        }
        mul_pow(Rational(k + s), e);
    }
    mul_pow(factorial(s - 1), gamma_pow);
    return v;
}

std::string Coefficient::to_string() const {
    std::ostringstream os;
    os << rat.get_str();
    for (auto [k, e] : a0) {
        os << " * a0[" << k << "]";
        if (e != 1) os << "^" << e;
    }
    if (gamma_pow != 0) {
        os << " * Gamma(s)";
        if (gamma_pow != 1) os << "^" << gamma_pow;
    }
    for (auto [k, e] : linear) {
        os << " * (s";
        if (k > 0) os << "+" << k;
        if (k < 0) os << k;
        os << ")";
        if (e != 1) os << "^" << e;
    }
    return os.str();
}

std::vector<cplx> Target::exponents(cplx s) const {
    std::vector<cplx> ex{s + static_cast<double>(s_offset)};
    for (long r : rest) ex.emplace_back(static_cast<double>(r), 0.0);
    return ex;
}

// ---- term lists ------------------------------------------------------------

void TermList::append(const TermList& o, const Coefficient& factor) {
    for (const auto& t : o.terms) terms.push_back({t.coef * factor, t.target});
}

void TermList::simplify() {
    std::vector<Term> merged;
    for (const auto& t : terms) {
        auto it = std::find_if(merged.begin(), merged.end(),
                               [&](const Term& m) { return m.target == t.target && m.coef.same_shape(t.coef); });
        if (it == merged.end())
            merged.push_back(t);
        else
            it->coef.rat += t.coef.rat;
    }
    std::erase_if(merged, [](const Term& t) { return t.coef.rat == 0; });
    std::stable_sort(merged.begin(), merged.end(), [](const Term& a, const Term& b) {
        if (a.target != b.target) return a.target < b.target;
        return a.coef.to_string() < b.coef.to_string();
    });
    terms = std::move(merged);
}

void TermList::drop_vanishing(std::span<const cplx> a0_values) {
    std::erase_if(terms, [&](const Term& t) {
        for (auto [slot, e] : t.coef.a0)
            if (e > 0 && a0_values[slot - 1] == cplx{}) return true;
        return false;
    });
}

std::string TermList::to_string() const {
    std::ostringstream os;
    for (const auto& t : terms) {
        os << t.coef.to_string() << " * " << (kind == Kind::L ? "L" : "I") << "(";
        for (std::size_t i = 0; i < t.target.slots.size(); ++i) os << (i ? "," : "") << "f" << t.target.slots[i];
        os << "; s";
        if (t.target.s_offset > 0) os << "+" << t.target.s_offset;
        if (t.target.s_offset < 0) os << t.target.s_offset;
        for (long r : t.target.rest) os << ", " << r;
        os << ")\n";
    }
    return os.str();
}

// ---- expansions -------------------------------------------------------------

TermList mixed_to_L(const std::vector<int>& slots, const std::vector<int>& cusp, long s_offset,
                    const std::vector<long>& rest) {
    const int m = static_cast<int>(slots.size());
    if (m < 1 || static_cast<int>(rest.size()) != m - 1) throw DomainError("mixed word needs m slots and m-1 integer exponents");
    if (cusp.empty() || cusp.back() != m) throw DomainError("the last slot of a mixed word must be cuspidal");
    auto t = [&](int r) { return rest[static_cast<std::size_t>(r) - 2]; };  // t_r, r >= 2
    auto tsum = [&](int a, int b) {
        long acc = 0;
        for (int r = a; r <= b; ++r) acc += t(r);
        return acc;
    };
    Coefficient base;
    base.rat = (m % 2) ? -1 : 1;
    base.times_gamma(static_cast<int>(s_offset));
    for (int r = 2; r <= m; ++r) base.rat *= factorial(t(r) - 1);

    TermList out;
    out.kind = TermList::Kind::L;
    const int l = static_cast<int>(cusp.size());
    for (const auto& jv : enumerate_jtuples(rest)) {
        auto j = [&](int r) -> long { return (r >= 2 && r <= m) ? jv[static_cast<std::size_t>(r) - 2] : 0; };
        Coefficient c = base;
        if (m >= 2) {
            c.times_rising(static_cast<int>(s_offset), j(2));
            c.rat /= factorial(j(2));
        }
        for (int k = 3; k <= m; ++k) c.rat *= binomial(t(k - 1) + j(k) - 1, j(k));
        Target tg;
        for (int p : cusp) tg.slots.push_back(slots[p - 1]);
        tg.s_offset = s_offset + tsum(2, cusp[0]) + j(cusp[0] + 1);
        for (int i = 1; i < l; ++i) {
            long arg = tsum(cusp[i - 1] + 1, cusp[i]) - j(cusp[i - 1] + 1);
            if (i + 1 < l) arg += j(cusp[i] + 1);
            tg.rest.push_back(arg);
        }
        out.add(c, tg);
    }
    out.simplify();
    return out;
}

namespace {

// A * B for a composition over a word with integer exponents rest (alpha_2..alpha_m),
// and the merged word it leads to.
struct MixedWord {
    Coefficient ab;
    std::vector<int> slots;
    std::vector<int> cusp;
    long s_offset = 0;
    std::vector<long> rest;
};

MixedWord merge_composition(const Composition& comp, const std::vector<int>& slots, long s_offset,
                            const std::vector<long>& rest) {
    const int n = comp.n;
    MixedWord w;
    w.cusp = comp.cusp_positions();
    for (int i = 1; i <= n; ++i)
        if (std::find(w.cusp.begin(), w.cusp.end(), i) == w.cusp.end()) w.ab.times_a0(slots[i - 1]);
    long partial = 0;
    for (int k = 0; k < comp.trailing(); ++k) {
        partial += rest[static_cast<std::size_t>(n - 2 - k)];
        w.ab.rat /= partial;
    }
    const int m = w.cusp.back();
    w.slots.assign(slots.begin(), slots.begin() + m);
    w.s_offset = s_offset;
    if (m == 1) {
        w.s_offset += sum_range(rest, 2, n);
    } else {
        for (int r = 2; r < m; ++r) w.rest.push_back(rest[r - 2]);
        w.rest.push_back(sum_range(rest, m, n));
    }
    return w;
}

TermList thS_general(const std::vector<int>& slots, long s_offset, const std::vector<long>& rest);

// I(f^0_1..f^0_m; s + off, rest) as iterated integrals of the full forms.
TermList cusp_word_to_I(const std::vector<int>& slots, long s_offset, const std::vector<long>& rest) {
    const int m = static_cast<int>(slots.size());
    TermList out;
    out.kind = TermList::Kind::I;
    out.add(Coefficient{}, Target{slots, s_offset, rest});
    for (int l = 1; l <= m; ++l)
        for (const auto& comp : compositions(m, l)) {
            if (comp.pure()) continue;
            const MixedWord w = merge_composition(comp, slots, s_offset, rest);
            const TermList Ls = mixed_to_L(w.slots, w.cusp, w.s_offset, w.rest);
            for (const auto& lt : Ls.terms) {
                Coefficient c = lt.coef * w.ab;
                c.rat = -c.rat;
                out.append(thS_general(lt.target.slots, lt.target.s_offset, lt.target.rest), c);
            }
        }
    return out;
}

TermList thS_general(const std::vector<int>& slots, long s_offset, const std::vector<long>& rest) {
    const int m = static_cast<int>(slots.size());
    Coefficient pre;  // 1 / Gamma^{(s + off, rest)}
    pre.rat = (m % 2) ? -1 : 1;
    pre.times_gamma(static_cast<int>(s_offset), -1);
    for (long r : rest) pre.rat /= factorial(r - 1);

    TermList out;
    out.kind = TermList::Kind::I;
    for (const auto& jv : box_tuples(rest)) {
        auto j = [&](int r) -> long { return (r >= 2 && r <= m) ? jv[static_cast<std::size_t>(r) - 2] : 0; };
        Coefficient c = pre;
        std::vector<long> shifted;
        for (int k = 2; k <= m; ++k) {
            c.rat *= binomial(rest[k - 2] - 1, j(k));
            if (j(k) % 2) c.rat = -c.rat;
            shifted.push_back(rest[k - 2] - j(k) + j(k + 1));
        }
        out.append(cusp_word_to_I(slots, s_offset + j(2), shifted), c);
    }
    out.simplify();
    return out;
}

std::vector<int> iota_slots(int n) {
    std::vector<int> s(static_cast<std::size_t>(n));
    std::iota(s.begin(), s.end(), 1);
    return s;
}

void check_alphas(int n, const std::vector<long>& alphas) {
    if (n < 1) throw DomainError("need n >= 1");
    if (static_cast<int>(alphas.size()) != n - 1) throw DomainError("need alpha_2..alpha_n");
    for (long a : alphas)
        if (a < 1) throw DomainError("alphas must be positive integers");
}

}  // namespace

TermList thI_expand(int n, const std::vector<long>& alphas) {
    check_alphas(n, alphas);
    const auto slots = iota_slots(n);
    TermList out;
    out.kind = TermList::Kind::L;
    for (int l = 1; l <= n; ++l)
        for (const auto& comp : compositions(n, l)) {
            const MixedWord w = merge_composition(comp, slots, 0, alphas);
            out.append(mixed_to_L(w.slots, w.cusp, w.s_offset, w.rest), w.ab);
        }
    out.simplify();
    return out;
}

TermList thS_expand(int n, const std::vector<long>& alphas) {
    check_alphas(n, alphas);
    return thS_general(iota_slots(n), 0, alphas);
}

// ---- binomial transforms ----------------------------------------------------

std::vector<FTerm> normalise(std::vector<FTerm> in) {
    std::sort(in.begin(), in.end(), [](const FTerm& a, const FTerm& b) {
        return std::tie(a.zpow, a.tilde, a.alpha) < std::tie(b.zpow, b.tilde, b.alpha);
    });
    std::vector<FTerm> out;
    for (auto& t : in) {
        if (!out.empty() && out.back().zpow == t.zpow && out.back().tilde == t.tilde && out.back().alpha == t.alpha)
            out.back().c += t.c;
        else
            out.push_back(std::move(t));
    }
    std::erase_if(out, [](const FTerm& t) { return t.c == 0; });
    return out;
}

std::vector<FTerm> F_to_Ftilde(const std::vector<FTerm>& in) {
    std::vector<FTerm> out;
    for (const auto& t : in) {
        if (t.tilde) throw DomainError("F_to_Ftilde expects F terms");
        const std::size_t m = t.alpha.size();
        for (const auto& j : enumerate_jtuples(t.alpha)) {
            FTerm r{t.c, t.zpow + (m ? j[0] : 0), true, {}};
            for (std::size_t k = 0; k < m; ++k) {
                const long next = k + 1 < m ? j[k + 1] : 0;
                r.c *= binomial(t.alpha[k] + next - 1, j[k]);
                r.alpha.push_back(t.alpha[k] - j[k] + next);
            }
            out.push_back(std::move(r));
        }
    }
    return normalise(std::move(out));
}

std::vector<FTerm> Ftilde_to_F(const std::vector<FTerm>& in) {
    std::vector<FTerm> out;
    for (const auto& t : in) {
        if (!t.tilde) throw DomainError("Ftilde_to_F expects F~ terms");
        const std::size_t m = t.alpha.size();
        for (const auto& j : box_tuples(t.alpha)) {
            FTerm r{t.c, t.zpow + (m ? j[0] : 0), false, {}};
            for (std::size_t k = 0; k < m; ++k) {
                const long next = k + 1 < m ? j[k + 1] : 0;
                r.c *= binomial(t.alpha[k] - 1, j[k]);
                if (j[k] % 2) r.c = -r.c;
                r.alpha.push_back(t.alpha[k] - j[k] + next);
            }
            out.push_back(std::move(r));
        }
    }
    return normalise(std::move(out));
}

}  // namespace moditer
