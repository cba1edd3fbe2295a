#include "cli.hpp"

#include "CLI11.hpp"
#include "moditer/errors.hpp"
#include "moditer/forms.hpp"
#include "moditer/identities.hpp"
#include "moditer/iterint.hpp"
#include "moditer/lfun.hpp"
#include "moditer/mzv.hpp"
#include "moditer/qseries.hpp"
#include "moditer/simd.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

namespace moditer::cli {

using json = nlohmann::ordered_json;

namespace {

json jc(cplx z) { return json::array({round15(z.real()), round15(z.imag())}); }
json jd(double x) { return std::isfinite(x) ? json(round15(x)) : json(std::to_string(x)); }

json config_json(const NumericsConfig& c) {
    json j;
    j["order"] = c.order;
    j["height"] = jd(c.height);
    j["panels"] = c.panels;
    j["max_panels"] = c.max_panels;
    j["nodes"] = c.nodes;
    j["tol"] = jd(c.tol);
    j["cutoff"] = c.cutoff;
    j["pole_eps"] = jd(c.pole_eps);
    j["branch"] = NumericsConfig::branch_tag();
    j["simd"] = std::string(simd::isa_name(simd::active_isa()));
    return j;
}

Check rel_check(std::string name, cplx lhs, cplx rhs, double tol) {
    Check c;
    c.name = std::move(name);
    c.lhs = jc(lhs);
    c.rhs = jc(rhs);
    const double scale = std::max(std::abs(rhs), std::abs(lhs));
    c.diff = scale > 0 ? std::abs(lhs - rhs) / scale : 0.0;
    c.tol = tol;
    c.pass = std::isfinite(c.diff) && c.diff <= tol;
    return c;
}

Check abs_check(std::string name, double lhs, double rhs, double tol) {
    Check c;
    c.name = std::move(name);
    c.lhs = jd(lhs);
    c.rhs = jd(rhs);
    c.diff = std::abs(lhs - rhs);
    c.tol = tol;
    c.pass = std::isfinite(c.diff) && c.diff <= tol;
    return c;
}

Check exact_check(std::string name, bool equal, json lhs, json rhs) {
    Check c;
    c.name = std::move(name);
    c.lhs = std::move(lhs);
    c.rhs = std::move(rhs);
    c.diff = equal ? 0.0 : 1.0;
    c.tol = 0.0;
    c.pass = equal;
    return c;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<cplx> parse_complex_list(const std::string& s) {
    std::vector<cplx> out;
    for (const auto& item : split(s, ',')) out.push_back(parse_complex(item));
    if (out.empty()) throw ParseError("empty exponent list");
    return out;
}

std::vector<long> parse_int_list(const std::string& s) {
    std::vector<long> out;
    for (const auto& item : split(s, ',')) {
        std::size_t pos = 0;
        long v = 0;
        try {
            v = std::stol(item, &pos);
        } catch (const std::logic_error&) {
            throw ParseError("bad integer '" + item + "'");
        }
        if (pos != item.size()) throw ParseError("bad integer '" + item + "'");
        out.push_back(v);
    }
    return out;
}

json rational_json(const Rational& r) {
    if (r.get_den() == 1 && r.get_num().fits_slong_p()) return json(r.get_num().get_si());
    return json(r.get_str());
}

ModularForm named_form(const std::string& name, int M) {
    if (name == "1") return constant_one(1);
    if (name.find('/') != std::string::npos || name.ends_with(".json")) return load_form(name);
    return builtin_modular_form(name, M);
}

// positional names first, then --form files; constants take the common level
std::vector<ModularForm> resolve_forms(const std::string& names, const std::vector<std::string>& files, int M) {
    std::vector<ModularForm> forms;
    for (const auto& n : split(names, ',')) forms.push_back(named_form(n, M));
    for (const auto& f : files) forms.push_back(load_form(f));
    if (forms.empty()) throw ParseError("no forms given (name them or pass --form <path>)");
    int level = 1;
    for (const auto& f : forms)
        if (f.label != "1") level = f.level;
    for (auto& f : forms)
        if (f.label == "1") f = constant_one(level);
    return forms;
}

json forms_json(const std::vector<ModularForm>& forms) {
    json a = json::array();
    for (const auto& f : forms) a.push_back(f.label);
    return a;
}

IterSpec make_spec(const std::vector<ModularForm>& forms, const std::vector<cplx>& s) {
    if (forms.size() != s.size()) throw DomainError("one exponent per form is required");
    IterSpec spec;
    for (std::size_t i = 0; i < forms.size(); ++i) {
        if (forms[i].label == "1")
            spec.kernels.push_back(KernelSpec::one(s[i]));
        else
            spec.kernels.push_back({forms[i], s[i]});
    }
    return spec;
}

json terms_json(const TermList& t) {
    json a = json::array();
    std::istringstream in(t.to_string());
    std::string line;
    while (std::getline(in, line)) a.push_back(line);
    return a;
}

int form_order(const NumericsConfig& cfg) { return std::max<long>(cfg.order, cfg.cutoff + 1); }

// ---- suites ------------------------------------------------------------------

void suite_eta(RunReport& r) {
    const int M = r.cfg.order;
    const auto e1 = eta_series(1, M), e2 = eta_series(2, M), e4 = eta_series(4, M);
    const auto F = builtin_form("F", M), G = builtin_form("G", M);
    const auto q1 = e4.pow(8) / e2.pow(4);
    const auto q2 = e2.pow(20) / (e1.pow(8) * e4.pow(8));
    const auto q3 = e1.pow(8) / e2.pow(4);
    r.checks.push_back(exact_check("F = eta(4z)^8/eta(2z)^4", F == q1, F.to_string(6), q1.to_string(6)));
    r.checks.push_back(exact_check("G = eta(2z)^20/(eta(z)^8 eta(4z)^8)", G == q2, G.to_string(6), q2.to_string(6)));
    const auto H = G - Rational(16) * F;
    r.checks.push_back(exact_check("G - 16F = eta(z)^8/eta(2z)^4", H == q3, H.to_string(6), q3.to_string(6)));
}

void suite_funceq(RunReport& r) {
    const auto D = builtin_modular_form("delta", r.cfg.order);
    for (double s : {5.0, 5.5, 6.0, 6.5, 7.0}) {
        const IterSpec spec{{{D, s}}};
        const cplx lhs = completed_Z(spec, r.cfg).value;
        const cplx rhs = minus_one_pow(s) * completed_Z(fricke_dual(spec), r.cfg).value;
        r.checks.push_back(rel_check("Z(delta; " + format15(s) + ") = (-1)^s Z(delta; 12 - s)", lhs, rhs, 1e-6));
    }
    const auto F = builtin_modular_form("F", r.cfg.order);
    const auto G = builtin_modular_form("G", r.cfg.order);
    const IterSpec spec{{{F, cplx{0.7, 0.3}}, {G, cplx{1.4, -0.2}}}};
    const cplx lhs = completed_Z(spec, r.cfg).value;
    const cplx rhs = minus_one_pow(cplx{2.1, 0.1}) * completed_Z(fricke_dual(spec), r.cfg).value;
    r.checks.push_back(rel_check("Z(F, G; 0.7+0.3i, 1.4-0.2i) = (-1)^(s1+s2) Z(dual)", lhs, rhs, 1e-6));
}

TermList five_terms() {
    auto coef = [](Rational rat, std::map<int, int> linear, std::map<int, int> a0) {
        Coefficient c;
        c.rat = rat;
        c.gamma_pow = 1;
        c.linear = std::move(linear);
        c.a0 = std::move(a0);
        return c;
    };
    TermList t;
    t.add(coef(1, {{0, 1}}, {}), Target{{1, 2}, 1, {1}});
    t.add(coef(1, {}, {}), Target{{1, 2}, 0, {2}});
    t.add(coef(ratio(-1, 2), {{0, 1}, {1, 1}}, {{2, 1}}), Target{{1}, 2, {}});
    t.add(coef(1, {{0, 1}}, {{1, 1}}), Target{{2}, 2, {}});
    t.add(coef(1, {}, {{1, 1}}), Target{{2}, 2, {}});
    t.simplify();
    return t;
}

bool same_terms(const TermList& a, const TermList& b) {
    if (a.terms.size() != b.terms.size()) return false;
    for (std::size_t i = 0; i < a.terms.size(); ++i)
        if (!(a.terms[i].target == b.terms[i].target) || a.terms[i].coef.rat != b.terms[i].coef.rat ||
            !a.terms[i].coef.same_shape(b.terms[i].coef))
            return false;
    return true;
}

void suite_thi(RunReport& r) {
    const int M = form_order(r.cfg);
    const auto D = builtin_modular_form("delta", M);
    const auto E4 = builtin_modular_form("E4", M);
    for (auto [s, a] : {std::pair{8.0, 2L}, std::pair{9.0, 3L}}) {
        const cplx lhs = iterint_full({{{D, s}, {D, double(a)}}}, r.cfg).value;
        const cplx rhs = evaluate_terms(thI_expand(2, {a}), {D, D}, s, r.cfg).value;
        r.checks.push_back(rel_check("I(delta, delta; " + format15(s) + ", " + std::to_string(a) + ") via L-values", lhs, rhs, 1e-5));
    }
    const TermList generic = thI_expand(2, {2});
    r.checks.push_back(exact_check("length-2 expansion with alpha 2 has the five expected terms", same_terms(generic, five_terms()),
                                   terms_json(generic), terms_json(five_terms())));
    const cplx lhs = iterint_full({{{E4, 8.0}, {E4, 2.0}}}, r.cfg).value;
    const cplx rhs = evaluate_terms(five_terms(), {E4, E4}, 8.0, r.cfg).value;
    r.checks.push_back(rel_check("I(E4, E4; 8, 2) via the five L-terms", lhs, rhs, 1e-4));
}

void suite_ths(RunReport& r) {
    const int M = form_order(r.cfg);
    const auto D = builtin_modular_form("delta", M);
    const auto E4 = builtin_modular_form("E4", M);
    const cplx s{8.0};
    {
        const cplx lhs = gamma(s) * L_direct({{E4, E4}, {s, 2.0}}, r.cfg.cutoff).value;
        const cplx I1 = iterint_full({{{E4, s + 2.0}}}, r.cfg).value;
        const cplx rhs = iterint_full({{{E4, s}, {E4, 2.0}}}, r.cfg).value -
                         iterint_full({{{E4, s + 1.0}, {E4, 1.0}}}, r.cfg).value + 0.5 * I1 + I1 / (s * (s + 1.0));
        r.checks.push_back(rel_check("Gamma(8) L(E4, E4; 8, 2) via four integrals", lhs, rhs, 1e-4));
    }
    {
        const cplx direct = L_direct({{D, D}, {9.0, 2.0}}, r.cfg.cutoff).value;
        const cplx cont = L_continued({D, D}, 9.0, {2}, r.cfg).value;
        r.checks.push_back(rel_check("L(delta, delta; 9, 2): continuation against direct sum", cont, direct, 1e-5));
        cplx back{};
        const std::vector<ModularForm> forms{D, D};
        for (const auto& t : thS_expand(2, {2}).terms) {
            const cplx c = t.coef.evaluate(9.0, std::vector<cplx>{0.0, 0.0});
            if (c == cplx{}) continue;
            std::vector<ModularForm> sub;
            for (int slot : t.target.slots) sub.push_back(forms[slot - 1]);
            back += c * evaluate_terms(thI_expand(static_cast<int>(sub.size()), t.target.rest), sub,
                                       9.0 + double(t.target.s_offset), r.cfg)
                            .value;
        }
        r.checks.push_back(rel_check("L(delta, delta; 9, 2): thS then thI round trip", back, direct, 1e-5));
    }
}

void suite_mzv(RunReport& r) {
    const double z3 = 1.2020569031595942854;
    const std::vector<std::pair<MzvIndex, double>> cases{{MzvIndex{{2}}, kPi * kPi / 6.0},
                                                         {MzvIndex{{3}}, z3},
                                                         {MzvIndex{{4}}, std::pow(kPi, 4) / 90.0},
                                                         {MzvIndex::from_descending({2, 1}), z3}};
    for (const auto& [idx, value] : cases) {
        const std::string tag = "zeta(" + idx.to_string() + ")";
        r.checks.push_back(abs_check(tag + " series", mzv_series(idx).value, value, 1e-8));
        r.checks.push_back(abs_check(tag + " p1 integral", mzv_p1_integral(idx, r.cfg).value, value, 1e-6));
        r.checks.push_back(abs_check(tag + " modular integral", mzv_modular_integral(idx, r.cfg).value.value, value,
                                     idx.depth() > 1 ? 1e-5 : 1e-6));
    }
}

// all interleavings of two kernel lists
void shuffles(const std::vector<KernelSpec>& a, const std::vector<KernelSpec>& b, std::size_t i, std::size_t j,
              std::vector<KernelSpec>& cur, std::vector<std::vector<KernelSpec>>& out) {
    if (i == a.size() && j == b.size()) {
        out.push_back(cur);
        return;
    }
    if (i < a.size()) {
        cur.push_back(a[i]);
        shuffles(a, b, i + 1, j, cur, out);
        cur.pop_back();
    }
    if (j < b.size()) {
        cur.push_back(b[j]);
        shuffles(a, b, i, j + 1, cur, out);
        cur.pop_back();
    }
}

void suite_shuffle(RunReport& r) {
    const ModularForm pool[] = {builtin_modular_form("delta", r.cfg.order),
                                cusp_part(builtin_modular_form("E4", r.cfg.order)).cusp,
                                cusp_part(builtin_modular_form("E6", r.cfg.order)).cusp};
    auto I = [&](const std::vector<KernelSpec>& k, cplx from, cplx to) {
        if (k.empty()) return cplx{1.0};
        return nested_quadrature({k}, Endpoint::point(from), to, r.cfg).value;
    };
    for (int seed = 1; seed <= 10; ++seed) {
        std::mt19937 rng(static_cast<unsigned>(seed));
        std::uniform_int_distribution<int> pick(0, 2), len(1, 3);
        std::uniform_real_distribution<double> u(-2.0, 2.0), x(-0.4, 0.4);
        auto kernel = [&] { return KernelSpec{pool[pick(rng)], cplx{u(rng), u(rng)}}; };
        const double re = x(rng);
        const cplx a{re, 2.0}, m{re, 1.4}, b{re, 0.8};
        const std::string tag = "seed " + std::to_string(seed);

        std::vector<KernelSpec> W;
        for (int i = 0, n = len(rng); i < n; ++i) W.push_back(kernel());
        // shuffle: split W into a nonempty head and the rest (total length <= 3)
        std::vector<KernelSpec> A{kernel()}, B(W.begin(), W.begin() + std::min<std::size_t>(W.size(), 2));
        std::vector<std::vector<KernelSpec>> sh;
        std::vector<KernelSpec> cur;
        shuffles(A, B, 0, 0, cur, sh);
        cplx sum{};
        for (const auto& s : sh) sum += I(s, a, b);
        r.checks.push_back(rel_check(tag + " shuffle", I(A, a, b) * I(B, a, b), sum, 1e-8));

        std::vector<KernelSpec> rev(W.rbegin(), W.rend());
        const cplx sign = (W.size() % 2) ? -1.0 : 1.0;
        r.checks.push_back(rel_check(tag + " reversal", I(W, b, a), sign * I(rev, a, b), 1e-8));

        cplx comp{};
        for (std::size_t j = 0; j <= W.size(); ++j) {
            std::vector<KernelSpec> outer(W.begin(), W.begin() + j), inner(W.begin() + j, W.end());
            comp += I(outer, m, b) * I(inner, a, m);
        }
        r.checks.push_back(rel_check(tag + " composition", I(W, a, b), comp, 1e-8));
    }
}

}  // namespace

cplx parse_complex(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw ParseError("empty complex number");
    auto num = [&](const std::string& t) -> double {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        std::size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(t, &pos);
        } catch (const std::logic_error&) {
            throw ParseError("bad complex number '" + text + "'");
        }
        if (pos != t.size()) throw ParseError("bad complex number '" + text + "'");
        return v;
    };
    if (s.back() != 'i') return {num(s), 0.0};
    s.pop_back();
    std::size_t split_at = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;)
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split_at = i;
            break;
        }
    if (split_at == std::string::npos) return {0.0, num(s)};
    return {num(s.substr(0, split_at)), num(s.substr(split_at))};
}

int RunReport::failed() const {
    int n = 0;
    for (const auto& c : checks) n += c.pass ? 0 : 1;
    return n;
}

json RunReport::to_json(bool timing) const {
    json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["config"] = config_json(cfg);
    if (!results.empty()) j["results"] = results;
    if (!checks.empty()) {
        json a = json::array();
        for (const auto& c : checks) {
            json e;
            e["name"] = c.name;
            e["lhs"] = c.lhs;
            e["rhs"] = c.rhs;
            e["diff"] = jd(c.diff);
            e["tol"] = jd(c.tol);
            e["pass"] = c.pass;
            a.push_back(e);
        }
        j["checks"] = a;
        j["passed"] = static_cast<int>(checks.size()) - failed();
        j["failed"] = failed();
    }
    if (timing) j["wall_seconds"] = jd(wall_seconds);
    return j;
}

std::string RunReport::to_csv() const {
    std::ostringstream os;
    auto cell = [](const json& v) {
        std::string s = v.is_string() ? v.get<std::string>() : v.dump();
        if (s.find_first_of(",\"\n") != std::string::npos) {
            std::string q = "\"";
            for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            return q + "\"";
        }
        return s;
    };
    if (!results.empty()) {
        os << "field,value\n";
        for (auto it = results.begin(); it != results.end(); ++it) os << cell(it.key()) << "," << cell(it.value()) << "\n";
    }
    if (!checks.empty()) {
        os << "check,lhs,rhs,diff,tol,pass\n";
        for (const auto& c : checks)
            os << cell(c.name) << "," << cell(c.lhs) << "," << cell(c.rhs) << "," << cell(jd(c.diff)) << "," << cell(jd(c.tol))
               << "," << (c.pass ? "true" : "false") << "\n";
    }
    return os.str();
}

RunReport verify_suite(const std::string& name, const NumericsConfig& cfg) {
    RunReport r;
    r.command = "verify";
    r.cfg = cfg;
    r.inputs["suite"] = name;
    if (name == "eta")
        suite_eta(r);
    else if (name == "funceq")
        suite_funceq(r);
    else if (name == "thi")
        suite_thi(r);
    else if (name == "ths")
        suite_ths(r);
    else if (name == "mzv")
        suite_mzv(r);
    else if (name == "shuffle")
        suite_shuffle(r);
    else
        throw DomainError("unknown suite '" + name + "' (eta, funceq, thi, ths, mzv, shuffle)");
    return r;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Modular iterated integrals, multiple modular L-values and MZVs", "moditer"};
    app.require_subcommand(1);
    NumericsConfig cfg;
    std::string output = "json";
    std::vector<std::string> form_files;
    bool timing = false;
    app.add_option("--order", cfg.order, "q-expansion truncation")->envname("MODITER_ORDER")->capture_default_str();
    app.add_option("--height", cfg.height, "truncation height towards i-infinity")->envname("MODITER_HEIGHT")->capture_default_str();
    app.add_option("--panels", cfg.panels, "initial quadrature panels")->envname("MODITER_PANELS")->capture_default_str();
    app.add_option("--max-panels", cfg.max_panels, "refinement limit")->envname("MODITER_MAX_PANELS")->capture_default_str();
    app.add_option("--tol", cfg.tol, "relative quadrature tolerance")->envname("MODITER_TOL")->capture_default_str();
    app.add_option("--cutoff", cfg.cutoff, "shell cutoff for L-sums")->envname("MODITER_CUTOFF")->capture_default_str();
    app.add_option("--output", output, "json or csv")
        ->envname("MODITER_OUTPUT")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    app.add_option("--form", form_files, "coefficient file (repeatable)");
    app.add_flag("--timing", timing, "add wall time to the report");

    std::string names, z_text, s_text, alpha_text, method = "auto", to_text, suite, index = "2", mzv_method = "all",
                                                      convention = "asc";
    bool fricke = false, allow_outside = false, completed = false;
    double check_tol = 0.0;
    long series_cutoff = 1000000;

    auto sub = [&](const char* name, const char* help) {
        auto* s = app.add_subcommand(name, help);
        s->fallthrough();
        return s;
    };
    auto* qexp = sub("qexp", "exact q-expansion of a built-in series");
    qexp->add_option("name", names, "F, G, G-16F, theta4, delta, lambda, E<k>");
    auto* eval = sub("eval", "evaluate a form at a point");
    eval->add_option("name", names, "form name or file");
    eval->add_option("--z", z_text, "point in the upper half-plane")->required();
    eval->add_flag("--fricke", fricke, "evaluate the Fricke image instead");
    auto* lvalue = sub("lvalue", "multiple modular L-value");
    lvalue->add_option("forms", names, "comma-separated forms");
    lvalue->add_option("--s", s_text, "comma-separated exponents")->required();
    lvalue->add_option("--method", method, "auto, sharp, smoothed or continued")
        ->check(CLI::IsMember({"auto", "sharp", "smoothed", "continued"}));
    lvalue->add_flag("--allow-outside", allow_outside, "sum outside the convergence guard");
    auto* iterint = sub("iterint", "modular iterated integral from i-infinity to 0 (or to --to)");
    iterint->add_option("forms", names, "comma-separated forms, 1 for the constant");
    iterint->add_option("--s", s_text, "comma-separated exponents")->required();
    iterint->add_option("--to", to_text, "upper endpoint in H instead of 0");
    iterint->add_flag("--completed", completed, "multiply by N^{(s_1+...+s_n)/2}");
    auto* thi = sub("thi-verify", "iterated integral against its L-value expansion");
    auto* ths = sub("ths-verify", "L-value against its iterated-integral expansion");
    for (auto* s : {thi, ths}) {
        s->add_option("forms", names, "comma-separated forms")->required();
        s->add_option("--s", s_text, "first exponent")->required();
        s->add_option("--alpha", alpha_text, "alpha_2..alpha_n");
        s->add_option("--check-tol", check_tol, "relative tolerance")->default_val(1e-4);
    }
    auto* funceq = sub("funceq-verify", "functional equation Z(s) = (-1)^(sum s) Z(dual)");
    funceq->add_option("forms", names, "comma-separated forms")->required();
    funceq->add_option("--s", s_text, "comma-separated exponents")->required();
    funceq->add_option("--check-tol", check_tol, "relative tolerance")->default_val(1e-6);
    auto* eta = sub("eta-verify", "eta-quotient identities, exact");
    auto* mzv = sub("mzv", "multiple zeta value");
    mzv->add_option("--index", index, "comma-separated index")->capture_default_str();
    mzv->add_option("--method", mzv_method, "series, p1, modular or all")
        ->check(CLI::IsMember({"series", "p1", "modular", "all"}))
        ->capture_default_str();
    mzv->add_option("--convention", convention, "asc: n_1 < ... < n_d, desc: n_1 > ... > n_d")
        ->check(CLI::IsMember({"asc", "desc"}))
        ->capture_default_str();
    mzv->add_option("--series-cutoff", series_cutoff, "cutoff of the series")->capture_default_str();
    auto* verify = sub("verify", "run a verification suite");
    verify->add_option("--suite", suite, "eta, funceq, thi, ths, mzv, shuffle")->required();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 1;
    }

    const auto start = std::chrono::steady_clock::now();
    RunReport r;
    try {
        cfg.validate();
        r.cfg = cfg;
        const int M = form_order(cfg);
        if (qexp->parsed()) {
            r.command = "qexp";
            r.inputs["name"] = names;
            r.inputs["order"] = cfg.order;
            json coeffs = json::array();
            if (!names.empty() && form_files.empty()) {
                const QSeries q = builtin_form(names, cfg.order);
                for (int k = 0; k <= q.order(); ++k) coeffs.push_back(rational_json(q[k]));
                if (q.prefactor_num() != 0) r.results["q_power"] = std::to_string(q.prefactor_num()) + "/24";
            } else {
                const auto forms = resolve_forms(names, form_files, cfg.order);
                if (forms.size() != 1) throw DomainError("qexp takes one form");
                const auto& c = forms[0].coeffs;
                for (int k = 0; k <= cfg.order && k < static_cast<int>(c.size()); ++k)
                    coeffs.push_back(c[k].imag() == 0.0 ? jd(c[k].real()) : jc(c[k]));
            }
            r.results["coefficients"] = coeffs;
        } else if (eval->parsed()) {
            r.command = "eval";
            const auto forms = resolve_forms(names, form_files, cfg.order);
            if (forms.size() != 1) throw DomainError("eval takes one form");
            const cplx z = parse_complex(z_text);
            r.inputs["form"] = forms[0].label;
            r.inputs["z"] = jc(z);
            r.inputs["fricke"] = fricke;
            const Evaluation e = fricke ? fricke_evaluate(forms[0], z, cfg) : evaluate_at(forms[0], z, cfg);
            r.results["value"] = jc(e.value);
            r.results["tail_bound"] = jd(e.tail_bound);
        } else if (lvalue->parsed()) {
            r.command = "lvalue";
            const auto forms = resolve_forms(names, form_files, M);
            const auto s = parse_complex_list(s_text);
            r.inputs["forms"] = forms_json(forms);
            json sj = json::array();
            for (cplx x : s) sj.push_back(jc(x));
            r.inputs["s"] = sj;
            r.inputs["method"] = method;
            if (method == "continued") {
                std::vector<long> alphas;
                for (std::size_t i = 1; i < s.size(); ++i) {
                    if (s[i].imag() != 0.0 || s[i].real() != std::round(s[i].real()) || s[i].real() < 1)
                        throw DomainError("continuation needs positive integer exponents after the first");
                    alphas.push_back(static_cast<long>(s[i].real()));
                }
                const ContinuedResult c = L_continued(forms, s[0], alphas, cfg);
                r.results["value"] = jc(c.value);
                r.results["error"] = jd(c.error);
                r.results["terms"] = c.terms;
            } else {
                const LMethod m = method == "sharp" ? LMethod::Sharp : method == "smoothed" ? LMethod::Smoothed : LMethod::Auto;
                const LResult l = L_direct({forms, s}, cfg.cutoff, m, allow_outside);
                r.results["value"] = jc(l.value);
                r.results["tail"] = jd(l.tail);
                r.results["last_shell"] = jd(l.last_shell);
                r.results["method"] = method_name(l.method);
                r.results["cutoff"] = l.cutoff;
            }
            r.results["branch"] = NumericsConfig::branch_tag();
        } else if (iterint->parsed()) {
            r.command = "iterint";
            const auto forms = resolve_forms(names, form_files, cfg.order);
            const auto s = parse_complex_list(s_text);
            const IterSpec spec = make_spec(forms, s);
            r.inputs["forms"] = forms_json(forms);
            json sj = json::array();
            for (cplx x : s) sj.push_back(jc(x));
            r.inputs["s"] = sj;
            IterResult res;
            if (!to_text.empty()) {
                const cplx b = parse_complex(to_text);
                r.inputs["to"] = jc(b);
                res = nested_quadrature(spec, Endpoint::infinity(), b, cfg);
            } else {
                r.inputs["to"] = "0";
                res = completed ? completed_Z(spec, cfg) : iterint_full(spec, cfg);
            }
            r.inputs["completed"] = completed;
            r.results["value"] = jc(res.value);
            r.results["error"] = jd(res.error);
            r.results["panels"] = res.panels;
            r.results["height"] = jd(res.height);
            json d = json::array();
            for (const auto& x : pole_divisors(spec)) d.push_back(x);
            r.results["pole_divisors"] = d;
        } else if (thi->parsed() || ths->parsed()) {
            const bool is_thi = thi->parsed();
            r.command = is_thi ? "thi-verify" : "ths-verify";
            const auto forms = resolve_forms(names, form_files, M);
            const cplx s = parse_complex(s_text);
            const auto alphas = parse_int_list(alpha_text);
            const int n = static_cast<int>(forms.size());
            r.inputs["forms"] = forms_json(forms);
            r.inputs["s"] = jc(s);
            r.inputs["alpha"] = alphas;
            TermList terms = is_thi ? thI_expand(n, alphas) : thS_expand(n, alphas);
            std::vector<cplx> a0;
            for (const auto& f : forms) a0.push_back(f.a0());
            terms.drop_vanishing(a0);
            r.results["terms"] = terms_json(terms);
            std::vector<cplx> ex{s};
            for (long a : alphas) ex.emplace_back(static_cast<double>(a), 0.0);
            cplx lhs, rhs;
            if (is_thi) {
                lhs = iterint_full(make_spec(forms, ex), cfg).value;
                rhs = evaluate_terms(terms, forms, s, cfg).value;
            } else {
                lhs = L_direct({forms, ex}, cfg.cutoff).value;
                rhs = evaluate_terms(terms, forms, s, cfg).value;
            }
            r.checks.push_back(rel_check(is_thi ? "iterated integral = L-value expansion" : "L-value = integral expansion", lhs,
                                         rhs, check_tol));
        } else if (funceq->parsed()) {
            r.command = "funceq-verify";
            const auto forms = resolve_forms(names, form_files, cfg.order);
            const auto s = parse_complex_list(s_text);
            const IterSpec spec = make_spec(forms, s);
            r.inputs["forms"] = forms_json(forms);
            cplx total{};
            json sj = json::array();
            for (cplx x : s) {
                total += x;
                sj.push_back(jc(x));
            }
            r.inputs["s"] = sj;
            const cplx lhs = completed_Z(spec, cfg).value;
            const cplx rhs = minus_one_pow(total) * completed_Z(fricke_dual(spec), cfg).value;
            r.checks.push_back(rel_check("Z(s) = (-1)^(s_1+...+s_n) Z(dual)", lhs, rhs, check_tol));
        } else if (eta->parsed()) {
            r = verify_suite("eta", cfg);
            r.command = "eta-verify";
            r.inputs["order"] = cfg.order;
        } else if (mzv->parsed()) {
            r.command = "mzv";
            const MzvIndex idx = MzvIndex::parse(index, convention == "desc");
            r.inputs["index"] = index;
            r.inputs["convention"] = convention;
            r.inputs["ascending_index"] = idx.to_string();
            r.inputs["method"] = mzv_method;
            if (mzv_method == "series" || mzv_method == "all") {
                const MzvValue v = mzv_series(idx, series_cutoff);
                r.results["series"] = json{{"value", jd(v.value)}, {"error", jd(v.error)}};
            }
            if (mzv_method == "p1" || mzv_method == "all") {
                const MzvValue v = mzv_p1_integral(idx, cfg);
                r.results["p1"] = json{{"value", jd(v.value)}, {"error", jd(v.error)}};
            }
            if (mzv_method == "modular" || mzv_method == "all") {
                const ModularMzv m = mzv_modular_integral(idx, cfg);
                r.results["modular"] = json{{"value", jd(m.value.value)},
                                            {"error", jd(m.value.error)},
                                            {"raw", jc(m.raw)},
                                            {"prefactor", jc(m.prefactor)}};
            }
        } else if (verify->parsed()) {
            r = verify_suite(suite, cfg);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        if (const auto* p = dynamic_cast<const PoleError*>(&e)) err << "divisor: " << p->divisor() << "\n";
        return 1;
    }
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (output == "csv")
        out << r.to_csv();
    else
        out << r.to_json(timing).dump(2) << "\n";
    if (r.failed() > 0) {
        for (const auto& c : r.checks)
            if (!c.pass) err << "failed: " << c.name << " (diff " << format15(c.diff) << ", tol " << format15(c.tol) << ")\n";
        return 2;
    }
    return 0;
}

}  // namespace moditer::cli
