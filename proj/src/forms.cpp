#include "moditer/forms.hpp"

#include "moditer/errors.hpp"
#include "moditer/qseries.hpp"
#include "moditer/simd.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace moditer {

namespace {

using nlohmann::json;

std::vector<cplx> to_complex(const QSeries& s) {
    std::vector<cplx> out;
    for (double x : s.to_doubles()) out.emplace_back(x, 0.0);
    return out;
}

double tail_estimate(std::span<const cplx> c, std::size_t M, double absq) {
    // next terms behave like the last ones; F-like series vanish at every other index
    double last = std::abs(c[M]);
    if (M >= 1) last = std::max(last, std::abs(c[M - 1]));
    if (absq >= 1.0) return INFINITY;
    return last * std::pow(absq, static_cast<double>(M)) * absq / (1.0 - absq) * (M + 2.0);
}

std::vector<cplx> read_coeff_array(const json& arr, const char* field) {
    if (!arr.is_array()) throw ParseError(std::string("field '") + field + "' must be an array");
    std::vector<cplx> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (v.is_number()) {
            out.emplace_back(v.get<double>(), 0.0);
        } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
            out.emplace_back(v[0].get<double>(), v[1].get<double>());
        } else {
            throw ParseError(std::string("entries of '") + field + "' must be numbers or [re, im] pairs");
        }
    }
    return out;
}

json write_coeff_array(const std::vector<cplx>& c) {
    json arr = json::array();
    for (const auto& x : c) {
        if (x.imag() == 0.0)
            arr.push_back(x.real());
        else
            arr.push_back(json::array({x.real(), x.imag()}));
    }
    return arr;
}

}  // namespace

std::vector<cplx> evaluate_coeffs(std::span<const cplx> coeffs, std::span<const cplx> z, const NumericsConfig& cfg,
                                  double* max_tail, bool finite_expansion) {
    if (coeffs.empty()) throw DomainError("form has no coefficients");
    const std::size_t M = std::min<std::size_t>(static_cast<std::size_t>(std::max(cfg.order, 0)), coeffs.size() - 1);
    std::vector<double> cre(M + 1), cim(M + 1);
    for (std::size_t k = 0; k <= M; ++k) cre[k] = coeffs[k].real(), cim[k] = coeffs[k].imag();
    std::vector<double> qre(z.size()), qim(z.size()), ore(z.size()), oim(z.size());
    double worst = 0.0;
    for (std::size_t p = 0; p < z.size(); ++p) {
        if (!(z[p].imag() > 0.0)) throw DomainError("evaluation point must lie in the upper half-plane");
        const cplx q = std::exp(2.0 * kPi * kI * z[p]);
        qre[p] = q.real();
        qim[p] = q.imag();
        if (!finite_expansion || M + 1 < coeffs.size()) worst = std::max(worst, tail_estimate(coeffs, M, std::abs(q)));
    }
    simd::qseries_eval({cre, cim}, {qre, qim}, {ore, oim});
    std::vector<cplx> out(z.size());
    double scale = 0.0;
    for (std::size_t p = 0; p < z.size(); ++p) {
        out[p] = {ore[p], oim[p]};
        scale = std::max(scale, std::abs(out[p]));
    }
    if (cfg.refuse_truncation && worst > cfg.tol * std::max(1.0, scale))
        throw AccuracyError("q-expansion tail bound " + format15(worst) +
                            " exceeds tolerance; evaluate closer to i-infinity or raise the order");
    if (max_tail) *max_tail = worst;
    return out;
}

std::vector<cplx> evaluate_batch(const ModularForm& f, std::span<const cplx> z, const NumericsConfig& cfg,
                                 double* max_tail) {
    return evaluate_coeffs(f.coeffs, z, cfg, max_tail, f.finite_expansion);
}

Evaluation evaluate_at(const ModularForm& f, cplx z, const NumericsConfig& cfg) {
    double tail = 0.0;
    const cplx pt[1] = {z};
    auto v = evaluate_batch(f, pt, cfg, &tail);
    return {v[0], tail};
}

CuspSplit cusp_part(const ModularForm& f) {
    CuspSplit out{f, f.a0()};
    if (!out.cusp.coeffs.empty()) out.cusp.coeffs[0] = 0.0;
    out.cusp.label = f.label + "^0";
    if (out.cusp.fricke_coeffs) {
        // (f - a0)~ = f~ - a0 * 1~ and 1~ = N^{-k/2} z^{-k} is not a q-series
        // unless k = 0; drop the data rather than carry something wrong.
        if (f.weight == 0 && !out.cusp.fricke_coeffs->empty())
            (*out.cusp.fricke_coeffs)[0] -= out.a0;
        else
            out.cusp.fricke_coeffs.reset();
    }
    return out;
}

Evaluation fricke_evaluate(const ModularForm& f, cplx z, const NumericsConfig& cfg) {
    if (f.character != "trivial") throw DomainError("Fricke reflection is implemented for trivial character only");
    if (!(z.imag() > 0.0)) throw DomainError("evaluation point must lie in the upper half-plane");
    const double N = f.level;
    const cplx w = -1.0 / (N * z);
    const Evaluation inner = evaluate_at(f, w, cfg);
    const cplx factor = std::pow(N, -0.5 * f.weight) * std::pow(z, -f.weight);
    return {factor * inner.value, std::abs(factor) * inner.tail_bound};
}

ModularForm fricke_image(const ModularForm& f) {
    if (f.character != "trivial") throw DomainError("Fricke reflection is implemented for trivial character only");
    ModularForm g = f;
    g.label = f.label + "~";
    if (f.level == 1) {
        if (f.weight % 2 != 0) throw DomainError("odd weight at level 1: the form vanishes identically");
        return g;
    }
    if (!f.fricke_coeffs) throw DomainError("Fricke image of '" + f.label + "' at level " + std::to_string(f.level) +
                                            " is unknown; supply fricke_coeffs");
    g.coeffs = *f.fricke_coeffs;
    std::vector<cplx> back = f.coeffs;
    if (f.weight % 2 != 0)
        for (auto& c : back) c = -c;
    g.fricke_coeffs = std::move(back);
    return g;
}

ModularForm builtin_modular_form(const std::string& name, int M) {
    ModularForm f;
    f.label = name;
    const Rational sixteenth = ratio(1, 16);
    if (name == "F") {
        f.level = 4, f.weight = 2;
        f.coeffs = to_complex(builtin_form("F", M));
        // F~ = F - G/16
        f.fricke_coeffs = to_complex(builtin_form("F", M) - sixteenth * builtin_form("G", M));
    } else if (name == "G") {
        f.level = 4, f.weight = 2;
        f.coeffs = to_complex(builtin_form("G", M));
        f.fricke_coeffs = to_complex(Rational(-1) * builtin_form("G", M));
    } else if (name == "G-16F") {
        f.level = 4, f.weight = 2;
        f.coeffs = to_complex(builtin_form("G-16F", M));
        f.fricke_coeffs = to_complex(Rational(-16) * builtin_form("F", M));
    } else if (name == "delta") {
        f.weight = 12;
        f.coeffs = to_complex(builtin_form("delta", M));
    } else if (name.size() >= 2 && name[0] == 'E') {
        const auto s = builtin_form(name, M);
        f.weight = std::stoi(name.substr(1));
        f.coeffs = to_complex(s);
    } else {
        throw DomainError("unknown built-in form '" + name + "'");
    }
    return f;
}

ModularForm constant_one(int level) {
    ModularForm f;
    f.level = level;
    f.weight = 0;
    f.coeffs = {1.0};
    f.label = "1";
    f.fricke_coeffs = std::vector<cplx>{1.0};
    f.finite_expansion = true;
    return f;
}

ModularForm parse_form(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("form file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("form file must hold a JSON object");
    for (const char* key : {"level", "weight", "coeffs"})
        if (!j.contains(key)) throw ParseError(std::string("form file is missing field '") + key + "'");
    ModularForm f;
    if (!j["level"].is_number_integer() || j["level"].get<int>() < 1) throw ParseError("'level' must be a positive integer");
    if (!j["weight"].is_number_integer()) throw ParseError("'weight' must be an integer");
    f.level = j["level"].get<int>();
    f.weight = j["weight"].get<int>();
    f.label = j.value("label", std::string("form"));
    f.character = j.value("character", std::string("trivial"));
    f.coeffs = read_coeff_array(j["coeffs"], "coeffs");
    if (f.coeffs.empty()) throw ParseError("'coeffs' must not be empty");
    if (j.contains("fricke_coeffs")) {
        f.fricke_coeffs = read_coeff_array(j["fricke_coeffs"], "fricke_coeffs");
        if (f.fricke_coeffs->empty()) throw ParseError("'fricke_coeffs' must not be empty");
    }
    return f;
}

ModularForm load_form(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open form file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_form(ss.str());
}

std::string form_to_json(const ModularForm& f) {
    json j;
    j["level"] = f.level;
    j["weight"] = f.weight;
    j["label"] = f.label;
    if (f.character != "trivial") j["character"] = f.character;
    j["coeffs"] = write_coeff_array(f.coeffs);
    if (f.fricke_coeffs) j["fricke_coeffs"] = write_coeff_array(*f.fricke_coeffs);
    return j.dump();
}

void save_form(const ModularForm& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write form file '" + path + "'");
    out << form_to_json(f) << '\n';
}

}  // namespace moditer
