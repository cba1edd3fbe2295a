#pragma once

#include "moditer/numerics.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace moditer {

/// A modular form on Gamma_0(N) given by its q-expansion at i-infinity.
/// Coefficients are trusted input; no modularity check is made.
///
/// `fricke_coeffs`, when present, is the q-expansion of the image under the
/// Fricke involution (same weight and level). It is what lets paths towards
/// the cusp 0 be evaluated near i-infinity instead. Level-1 forms are their
/// own image and need none.
struct ModularForm {
    int level = 1;
    int weight = 0;
    std::vector<cplx> coeffs;
    std::string label;
    std::string character = "trivial";
    std::optional<std::vector<cplx>> fricke_coeffs;
    bool finite_expansion = false;  // coeffs are the whole expansion (no tail)

    cplx a0() const { return coeffs.empty() ? cplx{} : coeffs.front(); }
    bool is_cuspidal_at_infinity() const { return a0() == cplx{}; }
};

struct Evaluation {
    cplx value;
    double tail_bound = 0.0;
};

/// sum_{m <= M} a_m e^{2 pi i m z}, with M = min(cfg.order, #coeffs - 1).
/// Throws DomainError for Im z <= 0, AccuracyError when the tail bound exceeds
/// cfg.tol and cfg.refuse_truncation is set.
Evaluation evaluate_at(const ModularForm& f, cplx z, const NumericsConfig& cfg);

/// Same as evaluate_at at many points (vectorised). Returns the values; the
/// largest tail bound seen is written to *max_tail when given.
std::vector<cplx> evaluate_batch(const ModularForm& f, std::span<const cplx> z, const NumericsConfig& cfg,
                                 double* max_tail = nullptr);

/// Same series evaluation on raw coefficients.
std::vector<cplx> evaluate_coeffs(std::span<const cplx> coeffs, std::span<const cplx> z, const NumericsConfig& cfg,
                                  double* max_tail = nullptr, bool finite_expansion = false);

struct CuspSplit {
    ModularForm cusp;  // f - a_0
    cplx a0;
};
CuspSplit cusp_part(const ModularForm& f);

/// N^{-k/2} z^{-k} f(-1/(N z)). Trivial character only.
Evaluation fricke_evaluate(const ModularForm& f, cplx z, const NumericsConfig& cfg);

/// The Fricke image as a ModularForm (label gets a "~" suffix). Level 1 returns
/// f itself; other levels need fricke_coeffs. Throws DomainError otherwise.
ModularForm fricke_image(const ModularForm& f);

/// Built-in forms to order M: "F", "G", "G-16F" (level 4, weight 2), "delta"
/// (level 1, weight 12), "E<k>" (level 1, weight k). Fricke data included.
ModularForm builtin_modular_form(const std::string& name, int M);

/// The constant function 1 seen as a weight-0 form of the given level.
ModularForm constant_one(int level);

/// JSON coefficient files: {"level", "weight", "label", "coeffs"} with optional
/// "fricke_coeffs" and "character". Complex entries are [re, im] pairs.
ModularForm load_form(const std::string& path);
ModularForm parse_form(const std::string& json_text);
void save_form(const ModularForm& f, const std::string& path);
std::string form_to_json(const ModularForm& f);

}  // namespace moditer
