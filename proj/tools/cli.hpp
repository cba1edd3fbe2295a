#pragma once

#include "json.hpp"
#include "moditer/numerics.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace moditer::cli {

/// One verification check: lhs against rhs with a tolerance (relative unless noted).
struct Check {
    std::string name;
    nlohmann::ordered_json lhs;
    nlohmann::ordered_json rhs;
    double diff = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct RunReport {
    std::string command;
    nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
    nlohmann::ordered_json results = nlohmann::ordered_json::object();
    std::vector<Check> checks;
    NumericsConfig cfg;
    double wall_seconds = 0.0;

    int failed() const;
    nlohmann::ordered_json to_json(bool timing) const;
    std::string to_csv() const;
};

/// Parses argv (without the program name), runs the subcommand and writes the
/// report to out, diagnostics to err. Returns 0 on success, 1 on usage, parse or
/// domain errors, 2 when a verification check fails.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Suites: eta, funceq, thi, ths, mzv, shuffle. DomainError for an unknown name.
RunReport verify_suite(const std::string& name, const NumericsConfig& cfg);

/// "3", "-2.5", "5.5+0.7i", "2i", "-i".
cplx parse_complex(const std::string& text);

}  // namespace moditer::cli
