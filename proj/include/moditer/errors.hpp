#pragma once

#include <stdexcept>
#include <string>

namespace moditer {

/// Precondition on an argument was violated (bad index, Im z <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Evaluation point lies on a pole divisor. `divisor()` names it.
class PoleError : public std::domain_error {
public:
    PoleError(const std::string& what, std::string divisor)
        : std::domain_error(what), divisor_(std::move(divisor)) {}
    const std::string& divisor() const noexcept { return divisor_; }

private:
    std::string divisor_;
};

/// An integral towards a cusp does not converge for the given exponents.
class DivergenceError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Quadrature or truncation could not reach the requested tolerance.
class AccuracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace moditer
