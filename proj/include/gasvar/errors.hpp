#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gasvar {

/// Invalid distribution or model parameters, or an argument outside its domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The GAS recursion produced a non-finite log-scale.
class ExplosiveFilterError : public std::runtime_error {
public:
    ExplosiveFilterError(std::size_t step, const std::string& what)
        : std::runtime_error(what), step_(step) {}

    /// Zero-based observation index at which the state stopped being finite.
    [[nodiscard]] std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Maximum likelihood estimation could not be attempted (bad or degenerate data).
class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rolling forecast aborted, e.g. too many failed refits.
class RollError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed user input: files, CSV content, command-line values.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gasvar
