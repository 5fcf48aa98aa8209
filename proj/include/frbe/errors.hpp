#pragma once

#include <stdexcept>
#include <string>

namespace frbe {

/// Raised when an adaptive quadrature or iterative scheme cannot certify the
/// requested tolerance.
struct ToleranceError : std::runtime_error {
    explicit ToleranceError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised on malformed or inconsistent experiment configuration; carries the
/// offending field path.
struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(std::string field_path, const std::string& what)
        : std::runtime_error(field_path + ": " + what), field(std::move(field_path)) {}
};

}
