#pragma once

#include <stdexcept>
#include <string>

namespace ntklens {

// Bad or inconsistent user-facing configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

// Structurally valid request the implementation does not support, e.g. a
// unit kind foreign to a model (CLI exit code 4).
struct UnsupportedError : std::runtime_error {
    explicit UnsupportedError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace ntklens
