#pragma once

#include <stdexcept>
#include <string>

namespace faa {

// Error taxonomy mirrors the CLI exit-code contract:
// IoError -> 2, ShapeError -> 3, ConfigError -> 4.

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ShapeError : std::runtime_error {
    explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace faa
