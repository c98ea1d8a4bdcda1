#pragma once

#include <stdexcept>
#include <string>

namespace mchd {

// Invalid parameters or configuration values (CLI exit code 1).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable, malformed or insufficient input data (CLI exit code 2).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// API misuse: mismatched dimensions, empty inputs, out-of-range levels.
struct UsageError : std::logic_error {
    explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace mchd
