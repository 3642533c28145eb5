#pragma once

#include <stdexcept>
#include <string>

namespace cpmeig {

// Bad user input: unknown surface name, malformed config, inconsistent BC.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Query outside the supported neighborhood of a surface, or a sample point
// whose interpolation footprint leaves the band.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Solver breakdown: singular factorization, non-convergence.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Exceeded a configured budget (band node count).
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

// A structural guarantee was violated (missing footprint node, bad index).
// Indicates a bug, not bad input.
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace cpmeig
