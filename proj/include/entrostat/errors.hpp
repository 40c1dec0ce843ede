#pragma once

#include <stdexcept>
#include <string>

namespace entrostat {

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Requested point sits on a support edge where the density diverges.
struct EdgeError : std::runtime_error {
    explicit EdgeError(const std::string& what) : std::runtime_error(what) {}
};

struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Coincident or non-positive eigenvalues in a log-gas functional.
struct DegenerateError : std::runtime_error {
    explicit DegenerateError(const std::string& what) : std::runtime_error(what) {}
};

struct BracketError : std::runtime_error {
    explicit BracketError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace entrostat
