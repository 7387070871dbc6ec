#pragma once

#include <stdexcept>
#include <string>

namespace descente {

// Malformed or inconsistent input. The CLI maps this to exit code 2.
struct InvalidInput : std::runtime_error {
    explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration or search exceeded its configured budget (exit code 3).
struct GuardExceeded : std::runtime_error {
    explicit GuardExceeded(const std::string& what) : std::runtime_error(what) {}
};

// A postcondition that should hold by construction did not (exit code 3).
struct InternalError : std::runtime_error {
    explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

// Budget for exhaustive enumerations; DESCENTE_MAX_ENUM overrides the default.
std::size_t enumeration_budget();

}  // namespace descente
