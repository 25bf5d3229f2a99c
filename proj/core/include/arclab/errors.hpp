#pragma once
// Error taxonomy. The CLI maps InstanceError/GuardError to exit code 2
// (bad input / hypothesis failure) and check failures to exit code 1.

#include <stdexcept>
#include <string>

namespace arclab {

// A problem instance violates a structural hypothesis (non-smooth f, P off
// the leading-form zero locus, p <= k, malformed input, ...).
struct InstanceError : std::runtime_error {
    explicit InstanceError(const std::string& msg) : std::runtime_error(msg) {}
};

// An enumeration would exceed the configured size guard.
struct GuardError : std::runtime_error {
    explicit GuardError(const std::string& msg) : std::runtime_error(msg) {}
};

// An argument is outside an operation's documented domain.
struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

}  // namespace arclab
