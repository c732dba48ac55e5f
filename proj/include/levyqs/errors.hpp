#pragma once

#include <stdexcept>
#include <string>

namespace levyqs {

// Error taxonomy. Each maps to one failure mode of the library contracts;
// the CLI translates them to stable exit codes.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& m) : std::runtime_error(m) {}
};

struct StabilityError : std::runtime_error {
    explicit StabilityError(const std::string& m) : std::runtime_error(m) {}
};

struct BelowSingularity : std::runtime_error {
    explicit BelowSingularity(const std::string& m) : std::runtime_error(m) {}
};

struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& m) : std::runtime_error(m) {}
};

struct AssumptionViolation : std::runtime_error {
    explicit AssumptionViolation(const std::string& m) : std::runtime_error(m) {}
};

struct PoleError : std::runtime_error {
    explicit PoleError(const std::string& m) : std::runtime_error(m) {}
};

struct OscillationError : std::runtime_error {
    explicit OscillationError(const std::string& m) : std::runtime_error(m) {}
};

struct FitError : std::runtime_error {
    explicit FitError(const std::string& m) : std::runtime_error(m) {}
};

struct ParameterError : std::runtime_error {
    explicit ParameterError(const std::string& m) : std::runtime_error(m) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};

struct EmptySample : std::runtime_error {
    explicit EmptySample(const std::string& m) : std::runtime_error(m) {}
};

struct CapabilityError : std::runtime_error {
    explicit CapabilityError(const std::string& m) : std::runtime_error(m) {}
};

} // namespace levyqs
