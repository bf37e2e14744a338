#pragma once

#include <stdexcept>
#include <string>

namespace p4spectra {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Closed-form denominator collapsed below threshold.
struct PoleError : Error {
    explicit PoleError(const std::string& msg) : Error(msg) {}
};

// Input outside the admissible domain of the function being evaluated.
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Case id and explicit parameters disagree.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Two routes that must differ by a constant do not.
struct InconsistentError : Error {
    explicit InconsistentError(const std::string& msg) : Error(msg) {}
};

struct GridTooCoarseError : Error {
    explicit GridTooCoarseError(const std::string& msg) : Error(msg) {}
};

struct SingularWavefunctionError : Error {
    explicit SingularWavefunctionError(const std::string& msg) : Error(msg) {}
};

struct SingularPotentialError : Error {
    explicit SingularPotentialError(const std::string& msg) : Error(msg) {}
};

struct ConvergenceError : Error {
    ConvergenceError(const std::string& msg, int level) : Error(msg), failing_level(level) {}
    int failing_level;
};

struct BudgetExceededError : Error {
    explicit BudgetExceededError(const std::string& msg) : Error(msg) {}
};

} // namespace p4spectra
