#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phasim {

enum class ErrorKind {
    InvalidArgument,
    ZeroDetuning,
    ZeroShiftedDetuning,
    ZeroBeat,
    RegimeViolation,
    NonUniformDetunings,
    BudgetTooSmall,
    NondeterministicOutcome,
    DegreeOverflow,
    EmptyEnsemble,
    DegenerateFit,
    BudgetExceeded,
    ConfigError,
    IoFailure,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::ZeroDetuning: return "ZeroDetuning";
        case ErrorKind::ZeroShiftedDetuning: return "ZeroShiftedDetuning";
        case ErrorKind::ZeroBeat: return "ZeroBeat";
        case ErrorKind::RegimeViolation: return "RegimeViolation";
        case ErrorKind::NonUniformDetunings: return "NonUniformDetunings";
        case ErrorKind::BudgetTooSmall: return "BudgetTooSmall";
        case ErrorKind::NondeterministicOutcome: return "NondeterministicOutcome";
        case ErrorKind::DegreeOverflow: return "DegreeOverflow";
        case ErrorKind::EmptyEnsemble: return "EmptyEnsemble";
        case ErrorKind::DegenerateFit: return "DegenerateFit";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::IoFailure: return "IoFailure";
    }
    return "Unknown";
}

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace phasim
