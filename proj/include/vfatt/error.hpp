#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vfatt {

enum class ErrorKind {
    NearZeroNorm,
    SingularInertia,
    CollinearInputs,
    AssumptionViolated,
    NotSymmetric,
    InvalidArgument,
    ParseError,
    ValidationError,
    IoError,
    NumericalBlowUp,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::NearZeroNorm: return "NearZeroNorm";
    case ErrorKind::SingularInertia: return "SingularInertia";
    case ErrorKind::CollinearInputs: return "CollinearInputs";
    case ErrorKind::AssumptionViolated: return "AssumptionViolated";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::NumericalBlowUp: return "NumericalBlowUp";
    }
    return "Unknown";
}

/// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace vfatt
