#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace normsol {

/// Failure categories raised by the solvers. The CLI prints the name verbatim.
enum class ErrorKind {
    InvalidArgument,
    NoConvergence,
    TailNotResolved,
    MassCriticalInfeasible,
    SingularOperator,
    ZeroCountMismatch,
    NewtonDiverged,
    NonPositive,
    NoSolutionInRegime,
    BracketFailed,
    RegimeMismatch,
    WrongSide,
    DegenerateFit,
    NonPositiveDensity,
    UnknownTheorem,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::TailNotResolved: return "TailNotResolved";
    case ErrorKind::MassCriticalInfeasible: return "MassCriticalInfeasible";
    case ErrorKind::SingularOperator: return "SingularOperator";
    case ErrorKind::ZeroCountMismatch: return "ZeroCountMismatch";
    case ErrorKind::NewtonDiverged: return "NewtonDiverged";
    case ErrorKind::NonPositive: return "NonPositive";
    case ErrorKind::NoSolutionInRegime: return "NoSolutionInRegime";
    case ErrorKind::BracketFailed: return "BracketFailed";
    case ErrorKind::RegimeMismatch: return "RegimeMismatch";
    case ErrorKind::WrongSide: return "WrongSide";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::NonPositiveDensity: return "NonPositiveDensity";
    case ErrorKind::UnknownTheorem: return "UnknownTheorem";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }
    /// Message without the kind prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

inline void require(bool condition, const std::string& what)
{
    if (!condition)
        throw Error(ErrorKind::InvalidArgument, what);
}

} // namespace normsol
