#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qtj
{

enum class Errc
{
    ZeroToNegativePower,
    PrecisionMismatch,
    MoebiusPole,
    ZeroDenominator,
    PrecisionExhausted,
    EmptySet,
    ExactModeUnavailable,
    PoleEncountered,
    DegenerateDiscriminant,
    NotRepresentable,
    InvalidArgument,
    Parse,
    IoFailure,
    SchemaViolation,
};

inline std::string_view errc_name(Errc code)
{
    switch (code)
    {
    case Errc::ZeroToNegativePower: return "ZeroToNegativePower";
    case Errc::PrecisionMismatch: return "PrecisionMismatch";
    case Errc::MoebiusPole: return "MoebiusPole";
    case Errc::ZeroDenominator: return "ZeroDenominator";
    case Errc::PrecisionExhausted: return "PrecisionExhausted";
    case Errc::EmptySet: return "EmptySet";
    case Errc::ExactModeUnavailable: return "ExactModeUnavailable";
    case Errc::PoleEncountered: return "PoleEncountered";
    case Errc::DegenerateDiscriminant: return "DegenerateDiscriminant";
    case Errc::NotRepresentable: return "NotRepresentable";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Parse: return "Parse";
    case Errc::IoFailure: return "IoFailure";
    case Errc::SchemaViolation: return "SchemaViolation";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status.
class Error : public std::runtime_error
{
public:
    Error(Errc code, const std::string &what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
    {
    }

    Errc code() const noexcept { return code_; }

    /// Numeric degeneracies (as opposed to malformed input).
    bool is_numeric() const noexcept
    {
        switch (code_)
        {
        case Errc::ZeroToNegativePower:
        case Errc::MoebiusPole:
        case Errc::ZeroDenominator:
        case Errc::PrecisionExhausted:
        case Errc::PoleEncountered:
        case Errc::DegenerateDiscriminant:
        case Errc::SchemaViolation:
            return true;
        default:
            return false;
        }
    }

private:
    Errc code_;
};

} // namespace qtj
