// Error taxonomy shared by every module.
//
// Two exception classes with distinct exit semantics in the CLI:
//   - Error:      a well-formed computation that cannot proceed (degenerate data,
//                 violated precondition, failed normalization, ...). Exit code 1.
//   - InputError: malformed input (unparseable file, bad rational literal,
//                 structurally invalid spec). Exit code 2.
// Error carries a machine-readable code so reports can serialize the cause.

#pragma once

#include <stdexcept>
#include <string>

namespace pcrit {

enum class ErrorCode {
    // ring construction / class algebra
    NonAssociative,
    DuplicateLabel,
    MissingFundamental,
    UnknownLabel,
    WrongDegree,
    RingMismatch,
    OutOfRange,
    // equation builders / evaluation
    DegreeMismatch,
    DegenerateVolume,
    PositivityViolated,
    VanishingCharge,
    // stability
    Unnormalized,
    NormalizationBroken,
    DimensionMismatch,
    ZeroDenominator,
    OutOfValidityBox,
    // quiver / flow
    LevelImbalance,
    ShapeMismatch,
    NoConvergence,
    NotCritical,
    UnsupportedMultiplicity,
    // catch-all for broken internal cross-checks
    InternalError,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::NonAssociative: return "NonAssociative";
        case ErrorCode::DuplicateLabel: return "DuplicateLabel";
        case ErrorCode::MissingFundamental: return "MissingFundamental";
        case ErrorCode::UnknownLabel: return "UnknownLabel";
        case ErrorCode::WrongDegree: return "WrongDegree";
        case ErrorCode::RingMismatch: return "RingMismatch";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::DegreeMismatch: return "DegreeMismatch";
        case ErrorCode::DegenerateVolume: return "DegenerateVolume";
        case ErrorCode::PositivityViolated: return "PositivityViolated";
        case ErrorCode::VanishingCharge: return "VanishingCharge";
        case ErrorCode::Unnormalized: return "Unnormalized";
        case ErrorCode::NormalizationBroken: return "NormalizationBroken";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::ZeroDenominator: return "ZeroDenominator";
        case ErrorCode::OutOfValidityBox: return "OutOfValidityBox";
        case ErrorCode::LevelImbalance: return "LevelImbalance";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::NotCritical: return "NotCritical";
        case ErrorCode::UnsupportedMultiplicity: return "UnsupportedMultiplicity";
        case ErrorCode::InternalError: return "InternalError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code), message_(message) {}

    ErrorCode code() const { return code_; }
    const std::string& message() const { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& message)
        : std::runtime_error("input error: " + message) {}
};

} // namespace pcrit
