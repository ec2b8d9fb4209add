#ifndef CBMO_ERROR_HPP
#define CBMO_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cbmo {

/// Failure categories raised by the numeric modules (BEL engine, analytics).
enum class ErrorCode {
    EmptyStimulus,
    DimensionMismatch,
    NonFiniteReward,
    NonFiniteStimulus,
    EmptyDataset,
    TooFewRows,
    LengthMismatch,
    EmptySeries,
    ConstantActual,
    ZeroBase,
    MissingColumn,
    InvalidConfig,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::EmptyStimulus: return "EmptyStimulus";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteReward: return "NonFiniteReward";
    case ErrorCode::NonFiniteStimulus: return "NonFiniteStimulus";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::ConstantActual: return "ConstantActual";
    case ErrorCode::ZeroBase: return "ZeroBase";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message)
        , code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

enum class ParseErrorKind {
    UnknownConcept,
    UnknownVerb,
    Syntax,
    DuplicateElement,
    BadArity,
};

constexpr std::string_view to_string(ParseErrorKind kind) noexcept
{
    switch (kind) {
    case ParseErrorKind::UnknownConcept: return "UnknownConcept";
    case ParseErrorKind::UnknownVerb: return "UnknownVerb";
    case ParseErrorKind::Syntax: return "Syntax";
    case ParseErrorKind::DuplicateElement: return "DuplicateElement";
    case ParseErrorKind::BadArity: return "BadArity";
    }
    return "Unknown";
}

/// Raised by every text reader (model files, observation CSV, snapshots).
/// line() is 1-based and points at the offending source line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, ParseErrorKind kind, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + std::string(to_string(kind)) + ": " + message)
        , line_(line)
        , kind_(kind)
        , detail_(message)
    {
    }

    std::size_t line() const noexcept { return line_; }
    ParseErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::size_t line_;
    ParseErrorKind kind_;
    std::string detail_;
};

} // namespace cbmo

#endif // CBMO_ERROR_HPP
