#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wta {

enum class ErrorCode {
    InvalidArgument,
    ParseError,
    SelfLoop,
    NonpositiveWeight,
    DuplicateEdge,
    IndexOutOfRange,
    InvalidProbability,
    DimensionMismatch,
    NegativeState,
    PositivityFailure,
    EmptyState,
    NotSymmetric,
    NotEu,
    ComponentTooSmall,
    TooManyCandidates,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace wta
