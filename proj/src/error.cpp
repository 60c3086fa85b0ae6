#include "wta/error.hpp"

namespace wta {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::NonpositiveWeight: return "NonpositiveWeight";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NegativeState: return "NegativeState";
    case ErrorCode::PositivityFailure: return "PositivityFailure";
    case ErrorCode::EmptyState: return "EmptyState";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotEu: return "NotEu";
    case ErrorCode::ComponentTooSmall: return "ComponentTooSmall";
    case ErrorCode::TooManyCandidates: return "TooManyCandidates";
    }
    return "Unknown";
}

} // namespace wta
