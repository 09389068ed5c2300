#include "owabms/error.hpp"

namespace owabms {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidParameters: return "InvalidParameters";
        case ErrorKind::InsufficientPriorMoments: return "InsufficientPriorMoments";
        case ErrorKind::InvalidPresetParameter: return "InvalidPresetParameter";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::UnboundedProblem: return "UnboundedProblem";
        case ErrorKind::DegenerateCollective: return "DegenerateCollective";
        case ErrorKind::WeightsNotConvexCase: return "WeightsNotConvexCase";
        case ErrorKind::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

bool is_validation_error(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InsufficientPriorMoments:
        case ErrorKind::UnboundedProblem:
        case ErrorKind::DegenerateCollective:
            return false;
        default:
            return true;
    }
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace owabms
