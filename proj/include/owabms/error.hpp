#ifndef OWABMS_ERROR_HPP
#define OWABMS_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace owabms {

enum class ErrorKind {
    InvalidParameters,
    InsufficientPriorMoments,
    InvalidPresetParameter,
    LengthMismatch,
    UnboundedProblem,
    DegenerateCollective,
    WeightsNotConvexCase,
    InvalidInput,
};

std::string_view to_string(ErrorKind kind);

// Validation problems (bad user input) versus numerical/model failures.
bool is_validation_error(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace owabms

#endif  // OWABMS_ERROR_HPP
