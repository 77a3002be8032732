#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fmg {

enum class ErrorCode {
    InvalidSpec,
    NoPositiveEquilibrium,
    NotAnEquilibrium,
    UnsupportedRegime,
    BoundaryCase,
    DomainError,
    WindowTooSmall,
    TangentialCrossing,
    DegenerateRoot,
    HorizonTooLong,
    NoTransitionInBracket,
    NoTransition,
    MultipleTransitions,
    EmptyWindow,
    Divergence,
    NegativeState,
    TooShort,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Library error carrying a machine-readable code; the CLI maps codes to exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace fmg
