#include "fmglab/error.hpp"

namespace fmg {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::NoPositiveEquilibrium: return "NoPositiveEquilibrium";
        case ErrorCode::NotAnEquilibrium: return "NotAnEquilibrium";
        case ErrorCode::UnsupportedRegime: return "UnsupportedRegime";
        case ErrorCode::BoundaryCase: return "BoundaryCase";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::WindowTooSmall: return "WindowTooSmall";
        case ErrorCode::TangentialCrossing: return "TangentialCrossing";
        case ErrorCode::DegenerateRoot: return "DegenerateRoot";
        case ErrorCode::HorizonTooLong: return "HorizonTooLong";
        case ErrorCode::NoTransitionInBracket: return "NoTransitionInBracket";
        case ErrorCode::NoTransition: return "NoTransition";
        case ErrorCode::MultipleTransitions: return "MultipleTransitions";
        case ErrorCode::EmptyWindow: return "EmptyWindow";
        case ErrorCode::Divergence: return "Divergence";
        case ErrorCode::NegativeState: return "NegativeState";
        case ErrorCode::TooShort: return "TooShort";
    }
    return "Unknown";
}

}  // namespace fmg
