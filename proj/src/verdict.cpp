#include "fmglab/verdict.hpp"

#include <algorithm>

#include "fmglab/error.hpp"

namespace fmg {

std::string_view to_string(VerdictTag tag) noexcept {
    switch (tag) {
        case VerdictTag::StableAllDelay: return "StableAllDelay";
        case VerdictTag::UnstableAllDelay: return "UnstableAllDelay";
        case VerdictTag::SingleStableRegion: return "SingleStableRegion";
        case VerdictTag::StabilitySwitch: return "StabilitySwitch";
        case VerdictTag::InstabilitySwitch: return "InstabilitySwitch";
    }
    return "?";
}

std::string_view short_label(VerdictTag tag) noexcept {
    switch (tag) {
        case VerdictTag::StableAllDelay: return "Stable";
        case VerdictTag::UnstableAllDelay: return "Unstable";
        case VerdictTag::SingleStableRegion: return "SSR";
        case VerdictTag::StabilitySwitch: return "SS";
        case VerdictTag::InstabilitySwitch: return "IS";
    }
    return "?";
}

VerdictTag verdict_tag_from_string(std::string_view s) {
    for (auto tag : {VerdictTag::StableAllDelay, VerdictTag::UnstableAllDelay, VerdictTag::SingleStableRegion,
                     VerdictTag::StabilitySwitch, VerdictTag::InstabilitySwitch}) {
        if (s == to_string(tag) || s == short_label(tag)) return tag;
    }
    throw Error(ErrorCode::InvalidSpec, "unknown verdict label '" + std::string(s) + "'");
}

bool StabilityVerdict::stable_at(double tau) const {
    const auto passed = std::upper_bound(switches.begin(), switches.end(), tau) - switches.begin();
    return (passed % 2 == 0) ? stable_at_zero : !stable_at_zero;
}

}  // namespace fmg
