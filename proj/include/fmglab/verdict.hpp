#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace fmg {

enum class VerdictTag {
    StableAllDelay,
    UnstableAllDelay,
    SingleStableRegion,
    StabilitySwitch,
    InstabilitySwitch,
};

[[nodiscard]] std::string_view to_string(VerdictTag tag) noexcept;
/// Short labels used for region boundaries: Stable, Unstable, SSR, SS, IS.
[[nodiscard]] std::string_view short_label(VerdictTag tag) noexcept;
[[nodiscard]] VerdictTag verdict_tag_from_string(std::string_view s);

/// Delay-dependent stability of a linear (fractional) delay equation.
///
/// s1 holds the crossing delays that move the system away from its tau = 0 state
/// (destabilizing for SS, stabilizing for IS), s2 the ones moving it back.
/// `switches` lists every delay where stability actually changes, ascending;
/// together with `stable_at_zero` it answers stable_at() for any tau.
struct StabilityVerdict {
    VerdictTag tag = VerdictTag::StableAllDelay;
    double tau_star = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> s1;
    std::vector<double> s2;
    std::vector<double> switches;
    bool stable_at_zero = true;
    std::string meta;

    /// Stability at a delay that is not one of the switch points.
    [[nodiscard]] bool stable_at(double tau) const;

    [[nodiscard]] bool same_class(const StabilityVerdict& other) const noexcept { return tag == other.tag; }
};

}  // namespace fmg
