#pragma once

// Imaginary-axis crossings of c*l^(2a) + l^a - a - b*exp(-l*tau) and the delay
// stability landscape they induce for the two-term equation
//     D^alpha x + c D^{2 alpha} x = a x + b x(t - tau).

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fmglab/error.hpp"
#include "fmglab/model.hpp"
#include "fmglab/verdict.hpp"

namespace fmg {

using cplx = std::complex<double>;

/// c*l^(2a) + l^a - a - b*exp(-l*tau) on the principal branch; at l = 0 returns -a - b.
[[nodiscard]] cplx characteristic(cplx lambda, const LinearFDDE& eq, double tau);
/// d/dl of characteristic().
[[nodiscard]] cplx characteristic_derivative(cplx lambda, const LinearFDDE& eq, double tau);

/// Crossing magnitude G(omega) = |P(i omega)|^2 - b^2 with P(l) = c l^(2a) + l^a - a.
[[nodiscard]] double crossing_magnitude(double omega, const LinearFDDE& eq);
/// G written as a quartic in u = omega^alpha; coefficients in ascending powers of u.
[[nodiscard]] std::array<double, 5> crossing_polynomial(const LinearFDDE& eq);
/// G evaluated through crossing_polynomial().
[[nodiscard]] double crossing_magnitude_expanded(double omega, const LinearFDDE& eq);

enum class Direction { LeftToRight, RightToLeft };

[[nodiscard]] const char* to_string(Direction d) noexcept;

struct Crossing {
    double omega = 0.0;
    Direction direction = Direction::LeftToRight;
    /// omega * tau_0, in [0, 2 pi).
    double phase = 0.0;
    /// Re(d lambda / d tau) at (i omega, tau_0).
    double drift = 0.0;
    std::vector<double> tau_seq;

    [[nodiscard]] double period() const noexcept;
    [[nodiscard]] double tau(std::size_t j) const noexcept;
};

struct CrossingSet {
    std::vector<Crossing> omegas;  // ascending omega
    bool tau0_stable = true;
    /// Characteristic roots with Re > 0 at tau = 0.
    int tau0_unstable = 0;
};

struct CrossingOptions {
    /// Upper end of the frequency window; 0 selects an analytic root bound.
    double omega_max = 0.0;
    std::size_t k_max = 20;
    /// Safety cap on the number of crossing events walked by the classifier.
    std::size_t max_events = 20'000'000;
};

/// Upper bound on every positive root of G (Cauchy bound of the quartic in omega^alpha).
[[nodiscard]] double crossing_frequency_bound(const LinearFDDE& eq);

[[nodiscard]] CrossingSet find_crossings(const LinearFDDE& eq, const CrossingOptions& opts = {});

/// Number of characteristic roots with positive real part at tau = 0, from the
/// quadratic c mu^2 + mu - (a + b) = 0 in mu = lambda^alpha. Throws DegenerateRoot
/// when a + b = 0.
[[nodiscard]] int unstable_roots_at_zero_delay(const LinearFDDE& eq);
[[nodiscard]] bool stability_at_zero_delay(const LinearFDDE& eq);

/// Walks all crossing events in delay order keeping the count of right-half-plane
/// roots, up to a horizon past which the count provably stays positive.
[[nodiscard]] StabilityVerdict classify_two_term(const LinearFDDE& eq, const CrossingOptions& opts = {});
[[nodiscard]] StabilityVerdict classify_two_term(const LinearFDDE& eq, const CrossingSet& set,
                                                 const CrossingOptions& opts = {});

/// Linearize at x_star and classify with the closed form (one-term) or the crossing
/// walk (two-term).
[[nodiscard]] StabilityVerdict classify(const ModelSpec& spec, double x_star, const CrossingOptions& opts = {});

/// Verdict as a function of a1 = a + b with b, c, alpha held fixed.
[[nodiscard]] VerdictTag verdict_at_a1(double a1, double b, double c, double alpha,
                                       const CrossingOptions& opts = {});

struct A1Transition {
    double a1 = 0.0;
    VerdictTag from = VerdictTag::StableAllDelay;
    VerdictTag to = VerdictTag::StableAllDelay;

    /// "From|To" in short labels, e.g. "IS|SSR".
    [[nodiscard]] std::string label() const;
};

/// Bisection on a1 inside [lo, hi] (verdicts at the ends must differ). `boundary` is an
/// optional "From|To" label that the ends must match. Absolute tolerance ~1e-10.
[[nodiscard]] A1Transition locate_a1_transition(double b, double c, double alpha, double lo, double hi,
                                                const std::string& boundary = {},
                                                const CrossingOptions& opts = {});

[[nodiscard]] double find_a1_threshold(double b, double c, double alpha, const std::string& boundary,
                                       Interval bracket, const CrossingOptions& opts = {});

/// All verdict transitions in [lo, hi]: an n-point sweep, each change refined by
/// bisection, with regions thinner than the grid spacing recovered when they sit next
/// to a detected transition.
[[nodiscard]] std::vector<A1Transition> sweep_a1(double b, double c, double alpha, double lo, double hi,
                                                 std::size_t n = 400, const CrossingOptions& opts = {},
                                                 unsigned jobs = 1);

enum class CriticalC { c0, c1, c2, c5, c7 };

[[nodiscard]] const char* to_string(CriticalC which) noexcept;
[[nodiscard]] CriticalC critical_c_from_string(const std::string& s);

/// Critical value of c at which the a1-region structure of the given case changes.
/// Bracket {0, 0} selects a default bracket derived from the scale invariance of the
/// problem (c*|b| is the invariant combination). Absolute tolerance 1e-7.
[[nodiscard]] double find_critical_c(double b, double alpha, CriticalC which, Interval bracket = {},
                                     const CrossingOptions& opts = {});

struct RegionRow {
    double a1 = 0.0;
    double c = 0.0;
    StabilityVerdict verdict;
    /// Set when the cell could not be classified (degenerate or tangential cases).
    std::optional<ErrorCode> error;
};

/// Verdict grid over (a1, c) with b and alpha fixed, row-major in c then a1.
[[nodiscard]] std::vector<RegionRow> scan_region(double b, double alpha, Interval a1_range, std::size_t n_a1,
                                                 Interval c_range, std::size_t n_c,
                                                 const CrossingOptions& opts = {}, unsigned jobs = 1);

}  // namespace fmg
