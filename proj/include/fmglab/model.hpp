#pragma once

// Mackey-Glass instances (classical, fractional one-term, generalized two-term,
// optionally with linear feedback k*x), their equilibria and linearizations.

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fmg {

struct OneTerm {};

/// (alpha - 1/2) D^alpha x + d D^{2 alpha} x = f(x, x(t - tau))
struct TwoTerm {
    double d = 1.0;
};

using Variant = std::variant<OneTerm, TwoTerm>;

class ModelSpec {
public:
    /// Throws Error(InvalidSpec) when any invariant fails.
    ModelSpec(double p, double q, double r, double alpha, Variant variant = OneTerm{}, double k = 0.0);

    static ModelSpec one_term(double p, double q, double r, double alpha, double k = 0.0) {
        return {p, q, r, alpha, OneTerm{}, k};
    }
    static ModelSpec two_term(double p, double q, double r, double alpha, double d, double k = 0.0) {
        return {p, q, r, alpha, TwoTerm{d}, k};
    }

    [[nodiscard]] double p() const noexcept { return p_; }
    [[nodiscard]] double q() const noexcept { return q_; }
    [[nodiscard]] double r() const noexcept { return r_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] double k() const noexcept { return k_; }
    [[nodiscard]] const Variant& variant() const noexcept { return variant_; }
    [[nodiscard]] bool is_two_term() const noexcept { return std::holds_alternative<TwoTerm>(variant_); }
    /// d of the two-term variant, 0 for one-term.
    [[nodiscard]] double d() const noexcept;

    /// Decay rate with the feedback folded in: p - k.
    [[nodiscard]] double p_eff() const noexcept { return p_ - k_; }
    /// Coefficient multiplying D^alpha: 1 for one-term, alpha - 1/2 for two-term.
    [[nodiscard]] double lead() const noexcept;

    /// True when x^r is defined for negative x (r an even integer).
    [[nodiscard]] bool even_integer_r() const noexcept;

    /// Hill production q*x/(1+x^r). Negative x is only accepted for even integer r
    /// unless `signed_power` is set, in which case |x|^r*sign(x) replaces x^r.
    [[nodiscard]] double hill(double x, bool signed_power = false) const;
    /// d/dx of the Hill term.
    [[nodiscard]] double hill_slope(double x) const;

    /// Right-hand side f(x, x_delayed) = -(p-k) x + q x_d / (1 + x_d^r).
    [[nodiscard]] double rhs(double x, double x_delayed, bool signed_power = false) const;

    [[nodiscard]] ModelSpec with_k(double k) const;

private:
    double p_;
    double q_;
    double r_;
    double alpha_;
    Variant variant_;
    double k_;
};

/// Coefficients of D^alpha x + c D^{2 alpha} x = a x + b x(t - tau).
struct LinearFDDE {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double alpha = 1.0;

    [[nodiscard]] double a1() const noexcept { return a + b; }
    [[nodiscard]] bool one_term() const noexcept { return c == 0.0; }
};

struct Equilibrium {
    double x_star = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double a1 = 0.0;

    [[nodiscard]] LinearFDDE linear(double alpha) const { return {a, b, c, alpha}; }
};

struct EquilibriumSet {
    std::vector<double> points;  // ascending
    /// Set when q <= p - k: only the origin exists.
    bool no_positive = false;
};

[[nodiscard]] EquilibriumSet equilibria(const ModelSpec& spec);

/// Nonzero equilibrium ((q - p_eff)/p_eff)^(1/r). Throws NoPositiveEquilibrium.
[[nodiscard]] double positive_equilibrium(const ModelSpec& spec);

/// Linearization at x_star. A user-supplied x_star that is not an equilibrium to 1e-9
/// is snapped onto an enumerated equilibrium within 1e-5 relative distance;
/// otherwise NotAnEquilibrium is thrown.
[[nodiscard]] LinearFDDE linearize(const ModelSpec& spec, double x_star);

/// Same as linearize but returns the (possibly snapped) equilibrium with a1.
[[nodiscard]] Equilibrium equilibrium_at(const ModelSpec& spec, double x_star);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] bool contains(double v) const noexcept { return lo < v && v < hi; }
};

/// Candidate feedback gains that stabilize the nonzero equilibrium.
/// Two-term: only the candidate interval; confirmation needs the crossing analysis.
[[nodiscard]] Interval control_range(const ModelSpec& spec);

}  // namespace fmg
