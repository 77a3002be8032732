#include "fmglab/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fmglab/error.hpp"

namespace fmg {

namespace {

constexpr double kEquilibriumTol = 1e-9;
constexpr double kSnapTol = 1e-5;

bool finite_all(std::initializer_list<double> values) {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

ModelSpec::ModelSpec(double p, double q, double r, double alpha, Variant variant, double k)
    : p_(p), q_(q), r_(r), alpha_(alpha), variant_(variant), k_(k) {
    if (!finite_all({p, q, r, alpha, k}))
        throw Error(ErrorCode::InvalidSpec, "parameters must be finite");
    if (p <= 0.0 || q <= 0.0 || r <= 0.0)
        throw Error(ErrorCode::InvalidSpec, "p, q and r must be positive");
    if (alpha <= 0.0 || alpha > 1.0)
        throw Error(ErrorCode::InvalidSpec, "alpha must lie in (0, 1]");
    if (const auto* two = std::get_if<TwoTerm>(&variant_)) {
        if (!std::isfinite(two->d) || two->d <= 0.0)
            throw Error(ErrorCode::InvalidSpec, "d must be positive");
        if (alpha == 0.5)
            throw Error(ErrorCode::InvalidSpec, "two-term model is degenerate at alpha = 1/2");
    }
}

double ModelSpec::d() const noexcept {
    if (const auto* two = std::get_if<TwoTerm>(&variant_)) return two->d;
    return 0.0;
}

double ModelSpec::lead() const noexcept { return is_two_term() ? alpha_ - 0.5 : 1.0; }

bool ModelSpec::even_integer_r() const noexcept {
    return r_ == std::floor(r_) && std::fmod(r_, 2.0) == 0.0;
}

double ModelSpec::hill(double x, bool signed_power) const {
    double xr;
    if (x >= 0.0 || even_integer_r()) {
        xr = std::pow(x, r_);
    } else if (signed_power) {
        xr = -std::pow(-x, r_);
    } else {
        std::ostringstream os;
        os << "x = " << x << " < 0 with non-even-integer r = " << r_;
        throw Error(ErrorCode::NegativeState, os.str());
    }
    return q_ * x / (1.0 + xr);
}

double ModelSpec::hill_slope(double x) const {
    if (x < 0.0 && !even_integer_r())
        throw Error(ErrorCode::NegativeState, "Hill slope undefined for negative x");
    const double xr = std::pow(x, r_);
    const double den = 1.0 + xr;
    return q_ * (1.0 + (1.0 - r_) * xr) / (den * den);
}

double ModelSpec::rhs(double x, double x_delayed, bool signed_power) const {
    return -p_eff() * x + hill(x_delayed, signed_power);
}

ModelSpec ModelSpec::with_k(double k) const { return {p_, q_, r_, alpha_, variant_, k}; }

EquilibriumSet equilibria(const ModelSpec& spec) {
    EquilibriumSet out;
    out.points.push_back(0.0);
    const double pe = spec.p_eff();
    if (pe > 0.0 && spec.q() > pe) {
        const double x2 = std::pow((spec.q() - pe) / pe, 1.0 / spec.r());
        out.points.push_back(x2);
        if (spec.even_integer_r()) out.points.push_back(-x2);
    } else {
        out.no_positive = true;
    }
    std::sort(out.points.begin(), out.points.end());
    return out;
}

double positive_equilibrium(const ModelSpec& spec) {
    const auto eq = equilibria(spec);
    if (eq.no_positive)
        throw Error(ErrorCode::NoPositiveEquilibrium, "q <= p - k: only the origin is an equilibrium");
    return eq.points.back();
}

Equilibrium equilibrium_at(const ModelSpec& spec, double x_star) {
    double x = x_star;
    if (!(std::abs(spec.rhs(x, x)) <= kEquilibriumTol)) {
        bool snapped = false;
        for (double e : equilibria(spec).points) {
            if (std::abs(e - x_star) <= kSnapTol * (1.0 + std::abs(e))) {
                x = e;
                snapped = true;
                break;
            }
        }
        if (!snapped) {
            std::ostringstream os;
            os << "|f(x*, x*)| = " << std::abs(spec.rhs(x_star, x_star)) << " at x* = " << x_star;
            throw Error(ErrorCode::NotAnEquilibrium, os.str());
        }
    }
    const double lead = spec.lead();
    Equilibrium e;
    e.x_star = x;
    e.a = -spec.p_eff() / lead;
    e.b = spec.hill_slope(x) / lead;
    e.c = spec.d() / lead;
    e.a1 = e.a + e.b;
    return e;
}

LinearFDDE linearize(const ModelSpec& spec, double x_star) {
    return equilibrium_at(spec, x_star).linear(spec.alpha());
}

Interval control_range(const ModelSpec& spec) {
    const double p = spec.p(), q = spec.q(), r = spec.r();
    if (!spec.is_two_term()) {
        const double u = r <= 2.0 ? p : p - q * (1.0 - 2.0 / r);
        return {p - q, u};
    }
    if (spec.alpha() <= 0.5 || r <= 1.0)
        throw Error(ErrorCode::UnsupportedRegime, "two-term control needs alpha > 1/2 and r > 1");
    return {p - q * (1.0 - 1.0 / r), p};
}

}  // namespace fmg
