#include "fmglab/linstab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fmglab/error.hpp"

namespace fmg {

namespace {

constexpr double kClampWindow = 1e-12;
constexpr double kBoundaryTol = 1e-12;

void require_case_one(double gamma, double beta) {
    if (!(beta < -std::abs(gamma))) {
        std::ostringstream os;
        os << "critical delay needs beta < -|gamma| (gamma = " << gamma << ", beta = " << beta << ")";
        throw Error(ErrorCode::DomainError, os.str());
    }
}

}  // namespace

double tau_star_one_term(double gamma, double beta, double alpha, RootBranch branch) {
    require_case_one(gamma, beta);
    const double half = alpha * std::numbers::pi / 2.0;
    const double cs = std::cos(half);
    const double sn = std::sin(half);
    const double root = std::sqrt(beta * beta - gamma * gamma * sn * sn);

    const double base = branch == RootBranch::Plus ? gamma * cs + root : gamma * cs - root;
    if (!(base > 0.0))
        throw Error(ErrorCode::DomainError, "crossing frequency base is not positive on this branch");

    double arg = ((gamma * cs + root) * cs - gamma) / beta;
    if (std::abs(arg) > 1.0) {
        if (std::abs(arg) > 1.0 + kClampWindow)
            throw Error(ErrorCode::DomainError, "arccos argument outside [-1, 1]");
        arg = std::clamp(arg, -1.0, 1.0);
    }
    return std::acos(arg) / std::pow(base, 1.0 / alpha);
}

double crossing_frequency_one_term(double gamma, double beta, double alpha) {
    require_case_one(gamma, beta);
    const double half = alpha * std::numbers::pi / 2.0;
    const double sn = std::sin(half);
    const double base = gamma * std::cos(half) + std::sqrt(beta * beta - gamma * gamma * sn * sn);
    return std::pow(base, 1.0 / alpha);
}

double classical_tau_star(double p, double q, double r) {
    if (!(p / q < 1.0 - 2.0 / r))
        throw Error(ErrorCode::DomainError, "classical critical delay needs p/q < 1 - 2/r");
    const double s = (p - q) * r / q;
    return std::acos(q / ((p - q) * r + q)) / (p * std::sqrt(s * s + 2.0 * s));
}

StabilityVerdict classify_one_term(double gamma, double beta, double alpha, std::size_t max_terms) {
    const double scale = std::max(1.0, std::abs(gamma));
    if (std::abs(beta - gamma) <= kBoundaryTol * scale || std::abs(beta + gamma) <= kBoundaryTol * scale) {
        std::ostringstream os;
        os << "beta = " << beta << " lies on the boundary beta = +-gamma (gamma = " << gamma << ")";
        throw Error(ErrorCode::BoundaryCase, os.str());
    }

    StabilityVerdict v;
    if (beta > -gamma) {
        v.tag = VerdictTag::UnstableAllDelay;
        v.stable_at_zero = false;
        v.meta = "beta > -gamma: unstable for every delay";
    } else if (gamma < 0.0 && beta > gamma) {
        v.tag = VerdictTag::StableAllDelay;
        v.meta = "gamma < beta < -gamma: stable for every delay";
    } else {
        v.tag = VerdictTag::SingleStableRegion;
        v.tau_star = tau_star_one_term(gamma, beta, alpha);
        v.switches = {v.tau_star};
        const double period = 2.0 * std::numbers::pi / crossing_frequency_one_term(gamma, beta, alpha);
        for (std::size_t j = 0; j < max_terms; ++j) v.s1.push_back(v.tau_star + period * double(j));
        v.meta = "beta < -|gamma|: stable below the critical delay, unstable above";
    }
    return v;
}

StabilityVerdict classify_fractional_mg(const ModelSpec& spec, double x_star, std::size_t max_terms) {
    if (spec.is_two_term())
        throw Error(ErrorCode::UnsupportedRegime, "classify_fractional_mg needs a one-term model");
    const Equilibrium e = equilibrium_at(spec, x_star);
    StabilityVerdict v = classify_one_term(e.a, e.b, spec.alpha(), max_terms);

    if (e.x_star != 0.0) {
        const double ratio = spec.p_eff() / spec.q();
        const double bound = 1.0 - 2.0 / spec.r();
        const VerdictTag expected =
            ratio > bound ? VerdictTag::StableAllDelay : VerdictTag::SingleStableRegion;
        if (v.tag != expected)
            throw std::logic_error("one-term classification disagrees with the p/q versus 1 - 2/r criterion");
    }
    return v;
}

}  // namespace fmg
