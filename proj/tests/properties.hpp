#pragma once

// Measurements shared by the unit suites and the acceptance gate. Each returns the
// raw figure of merit; thresholds live with the callers.

#include <algorithm>
#include <cmath>
#include <random>

#include "fmglab/crossings.hpp"
#include "fmglab/fdesolver.hpp"
#include "fmglab/linstab.hpp"
#include "fmglab/model.hpp"
#include "oracles.hpp"

namespace props {

/// Largest relative gap between the closed-form critical delay and the first
/// destabilizing crossing found by the crossing walk with c = 0.
inline double tau_star_agreement(int samples, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> g(-10, 10), m(0.01, 20), al(0.05, 1.0);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double gamma = g(rng), beta = -std::abs(gamma) - m(rng), alpha = al(rng);
        const double closed = fmg::tau_star_one_term(gamma, beta, alpha);
        const auto v = fmg::classify_two_term({gamma, beta, 0.0, alpha});
        const double walked = v.tag == fmg::VerdictTag::SingleStableRegion ? v.tau_star : HUGE_VAL;
        worst = std::max(worst, std::abs(walked - closed) / closed);
    }
    return worst;
}

/// Largest |x - x*| over runs started exactly on an equilibrium.
inline double equilibrium_drift() {
    double worst = 0.0;
    const fmg::ModelSpec specs[] = {fmg::ModelSpec::one_term(1, 2, 10, 0.9), fmg::ModelSpec::one_term(1, 2, 10, 0.6),
                                    fmg::ModelSpec::two_term(1.6, 4, 10, 0.9, 4),
                                    fmg::ModelSpec::two_term(0.4, 0.8, 10, 0.9, 0.08),
                                    fmg::ModelSpec::two_term(2, 3, 2, 0.3, 0.008)};
    for (const auto& s : specs) {
        for (double x : fmg::equilibria(s).points) {
            const auto tr = fmg::integrate(s, fmg::HistorySpec::constant(x, 0.0), 2.0, 40.0, 0.01);
            for (double v : tr.x) worst = std::max(worst, std::abs(v - x));
        }
    }
    return worst;
}

/// Error of the ABM quadrature rules against t^alpha / Gamma(alpha + 1) (f = 1) and
/// t^(alpha+1) / Gamma(alpha + 2) (f = t, corrector only) at t = 1.
inline double quadrature_error() {
    double worst = 0.0;
    for (double alpha : {0.1, 0.3, 0.5, 0.8, 0.95, 1.0}) {
        for (std::size_t n : {1u, 7u, 100u, 1000u}) {
            const double h = 1.0 / double(n);
            const fmg::AbmWeights w(alpha, n);
            double pred = 0.0, corr_one = w.corrector_start(n - 1) + 1.0, corr_t = 1.0 * double(n) * h;
            for (std::size_t j = 0; j < n; ++j) pred += w.pred[n - 1 - j];
            for (std::size_t j = 1; j < n; ++j) {
                corr_one += w.corr[n - 1 - j];
                corr_t += w.corr[n - 1 - j] * double(j) * h;
            }
            const double ha = std::pow(h, alpha);
            const double g1 = std::tgamma(alpha + 1.0), g2 = std::tgamma(alpha + 2.0);
            worst = std::max(worst, std::abs(ha / g1 * pred - 1.0 / g1));
            worst = std::max(worst, std::abs(ha / g2 * corr_one - 1.0 / g1));
            worst = std::max(worst, std::abs(ha / g2 * corr_t - 1.0 / g2));
        }
    }
    return worst;
}

/// Largest deviation at the nodes up to t = 10 between the alpha = 1 solver and an
/// independent RK4 method-of-steps integrator.
inline double classical_limit_error() {
    double worst = 0.0;
    const double runs[][2] = {{1.0, 0.5}, {2.0, 0.9}};
    for (auto [tau, hist] : runs) {
        const std::size_t m = std::size_t(std::llround(tau / 1e-3));
        const auto ref = oracle::classical_mg_rk4(1, 2, 10, tau, hist, 10.0, m);
        const auto tr = fmg::integrate(fmg::ModelSpec::one_term(1, 2, 10, 1.0), fmg::HistorySpec::constant(hist), tau,
                                       10.0, 1e-3);
        const std::size_t n = std::min(ref.size(), tr.x.size());
        for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(ref[i] - tr.x[i]));
        if (tr.x.size() != ref.size()) worst = HUGE_VAL;
    }
    return worst;
}

/// Smallest error-reduction factor under step halving for D^a x = -x + 0.5 x(t - 1),
/// measured at t = 4 against a fine-step Richardson reference.
inline double convergence_factor() {
    double worst = HUGE_VAL;
    for (double alpha : {0.6, 0.9}) {
        const fmg::LinearFDDE eq{-1.0, 0.5, 0.0, alpha};
        auto at_end = [&](double h) {
            return fmg::integrate_linear(eq, [](double t) { return 1.0 + t; }, 0.0, 1.0, 4.0, h).x.back();
        };
        const double f1 = at_end(1.0 / 512), f2 = at_end(1.0 / 1024);
        const double ref = f2 + (f2 - f1) / 3.0;  // second-order extrapolation
        double prev = 0.0;
        for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
            const double err = std::abs(at_end(h) - ref);
            if (prev > 0) worst = std::min(worst, prev / err);
            prev = err;
        }
    }
    return worst;
}

struct SignCheck {
    int pairs = 0;
    int mismatches = 0;
};

/// log(max |x| on the last quarter) - log(max |x| on the quarter before it).
inline double envelope_trend(const fmg::Trajectory& tr) {
    const std::size_t n = tr.x.size();
    double early = 0.0, late = 0.0;
    for (std::size_t i = n / 2; i < 3 * n / 4; ++i) early = std::max(early, std::abs(tr.x[i]));
    for (std::size_t i = 3 * n / 4; i < n; ++i) late = std::max(late, std::abs(tr.x[i]));
    return std::log(late) - std::log(early);
}

/// Random one-term single-stable-region equations, perturbed by 1e-4 and integrated
/// over [0, 50] at 0.9 and 1.1 times the critical delay. The envelope must shrink
/// below and grow above.
inline SignCheck sign_consistency(int pairs, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> g(-2.0, -0.5), m(1.5, 5.0), al(0.6, 1.0);
    SignCheck out;
    for (int i = 0; i < pairs; ++i) {
        const double gamma = g(rng), beta = gamma - m(rng), alpha = al(rng);
        const fmg::LinearFDDE eq{gamma, beta, 0.0, alpha};
        const double tau_star = fmg::classify_one_term(gamma, beta, alpha).tau_star;
        auto run = [&](double tau) {
            return envelope_trend(fmg::integrate_linear(eq, [](double) { return 1e-4; }, 0.0, tau, 50.0, 0.01));
        };
        ++out.pairs;
        if (!(run(0.9 * tau_star) < 0.0 && run(1.1 * tau_star) > 0.0)) ++out.mismatches;
    }
    return out;
}

}  // namespace props
