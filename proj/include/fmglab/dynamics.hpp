#pragma once

// Asymptotic behaviour of simulated trajectories: convergence, period-2^n cycles,
// irregular motion, phase portraits and delay scans.

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "fmglab/fdesolver.hpp"

namespace fmg {

enum class AsymptoteKind { ConvergesTo, PeriodK, Irregular };

struct Asymptote {
    AsymptoteKind kind = AsymptoteKind::Irregular;
    /// Limit for ConvergesTo.
    double x_star = std::numeric_limits<double>::quiet_NaN();
    int k = 0;
    double period = std::numeric_limits<double>::quiet_NaN();
    /// Settled local maxima of the tail.
    std::vector<double> peaks;

    /// "ConvergesTo", "PeriodK(2)", "Irregular".
    [[nodiscard]] std::string label() const;
};

struct AsymptoteOptions {
    double settle_frac = 0.5;
    /// Relative peak clustering tolerance.
    double cluster_tol = 1e-2;
    double converge_tol = 1e-3;
    /// Local maxima whose topographic prominence is below this fraction of the tail's
    /// range are ripples on a larger swing and are not counted.
    double prominence_frac = 0.2;
    int max_k = 64;
};

/// x_star may be NaN, in which case convergence is judged against the final sample.
[[nodiscard]] Asymptote asymptote(const Trajectory& traj, double x_star, const AsymptoteOptions& opts = {});

/// (x(t), x(t - tau)) on the settled tail, at most max_points pairs.
[[nodiscard]] std::vector<std::pair<double, double>> phase_portrait(const Trajectory& traj, double settle_frac = 0.5,
                                                                    std::size_t max_points = 5000);

struct ScanRow {
    double tau = 0.0;
    Asymptote result;
    bool diverged = false;
};

struct ScanSettings {
    double t_end = 500.0;
    double h = 0.01;
    SolverOptions solver;
    AsymptoteOptions asymptote;
    unsigned jobs = 1;
};

/// n_points delays evenly spaced over [tau_lo, tau_hi]; rows ordered by tau.
[[nodiscard]] std::vector<ScanRow> scan_tau(const ModelSpec& spec, const HistorySpec& hist, double tau_lo,
                                            double tau_hi, std::size_t n_points, const ScanSettings& settings);

/// Rough largest Lyapunov exponent from the growth of the separation between two runs
/// whose histories differ by delta0. Not a certificate of chaos.
[[nodiscard]] double separation_lyapunov(const ModelSpec& spec, const HistorySpec& hist, double tau, double t_end,
                                         double h, double delta0 = 1e-8, const SolverOptions& opts = {});

}  // namespace fmg
