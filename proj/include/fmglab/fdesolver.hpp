#pragma once

// Fractional Adams-Bashforth-Moulton predictor-corrector for
//     D^alpha x = f(x, x(t - tau))                                  (one-term)
//     (alpha - 1/2) D^alpha x + d D^{2 alpha} x = f(x, x(t - tau))  (two-term)
// on a grid aligned to tau. The two-term equation is integrated as the order-alpha
// system D^alpha x = y, D^alpha y = (f - (alpha - 1/2) y) / d.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "fmglab/model.hpp"

namespace fmg {

struct HistorySpec {
    std::function<double(double)> x_hist;
    /// History of x' on [-tau, 0]; required by the two-term variant.
    std::function<double(double)> dx_hist;
    /// Overrides x_hist(0); a mismatch marks the trajectory nonsmooth.
    std::optional<double> x0;

    static HistorySpec constant(double x, std::optional<double> dx = std::nullopt);
};

enum class DxHistoryAs { YHistory, Zero };

struct SolverOptions {
    /// 1 is PECE.
    int corrector_iters = 1;
    /// Number of most recent nodes kept in the memory sums; 0 keeps all of them.
    /// Short memory trades accuracy for speed and is off by default.
    std::size_t memory_window = 0;
    DxHistoryAs dxhist_as = DxHistoryAs::YHistory;
    /// Evaluate x^r as |x|^r sign(x) for negative delayed states instead of failing.
    bool signed_power = false;
    double divergence_bound = 1e12;
};

struct Trajectory {
    double h = 0.0;
    double t_end = 0.0;
    double tau = 0.0;
    /// tau = m h.
    std::size_t m = 0;
    std::vector<double> x;
    /// D^alpha x for the two-term variant, empty otherwise.
    std::vector<double> y;
    /// History samples x(-tau + i h), i = 0..m.
    std::vector<double> history;
    bool diverged = false;
    bool nonsmooth = false;

    [[nodiscard]] std::size_t size() const noexcept { return x.size(); }
    [[nodiscard]] double time(std::size_t n) const noexcept { return h * double(n); }
    /// x(t_n - tau) from the trajectory or the history.
    [[nodiscard]] double delayed(std::size_t n) const;
};

/// Grid step h = tau/m with m = ceil(tau / h_target); h_target itself when tau = 0.
[[nodiscard]] double aligned_step(double tau, double h_target);

/// Divergence (|x| above the bound or non-finite) truncates the trajectory and sets
/// `diverged` rather than throwing, so callers keep the partial data.
[[nodiscard]] Trajectory integrate(const ModelSpec& spec, const HistorySpec& hist, double tau, double t_end,
                                   double h_target, const SolverOptions& opts = {});

/// D^alpha x + c D^{2 alpha} x = a x + b x(t - tau), for c != 0 as the system
/// D^alpha x = y, D^alpha y = (a x + b x_tau - y) / c with y(0) = y0.
[[nodiscard]] Trajectory integrate_linear(const LinearFDDE& eq, const std::function<double(double)>& x_hist,
                                          double y0, double tau, double t_end, double h_target,
                                          const SolverOptions& opts = {});

/// Order-alpha ABM weights on a uniform grid, h-free part.
/// predictor_weights()[k] = (k+1)^a - k^a;
/// corrector_weights()[k] = (k+2)^(a+1) + k^(a+1) - 2 (k+1)^(a+1);
/// corrector_start(n) = n^(a+1) - (n-a)(n+1)^a.
struct AbmWeights {
    explicit AbmWeights(double alpha, std::size_t n);
    double alpha;
    std::vector<double> pred;
    std::vector<double> corr;
    [[nodiscard]] double corrector_start(std::size_t n) const;
};

}  // namespace fmg
