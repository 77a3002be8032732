#include "fmglab/fdesolver.hpp"

#include <array>
#include <cmath>

#include "fmglab/error.hpp"

namespace fmg {

namespace {

using Rhs = std::function<void(const double* z, double x_delayed, double* f)>;

struct System {
    std::size_t dim = 1;
    Rhs rhs;
    std::array<double, 2> z0{};
};

void check_history(const std::function<double(double)>& fn, double tau, const char* what) {
    if (!fn) throw Error(ErrorCode::InvalidSpec, std::string(what) + " history missing");
    for (int i = 0; i <= 100; ++i) {
        const double v = fn(-tau * i / 100.0);
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidSpec, std::string(what) + " history is not finite");
    }
}

/// sum_{j=lo}^{n} w[n-j] f[j] with four independent partial sums.
double convolve(const double* w, const double* f, std::size_t lo, std::size_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t j = lo;
    for (; j + 3 <= n; j += 4) {
        s0 += w[n - j] * f[j];
        s1 += w[n - j - 1] * f[j + 1];
        s2 += w[n - j - 2] * f[j + 2];
        s3 += w[n - j - 3] * f[j + 3];
    }
    for (; j <= n; ++j) s0 += w[n - j] * f[j];
    return (s0 + s1) + (s2 + s3);
}

Trajectory run(const System& sys, double alpha, const std::function<double(double)>& x_hist, double tau,
               double t_end, double h_target, const SolverOptions& opts) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw Error(ErrorCode::InvalidSpec, "tau must be nonnegative");
    if (!(t_end > 0.0)) throw Error(ErrorCode::InvalidSpec, "t_end must be positive");
    if (!(h_target > 0.0)) throw Error(ErrorCode::InvalidSpec, "step must be positive");
    if (opts.corrector_iters < 1) throw Error(ErrorCode::InvalidSpec, "need at least one corrector pass");

    Trajectory tr;
    tr.tau = tau;
    tr.h = aligned_step(tau, h_target);
    tr.m = tau > 0.0 ? static_cast<std::size_t>(std::llround(tau / tr.h)) : 0;
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / tr.h - 1e-9));
    tr.t_end = tr.h * double(steps);
    const double h = tr.h;
    const std::size_t m = tr.m;

    tr.history.resize(m + 1);
    for (std::size_t i = 0; i <= m; ++i) tr.history[i] = x_hist(-tau + h * double(i));

    const AbmWeights w(alpha, steps);
    const double cp = std::pow(h, alpha) / std::tgamma(alpha + 1.0);
    const double cc = std::pow(h, alpha) / std::tgamma(alpha + 2.0);
    const std::size_t dim = sys.dim;

    std::array<std::vector<double>, 2> z, f;
    for (std::size_t c = 0; c < dim; ++c) {
        z[c].reserve(steps + 1);
        f[c].reserve(steps + 1);
        z[c].push_back(sys.z0[c]);
    }
    // node j >= 0 reads the trajectory, j < 0 the history grid
    auto x_at = [&](std::ptrdiff_t j) { return j >= 0 ? z[0][std::size_t(j)] : tr.history[std::size_t(j + std::ptrdiff_t(m))]; };

    std::array<double, 2> zn{}, fn{}, mem{}, zp{};
    for (std::size_t c = 0; c < dim; ++c) zn[c] = sys.z0[c];
    sys.rhs(zn.data(), m == 0 ? zn[0] : x_at(-std::ptrdiff_t(m)), fn.data());
    for (std::size_t c = 0; c < dim; ++c) f[c].push_back(fn[c]);

    for (std::size_t n = 0; n < steps; ++n) {
        const std::size_t lo = opts.memory_window > 0 && n + 1 > opts.memory_window ? n + 1 - opts.memory_window : 0;
        for (std::size_t c = 0; c < dim; ++c) {
            const double* fc = f[c].data();
            const double sp = convolve(w.pred.data(), fc, lo, n);
            double sc = convolve(w.corr.data(), fc, std::max<std::size_t>(lo, 1), n);
            if (lo == 0) sc += w.corrector_start(n) * fc[0];
            zp[c] = sys.z0[c] + cp * sp;
            mem[c] = sc;
        }
        const auto delayed_index = std::ptrdiff_t(n + 1) - std::ptrdiff_t(m);
        std::array<double, 2> cur = zp;
        for (int it = 0; it < opts.corrector_iters; ++it) {
            sys.rhs(cur.data(), m == 0 ? cur[0] : x_at(delayed_index), fn.data());
            for (std::size_t c = 0; c < dim; ++c) cur[c] = sys.z0[c] + cc * (mem[c] + fn[c]);
        }
        if (!std::isfinite(cur[0]) || std::abs(cur[0]) > opts.divergence_bound ||
            (dim == 2 && !std::isfinite(cur[1]))) {
            tr.diverged = true;
            break;
        }
        sys.rhs(cur.data(), m == 0 ? cur[0] : x_at(delayed_index), fn.data());
        for (std::size_t c = 0; c < dim; ++c) {
            z[c].push_back(cur[c]);
            f[c].push_back(fn[c]);
        }
    }
    tr.x = std::move(z[0]);
    if (dim == 2) tr.y = std::move(z[1]);
    return tr;
}

}  // namespace

HistorySpec HistorySpec::constant(double x, std::optional<double> dx) {
    HistorySpec h;
    h.x_hist = [x](double) { return x; };
    if (dx) h.dx_hist = [v = *dx](double) { return v; };
    return h;
}

double Trajectory::delayed(std::size_t n) const {
    if (n >= m) return x.at(n - m);
    return history.at(n);  // history[i] = x(-tau + i h)
}

double aligned_step(double tau, double h_target) {
    if (!(h_target > 0.0)) throw Error(ErrorCode::InvalidSpec, "step must be positive");
    if (tau <= 0.0) return h_target;
    const double m = std::max(1.0, std::ceil(tau / h_target - 1e-9));
    return tau / m;
}

AbmWeights::AbmWeights(double a, std::size_t n) : alpha(a), pred(n + 1), corr(n + 1) {
    for (std::size_t k = 0; k <= n; ++k) {
        const double kk = double(k);
        pred[k] = std::pow(kk + 1.0, a) - std::pow(kk, a);
        corr[k] = std::pow(kk + 2.0, a + 1.0) + std::pow(kk, a + 1.0) - 2.0 * std::pow(kk + 1.0, a + 1.0);
    }
}

double AbmWeights::corrector_start(std::size_t n) const {
    const double nn = double(n);
    return std::pow(nn, alpha + 1.0) - (nn - alpha) * std::pow(nn + 1.0, alpha);
}

Trajectory integrate(const ModelSpec& spec, const HistorySpec& hist, double tau, double t_end, double h_target,
                     const SolverOptions& opts) {
    check_history(hist.x_hist, tau, "x");
    const double xh0 = hist.x_hist(0.0);
    const double x0 = hist.x0.value_or(xh0);
    const bool signed_power = opts.signed_power;

    System sys;
    sys.z0[0] = x0;
    if (spec.is_two_term()) {
        double y0 = 0.0;
        if (opts.dxhist_as == DxHistoryAs::YHistory) {
            check_history(hist.dx_hist, tau, "dx");
            y0 = hist.dx_hist(0.0);
        }
        const double lead = spec.lead();
        const double d = spec.d();
        sys.dim = 2;
        sys.z0[1] = y0;
        sys.rhs = [&spec, lead, d, signed_power](const double* z, double xd, double* f) {
            f[0] = z[1];
            f[1] = (spec.rhs(z[0], xd, signed_power) - lead * z[1]) / d;
        };
    } else {
        sys.rhs = [&spec, signed_power](const double* z, double xd, double* f) {
            f[0] = spec.rhs(z[0], xd, signed_power);
        };
    }
    // The delayed lookup at t = 0 must see x0, not a mismatching x_hist(0).
    auto hist_fn = [&](double t) { return t == 0.0 ? x0 : hist.x_hist(t); };
    Trajectory tr = run(sys, spec.alpha(), hist_fn, tau, t_end, h_target, opts);
    tr.nonsmooth = x0 != xh0;
    return tr;
}

Trajectory integrate_linear(const LinearFDDE& eq, const std::function<double(double)>& x_hist, double y0, double tau,
                            double t_end, double h_target, const SolverOptions& opts) {
    check_history(x_hist, tau, "x");
    System sys;
    sys.z0[0] = x_hist(0.0);
    const double a = eq.a, b = eq.b, c = eq.c;
    if (eq.one_term()) {
        sys.rhs = [a, b](const double* z, double xd, double* f) { f[0] = a * z[0] + b * xd; };
    } else {
        sys.dim = 2;
        sys.z0[1] = y0;
        sys.rhs = [a, b, c](const double* z, double xd, double* f) {
            f[0] = z[1];
            f[1] = (a * z[0] + b * xd - z[1]) / c;
        };
    }
    return run(sys, eq.alpha, x_hist, tau, t_end, h_target, opts);
}

}  // namespace fmg
