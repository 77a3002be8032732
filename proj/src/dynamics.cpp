#include "fmglab/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "fmglab/error.hpp"
#include "fmglab/parallel.hpp"

namespace fmg {

namespace {

std::size_t tail_start(const Trajectory& tr, double settle_frac) {
    if (!(settle_frac >= 0.0 && settle_frac < 1.0)) throw Error(ErrorCode::InvalidSpec, "settle_frac must be in [0, 1)");
    return static_cast<std::size_t>(std::floor(settle_frac * double(tr.size())));
}

/// Labels for each peak, or empty when the values do not fall into tight clusters.
std::vector<int> cluster(const std::vector<double>& peaks, double tol, std::vector<double>& centres) {
    std::vector<double> sorted = peaks;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<double, double>> groups;  // [lo, hi]
    for (double v : sorted) {
        if (!groups.empty() && v - groups.back().second <= tol * std::max(1.0, std::abs(v)))
            groups.back().second = v;
        else
            groups.push_back({v, v});
    }
    centres.clear();
    for (const auto& [lo, hi] : groups) {
        // chaining can merge a continuum into one group; reject wide ones
        if (hi - lo > 2.0 * tol * std::max(1.0, std::abs(hi))) return {};
        centres.push_back(0.5 * (lo + hi));
    }
    std::vector<int> labels;
    labels.reserve(peaks.size());
    for (double v : peaks) {
        const auto it = std::find_if(groups.begin(), groups.end(), [v](const auto& g) { return g.first <= v && v <= g.second; });
        labels.push_back(int(it - groups.begin()));
    }
    return labels;
}

/// Strict local maxima in [s, n) with their topographic prominence: height above the
/// higher of the two lowest points reached before a taller peak on either side.
struct Peak {
    std::size_t index;
    double prominence;
};

std::vector<Peak> prominent_peaks(const std::vector<double>& x, std::size_t s) {
    std::vector<std::size_t> ext;
    for (std::size_t i = std::max<std::size_t>(s, 1); i + 1 < x.size(); ++i) {
        const bool mx = x[i] > x[i - 1] && x[i] > x[i + 1];
        const bool mn = x[i] < x[i - 1] && x[i] < x[i + 1];
        if (mx || mn) ext.push_back(i);
    }
    std::vector<Peak> out;
    for (std::size_t e = 0; e < ext.size(); ++e) {
        const std::size_t i = ext[e];
        if (!(x[i] > x[i - 1])) continue;
        double left = x[i], right = x[i];
        for (std::size_t f = e; f-- > 0;) {
            if (x[ext[f]] > x[i]) break;
            left = std::min(left, x[ext[f]]);
        }
        for (std::size_t f = e + 1; f < ext.size(); ++f) {
            if (x[ext[f]] > x[i]) break;
            right = std::min(right, x[ext[f]]);
        }
        out.push_back({i, x[i] - std::max(left, right)});
    }
    return out;
}

bool power_of_two(int k) { return k > 0 && (k & (k - 1)) == 0; }

}  // namespace

std::string Asymptote::label() const {
    switch (kind) {
        case AsymptoteKind::ConvergesTo: return "ConvergesTo";
        case AsymptoteKind::PeriodK: return "PeriodK(" + std::to_string(k) + ")";
        case AsymptoteKind::Irregular: return "Irregular";
    }
    return "?";
}

Asymptote asymptote(const Trajectory& tr, double x_star, const AsymptoteOptions& opts) {
    const std::size_t s = tail_start(tr, opts.settle_frac);
    if (tr.size() < s + 20) throw Error(ErrorCode::TooShort, "tail has fewer than 20 samples");
    const auto first = tr.x.begin() + std::ptrdiff_t(s);
    const double tail_time = tr.time(tr.size() - 1) - tr.time(s);

    Asymptote out;
    const double target = std::isfinite(x_star) ? x_star : tr.x.back();
    double dev = 0.0;
    for (auto it = first; it != tr.x.end(); ++it) dev = std::max(dev, std::abs(*it - target));
    if (dev < opts.converge_tol * (1.0 + std::abs(target))) {
        if (tr.tau > 0.0 && tail_time < 10.0 * tr.tau) throw Error(ErrorCode::TooShort, "tail shorter than 10 delays");
        out.kind = AsymptoteKind::ConvergesTo;
        out.x_star = target;
        return out;
    }

    const auto [lo, hi] = std::minmax_element(first, tr.x.end());
    const double range = *hi - *lo;
    std::vector<double> times;
    for (const auto& p : prominent_peaks(tr.x, s)) {
        if (p.prominence < opts.prominence_frac * range) continue;
        out.peaks.push_back(tr.x[p.index]);
        times.push_back(tr.time(p.index));
    }
    if (out.peaks.size() < 10 && !(tr.tau > 0.0 && tail_time >= 10.0 * tr.tau))
        throw Error(ErrorCode::TooShort, "tail covers neither 10 oscillations nor 10 delays");

    std::vector<double> centres;
    const auto labels = cluster(out.peaks, opts.cluster_tol, centres);
    const int k = int(centres.size());
    out.kind = AsymptoteKind::Irregular;
    if (labels.empty() || !power_of_two(k) || k > opts.max_k || out.peaks.size() < std::size_t(3 * k)) return out;
    for (std::size_t i = 0; i + std::size_t(k) < labels.size(); ++i)
        if (labels[i] != labels[i + std::size_t(k)]) return out;
    // within one period every cluster appears once
    std::vector<int> seen(std::size_t(k), 0);
    for (int i = 0; i < k; ++i) ++seen[std::size_t(labels[std::size_t(i)])];
    if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) return out;

    out.kind = AsymptoteKind::PeriodK;
    out.k = k;
    out.period = (times.back() - times.front()) / double(times.size() - 1) * double(k);
    return out;
}

std::vector<std::pair<double, double>> phase_portrait(const Trajectory& tr, double settle_frac, std::size_t max_points) {
    const std::size_t s = std::max(tail_start(tr, settle_frac), tr.m);
    if (s >= tr.size()) throw Error(ErrorCode::TooShort, "no settled samples beyond t = tau");
    const std::size_t count = tr.size() - s;
    const std::size_t stride = max_points == 0 ? 1 : std::max<std::size_t>(1, (count + max_points - 1) / max_points);
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = s; i < tr.size(); i += stride) out.emplace_back(tr.x[i], tr.delayed(i));
    return out;
}

std::vector<ScanRow> scan_tau(const ModelSpec& spec, const HistorySpec& hist, double tau_lo, double tau_hi,
                              std::size_t n_points, const ScanSettings& st) {
    if (n_points == 0) throw Error(ErrorCode::InvalidSpec, "scan needs at least one point");
    double x_star = std::numeric_limits<double>::quiet_NaN();
    if (!equilibria(spec).no_positive) x_star = positive_equilibrium(spec);

    std::vector<ScanRow> rows(n_points);
    parallel_for(n_points, st.jobs, [&](std::size_t i) {
        const double tau = n_points == 1 ? tau_lo : tau_lo + (tau_hi - tau_lo) * double(i) / double(n_points - 1);
        const Trajectory tr = integrate(spec, hist, tau, st.t_end, st.h, st.solver);
        rows[i].tau = tau;
        rows[i].diverged = tr.diverged;
        if (!tr.diverged) rows[i].result = asymptote(tr, x_star, st.asymptote);
    });
    return rows;
}

double separation_lyapunov(const ModelSpec& spec, const HistorySpec& hist, double tau, double t_end, double h,
                           double delta0, const SolverOptions& opts) {
    HistorySpec shifted = hist;
    shifted.x_hist = [f = hist.x_hist, delta0](double t) { return f(t) + delta0; };
    if (hist.x0) shifted.x0 = *hist.x0 + delta0;
    const Trajectory a = integrate(spec, hist, tau, t_end, h, opts);
    const Trajectory b = integrate(spec, shifted, tau, t_end, h, opts);
    const std::size_t n = std::min(a.size(), b.size());

    // fit log|dx| against t while the separation is still small
    double st = 0, sy = 0, stt = 0, sty = 0;
    std::size_t used = 0;
    for (std::size_t i = 1; i < n; ++i) {
        const double d = std::abs(a.x[i] - b.x[i]);
        if (d > 1e-3) break;
        if (d <= 0.0) continue;
        const double t = a.time(i), y = std::log(d);
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
        ++used;
    }
    if (used < 10) throw Error(ErrorCode::TooShort, "separation saturated immediately");
    const double nn = double(used);
    return (nn * sty - st * sy) / (nn * stt - st * st);
}

}  // namespace fmg
