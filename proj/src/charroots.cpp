#include "fmglab/charroots.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "fmglab/error.hpp"
#include "fmglab/parallel.hpp"

namespace fmg {

namespace {

constexpr double kStepTol = 1e-12;
constexpr double kDedupTol = 1e-6;
constexpr double kCutMargin = 1e-9;

std::optional<cplx> newton(cplx z, const LinearFDDE& eq, double tau, std::size_t max_iter) {
    for (std::size_t it = 0; it < max_iter; ++it) {
        if (z == cplx{}) return std::nullopt;
        const cplx d = characteristic_derivative(z, eq, tau);
        if (d == cplx{} || !std::isfinite(std::abs(d))) return std::nullopt;
        const cplx step = characteristic(z, eq, tau) / d;
        if (!std::isfinite(std::abs(step))) return std::nullopt;
        z -= step;
        // relative: the roots of interest reach |lambda| ~ 1e4
        if (std::abs(step) <= kStepTol * std::max(1.0, std::abs(z))) return z;
    }
    return std::nullopt;
}

void add_unique(std::vector<cplx>& set, cplx z) {
    for (const auto& s : set)
        if (std::abs(s - z) < kDedupTol) return;
    set.push_back(z);
}

}  // namespace

RootReport find_roots(const LinearFDDE& eq, double tau, const Window& window, const RootOptions& opts) {
    if (!(window.re_lo < window.re_hi) || !(window.im_lo < window.im_hi))
        throw Error(ErrorCode::InvalidSpec, "empty root window");
    if (tau < 0.0) throw Error(ErrorCode::InvalidSpec, "tau must be nonnegative");

    // Seeds cover window U conj(window), upper half only.
    const double im_lo = std::max(0.0, std::min(window.im_lo, -window.im_hi));
    const double im_hi = std::max(std::abs(window.im_lo), std::abs(window.im_hi));
    const std::size_t n = std::max<std::size_t>(opts.grid, 2);
    const double dre = (window.re_hi - window.re_lo) / double(n);
    const double dim = (im_hi - im_lo) / double(n);

    std::vector<std::vector<cplx>> rows(n);
    parallel_for(n, opts.jobs, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
            // cell centres: never on the real axis, never at the origin
            const cplx seed{window.re_lo + dre * (double(j) + 0.5), im_lo + dim * (double(i) + 0.5)};
            auto z = newton(seed, eq, tau, opts.max_iter);
            if (!z) continue;
            if (z->imag() < 0.0) *z = std::conj(*z);
            add_unique(rows[i], *z);
        }
    });

    std::vector<cplx> upper;
    for (const auto& row : rows)
        for (const auto& z : row) add_unique(upper, z);

    RootReport rep;
    rep.window = window;
    const double res_tol = 1e-8 * (1.0 + std::abs(eq.a) + std::abs(eq.b));
    auto accept = [&](cplx z) {
        if (!window.contains(z)) return;
        const double res = std::abs(characteristic(z, eq, tau));
        if (!(res < res_tol)) return;
        const bool cut = z.real() < 0.0 && std::abs(z.imag()) < kCutMargin;
        rep.roots.push_back({z, res, cut});
        if (z.real() > 0.0) ++rep.unstable_count;
    };
    for (const auto& z : upper) {
        accept(z);
        if (std::abs(z.imag()) > kDedupTol) accept(std::conj(z));
    }
    std::sort(rep.roots.begin(), rep.roots.end(), [](const Root& x, const Root& y) {
        if (x.lambda.real() != y.lambda.real()) return x.lambda.real() > y.lambda.real();
        return x.lambda.imag() > y.lambda.imag();
    });
    if (rep.roots.empty() && opts.require_root) throw Error(ErrorCode::EmptyWindow, "no root in window");
    return rep;
}

}  // namespace fmg
