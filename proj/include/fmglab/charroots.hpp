#pragma once

// Grid-seeded Newton search for roots of the characteristic function at a fixed delay.

#include <cstddef>
#include <vector>

#include "fmglab/crossings.hpp"

namespace fmg {

struct Window {
    double re_lo = -100.0;
    double re_hi = 100.0;
    double im_lo = -100.0;
    double im_hi = 100.0;

    [[nodiscard]] bool contains(cplx z) const noexcept {
        return re_lo <= z.real() && z.real() <= re_hi && im_lo <= z.imag() && z.imag() <= im_hi;
    }
};

struct Root {
    cplx lambda;
    double residual = 0.0;
    /// Within 1e-9 of the branch cut on the negative real axis.
    bool near_cut = false;
};

struct RootReport {
    std::vector<Root> roots;  // sorted by real part, descending
    Window window;
    int unstable_count = 0;
};

struct RootOptions {
    std::size_t grid = 200;
    std::size_t max_iter = 100;
    /// Throw EmptyWindow instead of returning an empty report.
    bool require_root = false;
    unsigned jobs = 1;
};

/// Newton from a grid of seeds over the upper half of the window (and the mirror image
/// of its lower half); conjugates are added back when they fall inside the window.
[[nodiscard]] RootReport find_roots(const LinearFDDE& eq, double tau, const Window& window,
                                    const RootOptions& opts = {});

}  // namespace fmg
