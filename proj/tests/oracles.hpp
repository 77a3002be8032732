#pragma once

// Reference computations used only by the tests. Nothing here calls into fmglab.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

/// |P(i w)|^2 - b^2 with P(l) = c l^(2a) + l^a - a, powers taken with std::pow.
inline double crossing_magnitude(double w, double a, double b, double c, double alpha) {
    const cplx iw{0.0, w};
    const cplx p = c * std::pow(iw, 2.0 * alpha) + std::pow(iw, alpha) - a;
    return std::norm(p) - b * b;
}

/// Roots of c mu^2 + mu - s = 0 (c may be 0).
inline std::vector<cplx> mu_roots(double c, double s) {
    if (c == 0.0) return {cplx{s, 0.0}};
    const cplx disc = std::sqrt(cplx{1.0 + 4.0 * c * s, 0.0});
    return {(-1.0 + disc) / (2.0 * c), (-1.0 - disc) / (2.0 * c)};
}

/// E_alpha(z) by its power series; fine for |z| up to ~10.
inline double mittag_leffler(double alpha, double z) {
    double sum = 0.0;
    for (int k = 0; k < 300; ++k) {
        const double term = std::pow(z, k) / std::tgamma(alpha * k + 1.0);
        sum += term;
        if (k > 10 && std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

/// x' = -p x + q x(t-tau) / (1 + x(t-tau)^r) with constant history, classical RK4 on
/// a grid with tau = m h. Delayed values at half steps come from cubic Hermite
/// interpolation of stored nodes and slopes. Returns x at every node.
inline std::vector<double> classical_mg_rk4(double p, double q, double r, double tau, double hist, double t_end,
                                            std::size_t m) {
    const double h = tau / double(m);
    const auto n = static_cast<std::size_t>(std::llround(t_end / h));
    std::vector<double> x(n + 1), dx(n + 1);
    auto hill = [&](double y) { return q * y / (1.0 + std::pow(y, r)); };
    // delayed state at t = (i + s) h - tau, 0 <= s <= 1
    auto delayed = [&](std::size_t i, double s) {
        if (i < m) return hist;
        const std::size_t j = i - m;
        if (s == 0.0) return x[j];
        const double h00 = 2 * s * s * s - 3 * s * s + 1, h10 = s * s * s - 2 * s * s + s;
        const double h01 = -2 * s * s * s + 3 * s * s, h11 = s * s * s - s * s;
        // the history has zero slope; slopes at j = 0 use the history side
        const double d0 = j == 0 && i == m ? 0.0 : dx[j];
        return h00 * x[j] + h10 * h * d0 + h01 * x[j + 1] + h11 * h * dx[j + 1];
    };
    x[0] = hist;
    dx[0] = -p * hist + hill(hist);
    for (std::size_t i = 0; i < n; ++i) {
        const double xd0 = delayed(i, 0.0), xdh = delayed(i, 0.5), xd1 = delayed(i, 1.0);
        const double k1 = -p * x[i] + hill(xd0);
        const double k2 = -p * (x[i] + 0.5 * h * k1) + hill(xdh);
        const double k3 = -p * (x[i] + 0.5 * h * k2) + hill(xdh);
        const double k4 = -p * (x[i] + h * k3) + hill(xd1);
        x[i + 1] = x[i] + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        dx[i + 1] = -p * x[i + 1] + hill(i + 1 < m ? hist : x[i + 1 - m]);
    }
    return x;
}

/// Classical critical delay of x' = -p x + q x_tau / (1 + x_tau^r) at the positive
/// equilibrium, written directly in p, q, r.
inline double classical_tau_star(double p, double q, double r) {
    const double s = (p - q) * r / q;
    return std::acos(q / ((p - q) * r + q)) / (p * std::sqrt(s * s + 2.0 * s));
}

}  // namespace oracle
