#include "poly.hpp"

#include <algorithm>
#include <cmath>

namespace fmg::detail {

namespace {

Poly trimmed(Poly p) {
    while (!p.empty() && p.back() == 0.0) p.pop_back();
    return p;
}

double bisect(const Poly& p, double x0, double x1, double f0) {
    for (;;) {
        const double m = 0.5 * (x0 + x1);
        if (m <= x0 || m >= x1) return m;
        const double fm = poly_eval(p, m);
        if (fm == 0.0) return m;
        if ((fm < 0.0) == (f0 < 0.0)) {
            x0 = m;
            f0 = fm;
        } else {
            x1 = m;
        }
    }
}

}  // namespace

double poly_eval(const Poly& p, double x) noexcept {
    double acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Poly poly_derivative(const Poly& p) {
    if (p.size() <= 1) return {};
    Poly d(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * double(i);
    return d;
}

double poly_root_bound(const Poly& p) {
    const Poly t = trimmed(p);
    if (t.size() <= 1) return 0.0;
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) m = std::max(m, std::abs(t[i] / t.back()));
    return 1.0 + m;
}

std::vector<double> poly_real_roots(const Poly& p_in, double lo, double hi) {
    const Poly p = trimmed(p_in);
    std::vector<double> out;
    if (p.size() <= 1 || !(hi > lo)) return out;
    if (p.size() == 2) {
        const double x = -p[0] / p[1];
        if (x > lo && x <= hi) out.push_back(x);
        return out;
    }

    std::vector<double> pts{lo};
    for (double x : poly_real_roots(poly_derivative(p), lo, hi))
        if (x > pts.back() && x < hi) pts.push_back(x);
    pts.push_back(hi);

    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double x0 = pts[i], x1 = pts[i + 1];
        const double f0 = poly_eval(p, x0), f1 = poly_eval(p, x1);
        if (f1 == 0.0) {
            // Sign change through an exact zero at a piece boundary.
            const double fn = i + 2 < pts.size() ? poly_eval(p, pts[i + 2]) : f0;
            if (f0 != 0.0 && fn != 0.0 && (f0 < 0.0) != (fn < 0.0)) out.push_back(x1);
            else if (i + 2 >= pts.size() && f0 != 0.0) out.push_back(x1);
            continue;
        }
        if (f0 != 0.0 && (f0 < 0.0) != (f1 < 0.0)) out.push_back(bisect(p, x0, x1, f0));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace fmg::detail
