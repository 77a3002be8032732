#pragma once

// Real-root isolation for low-degree polynomials (coefficients in ascending powers).

#include <vector>

namespace fmg::detail {

using Poly = std::vector<double>;

[[nodiscard]] double poly_eval(const Poly& p, double x) noexcept;
[[nodiscard]] Poly poly_derivative(const Poly& p);

/// Sign-changing real roots in (lo, hi], ascending. Monotone pieces are delimited by
/// the roots of the derivative, found recursively, so close pairs are never merged.
/// Roots of even multiplicity (touching zero) are not reported.
[[nodiscard]] std::vector<double> poly_real_roots(const Poly& p, double lo, double hi);

/// Cauchy bound: every root satisfies |x| <= 1 + max |p_i / p_n|.
[[nodiscard]] double poly_root_bound(const Poly& p);

}  // namespace fmg::detail
