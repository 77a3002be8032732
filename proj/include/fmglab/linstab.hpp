#pragma once

// Closed-form stability of the one-term equation D^alpha x = gamma x + beta x(t - tau).

#include <cstddef>

#include "fmglab/model.hpp"
#include "fmglab/verdict.hpp"

namespace fmg {

enum class RootBranch { Plus, Minus };

/// Critical delay of the case beta < -|gamma|. The Minus branch is diagnostic only and
/// throws DomainError whenever its base is not positive (always, for beta < -|gamma|).
[[nodiscard]] double tau_star_one_term(double gamma, double beta, double alpha,
                                       RootBranch branch = RootBranch::Plus);

/// Hopf frequency omega* matching tau_star_one_term (Plus branch).
[[nodiscard]] double crossing_frequency_one_term(double gamma, double beta, double alpha);

/// Classical (alpha = 1) critical delay of the nonzero Mackey-Glass equilibrium.
/// Requires p/q < 1 - 2/r.
[[nodiscard]] double classical_tau_star(double p, double q, double r);

/// Three-way classification; beta = +-gamma raises BoundaryCase.
/// In the single-stable-region case s1 carries the first `max_terms` crossing delays.
[[nodiscard]] StabilityVerdict classify_one_term(double gamma, double beta, double alpha,
                                                 std::size_t max_terms = 20);

/// Linearize a one-term model at x_star and classify; for the nonzero equilibrium the
/// result is cross-checked against the p/q versus 1 - 2/r criterion.
[[nodiscard]] StabilityVerdict classify_fractional_mg(const ModelSpec& spec, double x_star,
                                                      std::size_t max_terms = 20);

}  // namespace fmg
