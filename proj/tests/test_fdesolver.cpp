#include "doctest.h"

#include <cmath>

#include "fmglab/error.hpp"
#include "fmglab/fdesolver.hpp"
#include "fmglab/model.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace fmg;
using doctest::Approx;

TEST_CASE("step is aligned to the delay") {
    CHECK(aligned_step(0.3, 0.01) == Approx(0.01));
    CHECK(aligned_step(0.25, 0.01) * 25 == Approx(0.25));
    CHECK(aligned_step(1.0, 0.3) == Approx(0.25));
    CHECK(aligned_step(0.0, 0.02) == 0.02);
    const auto tr = integrate(ModelSpec::one_term(1, 2, 10, 0.9), HistorySpec::constant(0.9), 0.37, 2.0, 0.01);
    CHECK(tr.h * double(tr.m) == Approx(0.37).epsilon(1e-14));
    CHECK(tr.history.size() == tr.m + 1);
}

TEST_CASE("equilibria are preserved") { CHECK(props::equilibrium_drift() < 1e-8); }

TEST_CASE("quadrature weights integrate constants and ramps exactly") { CHECK(props::quadrature_error() < 1e-6); }

TEST_CASE("alpha = 1 matches an independent RK4 method-of-steps run") { CHECK(props::classical_limit_error() < 1e-4); }

TEST_CASE("halving the step at least halves the error") { CHECK(props::convergence_factor() >= 2.0); }

TEST_CASE("undelayed linear decay follows the Mittag-Leffler function") {
    for (double alpha : {0.5, 0.8, 1.0}) {
        const auto tr = integrate_linear({-1.0, 0.0, 0.0, alpha}, [](double) { return 1.0; }, 0.0, 0.0, 2.0, 1e-3);
        CHECK(tr.x.back() == Approx(oracle::mittag_leffler(alpha, -std::pow(2.0, alpha))).epsilon(1e-3));
    }
}

TEST_CASE("linearized runs grow or decay as the critical delay predicts") {
    const auto r = props::sign_consistency(10, 2024);
    CHECK(r.pairs == 10);
    CHECK(r.mismatches == 0);
}

TEST_CASE("one-term model converges below the critical delay") {
    const auto tr = integrate(ModelSpec::one_term(1, 2, 10, 0.9), HistorySpec::constant(0.9), 0.3, 100.0, 0.01);
    for (std::size_t n = 0; n < tr.size(); ++n)
        if (tr.time(n) > 80) CHECK(std::abs(tr.x[n] - 1.0) < 1e-2);
}

TEST_CASE("one-term model keeps oscillating above the critical delay") {
    const auto tr = integrate(ModelSpec::one_term(1, 2, 10, 0.9), HistorySpec::constant(0.9), 0.5, 100.0, 0.01);
    double lo = HUGE_VAL, hi = -HUGE_VAL;
    for (std::size_t n = 0; n < tr.size(); ++n)
        if (tr.time(n) > 80) lo = std::min(lo, tr.x[n]), hi = std::max(hi, tr.x[n]);
    CHECK(hi - lo > 0.05);
}

TEST_CASE("feedback control settles on the shifted equilibrium") {
    const auto s = ModelSpec::one_term(1, 2, 10, 0.9, -0.9);
    const double x = std::pow((2 - 1 - 0.9) / 1.9, 0.1);
    const auto tr = integrate(s, HistorySpec::constant(0.9), 4.0, 200.0, 0.01);
    CHECK(tr.x.back() == Approx(x).epsilon(1e-3));
}

TEST_CASE("two-term run produces both components") {
    const auto tr = integrate(ModelSpec::two_term(1.6, 4, 10, 0.9, 4), HistorySpec::constant(0.5, 0.5), 0.2, 20.0, 0.01);
    CHECK(tr.y.size() == tr.x.size());
    CHECK(tr.y.front() == 0.5);
    CHECK(std::abs(tr.x.back() - std::pow(1.5, 0.1)) < 5e-2);
}

TEST_CASE("zeroing the derivative history changes the two-term run") {
    const auto s = ModelSpec::two_term(1.6, 4, 10, 0.9, 4);
    SolverOptions zero;
    zero.dxhist_as = DxHistoryAs::Zero;
    const auto a = integrate(s, HistorySpec::constant(0.5, 0.5), 0.2, 2.0, 0.01);
    const auto b = integrate(s, HistorySpec::constant(0.5), 0.2, 2.0, 0.01, zero);
    CHECK(b.y.front() == 0.0);
    CHECK(a.x.back() != b.x.back());
}

TEST_CASE("two-term run without a derivative history is rejected") {
    CHECK_THROWS_AS(static_cast<void>(integrate(ModelSpec::two_term(1.6, 4, 10, 0.9, 4), HistorySpec::constant(0.5),
                                                0.2, 2.0, 0.01)),
                    Error);
}

TEST_CASE("a jump at the origin is flagged") {
    auto h = HistorySpec::constant(0.9);
    h.x0 = 1.1;
    const auto tr = integrate(ModelSpec::one_term(1, 2, 10, 0.9), h, 0.3, 1.0, 0.01);
    CHECK(tr.nonsmooth);
    CHECK(tr.x.front() == 1.1);
    CHECK_FALSE(integrate(ModelSpec::one_term(1, 2, 10, 0.9), HistorySpec::constant(0.9), 0.3, 1.0, 0.01).nonsmooth);
}

TEST_CASE("divergence truncates instead of throwing") {
    SolverOptions opts;
    opts.divergence_bound = 10.0;
    const auto tr = integrate_linear({1.0, 0.0, 0.0, 0.9}, [](double) { return 1.0; }, 0.0, 0.5, 50.0, 0.01, opts);
    CHECK(tr.diverged);
    CHECK(tr.x.size() < 5001);
    for (double v : tr.x) CHECK(std::isfinite(v));
}

TEST_CASE("negative delayed state with fractional r is an error unless signed power is on") {
    const auto s = ModelSpec::one_term(1, 2, 2.5, 0.9);
    CHECK_THROWS_AS(static_cast<void>(integrate(s, HistorySpec::constant(-0.2), 0.5, 2.0, 0.01)), Error);
    SolverOptions opts;
    opts.signed_power = true;
    CHECK(integrate(s, HistorySpec::constant(-0.2), 0.5, 2.0, 0.01, opts).x.size() == 201);
}

TEST_CASE("bad arguments are rejected") {
    const auto s = ModelSpec::one_term(1, 2, 10, 0.9);
    CHECK_THROWS_AS(static_cast<void>(integrate(s, HistorySpec::constant(0.9), 0.3, 0.0, 0.01)), Error);
    CHECK_THROWS_AS(static_cast<void>(integrate(s, HistorySpec::constant(0.9), 0.3, 1.0, -0.01)), Error);
    SolverOptions opts;
    opts.corrector_iters = 0;
    CHECK_THROWS_AS(static_cast<void>(integrate(s, HistorySpec::constant(0.9), 0.3, 1.0, 0.01, opts)), Error);
}

TEST_CASE("more corrector iterations and a long memory window stay close to the default") {
    const auto s = ModelSpec::one_term(1, 2, 10, 0.9);
    const auto base = integrate(s, HistorySpec::constant(0.9), 0.3, 20.0, 0.01);
    SolverOptions iter;
    iter.corrector_iters = 3;
    SolverOptions window;
    window.memory_window = 1500;
    CHECK(integrate(s, HistorySpec::constant(0.9), 0.3, 20.0, 0.01, iter).x.back() == Approx(base.x.back()).epsilon(1e-3));
    CHECK(integrate(s, HistorySpec::constant(0.9), 0.3, 20.0, 0.01, window).x.back() ==
          Approx(base.x.back()).epsilon(1e-2));
}

TEST_CASE("runs are deterministic") {
    const auto s = ModelSpec::one_term(1, 2, 10, 0.9);
    const auto a = integrate(s, HistorySpec::constant(0.9), 1.8, 30.0, 0.01);
    const auto b = integrate(s, HistorySpec::constant(0.9), 1.8, 30.0, 0.01);
    CHECK(a.x == b.x);
}
