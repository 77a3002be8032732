#include "doctest.h"

#include <cmath>

#include "fmglab/error.hpp"
#include "fmglab/model.hpp"

using namespace fmg;
using doctest::Approx;

namespace {

double residual(const ModelSpec& s, double x) { return -s.p_eff() * x + s.q() * x / (1.0 + std::pow(std::abs(x), s.r())); }

}  // namespace

TEST_CASE("equilibria of the chaotic one-term model are -1, 0, 1") {
    auto eq = equilibria(ModelSpec::one_term(1, 2, 10, 0.9));
    REQUIRE(eq.points.size() == 3);
    CHECK(eq.points[0] == Approx(-1.0));
    CHECK(eq.points[1] == 0.0);
    CHECK(eq.points[2] == Approx(1.0));
    CHECK_FALSE(eq.no_positive);
}

TEST_CASE("equilibria of p=1.6 q=4 are 0 and +-1.04138") {
    auto eq = equilibria(ModelSpec::one_term(1.6, 4, 10, 0.9));
    REQUIRE(eq.points.size() == 3);
    CHECK(eq.points[2] == Approx(1.04138).epsilon(1e-5));
    CHECK(eq.points[0] == Approx(-eq.points[2]));
}

TEST_CASE("p == q leaves only the origin and sets the flag") {
    auto eq = equilibria(ModelSpec::one_term(2, 2, 3, 0.7));
    REQUIRE(eq.points.size() == 1);
    CHECK(eq.points[0] == 0.0);
    CHECK(eq.no_positive);
    CHECK_THROWS_AS(static_cast<void>(positive_equilibrium(ModelSpec::one_term(2, 2, 3, 0.7))), Error);
}

TEST_CASE("odd or fractional r gives no negative equilibrium") {
    CHECK(equilibria(ModelSpec::one_term(1, 2, 3, 0.9)).points.size() == 2);
    CHECK(equilibria(ModelSpec::one_term(1, 2, 2.5, 0.9)).points.size() == 2);
}

TEST_CASE("every enumerated equilibrium zeroes the right-hand side") {
    for (double k : {0.0, -0.9, 0.3}) {
        for (double r : {2.0, 4.0, 10.0, 2.5}) {
            auto s = ModelSpec::one_term(1, 2, r, 0.9, k);
            for (double x : equilibria(s).points) CHECK(std::abs(residual(s, x)) < 1e-12);
        }
    }
}

TEST_CASE("linearize the two-term models") {
    auto l = linearize(ModelSpec::two_term(0.4, 0.8, 10, 0.9, 0.08), 1.0);
    CHECK(l.a == Approx(-1.0));
    CHECK(l.b == Approx(-4.0));
    CHECK(l.c == Approx(0.2));

    auto s = ModelSpec::two_term(1.6, 4, 10, 0.9, 4);
    auto m = linearize(s, 1.04138);  // decimal truncation is snapped
    CHECK(m.a == Approx(-4.0));
    CHECK(m.b == Approx(-20.0).epsilon(1e-9));
    CHECK(m.c == Approx(10.0));
}

TEST_CASE("linearizing at the origin gives (-p, q, 0)") {
    auto l = linearize(ModelSpec::one_term(1.3, 2.7, 4, 0.6), 0.0);
    CHECK(l.a == -1.3);
    CHECK(l.b == Approx(2.7));
    CHECK(l.c == 0.0);
}

TEST_CASE("a point that is not an equilibrium is rejected") {
    try {
        static_cast<void>(linearize(ModelSpec::one_term(1, 2, 10, 0.9), 0.5));
        FAIL("expected NotAnEquilibrium");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotAnEquilibrium);
    }
}

TEST_CASE("a1 at the positive one-term equilibrium has the closed form and is negative") {
    const double cases[][3] = {{1.0, 2.0, 10.0}, {1.6, 4.0, 10.0}, {0.4, 0.8, 3.0}, {2.0, 3.0, 2.0}};
    for (auto [p, q, r] : cases) {
        auto s = ModelSpec::one_term(p, q, r, 0.9);
        auto l = linearize(s, positive_equilibrium(s));
        CHECK(l.a1() == Approx((p - q) * r * p / q).epsilon(1e-12));
        CHECK(l.a1() < 0.0);
    }
}

TEST_CASE("two-term a1 changes sign with alpha - 1/2") {
    for (double alpha : {0.3, 0.8}) {
        auto s = ModelSpec::two_term(1.0, 2.0, 10.0, alpha, 1.0);
        auto l = linearize(s, 1.0);
        const double expect = (1.0 - 2.0) * 10.0 * 1.0 / 2.0 / (alpha - 0.5);
        CHECK(l.a1() == Approx(expect).epsilon(1e-12));
        CHECK((alpha > 0.5 ? l.a1() < 0 : l.a1() > 0));
    }
}

TEST_CASE("the symmetric equilibria share their linearization") {
    for (double r : {2.0, 4.0, 10.0}) {
        auto s = ModelSpec::two_term(1.6, 4, r, 0.9, 4);
        const double x = positive_equilibrium(s);
        auto lp = linearize(s, x), ln = linearize(s, -x);
        CHECK(lp.a == ln.a);
        CHECK(lp.b == Approx(ln.b).epsilon(1e-14));
        CHECK(lp.c == ln.c);
    }
}

TEST_CASE("b matches a central difference of the right-hand side") {
    const double h = 1e-6;
    for (auto s : {ModelSpec::one_term(1, 2, 10, 0.9), ModelSpec::two_term(0.4, 0.8, 10, 0.9, 0.08),
                   ModelSpec::two_term(2, 3, 2, 0.3, 0.008), ModelSpec::one_term(1, 2, 10, 0.9, -0.9)}) {
        const double x = positive_equilibrium(s);
        const double fd = (s.rhs(x, x + h) - s.rhs(x, x - h)) / (2 * h) / s.lead();
        CHECK(linearize(s, x).b == Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("control ranges") {
    auto one = control_range(ModelSpec::one_term(1, 2, 10, 0.9));
    CHECK(one.lo == Approx(-1.0));
    CHECK(one.hi == Approx(-0.6));
    CHECK(one.contains(-0.9));

    auto a = control_range(ModelSpec::two_term(1.6, 4, 10, 0.9, 4));
    CHECK(a.lo == Approx(-2.0));
    CHECK(a.hi == Approx(1.6));

    auto b = control_range(ModelSpec::two_term(0.4, 0.8, 10, 0.9, 0.08));
    CHECK(b.lo == Approx(-0.32));
    CHECK(b.hi == Approx(0.4));
}

TEST_CASE("control range for r <= 2 is (p - q, p) exactly") {
    for (double r : {0.5, 1.0, 2.0}) {
        auto i = control_range(ModelSpec::one_term(1.25, 3.5, r, 0.9));
        CHECK(i.lo == 1.25 - 3.5);
        CHECK(i.hi == 1.25);
    }
}

TEST_CASE("invalid specs are rejected at construction") {
    CHECK_THROWS_AS(ModelSpec::two_term(1, 2, 10, 0.5, 1.0), Error);
    CHECK_THROWS_AS(ModelSpec::one_term(-1, 2, 10, 0.9), Error);
    CHECK_THROWS_AS(ModelSpec::one_term(1, 2, 10, 1.5), Error);
    CHECK_THROWS_AS(ModelSpec::one_term(1, 2, 10, 0.0), Error);
    CHECK_THROWS_AS(ModelSpec::two_term(1, 2, 10, 0.9, 0.0), Error);
}

TEST_CASE("feedback shifts the equilibrium") {
    auto s = ModelSpec::one_term(1, 2, 10, 0.9, -0.9);
    CHECK(positive_equilibrium(s) == Approx(std::pow((2 - 1 - 0.9) / 1.9, 0.1)));
}
