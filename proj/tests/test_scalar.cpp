#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dirac/scalar.hpp"
#include "generators.hpp"

using namespace dirac;

namespace {

ChartPtr monopole_plane() {
    // chart (q1, q2) with r^2 = q1^2 + q2^2
    std::vector<std::string> names{"q1", "q2"};
    Polynomial def = Polynomial::variable(3, 0).pow(2) + Polynomial::variable(3, 1).pow(2);
    return std::make_shared<Chart>(names, std::vector<std::pair<std::string, Polynomial>>{{"r", def}});
}

Scalar var(const ChartPtr& c, const std::string& name) {
    return Scalar::variable(c, *c->var_index(name));
}

/// Central finite difference of f in coordinate `coord` at a numeric point.
double finite_difference(const Scalar& f, std::size_t coord, std::vector<double> coords,
                         double h = 1e-5) {
    auto at = [&](double delta) {
        auto shifted = coords;
        shifted[coord] += delta;
        return f.eval_double(numeric_var_values(*f.chart(), shifted));
    };
    return (at(h) - at(-h)) / (2 * h);
}

} // namespace

TEST_CASE("scalar arithmetic with radical reduction") {
    auto c = monopole_plane();
    Scalar r = var(c, "r");
    Scalar one(c, Rational(1));

    SECTION("inverse pair (1/r^2) * r^2 = 1") {
        Scalar inv = one / (r * r);
        REQUIRE(inv * r * r == one);
    }
    SECTION("cancellation x/(x^2) div 1/x = 1") {
        Scalar x = var(c, "q1");
        REQUIRE((x / (x * x)) / (one / x) == one);
    }
    SECTION("defining relation r * r = q1^2 + q2^2") {
        Scalar q1 = var(c, "q1"), q2 = var(c, "q2");
        REQUIRE(r * r == q1 * q1 + q2 * q2);
    }
    SECTION("radical denominator is rationalized") {
        Scalar f = var(c, "q1") / r;
        REQUIRE_FALSE(detail::has_radical(f.den(), *c));
        REQUIRE(f * f == var(c, "q1") * var(c, "q1") / (r * r));
    }
}

TEST_CASE("derive") {
    auto c = monopole_plane();
    Scalar r = var(c, "r");
    Scalar one(c, Rational(1));

    SECTION("d/dq1 of 1/r^2 against finite differences at (1,2)") {
        Scalar f = one / (r * r);
        Scalar df = f.derive("q1");
        // expected -2 q1 / r^4
        Scalar expected = Scalar(c, Rational(-2)) * var(c, "q1") / (r * r * r * r);
        REQUIRE(df == expected);
        double fd = finite_difference(f, 0, {1.0, 2.0});
        double got = df.eval_double(numeric_var_values(*c, {1.0, 2.0}));
        REQUIRE(got == Catch::Approx(fd).epsilon(1e-6));
    }
    SECTION("derivative of a constant is zero") {
        REQUIRE(Scalar(c, Rational(7)).derive("q1").is_zero());
    }
    SECTION("d/dq1 of r = q1/r, about 0.6 at (3,4)") {
        Scalar dr = r.derive("q1");
        REQUIRE(dr == var(c, "q1") / r);
        REQUIRE(dr.eval_double(numeric_var_values(*c, {3.0, 4.0})) == Catch::Approx(0.6));
    }
}

TEST_CASE("smooth_at") {
    SECTION("(x^2 + x y)/x at (0,1) cancels to x + y") {
        auto c = testgen::make_chart(2);
        Scalar x = Scalar::variable(c, 0), y = Scalar::variable(c, 1);
        Scalar f = (x * x + x * y) / x;
        auto res = smooth_at(f, Point(c, {Rational(0), Rational(1)}));
        REQUIRE(res.status == Smoothness::Smooth);
        REQUIRE(*res.value == 1);
    }
    SECTION("1/r^2 at the origin is a pole") {
        auto c = monopole_plane();
        Scalar f = Scalar(c, Rational(1)) / (var(c, "r") * var(c, "r"));
        auto res = smooth_at(f, Point(c, {Rational(0), Rational(0)}));
        REQUIRE(res.status == Smoothness::Pole);
    }
    SECTION("x/r at the origin is radical-undecided") {
        auto c = monopole_plane();
        Scalar f = var(c, "q1") / var(c, "r");
        auto res = smooth_at(f, Point(c, {Rational(0), Rational(0)}));
        REQUIRE(res.status == Smoothness::RadicalUndecided);
    }
}

TEST_CASE("eval") {
    auto c = monopole_plane();
    Scalar r = var(c, "r");
    SECTION("r at (3,4) = 5") {
        REQUIRE(r.eval_exact(Point(c, {Rational(3), Rational(4)})) == 5);
    }
    SECTION("1/r^2 at (1,0) = 1") {
        Scalar f = Scalar(c, Rational(1)) / (r * r);
        REQUIRE(f.eval_exact(Point(c, {Rational(1), Rational(0)})) == 1);
    }
    SECTION("r^2/(1+r^2) at (1,0,0) = 1/2") {
        std::vector<std::string> names{"x", "y", "z"};
        Polynomial def = Polynomial::variable(4, 0).pow(2) + Polynomial::variable(4, 1).pow(2) +
                         Polynomial::variable(4, 2).pow(2);
        auto c3 = std::make_shared<Chart>(names, std::vector<std::pair<std::string, Polynomial>>{{"r", def}});
        Scalar r3 = Scalar::variable(c3, 3);
        Scalar f = (r3 * r3) / (Scalar(c3, Rational(1)) + r3 * r3);
        REQUIRE(f.eval_exact(Point(c3, {Rational(1), Rational(0), Rational(0)})) == Rational(1, 2));
    }
}

TEST_CASE("scalar properties") {
    std::mt19937 rng(20240811);
    auto c = testgen::make_chart(3);

    SECTION("field axioms on randomized scalars") {
        for (int i = 0; i < 200; ++i) {
            Scalar a = testgen::random_scalar(rng, c);
            Scalar b = testgen::random_scalar(rng, c);
            Scalar d = testgen::random_scalar(rng, c);
            REQUIRE((a + b) + d == a + (b + d));
            REQUIRE((a * b) * d == a * (b * d));
            REQUIRE(a * (b + d) == a * b + a * d);
            REQUIRE(a + b == b + a);
            if (!b.is_zero()) REQUIRE((a / b) * b == a);
        }
    }
    SECTION("Leibniz rule") {
        for (int i = 0; i < 200; ++i) {
            Scalar f = testgen::random_scalar(rng, c);
            Scalar g = testgen::random_scalar(rng, c);
            REQUIRE((f * g).derive(0) == f.derive(0) * g + f * g.derive(0));
        }
    }
    SECTION("eval of derive matches finite differences") {
        for (int i = 0; i < 50; ++i) {
            Scalar f = testgen::random_scalar(rng, c);
            auto m = testgen::random_point(rng, c);
            std::vector<double> coords;
            for (auto& v : m.values()) coords.push_back(v.get_d());
            double sym = f.derive(1).eval_double(m);
            double fd = finite_difference(f, 1, coords);
            REQUIRE(sym == Catch::Approx(fd).margin(1e-6 + 1e-6 * std::abs(fd)));
        }
    }
    SECTION("canonicalization is idempotent") {
        for (int i = 0; i < 200; ++i) {
            Scalar a = testgen::random_scalar(rng, c);
            Scalar again(c, a.num(), a.den());
            REQUIRE(a == again);
        }
    }
}
