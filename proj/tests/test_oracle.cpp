#include <cmath>
#include <numbers>

#include "doctest.h"
#include "polyenc/oracle.hpp"
#include "polyenc/verify.hpp"

using namespace polyenc;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("values at the origin") {
    const Triangle canon{{0, 0}, {1, 0}, {1, 1}};
    CHECK(std::abs(oracle::quad_triangle(canon, 0, 0, 1e-10) - Complex(0.5)) <= 1e-15);
    Rng rng(3);
    for (int i = 0; i < 10; ++i) {
        const Triangle t = random_triangle(rng);
        CHECK(std::abs(oracle::quad_triangle(t, 0, 0, 1e-10) - Complex(t.signed_area())) <= 1e-14);
    }
}

TEST_CASE("cubature rule is exact through degree 7") {
    // Over (0,0),(1,0),(0,1): integral of x^i y^j = i! j! / (i + j + 2)!.
    const Triangle unit{{0, 0}, {1, 0}, {0, 1}};
    for (int i = 0; i <= 7; ++i) {
        for (int j = 0; i + j <= 7; ++j) {
            const double exact = factorial(i) * factorial(j) / factorial(i + j + 2);
            CHECK_MESSAGE(std::abs(oracle::cubature_rule_monomial(unit, i, j) - exact) <= 1e-15,
                          "x^" << i << " y^" << j);
        }
    }
    // Degree 8 is not integrated exactly by a degree-7 rule.
    const double exact8 = factorial(8) / factorial(10);
    CHECK(std::abs(oracle::cubature_rule_monomial(unit, 8, 0) - exact8) > 1e-8);
}

TEST_CASE("segment quadrature examples") {
    const Segment s{{0, 0}, {0.6, 0.8}};
    CHECK(std::abs(oracle::quad_segment(s, 0, 0) - Complex(1.0)) <= 1e-15);
    const Segment canon{{-0.5, 0}, {0.5, 0}};
    for (double u : {0.1, 0.5, 1.0, 2.5}) {
        const double expected = std::sin(std::numbers::pi * u) / (std::numbers::pi * u);
        CHECK(std::abs(oracle::quad_segment(canon, u, 0) - Complex(expected)) <= 1e-14);
    }
    CHECK_THROWS(oracle::quad_segment(s, 0, 0, 10));
}

TEST_CASE("unit square quadrature") {
    const Polygon sq{{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}}, {}};
    CHECK(std::abs(oracle::quad_polygon(sq, 0, 0, 1e-10) - Complex(1.0)) <= 1e-14);
    for (auto [u, v] : {std::pair{0.3, 0.7}, std::pair{-0.9, 0.2}, std::pair{1.0, 1.0}}) {
        // Separable: (integral of e^{-j2pi u x} on [0,1]) times the same in y.
        auto one = [](double w) {
            return std::abs(w) < 1e-300 ? Complex(1.0)
                                        : (Complex(1.0) - std::polar(1.0, -2 * std::numbers::pi * w)) /
                                              Complex(0.0, 2 * std::numbers::pi * w);
        };
        CHECK(scaled_error(oracle::quad_polygon(sq, u, v, 1e-11), one(u) * one(v)) <= 1e-11);
    }
}

TEST_CASE("self-consistency when the tolerance is halved") {
    Rng rng(5);
    for (int i = 0; i < 10; ++i) {
        const Triangle t = random_triangle(rng);
        const double u = rng.uniform(-1, 1), v = rng.uniform(-1, 1);
        const auto a = oracle::quad_triangle_detailed(t, u, v, 1e-8);
        const auto b = oracle::quad_triangle_detailed(t, u, v, 5e-9);
        CHECK(std::abs(a.value - b.value) <= a.error_estimate + 1e-15);
        CHECK(a.error_estimate <= 1e-8 * (1.0 + std::abs(a.value)));
    }
}

TEST_CASE("tolerance outside the supported range is rejected") {
    const Triangle canon{{0, 0}, {1, 0}, {1, 1}};
    CHECK_THROWS(oracle::quad_triangle(canon, 0.1, 0.1, 1e-13));
    CHECK_THROWS(oracle::quad_triangle(canon, 0.1, 0.1, 1e-2));
}

}  // TEST_SUITE
