// Reference element oracles: quadrature rules against closed-form monomial
// integrals, shape functions against their nodal definitions, gradients
// against finite differences.

#include "fsifem/fe.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace fsifem;

namespace {

// integral of x^a y^b over the reference triangle = a! b! / (a+b+2)!
double monomial_integral(int a, int b) {
    auto fact = [](int n) {
        double f = 1.0;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    return fact(a) * fact(b) / fact(a + b + 2);
}

double quad_monomial(const QuadratureRule& rule, int a, int b) {
    double s = 0.0;
    for (int q = 0; q < rule.size(); ++q)
        s += rule.w[q] * std::pow(rule.pts[q][0], a) * std::pow(rule.pts[q][1], b);
    return s;
}

} // namespace

TEST_CASE("triangle rules integrate monomials exactly up to their degree") {
    for (int degree : {1, 2, 4, 5, 6, 8, 10}) {
        const QuadratureRule& rule = triangle_rule(degree);
        CHECK(rule.degree >= degree);
        for (int a = 0; a <= rule.degree; ++a)
            for (int b = 0; a + b <= rule.degree; ++b) {
                INFO("degree ", degree, " monomial x^", a, " y^", b);
                CHECK(std::abs(quad_monomial(rule, a, b) - monomial_integral(a, b)) <= 1e-14);
            }
    }
}

TEST_CASE("requested degree picks the smallest sufficient stored rule") {
    CHECK(triangle_rule(3).degree == 4);
    CHECK(triangle_rule(7).degree == 8);
    CHECK(triangle_rule(9).degree == 10);
    CHECK_THROWS_AS(triangle_rule(11), std::invalid_argument);
}

TEST_CASE("degree 6 integrates the squared bubble exactly") {
    // (27 l1 l2 l3)^2 has degree 6; integral = 729 * (2!)^3 / 8!
    const QuadratureRule& rule = triangle_rule(6);
    double s = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
        const double x = rule.pts[q][0], y = rule.pts[q][1];
        const double bub = 27.0 * (1.0 - x - y) * x * y;
        s += rule.w[q] * bub * bub;
    }
    CHECK(s == doctest::Approx(729.0 * 8.0 / 40320.0).epsilon(1e-14));
}

TEST_CASE("gauss rules on [0,1] integrate x^k exactly up to 2n-1") {
    for (int n : {1, 2, 3, 4}) {
        const GaussRule1D& rule = gauss_rule_1d(n);
        REQUIRE(rule.size() == n);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double s = 0.0;
            for (int q = 0; q < n; ++q) s += rule.w[q] * std::pow(rule.x[q], k);
            INFO("n=", n, " k=", k);
            CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-14));
        }
    }
}

TEST_CASE("shape functions take their nodal values") {
    double N[6];

    shape_values(ElementType::P1, 1.0 / 3, 1.0 / 3, N);
    for (int i = 0; i < 3; ++i) CHECK(N[i] == doctest::Approx(1.0 / 3).epsilon(1e-15));

    shape_values(ElementType::P1B, 1.0 / 3, 1.0 / 3, N);
    CHECK(N[3] == doctest::Approx(1.0).epsilon(1e-15));  // bubble peaks at the barycenter

    // P2 is nodal at vertices and edge midpoints
    const double nodes[6][2] = {{0, 0}, {1, 0}, {0, 1}, {0.5, 0}, {0.5, 0.5}, {0, 0.5}};
    for (int k = 0; k < 6; ++k) {
        shape_values(ElementType::P2, nodes[k][0], nodes[k][1], N);
        for (int j = 0; j < 6; ++j) {
            INFO("P2 shape ", j, " at node ", k);
            CHECK(std::abs(N[j] - (j == k ? 1.0 : 0.0)) <= 1e-14);
        }
    }
}

TEST_CASE("partition of unity and bubble edge values") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int it = 0; it < 50; ++it) {
        double x = uni(rng), y = uni(rng) * (1.0 - x);
        double N[6];
        shape_values(ElementType::P1, x, y, N);
        CHECK(N[0] + N[1] + N[2] == doctest::Approx(1.0).epsilon(1e-14));
        shape_values(ElementType::P2, x, y, N);
        CHECK(N[0] + N[1] + N[2] + N[3] + N[4] + N[5] == doctest::Approx(1.0).epsilon(1e-14));
        // the bubble is hierarchical: the P1 part of P1B still sums to one
        shape_values(ElementType::P1B, x, y, N);
        CHECK(N[0] + N[1] + N[2] == doctest::Approx(1.0).epsilon(1e-14));
    }

    // bubble trace vanishes on all three edges
    for (int k = 0; k < 20; ++k) {
        const double s = (k + 0.5) / 20.0;
        const double pts[3][2] = {{s, 0.0}, {1.0 - s, s}, {0.0, s}};
        for (auto& p : pts) {
            double N[4];
            shape_values(ElementType::P1B, p[0], p[1], N);
            CHECK(std::abs(N[3]) <= 1e-14);
        }
    }
}

TEST_CASE("shape gradients match central differences") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> uni(0.05, 0.9);
    const double d = 1e-6;
    for (ElementType e : {ElementType::P1, ElementType::P1B, ElementType::P2}) {
        const int n = n_shape(e);
        for (int it = 0; it < 20; ++it) {
            double x = uni(rng), y = uni(rng) * (0.95 - x);
            double g[6][2];
            shape_grads(e, x, y, g);
            double np[6], nm[6];
            shape_values(e, x + d, y, np);
            shape_values(e, x - d, y, nm);
            for (int i = 0; i < n; ++i) CHECK(std::abs(g[i][0] - (np[i] - nm[i]) / (2 * d)) <= 1e-8);
            shape_values(e, x, y + d, np);
            shape_values(e, x, y - d, nm);
            for (int i = 0; i < n; ++i) CHECK(std::abs(g[i][1] - (np[i] - nm[i]) / (2 * d)) <= 1e-8);
        }
    }
}

TEST_CASE("affine map carries weights to physical area") {
    const double a[2] = {0, 0}, b[2] = {2, 0}, c[2] = {0, 2};
    AffineMap map = affine_map(a, b, c);
    CHECK(map.det == doctest::Approx(4.0));
    const QuadratureRule& rule = triangle_rule(2);
    double area = 0.0;
    for (int q = 0; q < rule.size(); ++q) area += rule.w[q] * std::abs(map.det);
    CHECK(area == doctest::Approx(2.0).epsilon(1e-14));

    // gradients map through J^{-T}: a linear function's physical gradient
    double x1, y1;
    map.to_physical(0.3, 0.4, x1, y1);
    CHECK(x1 == doctest::Approx(0.6));
    CHECK(y1 == doctest::Approx(0.8));
}
