#include <cmath>
#include <random>

#include "doctest.h"
#include "geoheat/chebyshev.hpp"

using namespace geoheat;

TEST_CASE("cgl nodes match the closed form") {
    SUBCASE("D=1") {
        NodeGrid g(1);
        CHECK(g.nodes[0] == 0.0);
        CHECK(g.nodes[1] == 1.0);
    }
    SUBCASE("D=2") {
        NodeGrid g(2);
        CHECK(g.nodes[1] == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("D=4") {
        NodeGrid g(4);
        CHECK(g.nodes[1] == doctest::Approx((1.0 - std::sqrt(2.0) / 2.0) / 2.0).epsilon(1e-14));
        CHECK(g.nodes[2] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(g.nodes[3] == doctest::Approx(0.853553390593274).epsilon(1e-14));
    }
    SUBCASE("D=0 rejected") {
        CHECK_THROWS_AS(NodeGrid(0), std::invalid_argument);
    }
}

TEST_CASE("node symmetry about 1/2") {
    for (int d : {1, 2, 3, 5, 8, 16, 33, 64}) {
        NodeGrid g(d);
        for (int k = 0; k <= d; ++k) {
            CHECK(std::abs(g.nodes[k] + g.nodes[d - k] - 1.0) <= 1e-15);
        }
    }
}

TEST_CASE("first-order differentiation matrix") {
    NodeGrid g(4);
    Mat d = diff_matrix(g);

    SUBCASE("rows sum to zero") {
        CHECK(d.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-10);
    }
    SUBCASE("derivative of s is one") {
        Vec ds = d * g.nodes;
        CHECK((ds - Vec::Ones(5)).cwiseAbs().maxCoeff() <= 1e-13);
    }
    SUBCASE("derivative of s^2 is 2s") {
        Vec v = g.nodes.array().square();
        Vec dv = d * v;
        CHECK((dv - 2.0 * g.nodes).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("monomial exactness up to the grid degree") {
    for (int degree : {4, 8, 16, 32}) {
        NodeGrid g(degree);
        Mat d = diff_matrix(g);
        const double tol = 1e-9 * degree * degree;
        for (int m = 0; m <= degree; ++m) {
            Vec v(g.size()), expect(g.size());
            for (int k = 0; k < g.size(); ++k) {
                v[k] = std::pow(g.nodes[k], m);
                expect[k] = m == 0 ? 0.0 : m * std::pow(g.nodes[k], m - 1);
            }
            CHECK(((d * v) - expect).cwiseAbs().maxCoeff() <= tol);
        }
    }
}

TEST_CASE("second-order differentiation matrix") {
    NodeGrid g(4);
    Mat d2 = second_diff(g);

    SUBCASE("s^2 -> 2") {
        Vec v = g.nodes.array().square();
        CHECK(((d2 * v) - Vec::Constant(5, 2.0)).cwiseAbs().maxCoeff() <= 1e-10);
    }
    SUBCASE("linear -> 0") {
        Vec v = 3.0 * g.nodes.array() + 1.0;
        CHECK((d2 * v).cwiseAbs().maxCoeff() <= 1e-10);
    }
    SUBCASE("s^3 -> 6s") {
        Vec v = g.nodes.array().cube();
        CHECK(((d2 * v) - 6.0 * g.nodes).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("clenshaw-curtis weights integrate polynomials exactly") {
    for (int degree : {2, 5, 8, 17}) {
        NodeGrid g(degree);
        Vec w = quadrature_weights(g);
        CHECK(std::abs(w.sum() - 1.0) <= 1e-14);
        for (int m = 0; m <= degree; ++m) {
            double quad = 0.0;
            for (int k = 0; k < g.size(); ++k) {
                quad += w[k] * std::pow(g.nodes[k], m);
            }
            CHECK(std::abs(quad - 1.0 / (m + 1)) <= 1e-12);
        }
    }
}

TEST_CASE("series and vandermonde") {
    SUBCASE("constant series evaluates to one everywhere") {
        NodeGrid g(6);
        ChebyshevSeries s;
        s.coeffs = Mat::Zero(1, 7);
        s.coeffs(0, 0) = 1.0;
        Mat vals = coeffs_to_nodes(s, g);
        CHECK((vals.array() - 1.0).abs().maxCoeff() <= 1e-14);
    }
    SUBCASE("node values s_k have coefficients (1/2, 1/2, 0, ...)") {
        NodeGrid g(5);
        Mat vals = g.nodes.transpose();
        ChebyshevSeries s = nodes_to_coeffs(vals, g);
        CHECK(s.coeffs(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(s.coeffs(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
        for (int j = 2; j <= 5; ++j) {
            CHECK(std::abs(s.coeffs(0, j)) <= 1e-12);
        }
    }
    SUBCASE("round trip is the identity for D <= 64") {
        std::mt19937 rng(42);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (int degree : {3, 8, 21, 64}) {
            NodeGrid g(degree);
            Mat vals(2, g.size());
            for (int i = 0; i < vals.size(); ++i) vals(i) = dist(rng);
            ChebyshevSeries s = nodes_to_coeffs(vals, g);
            Mat back = coeffs_to_nodes(s, g);
            CHECK((back - vals).cwiseAbs().maxCoeff() <= 1e-10);
        }
    }
    SUBCASE("eval agrees with coeffs_to_nodes at the nodes") {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        NodeGrid g(12);
        ChebyshevSeries s;
        s.coeffs = Mat(3, 13);
        for (int i = 0; i < s.coeffs.size(); ++i) s.coeffs(i) = dist(rng);
        Mat vals = coeffs_to_nodes(s, g);
        for (int k = 0; k < g.size(); ++k) {
            CHECK((s.eval(g.nodes[k]) - vals.col(k)).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}
