#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "geoheat/baseline.hpp"

using namespace geoheat;

namespace {
constexpr double kPi = std::numbers::pi;

Point pt(double a, double b) {
    Point p(2);
    p << a, b;
    return p;
}
}  // namespace

TEST_CASE("energy_of_coeffs") {
    GdProblem flat{euclidean(2), pt(0, 0), pt(1, 1), 4, 8};
    const int n_free = 2 * (flat.degree - 1);

    SUBCASE("zero coefficients give the affine-line energy") {
        CHECK(energy_of_coeffs(flat, Vec::Zero(n_free)) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("coincident endpoints and zero free part give zero") {
        GdProblem trivial{euclidean(2), pt(0.4, 0.4), pt(0.4, 0.4), 4, 8};
        CHECK(energy_of_coeffs(trivial, Vec::Zero(n_free)) == doctest::Approx(0.0));
    }
    SUBCASE("straight chart line on the sphere exceeds the geodesic energy") {
        GdProblem sph{sphere(1.0), pt(kPi / 8, kPi / 8), pt(3 * kPi / 4, 2 * kPi / 3), 7, 11};
        // Great-circle energy: 0.5 * d^2 with d = 2.3295.
        CHECK(energy_of_coeffs(sph, Vec::Zero(2 * 6)) > 2.7133);
    }
    SUBCASE("quadrature node count below degree + 1 is rejected") {
        GdProblem bad{euclidean(2), pt(0, 0), pt(1, 1), 7, 7};
        CHECK_THROWS_AS(energy_of_coeffs(bad, Vec::Zero(12)), std::invalid_argument);
    }
}

TEST_CASE("dirichlet basis vanishes at the endpoints") {
    NodeGrid grid(10);
    Mat basis = dirichlet_basis(7, grid);
    CHECK(basis.rows() == 11);
    CHECK(basis.cols() == 6);
    CHECK(basis.row(0).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(basis.row(10).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("flat-space descent recovers the straight line") {
    GdProblem prob{euclidean(2), pt(0, 0), pt(1, 1), 4, 8};
    SolveReport report = solve_gd(prob);
    CHECK(report.length == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    CHECK(report.iterations <= 5);
}

TEST_CASE("descent iterates never increase the energy") {
    GdProblem prob{sphere(1.0), pt(kPi / 8, kPi / 8), pt(3 * kPi / 4, 2 * kPi / 3), 7, 11};
    prob.tol_grad = 1e-5;
    SolveReport report = solve_gd(prob);
    for (size_t i = 1; i < report.energy_trace.size(); ++i) {
        CHECK(report.energy_trace[i].second <= report.energy_trace[i - 1].second);
    }
}

TEST_CASE("sphere benchmark via gradient descent") {
    GdProblem prob{sphere(1.0), pt(kPi / 8, kPi / 8), pt(3 * kPi / 4, 2 * kPi / 3), 7, 11};
    SolveReport report = solve_gd(prob);
    CHECK(report.length == doctest::Approx(2.33).epsilon(0.01 / 2.33));

    SUBCASE("endpoints are hit exactly by the reported series") {
        CHECK((report.geodesic.eval(0.0) - prob.start).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((report.geodesic.eval(1.0) - prob.end).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("finite-difference gradient matches the exact quadratic gradient") {
    GdProblem prob{euclidean(2), pt(0.0, -0.5), pt(1.0, 2.0), 5, 9};
    const int n_free = 2 * (prob.degree - 1);
    std::mt19937 rng(31);
    std::normal_distribution<double> coeff(0.0, 0.3);
    Vec a(n_free);
    for (int i = 0; i < n_free; ++i) a[i] = coeff(rng);

    auto energy = [&](const Vec& c) { return energy_of_coeffs(prob, c); };
    for (int i = 0; i < n_free; ++i) {
        Vec lo = a, hi = a;
        // The flat-space energy is exactly quadratic in the coefficients, so
        // wide central differences are exact and serve as the oracle.
        hi[i] += 0.5;
        lo[i] -= 0.5;
        const double exact = (energy(hi) - energy(lo)) / 1.0;
        hi[i] = a[i] + prob.fd_step;
        lo[i] = a[i] - prob.fd_step;
        const double fd = (energy(hi) - energy(lo)) / (2.0 * prob.fd_step);
        CHECK(fd == doctest::Approx(exact).epsilon(1e-4));
    }
}

TEST_CASE("iteration budget exhaustion raises MaxIters") {
    GdProblem prob{sphere(1.0), pt(kPi / 8, kPi / 8), pt(3 * kPi / 4, 2 * kPi / 3), 7, 11};
    prob.max_iters = 2;
    prob.tol_grad = 1e-12;
    CHECK_THROWS_AS(solve_gd(prob), MaxItersError);
}
