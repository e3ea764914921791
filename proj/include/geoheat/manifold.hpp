#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "geoheat/chebyshev.hpp"
#include "geoheat/errors.hpp"

namespace geoheat {

/// Chart coordinates of a point, length = manifold dimension.
using Point = Eigen::VectorXd;

/// Riemannian metric in a single coordinate chart. The evaluator maps a
/// chart point to the (symmetric positive definite) metric matrix G.
/// Partial derivatives dG/dx_k come from analytic closures when provided,
/// otherwise central finite differences.
class MetricField {
public:
    using Evaluator = std::function<Mat(const Point&)>;
    /// Returns { dG/dx_0, ..., dG/dx_{n-1} } at a point.
    using PartialsFn = std::function<std::vector<Mat>(const Point&)>;

    MetricField(int dim, Evaluator evaluator);
    MetricField(int dim, Evaluator evaluator, PartialsFn partials);

    int dim() const { return dim_; }
    bool has_analytic_partials() const { return static_cast<bool>(partials_); }
    double fd_step() const { return fd_step_; }

    /// G(p), symmetrized as (A + A^T)/2 and checked SPD via Cholesky.
    /// Throws NonSpdError on failure.
    Mat metric_at(const Point& p) const;

    /// dG/dx_k for k = 0..n-1; each entry symmetric.
    std::vector<Mat> metric_partials(const Point& p) const;

    /// Christoffel symbols of the second kind. gamma[i](j, k) = Gamma^i_jk,
    /// computed with a Cholesky solve against G rather than an explicit
    /// inverse, and exactly symmetric in (j, k).
    std::vector<Mat> christoffel(const Point& p) const;

    /// <u, w>_g at p.
    double inner(const Point& p, const Vec& u, const Vec& w) const;

private:
    int dim_;
    Evaluator evaluator_;
    PartialsFn partials_;
    double fd_step_ = 1e-6;
};

/// Riemannian energy E = 1/2 int <c', c'>_g ds of a curve sampled at the
/// collocation nodes (columns of X, one row per coordinate).
double curve_energy(const MetricField& field, const Mat& X, const Collocation& colloc);

/// Arc length L = int sqrt(<c', c'>_g) ds on the same discretization.
double curve_length(const MetricField& field, const Mat& X, const Collocation& colloc);

// Built-in benchmark surfaces.

/// Flat R^n.
MetricField euclidean(int n);

/// Round sphere of radius R in spherical angles (theta, phi);
/// G = diag(R^2, R^2 sin^2 theta). Singular at theta in {0, pi}.
MetricField sphere(double radius);

/// Torus with major radius a, tube radius b, angles (theta, phi);
/// G = diag((a + b cos phi)^2, b^2). Requires a > b > 0.
MetricField torus(double a, double b);

/// Graph surface z = f(x, y) with the induced metric
/// [[1 + fx^2, fx fy], [fx fy, 1 + fy^2]].
MetricField graph_surface(std::function<double(double, double)> f,
                          std::function<Eigen::Vector2d(double, double)> grad_f);

/// The egg box surface f(x, y) = x^2 - y^2 + 2 sin(5x) cos(5y).
MetricField eggbox();

}  // namespace geoheat
