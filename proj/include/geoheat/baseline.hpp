#pragma once

#include "geoheat/heatflow.hpp"
#include "geoheat/manifold.hpp"

namespace geoheat {

/// Energy-minimization geodesic baseline: steepest descent with Armijo
/// backtracking over Chebyshev coefficients, with the endpoints handled by
/// an endpoint-exact parameterization rather than constraints.
struct GdProblem {
    MetricField manifold;
    Point start;
    Point end;
    int degree = 7;
    /// Quadrature node count, >= degree + 1.
    int quad_nodes = 11;
    double tol_grad = 1e-4;
    long max_iters = 50'000;
    /// Central-difference step for the coefficient gradient.
    double fd_step = 1e-7;
};

/// Basis matrix for curve components vanishing at both endpoints:
/// column j-2 samples T_j(2s-1) - T_{j mod 2}(2s-1), j = 2..D, at the
/// grid nodes.
Mat dirichlet_basis(int degree, const NodeGrid& grid);

/// Riemannian energy of the curve reconstructed from the flattened free
/// coefficients (row-major n x (D-1)).
double energy_of_coeffs(const GdProblem& problem, const Vec& free_coeffs);

/// Minimize the energy; throws MaxItersError if the gradient tolerance is
/// not met within the iteration budget. The energy_trace holds (iteration,
/// energy) for accepted iterates; residual is the final gradient max-norm.
SolveReport solve_gd(const GdProblem& problem);

}  // namespace geoheat
