#pragma once

#include <Eigen/Dense>

namespace geoheat {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Chebyshev-Gauss-Lobatto nodes s_k = (1 - cos(k pi / D)) / 2 on [0, 1],
/// ascending, with s_0 = 0 and s_D = 1.
struct NodeGrid {
    int degree;
    Vec nodes;

    explicit NodeGrid(int degree_);

    int size() const { return degree + 1; }
};

/// First-order spectral differentiation matrix on the CGL grid. Maps node
/// values of a polynomial of degree <= D to node values of its derivative,
/// exactly up to roundoff.
Mat diff_matrix(const NodeGrid& grid);

/// Second-order differentiation matrix, formed as the square of the
/// first-order one.
Mat second_diff(const NodeGrid& grid);

/// Clenshaw-Curtis quadrature weights for the grid, scaled to [0, 1].
/// Exact for polynomials of degree <= D.
Vec quadrature_weights(const NodeGrid& grid);

/// Chebyshev-basis representation of a curve: row i holds the coefficients
/// c_ij of coordinate x_i(s) = sum_j c_ij T_j(2s - 1).
struct ChebyshevSeries {
    Mat coeffs;  // n x (D+1)

    int dim() const { return static_cast<int>(coeffs.rows()); }
    int degree() const { return static_cast<int>(coeffs.cols()) - 1; }

    /// Evaluate all coordinates at s in [0, 1] via Clenshaw recurrence.
    Vec eval(double s) const;
};

/// Vandermonde matrix V[k][j] = T_j(2 s_k - 1) on the grid nodes.
Mat vandermonde(const NodeGrid& grid);

/// Solve V c = values row-wise. `values` is n x (D+1), node-major columns.
ChebyshevSeries nodes_to_coeffs(const Mat& values, const NodeGrid& grid);

/// Evaluate the series at the grid nodes (values = coeffs * V^T).
Mat coeffs_to_nodes(const ChebyshevSeries& series, const NodeGrid& grid);

/// Grid plus the derived operators the solvers need, built once per degree.
struct Collocation {
    NodeGrid grid;
    Mat d1;
    Mat d2;
    Vec weights;

    explicit Collocation(int degree)
        : grid(degree),
          d1(diff_matrix(grid)),
          d2(second_diff(grid)),
          weights(quadrature_weights(grid)) {}
};

}  // namespace geoheat
