#include "geoheat/chebyshev.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace geoheat {

namespace {
constexpr double kPi = std::numbers::pi;
}

NodeGrid::NodeGrid(int degree_) : degree(degree_), nodes(degree_ + 1) {
    if (degree < 1) {
        throw std::invalid_argument("NodeGrid: degree must be >= 1");
    }
    for (int k = 0; k <= degree; ++k) {
        nodes[k] = 0.5 * (1.0 - std::cos(kPi * k / degree));
    }
    // Pin the exact endpoint values regardless of cos roundoff.
    nodes[0] = 0.0;
    nodes[degree] = 1.0;
}

Mat diff_matrix(const NodeGrid& grid) {
    const int n = grid.degree;
    // Standard CGL matrix on z in [-1, 1] with z_k = -cos(k pi / n),
    // then chain rule d/ds = 2 d/dz for s = (z + 1) / 2.
    Vec z(n + 1);
    for (int k = 0; k <= n; ++k) {
        z[k] = -std::cos(kPi * k / n);
    }
    Mat d = Mat::Zero(n + 1, n + 1);
    auto c = [n](int i) { return (i == 0 || i == n) ? 2.0 : 1.0; };
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            if (i == j) continue;
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            d(i, j) = (c(i) / c(j)) * sign / (z[i] - z[j]);
        }
    }
    // Negative-sum trick for the diagonal: rows must annihilate constants.
    for (int i = 0; i <= n; ++i) {
        d(i, i) = -d.row(i).sum();
    }
    return 2.0 * d;
}

Mat second_diff(const NodeGrid& grid) {
    const Mat d = diff_matrix(grid);
    return d * d;
}

Vec quadrature_weights(const NodeGrid& grid) {
    const int n = grid.degree;
    // Clenshaw-Curtis on [-1, 1] (Trefethen, clencurt), halved for [0, 1].
    Vec w = Vec::Zero(n + 1);
    if (n == 1) {
        w[0] = w[1] = 0.5;
        return w;
    }
    const double end = (n % 2 == 0) ? 1.0 / (n * n - 1.0) : 1.0 / (n * n);
    w[0] = end;
    w[n] = end;
    for (int i = 1; i < n; ++i) {
        const double theta = kPi * i / n;
        double v = 1.0;
        for (int k = 1; k <= (n - 1) / 2; ++k) {
            v -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
        }
        if (n % 2 == 0) {
            v -= std::cos(n * theta) / (n * n - 1.0);
        }
        w[i] = 2.0 * v / n;
    }
    return 0.5 * w;
}

Vec ChebyshevSeries::eval(double s) const {
    const double z = 2.0 * s - 1.0;
    const int d = degree();
    Vec out(dim());
    for (int i = 0; i < dim(); ++i) {
        // Clenshaw recurrence.
        double b1 = 0.0, b2 = 0.0;
        for (int j = d; j >= 1; --j) {
            const double b = 2.0 * z * b1 - b2 + coeffs(i, j);
            b2 = b1;
            b1 = b;
        }
        out[i] = z * b1 - b2 + coeffs(i, 0);
    }
    return out;
}

Mat vandermonde(const NodeGrid& grid) {
    const int n = grid.degree;
    Mat v(n + 1, n + 1);
    for (int k = 0; k <= n; ++k) {
        const double z = 2.0 * grid.nodes[k] - 1.0;
        v(k, 0) = 1.0;
        if (n >= 1) v(k, 1) = z;
        for (int j = 2; j <= n; ++j) {
            v(k, j) = 2.0 * z * v(k, j - 1) - v(k, j - 2);
        }
    }
    return v;
}

ChebyshevSeries nodes_to_coeffs(const Mat& values, const NodeGrid& grid) {
    if (values.cols() != grid.size()) {
        throw std::invalid_argument("nodes_to_coeffs: value/grid size mismatch");
    }
    const Mat v = vandermonde(grid);
    Eigen::ColPivHouseholderQR<Mat> qr(v);
    ChebyshevSeries series;
    series.coeffs = qr.solve(values.transpose()).transpose();
    return series;
}

Mat coeffs_to_nodes(const ChebyshevSeries& series, const NodeGrid& grid) {
    if (series.degree() != grid.degree) {
        throw std::invalid_argument("coeffs_to_nodes: series/grid degree mismatch");
    }
    return series.coeffs * vandermonde(grid).transpose();
}

}  // namespace geoheat
