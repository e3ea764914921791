#include "geoheat/manifold.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace geoheat {

MetricField::MetricField(int dim, Evaluator evaluator)
    : dim_(dim), evaluator_(std::move(evaluator)) {
    if (dim_ < 1) throw std::invalid_argument("MetricField: dim must be >= 1");
}

MetricField::MetricField(int dim, Evaluator evaluator, PartialsFn partials)
    : dim_(dim), evaluator_(std::move(evaluator)), partials_(std::move(partials)) {
    if (dim_ < 1) throw std::invalid_argument("MetricField: dim must be >= 1");
}

Mat MetricField::metric_at(const Point& p) const {
    if (p.size() != dim_) {
        throw std::invalid_argument("metric_at: point dimension mismatch");
    }
    if (!p.allFinite()) {
        throw NonFiniteError("metric_at: non-finite point coordinates");
    }
    Mat g = evaluator_(p);
    if (g.rows() != dim_ || g.cols() != dim_) {
        throw std::invalid_argument("metric_at: evaluator returned wrong shape");
    }
    g = 0.5 * (g + g.transpose()).eval();
    Eigen::LLT<Mat> llt(g);
    // A zero (or fp-dust) pivot slips through LLT on semidefinite input, so
    // also reject factorizations that are singular to working precision
    // (sphere poles, degenerate user metrics).
    const Vec pivots = llt.matrixLLT().diagonal();
    const double pmin = pivots.minCoeff();
    const double pmax = pivots.maxCoeff();
    if (llt.info() != Eigen::Success || !(pmin > 0.0) ||
        pmin * pmin <= 1e-14 * pmax * pmax) {
        std::ostringstream msg;
        msg << "metric is not SPD at point [" << p.transpose() << "]";
        throw NonSpdError(msg.str());
    }
    return g;
}

std::vector<Mat> MetricField::metric_partials(const Point& p) const {
    if (p.size() != dim_) {
        throw std::invalid_argument("metric_partials: point dimension mismatch");
    }
    if (partials_) {
        auto dg = partials_(p);
        for (auto& m : dg) m = 0.5 * (m + m.transpose()).eval();
        return dg;
    }
    // Central differences of the (symmetrized, SPD-checked) metric.
    std::vector<Mat> dg(dim_);
    const double h = fd_step_;
    for (int k = 0; k < dim_; ++k) {
        Point lo = p, hi = p;
        lo[k] -= h;
        hi[k] += h;
        dg[k] = (metric_at(hi) - metric_at(lo)) / (2.0 * h);
    }
    return dg;
}

std::vector<Mat> MetricField::christoffel(const Point& p) const {
    const int n = dim_;
    const Mat g = metric_at(p);
    const auto dg = metric_partials(p);
    Eigen::LLT<Mat> llt(g);

    std::vector<Mat> gamma(n, Mat::Zero(n, n));
    Vec rhs(n);
    for (int j = 0; j < n; ++j) {
        for (int k = j; k < n; ++k) {
            // Gamma^i_jk = 1/2 (G^-1)_im (dg_mj/dx_k + dg_mk/dx_j - dg_jk/dx_m)
            for (int m = 0; m < n; ++m) {
                rhs[m] = 0.5 * (dg[k](m, j) + dg[j](m, k) - dg[m](j, k));
            }
            const Vec col = llt.solve(rhs);
            for (int i = 0; i < n; ++i) {
                gamma[i](j, k) = col[i];
                gamma[i](k, j) = col[i];
            }
        }
    }
    return gamma;
}

double MetricField::inner(const Point& p, const Vec& u, const Vec& w) const {
    if (u.size() != dim_ || w.size() != dim_) {
        throw std::invalid_argument("inner: tangent vector dimension mismatch");
    }
    return u.dot(metric_at(p) * w);
}

double curve_energy(const MetricField& field, const Mat& X, const Collocation& colloc) {
    if (X.cols() != colloc.grid.size()) {
        throw std::invalid_argument("curve_energy: curve/grid size mismatch");
    }
    const Mat Xd = X * colloc.d1.transpose();
    double e = 0.0;
    for (int k = 0; k < colloc.grid.size(); ++k) {
        try {
            e += colloc.weights[k] * field.inner(X.col(k), Xd.col(k), Xd.col(k));
        } catch (const NonSpdError& err) {
            throw NonSpdError(err.what(), k);
        }
    }
    return 0.5 * e;
}

double curve_length(const MetricField& field, const Mat& X, const Collocation& colloc) {
    if (X.cols() != colloc.grid.size()) {
        throw std::invalid_argument("curve_length: curve/grid size mismatch");
    }
    const Mat Xd = X * colloc.d1.transpose();
    double len = 0.0;
    for (int k = 0; k < colloc.grid.size(); ++k) {
        try {
            const double sq = field.inner(X.col(k), Xd.col(k), Xd.col(k));
            len += colloc.weights[k] * std::sqrt(std::max(sq, 0.0));
        } catch (const NonSpdError& err) {
            throw NonSpdError(err.what(), k);
        }
    }
    return len;
}

MetricField euclidean(int n) {
    return MetricField(
        n, [n](const Point&) { return Mat::Identity(n, n); },
        [n](const Point&) { return std::vector<Mat>(n, Mat::Zero(n, n)); });
}

MetricField sphere(double radius) {
    if (radius <= 0.0) throw std::invalid_argument("sphere: radius must be positive");
    const double r2 = radius * radius;
    auto eval = [r2](const Point& p) {
        const double st = std::sin(p[0]);
        Mat g = Mat::Zero(2, 2);
        g(0, 0) = r2;
        g(1, 1) = r2 * st * st;
        return g;
    };
    auto partials = [r2](const Point& p) {
        std::vector<Mat> dg(2, Mat::Zero(2, 2));
        dg[0](1, 1) = 2.0 * r2 * std::sin(p[0]) * std::cos(p[0]);
        return dg;
    };
    return MetricField(2, eval, partials);
}

MetricField torus(double a, double b) {
    if (!(a > b && b > 0.0)) {
        throw std::invalid_argument("torus: requires a > b > 0");
    }
    auto eval = [a, b](const Point& p) {
        const double ring = a + b * std::cos(p[1]);
        Mat g = Mat::Zero(2, 2);
        g(0, 0) = ring * ring;
        g(1, 1) = b * b;
        return g;
    };
    auto partials = [a, b](const Point& p) {
        std::vector<Mat> dg(2, Mat::Zero(2, 2));
        dg[1](0, 0) = -2.0 * (a + b * std::cos(p[1])) * b * std::sin(p[1]);
        return dg;
    };
    return MetricField(2, eval, partials);
}

MetricField graph_surface(std::function<double(double, double)> f,
                          std::function<Eigen::Vector2d(double, double)> grad_f) {
    (void)f;  // the induced metric needs only the gradient
    auto eval = [grad_f = std::move(grad_f)](const Point& p) {
        const Eigen::Vector2d df = grad_f(p[0], p[1]);
        Mat g(2, 2);
        g(0, 0) = 1.0 + df[0] * df[0];
        g(0, 1) = df[0] * df[1];
        g(1, 0) = g(0, 1);
        g(1, 1) = 1.0 + df[1] * df[1];
        return g;
    };
    return MetricField(2, eval);
}

MetricField eggbox() {
    // f(x, y) = x^2 - y^2 + 2 sin(5x) cos(5y)
    auto grad = [](double x, double y) {
        return Eigen::Vector2d(2.0 * x + 10.0 * std::cos(5.0 * x) * std::cos(5.0 * y),
                               -2.0 * y - 10.0 * std::sin(5.0 * x) * std::sin(5.0 * y));
    };
    auto eval = [grad](const Point& p) {
        const Eigen::Vector2d df = grad(p[0], p[1]);
        Mat g(2, 2);
        g(0, 0) = 1.0 + df[0] * df[0];
        g(0, 1) = df[0] * df[1];
        g(1, 0) = g(0, 1);
        g(1, 1) = 1.0 + df[1] * df[1];
        return g;
    };
    auto partials = [grad](const Point& p) {
        const double x = p[0], y = p[1];
        const Eigen::Vector2d df = grad(x, y);
        const double fxx = 2.0 - 50.0 * std::sin(5.0 * x) * std::cos(5.0 * y);
        const double fxy = -50.0 * std::cos(5.0 * x) * std::sin(5.0 * y);
        const double fyy = -2.0 - 50.0 * std::sin(5.0 * x) * std::cos(5.0 * y);
        // G = I + grad f grad f^T, so dG/dx_k = h_k df^T + df h_k^T with
        // h_k the k-th Hessian column.
        const Eigen::Vector2d hx(fxx, fxy), hy(fxy, fyy);
        std::vector<Mat> dg(2);
        dg[0] = hx * df.transpose() + df * hx.transpose();
        dg[1] = hy * df.transpose() + df * hy.transpose();
        return dg;
    };
    return MetricField(2, eval, partials);
}

}  // namespace geoheat
