#include "geoheat/baseline.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace geoheat {

Mat dirichlet_basis(int degree, const NodeGrid& grid) {
    if (degree < 2) {
        return Mat::Zero(grid.size(), 0);
    }
    const int n_free = degree - 1;
    Mat basis(grid.size(), n_free);
    for (int k = 0; k < grid.size(); ++k) {
        const double z = 2.0 * grid.nodes[k] - 1.0;
        // T_j by recurrence; subtract T_0 (j even) or T_1 (j odd) so every
        // column vanishes at s = 0 and s = 1.
        double tm2 = 1.0, tm1 = z;
        for (int j = 2; j <= degree; ++j) {
            const double t = 2.0 * z * tm1 - tm2;
            basis(k, j - 2) = t - (j % 2 == 0 ? 1.0 : z);
            tm2 = tm1;
            tm1 = t;
        }
    }
    return basis;
}

namespace {

struct GdWorkspace {
    Collocation colloc;
    Mat affine;  // n x N
    Mat basis;   // N x (D-1)

    GdWorkspace(const GdProblem& problem)
        : colloc(problem.quad_nodes - 1),
          affine(problem.start.size(), problem.quad_nodes),
          basis(dirichlet_basis(problem.degree, colloc.grid)) {
        for (int k = 0; k < colloc.grid.size(); ++k) {
            const double s = colloc.grid.nodes[k];
            affine.col(k) = (1.0 - s) * problem.start + s * problem.end;
        }
    }

    Mat curve(const GdProblem& problem, const Vec& free_coeffs) const {
        const int n = static_cast<int>(problem.start.size());
        const int n_free = problem.degree - 1;
        Eigen::Map<const Mat> a(free_coeffs.data(), n_free, n);
        return affine + (basis * a).transpose();
    }
};

void validate(const GdProblem& problem) {
    if (problem.degree < 1) {
        throw std::invalid_argument("solve_gd: degree must be >= 1");
    }
    if (problem.quad_nodes < problem.degree + 1) {
        throw std::invalid_argument("solve_gd: quad_nodes must be >= degree + 1");
    }
    if (problem.start.size() != problem.manifold.dim() ||
        problem.end.size() != problem.manifold.dim()) {
        throw std::invalid_argument("solve_gd: endpoint dimension mismatch");
    }
}

}  // namespace

double energy_of_coeffs(const GdProblem& problem, const Vec& free_coeffs) {
    validate(problem);
    const GdWorkspace ws(problem);
    return curve_energy(problem.manifold, ws.curve(problem, free_coeffs), ws.colloc);
}

SolveReport solve_gd(const GdProblem& problem) {
    validate(problem);
    const auto t0 = std::chrono::steady_clock::now();
    const GdWorkspace ws(problem);
    const int n = static_cast<int>(problem.start.size());
    const int n_coeffs = n * (problem.degree - 1);

    auto energy = [&](const Vec& a) {
        return curve_energy(problem.manifold, ws.curve(problem, a), ws.colloc);
    };

    Vec a = Vec::Zero(n_coeffs);
    double e = energy(a);
    SolveReport report;
    report.energy_trace.emplace_back(0.0, e);

    Vec grad(n_coeffs);
    double step = 1.0;
    long iter = 0;
    double grad_norm = 0.0;
    for (;; ++iter) {
        // Central-difference gradient over the free coefficients.
        for (int i = 0; i < n_coeffs; ++i) {
            Vec lo = a, hi = a;
            lo[i] -= problem.fd_step;
            hi[i] += problem.fd_step;
            grad[i] = (energy(hi) - energy(lo)) / (2.0 * problem.fd_step);
        }
        grad_norm = n_coeffs > 0 ? grad.lpNorm<Eigen::Infinity>() : 0.0;
        if (grad_norm < problem.tol_grad) break;
        if (iter >= problem.max_iters) {
            std::ostringstream msg;
            msg << "gradient descent stalled: |grad| = " << grad_norm
                << " after " << iter << " iterations";
            throw MaxItersError(msg.str());
        }

        // Armijo backtracking, shrink 1/2.
        const double slope = grad.squaredNorm();
        double t = 2.0 * step;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            const double e_trial = energy(a - t * grad);
            if (e_trial <= e - 1e-4 * t * slope) {
                a -= t * grad;
                e = e_trial;
                step = t;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            // The finite-difference gradient is at its noise floor.
            break;
        }
        report.energy_trace.emplace_back(static_cast<double>(iter + 1), e);
    }

    // Assemble the full Chebyshev series: affine part plus Dirichlet basis.
    Mat coeffs = Mat::Zero(n, problem.degree + 1);
    coeffs.col(0) = 0.5 * (problem.start + problem.end);
    if (problem.degree >= 1) coeffs.col(1) = 0.5 * (problem.end - problem.start);
    Eigen::Map<const Mat> free_a(a.data(), problem.degree - 1, n);
    for (int j = 2; j <= problem.degree; ++j) {
        coeffs.col(j) += free_a.row(j - 2).transpose();
        coeffs.col(j % 2 == 0 ? 0 : 1) -= free_a.row(j - 2).transpose();
    }
    report.geodesic = ChebyshevSeries{coeffs};
    report.length = curve_length(problem.manifold, ws.curve(problem, a), ws.colloc);
    report.energy = e;
    report.iterations = iter;
    report.residual = grad_norm;
    report.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    return report;
}

}  // namespace geoheat
