#include "geoheat/heatflow.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace geoheat {

Mat initial_curve(const Point& start, const Point& end, const NodeGrid& grid,
                  const std::vector<Point>& waypoints) {
    const int n = static_cast<int>(start.size());
    if (end.size() != n) {
        throw std::invalid_argument("initial_curve: endpoint dimension mismatch");
    }
    Mat X(n, grid.size());
    if (waypoints.empty()) {
        // start + s*(end - start) rather than the symmetric blend so that
        // coincident endpoints give a bit-exact constant curve.
        for (int k = 0; k < grid.size(); ++k) {
            X.col(k) = start + grid.nodes[k] * (end - start);
        }
    } else {
        // Piecewise linear through start, waypoints, end with uniform
        // parameter spacing, sampled at the nodes.
        std::vector<Point> pts;
        pts.push_back(start);
        for (const auto& w : waypoints) {
            if (w.size() != n) {
                throw std::invalid_argument("initial_curve: waypoint dimension mismatch");
            }
            pts.push_back(w);
        }
        pts.push_back(end);
        const int segs = static_cast<int>(pts.size()) - 1;
        for (int k = 0; k < grid.size(); ++k) {
            const double t = grid.nodes[k] * segs;
            const int seg = std::min(static_cast<int>(t), segs - 1);
            const double frac = t - seg;
            X.col(k) = pts[seg] + frac * (pts[seg + 1] - pts[seg]);
        }
    }
    X.col(0) = start;
    X.col(grid.size() - 1) = end;
    return X;
}

Mat heat_flow_rhs(const MetricField& field, const Collocation& colloc,
                  const Mat& X, double alpha, double tau) {
    const int last = colloc.grid.size() - 1;
    const int n = static_cast<int>(X.rows());
    const Mat Xd = X * colloc.d1.transpose();
    const Mat Xdd = X * colloc.d2.transpose();
    Mat rhs = Mat::Zero(n, colloc.grid.size());
    for (int k = 1; k < last; ++k) {
        std::vector<Mat> gamma;
        try {
            gamma = field.christoffel(X.col(k));
        } catch (const NonSpdError&) {
            std::ostringstream msg;
            msg << "curve left the chart: metric not SPD at node " << k
                << " (tau = " << tau << ")";
            throw NonSpdError(msg.str(), k, tau);
        }
        const Vec v = Xd.col(k);
        for (int i = 0; i < n; ++i) {
            rhs(i, k) = alpha * (Xdd(i, k) + v.dot(gamma[i] * v));
        }
    }
    return rhs;
}

namespace {

struct StepResult {
    Mat next;
    double error;  // max-abs embedded error estimate (rk45 only)
};

StepResult rk4_step(const MetricField& field, const Collocation& colloc,
                    const Mat& X, const Mat& k1, double alpha, double tau, double dt) {
    const Mat k2 = heat_flow_rhs(field, colloc, X + 0.5 * dt * k1, alpha, tau + 0.5 * dt);
    const Mat k3 = heat_flow_rhs(field, colloc, X + 0.5 * dt * k2, alpha, tau + 0.5 * dt);
    const Mat k4 = heat_flow_rhs(field, colloc, X + dt * k3, alpha, tau + dt);
    return {X + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), 0.0};
}

// Dormand-Prince 5(4) embedded pair; k1 is the already-evaluated rhs at X.
StepResult rk45_step(const MetricField& field, const Collocation& colloc,
                     const Mat& X, const Mat& k1, double alpha, double tau, double dt) {
    const Mat k2 = heat_flow_rhs(field, colloc, X + dt * (1.0 / 5.0) * k1, alpha,
                                 tau + dt / 5.0);
    const Mat k3 = heat_flow_rhs(
        field, colloc, X + dt * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2), alpha,
        tau + 3.0 / 10.0 * dt);
    const Mat k4 = heat_flow_rhs(
        field, colloc,
        X + dt * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3), alpha,
        tau + 4.0 / 5.0 * dt);
    const Mat k5 = heat_flow_rhs(
        field, colloc,
        X + dt * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 +
                  64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4),
        alpha, tau + 8.0 / 9.0 * dt);
    const Mat k6 = heat_flow_rhs(
        field, colloc,
        X + dt * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 +
                  46732.0 / 5247.0 * k3 + 49.0 / 176.0 * k4 -
                  5103.0 / 18656.0 * k5),
        alpha, tau + dt);
    const Mat y5 = X + dt * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 +
                             125.0 / 192.0 * k4 - 2187.0 / 6784.0 * k5 +
                             11.0 / 84.0 * k6);
    const Mat k7 = heat_flow_rhs(field, colloc, y5, alpha, tau + dt);
    const Mat y4 = X + dt * (5179.0 / 57600.0 * k1 + 7571.0 / 16695.0 * k3 +
                             393.0 / 640.0 * k4 - 92097.0 / 339200.0 * k5 +
                             187.0 / 2100.0 * k6 + 1.0 / 40.0 * k7);
    return {y5, (y5 - y4).cwiseAbs().maxCoeff()};
}

}  // namespace

SolveReport solve(const HeatFlowProblem& problem) {
    const auto t0 = std::chrono::steady_clock::now();
    const Collocation colloc(problem.degree);
    const int last = colloc.grid.size() - 1;
    const double max_tau =
        problem.max_tau > 0.0 ? problem.max_tau : 100.0 / problem.alpha;

    Mat X;
    if (problem.initial_values) {
        X = *problem.initial_values;
        if (X.rows() != problem.start.size() || X.cols() != colloc.grid.size()) {
            throw std::invalid_argument("solve: initial_values has wrong shape");
        }
        X.col(0) = problem.start;
        X.col(last) = problem.end;
    } else {
        X = initial_curve(problem.start, problem.end, colloc.grid, problem.waypoints);
    }

    SolveReport report;
    double energy = curve_energy(problem.manifold, X, colloc);
    report.energy_trace.emplace_back(0.0, energy);

    // Constant initial curve (p = q, no perturbation): already a geodesic.
    const bool trivial =
        (X.colwise() - problem.start).cwiseAbs().maxCoeff() == 0.0;

    // Keep steps inside the explicit stability region of the dominant
    // diffusion term; past it the controller's accept/reject hysteresis
    // leaves an O(abs_tol) noise floor in the state and the residual never
    // reaches tol_converge. The interior block of alpha*D2 bounds the
    // stiffest eigenvalue.
    const double stiffness =
        problem.alpha *
        colloc.d2.block(1, 0, std::max(last - 1, 1), colloc.grid.size())
            .cwiseAbs().rowwise().sum().maxCoeff();
    const double dt_cap = 2.5 / stiffness;

    // The exact flow only dissipates energy; the semidiscrete one can drift
    // upward at a small rate set by the quadrature error of the energy. An
    // accepted step whose recorded energy rises past rounding slack is
    // therefore over-stepping that drift and gets retried smaller, keeping
    // the trace monotone. When the drift outruns the slack even at the dt
    // floor (badly under-resolved surfaces), a monotone trace is not
    // achievable and the guard switches off instead of crawling.
    const double energy_slack = 5e-10 * energy;
    const double dt_floor = 0.1 * dt_cap;
    bool energy_guard = true;
    int floor_bypasses = 0;

    double tau = 0.0;
    double dt = problem.integrator == Integrator::Rk4Fixed
                    ? problem.dtau
                    : std::min(problem.dtau, dt_cap);
    long steps = 0;
    double final_rate = 0.0;

    while (!trivial) {
        // Convergence test on the flow velocity (the dtau -> 0 limit of the
        // node change per unit tau); the evaluation doubles as RK stage 1.
        const Mat k1 = heat_flow_rhs(problem.manifold, colloc, X, problem.alpha, tau);
        final_rate = k1.cwiseAbs().maxCoeff();
        if (final_rate < problem.tol_converge) break;

        if (tau > max_tau) {
            std::ostringstream msg;
            msg << "heat flow did not converge before max_tau = " << max_tau;
            throw DivergedError(msg.str());
        }
        if (steps >= problem.max_steps) {
            throw DivergedError("heat flow exceeded the step budget");
        }

        StepResult step{};
        double step_energy = 0.0;
        if (problem.integrator == Integrator::Rk4Fixed) {
            step = rk4_step(problem.manifold, colloc, X, k1, problem.alpha, tau, dt);
            tau += dt;
            step.next.col(0) = problem.start;
            step.next.col(last) = problem.end;
            step_energy = curve_energy(problem.manifold, step.next, colloc);
        } else {
            bool accepted = false;
            while (!accepted) {
                step = rk45_step(problem.manifold, colloc, X, k1, problem.alpha, tau, dt);
                accepted = step.error <= problem.abs_tol;
                double scale = 0.2;
                if (step.error == 0.0) {
                    scale = 5.0;
                } else if (std::isfinite(step.error)) {
                    scale = std::clamp(
                        0.9 * std::pow(problem.abs_tol / step.error, 0.2), 0.2, 5.0);
                }
                if (accepted) {
                    step.next.col(0) = problem.start;
                    step.next.col(last) = problem.end;
                    step_energy = curve_energy(problem.manifold, step.next, colloc);
                    if (energy_guard && step_energy > energy + energy_slack) {
                        if (dt > dt_floor) {
                            accepted = false;
                            scale = 0.5;
                        } else if (++floor_bypasses >= 50) {
                            energy_guard = false;
                        }
                    }
                }
                if (!accepted) {
                    dt *= scale;
                    if (++steps >= problem.max_steps) {
                        throw DivergedError("heat flow exceeded the step budget");
                    }
                } else {
                    // Carry the controller's suggestion into the next step.
                    tau += dt;
                    dt = std::min(dt * scale, dt_cap);
                }
            }
        }
        if (!step.next.allFinite()) {
            std::ostringstream msg;
            msg << "non-finite state at tau = " << tau
                << " (try a smaller step or the adaptive integrator)";
            throw NonFiniteError(msg.str());
        }

        X = step.next;
        energy = step_energy;
        ++steps;
        report.energy_trace.emplace_back(tau, energy);
    }

    report.iterations = steps;
    report.geodesic = nodes_to_coeffs(X, colloc.grid);
    // A constant curve has zero length; computing it would only pick up
    // rounding dust from the differentiation-matrix row sums.
    report.length = trivial ? 0.0 : curve_length(problem.manifold, X, colloc);
    report.energy = report.energy_trace.back().second;
    report.residual =
        trivial ? 0.0
                : heat_flow_rhs(problem.manifold, colloc, X, 1.0, tau)
                      .colwise().norm().maxCoeff();
    report.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    return report;
}

double geodesic_residual(const MetricField& field, const ChebyshevSeries& series,
                         const NodeGrid& grid) {
    const Collocation colloc(grid.degree);
    const Mat X = coeffs_to_nodes(series, grid);
    return heat_flow_rhs(field, colloc, X, 1.0).colwise().norm().maxCoeff();
}

Vec speed_profile(const MetricField& field, const ChebyshevSeries& series,
                  const NodeGrid& grid) {
    const Collocation colloc(grid.degree);
    const Mat X = coeffs_to_nodes(series, grid);
    const Mat Xd = X * colloc.d1.transpose();
    Vec speed(grid.size());
    for (int k = 0; k < grid.size(); ++k) {
        speed[k] = field.inner(X.col(k), Xd.col(k), Xd.col(k));
    }
    return speed;
}

}  // namespace geoheat
