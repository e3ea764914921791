#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "geoheat/chebyshev.hpp"
#include "geoheat/manifold.hpp"

namespace geoheat {

enum class Integrator { Rk4Fixed, Rk45Adaptive };

/// Point-to-point geodesic problem solved by flowing an initial curve
/// through d(tau) c = alpha D/ds d(s) c until it stops moving.
struct HeatFlowProblem {
    MetricField manifold;
    Point start;
    Point end;
    int degree = 7;
    double alpha = 4.0;

    /// Interior waypoints select the homotopy class; default is the straight
    /// chart line start -> end.
    std::vector<Point> waypoints;
    /// Full initial node values (n x (D+1)); overrides waypoints when set.
    /// Boundary columns are forced to start/end.
    std::optional<Mat> initial_values;

    /// Converged when max node change per unit tau drops below this.
    double tol_converge = 1e-6;
    /// Initial (rk45) or fixed (rk4) step size.
    double dtau = 1e-3;
    Integrator integrator = Integrator::Rk45Adaptive;
    /// Per-step absolute error tolerance for the adaptive integrator.
    double abs_tol = 1e-8;
    /// Divergence guard; <= 0 means the default 100 / alpha.
    double max_tau = -1.0;
    long max_steps = 20'000'000;
};

/// Node values of the curve at flow time tau.
struct FlowState {
    Mat values;  // n x (D+1)
    double tau = 0.0;
};

struct SolveReport {
    ChebyshevSeries geodesic;
    double length = 0.0;
    double energy = 0.0;
    std::vector<std::pair<double, double>> energy_trace;  // (tau, E)
    long iterations = 0;
    double wall_time_ms = 0.0;
    double residual = 0.0;
};

/// Initial node values: straight chart line start -> end, or the piecewise
/// linear curve through the waypoints, sampled at the CGL nodes.
Mat initial_curve(const Point& start, const Point& end, const NodeGrid& grid,
                  const std::vector<Point>& waypoints = {});

/// Right-hand side of the coordinate heat flow at every node:
/// alpha * (d2 x_i + Gamma^i_jk (d1 x_j)(d1 x_k)), boundary columns zeroed.
/// Throws NonSpdError tagged with the offending node and tau.
Mat heat_flow_rhs(const MetricField& field, const Collocation& colloc,
                  const Mat& X, double alpha, double tau = 0.0);

/// Integrate the flow to convergence and project the result onto the
/// Chebyshev basis. Throws DivergedError, NonSpdError, or NonFiniteError.
SolveReport solve(const HeatFlowProblem& problem);

/// Max interior-node norm of the flow right-hand side divided by alpha;
/// zero for an exact geodesic.
double geodesic_residual(const MetricField& field, const ChebyshevSeries& series,
                         const NodeGrid& grid);

/// Squared speed <c', c'>_g at every node; constant for a geodesic.
Vec speed_profile(const MetricField& field, const ChebyshevSeries& series,
                  const NodeGrid& grid);

}  // namespace geoheat
