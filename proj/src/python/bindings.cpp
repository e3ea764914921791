#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "geoheat/analysis.hpp"
#include "geoheat/baseline.hpp"
#include "geoheat/heatflow.hpp"

namespace py = pybind11;
using namespace geoheat;

namespace {

Integrator parse_integrator(const std::string& name) {
    if (name == "rk45") return Integrator::Rk45Adaptive;
    if (name == "rk4") return Integrator::Rk4Fixed;
    throw std::invalid_argument("integrator must be \"rk45\" or \"rk4\"");
}

}  // namespace

PYBIND11_MODULE(_geoheat, m) {
    m.doc() = "Geodesics on Riemannian manifolds via the geometric heat flow";

    py::register_exception<NonSpdError>(m, "NonSpdError");
    py::register_exception<DivergedError>(m, "DivergedError");
    py::register_exception<NonFiniteError>(m, "NonFiniteError");
    py::register_exception<MaxItersError>(m, "MaxItersError");

    py::class_<MetricField>(m, "MetricField")
        .def(py::init<int, MetricField::Evaluator>(), py::arg("dim"),
             py::arg("evaluator"))
        .def(py::init<int, MetricField::Evaluator, MetricField::PartialsFn>(),
             py::arg("dim"), py::arg("evaluator"), py::arg("partials"))
        .def_property_readonly("dim", &MetricField::dim)
        .def("metric_at", &MetricField::metric_at, py::arg("point"))
        .def("metric_partials", &MetricField::metric_partials, py::arg("point"))
        .def("christoffel", &MetricField::christoffel, py::arg("point"))
        .def("inner", &MetricField::inner, py::arg("point"), py::arg("u"),
             py::arg("w"));

    m.def("euclidean", &euclidean, py::arg("dim"));
    m.def("sphere", &sphere, py::arg("radius") = 1.0);
    m.def("torus", &torus, py::arg("major_radius"), py::arg("minor_radius"));
    m.def("eggbox", &eggbox);
    m.def("graph_surface", &graph_surface, py::arg("f"), py::arg("grad_f"));

    py::class_<NodeGrid>(m, "NodeGrid")
        .def(py::init<int>(), py::arg("degree"))
        .def_readonly("degree", &NodeGrid::degree)
        .def_readonly("nodes", &NodeGrid::nodes)
        .def("__len__", &NodeGrid::size);

    py::class_<ChebyshevSeries>(m, "ChebyshevSeries")
        .def_readonly("coeffs", &ChebyshevSeries::coeffs)
        .def_property_readonly("dim", &ChebyshevSeries::dim)
        .def_property_readonly("degree", &ChebyshevSeries::degree)
        .def("__call__", &ChebyshevSeries::eval, py::arg("s"));

    py::class_<SolveReport>(m, "SolveReport")
        .def_readonly("geodesic", &SolveReport::geodesic)
        .def_readonly("length", &SolveReport::length)
        .def_readonly("energy", &SolveReport::energy)
        .def_readonly("energy_trace", &SolveReport::energy_trace)
        .def_readonly("iterations", &SolveReport::iterations)
        .def_readonly("wall_time_ms", &SolveReport::wall_time_ms)
        .def_readonly("residual", &SolveReport::residual);

    m.def(
        "solve",
        [](const MetricField& manifold, const Point& start, const Point& end,
           int degree, double alpha, const std::vector<Point>& waypoints,
           const std::optional<Mat>& initial_values, double tol_converge,
           double dtau, const std::string& integrator, double abs_tol,
           double max_tau) {
            HeatFlowProblem prob{manifold, start, end};
            prob.degree = degree;
            prob.alpha = alpha;
            prob.waypoints = waypoints;
            prob.initial_values = initial_values;
            prob.tol_converge = tol_converge;
            prob.dtau = dtau;
            prob.integrator = parse_integrator(integrator);
            prob.abs_tol = abs_tol;
            prob.max_tau = max_tau;
            return solve(prob);
        },
        py::arg("manifold"), py::arg("start"), py::arg("end"),
        py::arg("degree") = 7, py::arg("alpha") = 4.0,
        py::arg("waypoints") = std::vector<Point>{},
        py::arg("initial_values") = std::nullopt,
        py::arg("tol_converge") = 1e-6, py::arg("dtau") = 1e-3,
        py::arg("integrator") = "rk45", py::arg("abs_tol") = 1e-8,
        py::arg("max_tau") = -1.0,
        "Integrate the geometric heat flow from the straight chart line (or "
        "waypoint polyline) until it converges to a geodesic.");

    m.def(
        "solve_gd",
        [](const MetricField& manifold, const Point& start, const Point& end,
           int degree, int quad_nodes, double tol_grad, long max_iters) {
            GdProblem prob{manifold, start, end};
            prob.degree = degree;
            prob.quad_nodes = quad_nodes > 0 ? quad_nodes : degree + 4;
            prob.tol_grad = tol_grad;
            prob.max_iters = max_iters;
            return solve_gd(prob);
        },
        py::arg("manifold"), py::arg("start"), py::arg("end"),
        py::arg("degree") = 7, py::arg("quad_nodes") = 0,
        py::arg("tol_grad") = 1e-4, py::arg("max_iters") = 50000,
        "Gradient-descent energy minimization over Chebyshev coefficients.");

    m.def("initial_curve", &initial_curve, py::arg("start"), py::arg("end"),
          py::arg("grid"), py::arg("waypoints") = std::vector<Point>{});
    m.def("geodesic_residual", &geodesic_residual, py::arg("manifold"),
          py::arg("series"), py::arg("grid"));
    m.def("speed_profile", &speed_profile, py::arg("manifold"), py::arg("series"),
          py::arg("grid"));
    m.def(
        "curve_energy",
        [](const MetricField& field, const Mat& X, int degree) {
            return curve_energy(field, X, Collocation(degree));
        },
        py::arg("manifold"), py::arg("values"), py::arg("degree"));
    m.def(
        "curve_length",
        [](const MetricField& field, const Mat& X, int degree) {
            return curve_length(field, X, Collocation(degree));
        },
        py::arg("manifold"), py::arg("values"), py::arg("degree"));

    py::class_<DecayFit>(m, "DecayFit")
        .def_readonly("ok", &DecayFit::ok)
        .def_readonly("rate", &DecayFit::rate)
        .def_readonly("intercept", &DecayFit::intercept)
        .def_readonly("r_squared", &DecayFit::r_squared)
        .def_readonly("samples", &DecayFit::samples);
    m.def("fit_decay_rate", &fit_decay_rate, py::arg("energy_trace"),
          py::arg("min_samples") = 10);
}
