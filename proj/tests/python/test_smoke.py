"""Smoke tests for the python extension module."""

import math

import numpy as np
import pytest

try:
    import geoheat
except ImportError:
    import _geoheat as geoheat

PI = math.pi


def great_circle(a, b):
    return math.acos(
        math.cos(a[0]) * math.cos(b[0])
        + math.sin(a[0]) * math.sin(b[0]) * math.cos(b[1] - a[1])
    )


def test_builtin_metrics():
    g = geoheat.sphere(2.0).metric_at([PI / 2, 0.0])
    assert np.allclose(g, np.diag([4.0, 4.0]))
    g = geoheat.torus(5.0, 3.0).metric_at([0.3, 0.0])
    assert np.allclose(g, np.diag([64.0, 9.0]))
    assert geoheat.euclidean(3).dim == 3


def test_nonspd_raises():
    with pytest.raises(geoheat.NonSpdError):
        geoheat.sphere(1.0).metric_at([0.0, 0.5])


def test_christoffel_sphere():
    gamma = geoheat.sphere(1.0).christoffel([PI / 4, 0.0])
    # Gamma^theta_phiphi = -sin(theta) cos(theta) = -1/2 at theta = pi/4.
    assert gamma[0][1, 1] == pytest.approx(-0.5, abs=1e-10)


def test_solve_sphere_benchmark():
    start, end = [PI / 8, PI / 8], [3 * PI / 4, 2 * PI / 3]
    report = geoheat.solve(geoheat.sphere(1.0), start, end, degree=7, alpha=4.0)
    assert report.length == pytest.approx(2.33, abs=0.01)
    assert report.length == pytest.approx(great_circle(start, end), abs=1e-3)
    energies = [e for _, e in report.energy_trace]
    assert energies == sorted(energies, reverse=True) or all(
        b - a <= 1e-9 * energies[0] for a, b in zip(energies, energies[1:])
    )
    curve = report.geodesic
    assert np.allclose(curve(0.0), start, atol=1e-10)
    assert np.allclose(curve(1.0), end, atol=1e-10)


def test_solve_gd_matches_pde():
    start, end = [PI / 8, PI / 8], [3 * PI / 4, 2 * PI / 3]
    pde = geoheat.solve(geoheat.sphere(1.0), start, end, degree=7)
    gd = geoheat.solve_gd(geoheat.sphere(1.0), start, end, degree=7, quad_nodes=11)
    assert abs(pde.length - gd.length) / pde.length <= 1e-3


def test_callable_metric():
    # Flat metric supplied from python; straight line is the geodesic.
    field = geoheat.MetricField(2, lambda p: np.eye(2))
    report = geoheat.solve(field, [0.0, 0.0], [1.0, 1.0], degree=6)
    assert report.length == pytest.approx(math.sqrt(2.0), abs=1e-8)


def test_grid_and_residual():
    grid = geoheat.NodeGrid(7)
    assert len(grid) == 8
    assert grid.nodes[0] == 0.0 and grid.nodes[7] == 1.0
    report = geoheat.solve(
        geoheat.sphere(1.0), [PI / 8, PI / 8], [3 * PI / 4, 2 * PI / 3]
    )
    assert geoheat.geodesic_residual(geoheat.sphere(1.0), report.geodesic, grid) <= 1e-5
    speed = geoheat.speed_profile(geoheat.sphere(1.0), report.geodesic, grid)
    assert min(speed) > 0


def test_decay_fit():
    trace = [(0.01 * i, 5.0 + math.exp(-3.0 * 0.01 * i)) for i in range(400)]
    fit = geoheat.fit_decay_rate(trace)
    assert fit.ok
    assert fit.rate == pytest.approx(3.0, rel=1e-3)
