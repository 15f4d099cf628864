#!/usr/bin/env python3
"""
Tests for RK4 marching, mesh construction and the path-independence check
"""

import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from src.integration.integrator import (
    BETA, GAMMA, build_mesh, march_line, path_independence_check, rk4_step, seed_state,
)
from src.surfaces.surface_def import evaluate, parse_surface
from src.utils.errors import SeedOutOfDomain, SeedUmbilic


def torus_reference(x0, K0, gamma_end):
    """(x, K) along a gamma line of torus(2,1) from a tightly converged solver"""
    def rhs(_, u):
        x, K = u
        return [K, -K * K * math.sin(x) / (2.0 + math.cos(x))]
    sol = solve_ivp(rhs, (0.0, gamma_end), [x0, K0], method="DOP853", rtol=1e-13, atol=1e-14)
    return sol.y[:, -1]


class TestRK4Step:
    """rk4_step() / march_line()"""

    def test_cylinder_gamma_step(self, cylinder):
        s = seed_state(cylinder, (0.0, 0.0), 1.0, 0)
        t = rk4_step(cylinder, s, GAMMA, 0.1)
        assert (t.x, t.y, t.K) == pytest.approx((0.1, 0.0, 1.0), abs=1e-14)
        assert t.f_int == pytest.approx(evaluate(cylinder, (0.1, 0.0)), abs=1e-14)

    def test_cylinder_beta_step(self, cylinder):
        s = seed_state(cylinder, (0.0, 0.0), 1.0, 0)
        t = rk4_step(cylinder, s, BETA, 0.1)
        assert (t.x, t.y, t.K) == pytest.approx((0.0, 0.05, 1.0), abs=1e-14)

    def test_zero_step(self, torus):
        s = seed_state(torus, (1.0, 1.0), 1.0, 0)
        assert rk4_step(torus, s, GAMMA, 0.0) is s

    def test_bad_direction(self, torus):
        s = seed_state(torus, (1.0, 1.0), 1.0, 0)
        with pytest.raises(ValueError):
            rk4_step(torus, s, "delta", 0.1)

    def test_hint_tracks_final_stage(self, torus):
        s = seed_state(torus, (1.0, 1.0), 1.0, 0)
        t = rk4_step(torus, s, GAMMA, 0.1)
        assert t.alpha_hint is not None
        assert t.alpha_hint.alpha == pytest.approx(0.0, abs=1e-12)

    def test_fourth_order_convergence(self, torus):
        x0, K0 = 0.5, 1.0
        errors = []
        for h in (0.1, 0.05, 0.025):
            states, error = march_line(torus, seed_state(torus, (x0, 1.0), K0, 0),
                                       GAMMA, h, int(round(1.0 / h)))
            assert error is None
            x_ref, K_ref = torus_reference(x0, K0, 1.0)
            end = states[-1]
            errors.append(max(abs(end.x - x_ref), abs(end.K - K_ref)))
        for coarse, fine in zip(errors, errors[1:]):
            assert 12.0 <= coarse / fine <= 20.0

    def test_march_stops_at_domain_edge(self, cylinder):
        states, error = march_line(cylinder, seed_state(cylinder, (4.5, 0.0), 1.0, 0),
                                   GAMMA, 0.1, 10)
        assert len(states) == 6
        assert error is not None
        assert states[-1].x == pytest.approx(5.0)


class TestBuildMesh:
    """build_mesh()"""

    def test_cylinder_closed_form(self, cylinder):
        mesh = build_mesh(cylinder, (0.0, 0.0), 1.0, 0, 0.1, 0.1, 11, 11)
        assert mesh.valid.all()
        i, j = np.meshgrid(np.arange(11), np.arange(11), indexing="ij")
        assert np.max(np.abs(mesh.x - 0.1 * j)) <= 1e-10
        assert np.max(np.abs(mesh.y - 0.05 * i)) <= 1e-10
        assert np.max(np.abs(mesh.K - 1.0)) <= 1e-12

    def test_torus_scaling_function(self, torus):
        mesh = build_mesh(torus, (0.0, 0.0), 1.0, 0, 0.01, 0.01, 21, 21)
        assert mesh.valid.all()
        expected = (2.0 + np.cos(mesh.x)) / 3.0
        assert np.max(np.abs(mesh.K - expected)) <= 1e-6

    def test_similarity_covariance(self, cylinder):
        a = build_mesh(cylinder, (0.2, 0.1), 2.0, 0, 0.05, 0.05, 6, 6)
        b = build_mesh(cylinder, (0.2, 0.1), 1.0, 0, 0.1, 0.1, 6, 6)
        assert np.max(np.abs(a.x - b.x)) <= 1e-9
        assert np.max(np.abs(a.y - b.y)) <= 1e-9
        assert np.allclose(a.f_pullback, b.f_pullback, atol=1e-9)

    def test_worker_count_does_not_change_mesh(self, torus):
        a = build_mesh(torus, (0.5, 1.0), 1.0, 0, 0.05, 0.05, 9, 9, workers=1)
        b = build_mesh(torus, (0.5, 1.0), 1.0, 0, 0.05, 0.05, 9, 9, workers=4)
        for name in ("x", "y", "K", "f_int", "f_pullback", "valid"):
            assert np.array_equal(getattr(a, name), getattr(b, name), equal_nan=True), name

    def test_small_steps_stay_near_seed(self, graph):
        mesh = build_mesh(graph, (0.5, 0.5), 1.0, 0, 1e-6, 1e-6, 2, 2)
        f0 = evaluate(graph, (0.5, 0.5))
        assert np.max(np.linalg.norm(mesh.f_pullback - f0, axis=-1)) <= 1e-5

    def test_truncated_columns(self, cylinder):
        mesh = build_mesh(cylinder, (4.5, 0.0), 1.0, 0, 0.1, 0.1, 11, 11)
        assert mesh.valid[:, :6].all()
        assert not mesh.valid[:, 6:].any()
        assert len(mesh.failures) == 11
        assert np.isnan(mesh.x[0, 6])

        stats = mesh.stats()
        assert stats.valid_count == 66
        assert stats.coverage == pytest.approx(66 / 121)
        assert stats.x_range == pytest.approx((4.5, 5.0))

    def test_integral_drift_shrinks(self, torus):
        drift = []
        for h, n in ((0.1, 6), (0.05, 11)):
            mesh = build_mesh(torus, (0.5, 1.0), 1.0, 0, h, h, n, n)
            drift.append(np.max(np.linalg.norm(mesh.f_pullback - mesh.f_int, axis=-1)))
        assert drift[1] < drift[0] / 8.0

    def test_negative_steps_march_backwards(self, cylinder):
        mesh = build_mesh(cylinder, (0.0, 0.0), 1.0, 0, -0.1, -0.1, 3, 3)
        assert mesh.x[0, 2] == pytest.approx(-0.2)
        assert mesh.y[2, 0] == pytest.approx(-0.1)

    def test_seed_errors(self, sphere, torus):
        with pytest.raises(SeedUmbilic):
            build_mesh(sphere, (0.1, 0.1), 1.0, 0, 0.1, 0.1, 3, 3)
        with pytest.raises(SeedOutOfDomain):
            build_mesh(torus, (-1.0, 0.0), 1.0, 0, 0.1, 0.1, 3, 3)
        with pytest.raises(ValueError):
            build_mesh(torus, (1.0, 1.0), 0.0, 0, 0.1, 0.1, 3, 3)
        with pytest.raises(ValueError):
            build_mesh(torus, (1.0, 1.0), 1.0, 0, 0.1, 0.1, 1, 3)

    def test_seed_honours_umbilic_tolerance(self):
        near_sphere = parse_surface("X = cos(x)*cos(y); Y = (1 + 1e-9)*cos(x)*sin(y); Z = sin(x);"
                                    "domain = -1.2, 1.2, -3, 3")
        with pytest.raises(SeedUmbilic):
            seed_state(near_sphere, (0.3, 0.7), 1.0, 0)
        s = seed_state(near_sphere, (0.3, 0.7), 1.0, 0, tol=1e-12)
        assert abs(s.alpha_hint.alpha) <= math.pi / 4.0 + 1e-12
        assert s.f_int == pytest.approx(evaluate(near_sphere, (0.3, 0.7)))


class TestPathIndependence:
    """path_independence_check()"""

    def test_cylinder(self, cylinder):
        assert path_independence_check(cylinder, (0.0, 0.0), 1.0, 0, 0.1, 0.1, 10) <= 1e-12

    def test_torus(self, torus):
        coarse = path_independence_check(torus, (0.5, 1.0), 1.0, 0, 0.05, 0.05, 10)
        fine = path_independence_check(torus, (0.5, 1.0), 1.0, 0, 0.025, 0.025, 20)
        assert coarse <= 1e-7
        assert fine < coarse / 8.0

    def test_zero_steps(self, torus):
        assert path_independence_check(torus, (0.5, 1.0), 1.0, 0, 0.05, 0.05, 0) == 0.0
