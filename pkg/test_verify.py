#!/usr/bin/env python3
"""
Tests for mesh diagnostics, the Hopf realness check and the principal
direction oracle, including injected faults
"""

import copy

import pytest

from conftest import random_points
from src.analytics.diagnostics import (
    DiagnosticsReport, diagnose, hopf_realness, mesh_diagnostics, principal_direction_oracle,
)
from src.geometry.forms import fundamental, is_umbilic
from src.geometry.isothermic import alpha
from src.integration.integrator import build_mesh
from src.surfaces.surface_def import jet, parse_surface
from src.utils.errors import MeshTooSmall, NotConformalEnough, UmbilicPoint


@pytest.fixture(scope="module")
def torus_mesh(torus):
    return build_mesh(torus, (0.0, 0.0), 1.0, 0, 0.02, 0.02, 51, 51)


@pytest.fixture(scope="module")
def unduloid_mesh(unduloid):
    return build_mesh(unduloid, unduloid.domain.center, 1.0, 0, 0.02, 0.02, 51, 51)


class TestMeshDiagnostics:
    """mesh_diagnostics() / diagnose()"""

    def test_cylinder_is_exact(self, cylinder):
        mesh = build_mesh(cylinder, (0.0, 0.0), 1.0, 0, 0.01, 0.01, 21, 21)
        report = diagnose(mesh, cylinder)
        assert report.conformality_max <= 1e-8
        assert report.orthogonality_max <= 1e-8
        assert report.curvature_line_max <= 1e-8
        assert report.hopf_imag_max <= 1e-8
        assert report.interior_nodes == 19 * 19

    @pytest.mark.parametrize("mesh_fixture,surface_fixture",
                             [("torus_mesh", "torus"), ("unduloid_mesh", "unduloid")])
    def test_isothermic_meshes(self, mesh_fixture, surface_fixture, request):
        mesh = request.getfixturevalue(mesh_fixture)
        surface = request.getfixturevalue(surface_fixture)
        assert mesh.valid.all()
        report = diagnose(mesh, surface)
        assert report.conformality_max <= 1e-4
        assert report.orthogonality_max <= 1e-5
        assert report.curvature_line_max <= 1e-3
        assert report.hopf_imag_max is not None
        assert report.hopf_imag_max <= 1e-3
        assert report.integral_drift_max <= 1e-5

    def test_hopf_tracks_curvature_line_residual(self, torus_mesh, torus):
        report = diagnose(torus_mesh, torus)
        assert report.curvature_line_max <= report.hopf_imag_max
        assert report.hopf_imag_max <= 4.0 * report.curvature_line_max * (1 + 1e-6)

    def test_refinement_does_not_increase_residuals(self, torus_mesh, torus):
        coarse = mesh_diagnostics(build_mesh(torus, (0.0, 0.0), 1.0, 0, 0.04, 0.04, 26, 26), torus)
        fine = mesh_diagnostics(torus_mesh, torus)
        for name in ("conformality_max", "orthogonality_max", "curvature_line_max"):
            assert getattr(fine, name) <= 1.5 * getattr(coarse, name)

    def test_scaled_K_column_is_detected(self, torus_mesh, torus):
        faulty = copy.deepcopy(torus_mesh)
        faulty.K[:, 25] *= 1.1
        report = diagnose(faulty, torus)
        assert report.conformality_max > 1e-2
        assert report.hopf_imag_max is None
        with pytest.raises(NotConformalEnough):
            hopf_realness(faulty, torus)

    def test_normal_checker_fault_is_detected(self, torus_mesh, torus):
        faulty = copy.deepcopy(torus_mesh)
        nb, ng = faulty.shape
        for i in range(nb):
            for k in range(ng):
                N = fundamental(jet(torus, (faulty.x[i, k], faulty.y[i, k]))).N
                sign = (-1) ** (i // 2 + k // 2)
                faulty.f_pullback[i, k] += 1e-4 * sign * N
        report = diagnose(faulty, torus)
        assert report.conformality_max <= 1e-3
        assert report.hopf_imag_max > 1e-2
        assert report.curvature_line_max > 1e-2

    def test_mesh_too_small(self, torus):
        mesh = build_mesh(torus, (1.0, 1.0), 1.0, 0, 0.1, 0.1, 2, 2)
        with pytest.raises(MeshTooSmall):
            mesh_diagnostics(mesh, torus)

    @pytest.mark.parametrize("size", [(3, 3), (4, 4), (4, 9), (9, 4)])
    def test_interior_under_three_by_three_is_too_small(self, cylinder, size):
        mesh = build_mesh(cylinder, (0.0, 0.0), 1.0, 0, 0.1, 0.1, *size)
        with pytest.raises(MeshTooSmall):
            mesh_diagnostics(mesh, cylinder)

    def test_three_by_three_interior_is_enough(self, cylinder):
        mesh = build_mesh(cylinder, (0.0, 0.0), 1.0, 0, 0.1, 0.1, 5, 5)
        assert mesh_diagnostics(mesh, cylinder).conformality_max <= 1e-3

    def test_path_independence_is_carried(self, cylinder):
        mesh = build_mesh(cylinder, (0.0, 0.0), 1.0, 0, 0.1, 0.1, 5, 5)
        assert mesh_diagnostics(mesh, cylinder, 3e-13).path_independence == 3e-13

    def test_report_dict_round_trip(self, cylinder):
        mesh = build_mesh(cylinder, (0.0, 0.0), 1.0, 0, 0.1, 0.1, 5, 5)
        report = diagnose(mesh, cylinder, 0.0)
        again = DiagnosticsReport.from_dict(report.to_dict())
        assert again == report
        assert set(report.residuals()) == set(DiagnosticsReport.RESIDUAL_FIELDS)


class TestPrincipalDirectionOracle:
    """principal_direction_oracle()"""

    @pytest.mark.parametrize("name", ["cylinder", "torus", "catenoid", "sheared_cylinder",
                                      "graph", "unduloid"])
    def test_alpha_matches_shape_operator(self, name, rng):
        surface = parse_surface(f"builtin:{name}")
        points = [p for p in random_points(surface, rng, 1200)
                  if not is_umbilic(fundamental(jet(surface, p)))][:1000]
        assert len(points) == 1000
        for p in points:
            fd = fundamental(jet(surface, p))
            for branch in (0, 1):
                assert principal_direction_oracle(surface, p, alpha(fd, branch)) <= 1e-8

    def test_flat_sheared_plane_is_umbilic(self):
        plane = parse_surface("X = x + 0.5*y; Y = y; Z = 0; domain = -1, 1, -1, 1")
        a = alpha(fundamental(jet(parse_surface("builtin:torus"), (1.0, 1.0))))
        with pytest.raises(UmbilicPoint):
            principal_direction_oracle(plane, (0.2, 0.3), a)
