#!/usr/bin/env python3
"""
Tests for fundamental forms, curvature and the umbilic test
"""

import math

import numpy as np
import pytest

from conftest import random_points
from src.geometry.forms import (
    curvature, fundamental, is_umbilic, normal_curvature, shape_operator,
)
from src.surfaces.catalog import BUILTINS
from src.surfaces.surface_def import jet, parse_surface

SWAPPED_TORUS = "X=(2+cos(y))*cos(x); Y=(2+cos(y))*sin(x); Z=sin(y)"


def fd_at(surface, p):
    return fundamental(jet(surface, p))


class TestFundamental:
    """fundamental()"""

    def test_cylinder(self, cylinder):
        fd = fd_at(cylinder, (0.3, 1.1))
        assert (fd.E, fd.F, fd.G) == pytest.approx((1.0, 0.0, 4.0), abs=1e-14)
        assert fd.l == pytest.approx(0.0, abs=1e-14)
        assert fd.m == pytest.approx(0.0, abs=1e-14)
        # N = f_x x f_y points towards the axis
        assert fd.n == pytest.approx(2.0, abs=1e-14)
        for partial in (fd.E_x, fd.E_y, fd.F_x, fd.G_x):
            assert partial == pytest.approx(0.0, abs=1e-14)

    def test_plane(self):
        fd = fd_at(parse_surface("builtin:plane"), (0.2, -0.4))
        assert (fd.E, fd.F, fd.G) == (1.0, 0.0, 1.0)
        assert (fd.l, fd.m, fd.n) == (0.0, 0.0, 0.0)

    def test_torus(self, torus):
        fd = fd_at(torus, (0.0, 0.4))
        assert (fd.E, fd.F, fd.G) == pytest.approx((1.0, 0.0, 9.0), abs=1e-14)
        assert fd.G_x == pytest.approx(0.0, abs=1e-14)
        for x in (0.5, 1.7, 4.0):
            fd = fd_at(torus, (x, 0.4))
            assert fd.G_x == pytest.approx(-2.0 * (2.0 + math.cos(x)) * math.sin(x), rel=1e-12)

    def test_normal_is_unit_and_orthogonal(self, torus, rng):
        for p in random_points(torus, rng, 50):
            fd = fd_at(torus, p)
            assert np.linalg.norm(fd.N) == pytest.approx(1.0, abs=1e-12)
            assert abs(fd.N @ fd.f_x) <= 1e-12 * np.linalg.norm(fd.f_x)
            assert abs(fd.N @ fd.f_y) <= 1e-12 * np.linalg.norm(fd.f_y)

    @pytest.mark.parametrize("name", sorted(set(BUILTINS) - {"plane"}))
    def test_metric_partials_match_finite_differences(self, name, rng):
        surface = parse_surface(f"builtin:{name}")
        h = 1e-5
        for x, y in random_points(surface, rng, 10):
            fd = fd_at(surface, (x, y))
            xp, xm = fd_at(surface, (x + h, y)), fd_at(surface, (x - h, y))
            yp, ym = fd_at(surface, (x, y + h)), fd_at(surface, (x, y - h))
            checks = [
                (fd.E_x, (xp.E - xm.E) / (2 * h)),
                (fd.E_y, (yp.E - ym.E) / (2 * h)),
                (fd.F_x, (xp.F - xm.F) / (2 * h)),
                (fd.G_x, (xp.G - xm.G) / (2 * h)),
            ]
            for exact, approx in checks:
                assert abs(exact - approx) <= 1e-6 * max(1.0, abs(exact))

    def test_orientation_flip(self, torus, rng):
        swapped = parse_surface(SWAPPED_TORUS)
        for x, y in random_points(torus, rng, 20):
            a = fd_at(torus, (x, y))
            b = fd_at(swapped, (y, x))
            assert np.allclose(b.N, -a.N, atol=1e-12)
            assert b.l == pytest.approx(-a.n, abs=1e-12)
            assert b.m == pytest.approx(-a.m, abs=1e-12)
            assert b.n == pytest.approx(-a.l, abs=1e-12)
            assert not is_umbilic(a)
            assert not is_umbilic(b)


class TestCurvature:
    """curvature() / shape_operator() / normal_curvature()"""

    def test_plane(self):
        c = curvature(fd_at(parse_surface("builtin:plane"), (0.0, 0.0)))
        assert c.H == 0.0
        assert c.K_gauss == 0.0

    def test_cylinder(self, cylinder):
        c = curvature(fd_at(cylinder, (1.0, 2.0)))
        assert c.H == pytest.approx(0.25, abs=1e-14)
        assert c.K_gauss == pytest.approx(0.0, abs=1e-14)
        assert (c.kappa1, c.kappa2) == pytest.approx((0.5, 0.0), abs=1e-14)

    def test_principal_relations(self, torus, rng):
        for p in random_points(torus, rng, 50):
            c = curvature(fd_at(torus, p))
            assert c.kappa1 >= c.kappa2
            assert 0.5 * (c.kappa1 + c.kappa2) == pytest.approx(c.H, rel=1e-10, abs=1e-14)
            assert c.kappa1 * c.kappa2 == pytest.approx(c.K_gauss, rel=1e-10, abs=1e-14)
            assert abs(c.e1 @ c.e2) <= 1e-10
            assert np.linalg.norm(c.e1) == pytest.approx(1.0)

    def test_shape_operator_eigenvalues(self, torus, rng):
        for p in random_points(torus, rng, 20):
            fd = fd_at(torus, p)
            c = curvature(fd)
            eig = np.sort(np.real(np.linalg.eigvals(shape_operator(fd))))
            assert eig == pytest.approx([c.kappa2, c.kappa1], abs=1e-12)

    def test_normal_curvature_bounds(self, torus, rng):
        fd = fd_at(torus, (0.9, 2.3))
        c = curvature(fd)
        for a, b in rng.normal(size=(1000, 2)):
            v = a * fd.f_x + b * fd.f_y
            v = v / np.linalg.norm(v)
            k = normal_curvature(fd, v)
            assert c.kappa2 - 1e-9 <= k <= c.kappa1 + 1e-9

    def test_normal_curvature_along_principal_directions(self, torus):
        fd = fd_at(torus, (0.9, 2.3))
        c = curvature(fd)
        assert normal_curvature(fd, c.e1) == pytest.approx(c.kappa1, abs=1e-12)
        assert normal_curvature(fd, c.e2) == pytest.approx(c.kappa2, abs=1e-12)


class TestUmbilic:
    """is_umbilic()"""

    def test_sphere(self, sphere, rng):
        for p in random_points(sphere, rng, 20):
            assert is_umbilic(fd_at(sphere, p))

    def test_plane(self):
        assert is_umbilic(fd_at(parse_surface("builtin:plane"), (0.5, 0.5)))

    @pytest.mark.parametrize("name", ["cylinder", "torus"])
    def test_never_umbilic(self, name, rng):
        surface = parse_surface(f"builtin:{name}")
        for p in random_points(surface, rng, 100):
            assert not is_umbilic(fd_at(surface, p))
