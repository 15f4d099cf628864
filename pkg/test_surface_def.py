#!/usr/bin/env python3
"""
Tests for surface parsing, the builtin catalog and exact jet evaluation
"""

import math

import numpy as np
import pytest

from conftest import random_points
from src.geometry.forms import curvature, fundamental, is_umbilic
from src.surfaces.catalog import BUILTINS
from src.surfaces.surface_def import (
    builtin_catalog, evaluate, expression_twin, jet, load_surface, parse_surface,
)
from src.utils.errors import (
    DegenerateImmersion, DomainError, IsoMeshError, OutOfDomain, SurfaceError,
    SurfaceSyntaxError, UnboundIdentifier, UnknownBuiltin,
)

TORUS_DOC = "X=(2+cos(x))*cos(y); Y=(2+cos(x))*sin(y); Z=sin(x)"
EXPRESSION_BUILTINS = sorted(name for name, cls in BUILTINS.items() if cls().expression())


def close(a, b, tol):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return bool(np.all(np.abs(a - b) <= tol * np.maximum(1.0, np.abs(b))))


class TestParseSurface:
    """parse_surface() / load_surface()"""

    def test_builtin_torus(self):
        s = parse_surface("builtin:torus?R=2,r=1")
        assert s.kind == "builtin"
        assert s.name == "torus"
        assert s.params == {"R": 2.0, "r": 1.0}
        assert s.domain.as_tuple() == pytest.approx((0.0, 2 * math.pi, 0.0, 2 * math.pi))

    def test_builtin_defaults(self):
        s = parse_surface("builtin:cylinder")
        assert s.params == {"R": 1.0}

    def test_missing_component(self):
        with pytest.raises(SurfaceSyntaxError) as exc:
            parse_surface("X = x*y")
        assert "missing component 'Y'" in str(exc.value)

    def test_unknown_builtin(self):
        with pytest.raises(UnknownBuiltin):
            parse_surface("builtin:klein_bottle")

    def test_unknown_builtin_parameter(self):
        with pytest.raises(UnboundIdentifier):
            parse_surface("builtin:torus?q=3")

    def test_invalid_builtin_parameter(self):
        with pytest.raises(SurfaceError):
            parse_surface("builtin:torus?R=1,r=2")
        with pytest.raises(SurfaceSyntaxError):
            parse_surface("builtin:torus?R=two")

    def test_unbound_identifier(self):
        with pytest.raises(UnboundIdentifier) as exc:
            parse_surface("X = a*x\nY = y\nZ = 0\ndomain = 0, 1, 0, 1")
        assert exc.value.name == "a"

    def test_syntax_error_position(self):
        with pytest.raises(SurfaceSyntaxError) as exc:
            parse_surface("X = x\nY = y +* 2\nZ = 0\ndomain = 0, 1, 0, 1")
        assert exc.value.line == 2
        assert exc.value.position == 8

    def test_empty_domain(self):
        with pytest.raises(DomainError):
            parse_surface("X = x; Y = y; Z = 0; domain = 1, 0, 0, 1")

    def test_domain_must_be_constant(self):
        with pytest.raises(SurfaceSyntaxError):
            parse_surface("X = x; Y = y; Z = 0; domain = 0, x, 0, 1")

    def test_params_and_comments(self):
        doc = ("# a torus\nparam R = 3  # major\nparam r = 0.5\n"
               "X = (R + r*cos(x))*cos(y)\nY = (R + r*cos(x))*sin(y)\nZ = r*sin(x)\n"
               "domain = 0, 2*pi, 0, 2*pi\nname = fat torus\n")
        s = parse_surface(doc)
        assert s.kind == "expression"
        assert s.name == "fat torus"
        assert s.params == {"R": 3.0, "r": 0.5}
        assert evaluate(s, (0.0, 0.0)) == pytest.approx([3.5, 0.0, 0.0])

    def test_reserved_parameter_name(self):
        with pytest.raises(SurfaceSyntaxError):
            parse_surface("param pi = 3\nX = x\nY = y\nZ = 0")

    def test_semicolon_torus_matches_builtin(self, torus):
        doc = parse_surface(TORUS_DOC)
        a, b = jet(doc, (0.0, 0.0)), jet(torus, (0.0, 0.0))
        for name in ("f", "f_x", "f_y", "f_xx", "f_xy", "f_yy"):
            assert close(getattr(a, name), getattr(b, name), 1e-12), name

    def test_load_surface_from_file(self, tmp_path):
        path = tmp_path / "torus.surf"
        path.write_text(TORUS_DOC + "\n", encoding="utf-8")
        s = load_surface(str(path))
        assert s.kind == "expression"
        with pytest.raises(SurfaceError):
            load_surface(str(tmp_path / "missing.surf"))

    def test_fuzzed_documents_fail_cleanly(self, rng):
        pieces = ["X", "Y", "Z", "=", "x", "y", "sin(", "cos(", "ln(", ")", "(", "+", "-",
                  "*", "/", "^", "2", "0.5", "1e3", "pi", ";", "\n", ",", "#", "param",
                  "domain", "a", "=1", "$", ".", "e", "builtin:", "torus", "?R=", "sqrt("]
        for _ in range(500):
            text = " ".join(rng.choice(pieces, size=int(rng.integers(1, 30))))
            try:
                parse_surface(text)
            except IsoMeshError:
                pass

    @pytest.mark.parametrize("expression", [
        "(" * 5000 + "x" + ")" * 5000,
        "sin(" * 5000 + "x" + ")" * 5000,
        "-" * 5000 + "x",
        "x" + "^x" * 5000,
        "+".join(["x"] * 5000),
        "*".join(["x"] * 5000),
    ])
    def test_deep_nesting_is_a_syntax_error(self, expression):
        with pytest.raises(SurfaceSyntaxError, match="nested too deeply"):
            parse_surface(f"X = {expression}\nY = y\nZ = 0\n")

    def test_moderate_nesting_parses(self):
        s = parse_surface("X = " + "(" * 50 + "x" + ")" * 50 + "\nY = " + "+".join(["y"] * 150)
                          + "\nZ = " + "-" * 40 + "x\ndomain = -1, 1, -1, 1")
        assert evaluate(s, (0.25, 0.5)) == pytest.approx([0.25, 75.0, 0.25])


class TestJet:
    """jet() / evaluate()"""

    def test_cylinder_jet(self, cylinder):
        j = jet(cylinder, (0.0, 0.0))
        assert j.f == pytest.approx([2, 0, 0])
        assert j.f_x == pytest.approx([0, 0, 1])
        assert j.f_y == pytest.approx([0, 2, 0])
        assert j.f_xx == pytest.approx([0, 0, 0])
        assert j.f_xy == pytest.approx([0, 0, 0])
        assert j.f_yy == pytest.approx([-2, 0, 0])

    def test_plane_has_zero_second_partials(self):
        s = parse_surface("X = x; Y = y; Z = 0; domain = -1, 1, -1, 1")
        j = jet(s, (0.3, -0.7))
        for v in (j.f_xx, j.f_xy, j.f_yy):
            assert np.all(v == 0.0)

    def test_torus_jet(self, torus):
        j = jet(torus, (0.0, 0.0))
        assert j.f == pytest.approx([3, 0, 0])
        assert j.f_x == pytest.approx([0, 0, 1])
        assert j.f_y == pytest.approx([0, 3, 0])

    def test_out_of_domain(self, torus):
        with pytest.raises(OutOfDomain) as exc:
            jet(torus, (7.0, 0.0))
        assert exc.value.point == (7.0, 0.0)

    def test_degenerate_immersion(self):
        s = parse_surface("X = x; Y = x; Z = x; domain = 0, 1, 0, 1")
        with pytest.raises(DegenerateImmersion):
            jet(s, (0.5, 0.5))

    def test_jet_is_pure(self, torus, rng):
        doc = expression_twin(torus)
        for p in random_points(doc, rng, 10):
            a, b = jet(doc, p), jet(doc, p)
            for name in ("f", "f_x", "f_y", "f_xx", "f_xy", "f_yy"):
                assert np.array_equal(getattr(a, name), getattr(b, name))

    @pytest.mark.parametrize("name", EXPRESSION_BUILTINS)
    def test_expression_twin_matches_builtin(self, name, rng):
        builtin = parse_surface(f"builtin:{name}")
        twin = expression_twin(builtin)
        for p in random_points(builtin, rng, 20):
            a, b = jet(builtin, p), jet(twin, p)
            for field in ("f", "f_x", "f_y", "f_xx", "f_xy", "f_yy"):
                assert close(getattr(b, field), getattr(a, field), 1e-12), (name, p, field)

    @pytest.mark.parametrize("name", EXPRESSION_BUILTINS)
    def test_hyperdual_jets_match_finite_differences(self, name, rng):
        surface = expression_twin(parse_surface(f"builtin:{name}"))
        f = lambda x, y: evaluate(surface, (x, y))
        for x, y in random_points(surface, rng, 10):
            j = jet(surface, (x, y))
            h = 1e-5
            fx = (f(x + h, y) - f(x - h, y)) / (2 * h)
            fy = (f(x, y + h) - f(x, y - h)) / (2 * h)
            assert close(fx, j.f_x, 1e-6)
            assert close(fy, j.f_y, 1e-6)

            # rounding grows like eps/h^2, so second partials need a coarser step
            h = 1e-3
            fxx = (f(x + h, y) - 2 * f(x, y) + f(x - h, y)) / h ** 2
            fyy = (f(x, y + h) - 2 * f(x, y) + f(x, y - h)) / h ** 2
            fxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4 * h * h)
            assert close(fxx, j.f_xx, 1e-5)
            assert close(fyy, j.f_yy, 1e-5)
            assert close(fxy, j.f_xy, 1e-5)


class TestCatalog:
    """builtin_catalog() and the numerically integrated unduloid"""

    def test_catalog_contents(self):
        names = [d.name for d in builtin_catalog()]
        assert names == sorted(names)
        for required in ("plane", "cylinder", "torus", "catenoid", "graph", "sphere", "unduloid"):
            assert required in names

    def test_unduloid_has_no_expression_form(self, unduloid):
        with pytest.raises(SurfaceError):
            expression_twin(unduloid)

    def test_unduloid_profile_starts_at_neck(self, unduloid):
        profile = unduloid.builtin.profile
        X, Z, phi = profile.state(0.0)
        assert X == pytest.approx(1.0 - math.sqrt(1.0 - 0.64), abs=1e-12)
        assert Z == pytest.approx(0.0, abs=1e-12)
        assert phi == pytest.approx(math.pi / 2, abs=1e-12)

    def test_unduloid_constant_mean_curvature(self, unduloid, rng):
        H = np.array([curvature(fundamental(jet(unduloid, p))).H
                      for p in random_points(unduloid, rng, 100, margin=0.0)])
        assert np.max(np.abs(H - H.mean())) <= 1e-6
        assert abs(H.mean()) == pytest.approx(0.5, rel=1e-6)

    def test_unduloid_jets_match_dense_output(self, unduloid, rng):
        f = lambda x, y: evaluate(unduloid, (x, y))
        h = 1e-5
        for x, y in random_points(unduloid, rng, 10):
            j = jet(unduloid, (x, y))
            fx = (f(x + h, y) - f(x - h, y)) / (2 * h)
            assert close(fx, j.f_x, 1e-6)

    def test_unduloid_has_no_umbilics(self, unduloid, rng):
        for p in random_points(unduloid, rng, 100, margin=0.0):
            assert not is_umbilic(fundamental(jet(unduloid, p)))

    def test_sphere_is_totally_umbilic(self, sphere, rng):
        for p in random_points(sphere, rng, 100, margin=0.0):
            assert is_umbilic(fundamental(jet(sphere, p)))
