#!/usr/bin/env python3
"""
Isothermic reparameterization - command-line front end.

Commands:
    list      print the builtin surface catalog
    check     sample the existence condition over a grid of the domain
    reparam   build an isothermic mesh, verify it, export OBJ + JSON report
    verify    recompute the diagnostics of a stored run and compare

Exit codes: 0 pass, 1 error, 2 fail (verdict failure or mismatch).
"""

import argparse
import math
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .analytics.diagnostics import DiagnosticsReport, diagnose
from .analytics.reports import ReportGenerator, build_report, surface_summary
from .config.config_loader import RunConfig, load_run_config
from .config.settings import tolerance_config
from .geometry.forms import fundamental, is_umbilic
from .geometry.isothermic import (
    existence_residual, existence_residual_special, select_special_case,
)
from .integration.integrator import build_mesh, path_independence_check
from .monitoring.system_logger import system_logger
from .surfaces.surface_def import SurfaceDef, builtin_catalog, jet, load_surface, parse_surface
from .utils.errors import (
    ConfigError, IntegrationError, IsoMeshError, Mismatch, OutOfDomain,
    SchemaError, UmbilicPoint,
)

EXIT_PASS = 0
EXIT_ERROR = 1
EXIT_FAIL = 2


class CliParser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags; here bad flags are config errors"""

    def error(self, message):
        raise ConfigError(message)


def _floats(text: str, count: Sequence[int]) -> Tuple[float, ...]:
    try:
        values = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'")
    if len(values) not in count:
        raise argparse.ArgumentTypeError(f"expected {' or '.join(map(str, count))} values, got '{text}'")
    return values


def _pair(text: str) -> Tuple[float, float]:
    values = _floats(text, (1, 2))
    return values if len(values) == 2 else (values[0], values[0])


def _int_pair(text: str) -> Tuple[int, int]:
    values = _pair(text)
    if not all(float(v).is_integer() for v in values):
        raise argparse.ArgumentTypeError(f"sizes must be integers, got '{text}'")
    return int(values[0]), int(values[1])


def _origin(text: str) -> Tuple[float, float]:
    return _floats(text, (2,))


def _region(text: str) -> Tuple[float, float, float, float]:
    return _floats(text, (4,))


def build_parser() -> CliParser:
    parser = CliParser(
        prog="isomesh",
        description="Isothermic reparameterization of parametric surfaces",
    )
    parser.add_argument('--config', type=str, default=None,
                        help='YAML defaults file (default: config/run_config.yaml)')
    parser.add_argument('--log-level', type=str, default=None,
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Logger level')

    sub = parser.add_subparsers(dest='command', parser_class=CliParser)
    sub.required = True
    sub.add_parser('list', help='List builtin surfaces')

    for name, text in (('check', 'Sample the existence condition'),
                       ('reparam', 'Build and verify an isothermic mesh')):
        p = sub.add_parser(name, help=text)
        p.add_argument('--surface', type=str, default=None,
                       help='builtin:<name>?k=v,... or path to a surface document')
        p.add_argument('--branch', type=int, default=None, help='alpha branch 0..3')
        p.add_argument('--size', type=_int_pair, default=None,
                       help='grid size n,m (samples for check, nodes for reparam)')
        p.add_argument('--tol-umbilic', type=float, default=None, help='relative umbilic guard')
        p.add_argument('--tol-residual', type=float, default=None,
                       help='existence residual pass threshold')
        p.add_argument('--tol-diagnostics', type=float, default=None,
                       help='isothermicity residual thresholds')
        p.add_argument('--fd-step', type=float, default=None,
                       help='finite-difference step of the existence residual')
        p.add_argument('--report', type=str, default=None, help='JSON report path')
        p.add_argument('--workers', type=int, default=None, help='column workers')
        if name == 'check':
            p.add_argument('--region', type=_region, default=None,
                           help='x_min,x_max,y_min,y_max sampling rectangle')
        else:
            p.add_argument('--origin', type=_origin, default=None, help='seed point x0,y0')
            p.add_argument('--k0', type=float, default=None, help='initial scaling K0')
            p.add_argument('--steps', type=_pair, default=None, help='h_beta,h_gamma')
            p.add_argument('--out', type=str, default=None, help='OBJ mesh path')

    p = sub.add_parser('verify', help='Recompute diagnostics of a stored run')
    p.add_argument('report_file', nargs='?', default=None, help='JSON report of a reparam run')
    p.add_argument('--report', type=str, default=None, help='JSON report path')
    return parser


def overrides_from_args(args: argparse.Namespace) -> Dict[str, Any]:
    get = lambda name: getattr(args, name, None)
    overrides = {
        'surface': get('surface'),
        'origin': get('origin'),
        'k0': get('k0'),
        'branch': get('branch'),
        'tol_umbilic': get('tol_umbilic'),
        'tol_residual': get('tol_residual'),
        'tol_diagnostics': get('tol_diagnostics'),
        'fd_step': get('fd_step'),
        'mesh_path': get('out'),
        'report_path': get('report_file') or get('report'),
        'workers': get('workers'),
        'region': get('region'),
    }
    if get('steps') is not None:
        overrides['h_beta'], overrides['h_gamma'] = args.steps
    if get('size') is not None:
        keys = ('n_x', 'n_y') if args.command == 'check' else ('n_beta', 'n_gamma')
        overrides[keys[0]], overrides[keys[1]] = args.size
    return overrides


def _alpha_step(cfg: RunConfig) -> Optional[float]:
    return cfg.fd_step / 10.0 if cfg.fd_step is not None else None


def _load(cfg: RunConfig) -> SurfaceDef:
    surface = load_surface(cfg.surface)
    system_logger.log_surface_loaded(surface.name, surface.kind, surface.domain.as_tuple())
    return surface


# ─── list ────────────────────────────────────────────────────────────────────

def cmd_list() -> int:
    print(f"{'NAME':<18} {'PARAMETERS':<28} {'DOMAIN':<44} DESCRIPTION")
    for d in builtin_catalog():
        params = ", ".join(f"{k}={v:g}" for k, v in d.params.items()) or "-"
        domain = "[{:.4g}, {:.4g}] x [{:.4g}, {:.4g}]".format(*d.domain)
        print(f"{d.name:<18} {params:<28} {domain:<44} {d.description}")
    return EXIT_PASS


# ─── check ───────────────────────────────────────────────────────────────────

def sample_points(region: Tuple[float, float, float, float], n_x: int, n_y: int
                  ) -> List[Tuple[float, float]]:
    """Cell centres of an n_x by n_y grid, so every stencil stays inside"""
    x0, x1, y0, y1 = region
    dx, dy = (x1 - x0) / n_x, (y1 - y0) / n_y
    return [(x0 + (i + 0.5) * dx, y0 + (k + 0.5) * dy) for i in range(n_x) for k in range(n_y)]


def cmd_check(cfg: RunConfig) -> int:
    started = time.time()
    surface = _load(cfg)
    domain = surface.domain
    region = cfg.region or domain.as_tuple()
    if not (domain.contains(region[0], region[2]) and domain.contains(region[1], region[3])):
        raise ConfigError(f"region {region} is not inside the domain {domain.as_tuple()}")

    print(f"🔍 Checking existence condition on {surface.name} ({cfg.n_x}x{cfg.n_y} samples)")
    rows = []
    residuals = []
    umbilic_count = 0
    skipped = 0
    for p in sample_points(region, cfg.n_x, cfg.n_y):
        row = {'x': p[0], 'y': p[1], 'case': None, 'residual': None, 'status': 'ok'}
        try:
            fd = fundamental(jet(surface, p))
            if is_umbilic(fd, cfg.tol_umbilic):
                raise UmbilicPoint(p)
            case = select_special_case(fd)
            row['case'] = case or 'full'
            if case is None:
                r = existence_residual(surface, p, cfg.branch, cfg.fd_step, _alpha_step(cfg),
                                       umbilic_tol=cfg.tol_umbilic)
            else:
                r = existence_residual_special(surface, p, case, cfg.branch,
                                               cfg.fd_step, _alpha_step(cfg),
                                               umbilic_tol=cfg.tol_umbilic)
            row['residual'] = r
            residuals.append(abs(r))
        except UmbilicPoint:
            system_logger.log_umbilic(p, "check")
            umbilic_count += 1
            row['status'] = 'umbilic'
        except OutOfDomain:
            skipped += 1
            row['status'] = 'stencil_outside_domain'
        rows.append(row)

    if not residuals:
        verdict, code = 'UNDEFINED', EXIT_FAIL
        max_residual = None
    else:
        max_residual = max(residuals)
        system_logger.log_residual('existence_max', max_residual, cfg.tol_residual)
        verdict, code = ('PASS', EXIT_PASS) if max_residual <= cfg.tol_residual else ('FAIL', EXIT_FAIL)

    report_path = Path(cfg.report_path)
    csv_path = report_path.with_suffix('.csv')
    generator = ReportGenerator()
    generator.save_check_csv(rows, csv_path)
    report = build_report(
        'check', surface_summary(surface, cfg.surface), cfg.to_dict(),
        residuals={'existence_max': max_residual, 'evaluated': len(residuals), 'skipped': skipped},
        verdict=verdict, umbilic_count=umbilic_count,
        timing={'total_s': time.time() - started},
        points=rows, artifacts={'csv': csv_path.name},
    )
    generator.save_report(report, report_path)

    shown = f"{max_residual:.3e}" if max_residual is not None else "n/a"
    print(f"   max |residual| = {shown} (threshold {cfg.tol_residual:.1e}), "
          f"umbilic points = {umbilic_count}")
    print(f"{'✅' if code == EXIT_PASS else '⚠️ '} Verdict: {verdict}")
    system_logger.log_verdict('check', verdict, code)
    return code


# ─── reparam ─────────────────────────────────────────────────────────────────

def evaluate_verdict(diag: DiagnosticsReport, threshold: float) -> Tuple[str, List[str]]:
    """PASS iff every residual is present and under threshold"""
    failed = []
    for name, value in diag.residuals().items():
        if value is None or not math.isfinite(value) or value > threshold:
            failed.append(name)
    return ('PASS' if not failed else 'FAIL'), failed


def _path_steps(cfg: RunConfig) -> int:
    return min(cfg.n_beta, cfg.n_gamma) - 1


def _path_independence(surface: SurfaceDef, origin, k0: float, branch: int,
                       h_beta: float, h_gamma: float, steps: int,
                       tol: float, alpha_step: Optional[float]) -> Optional[float]:
    try:
        return path_independence_check(surface, origin, k0, branch, h_beta, h_gamma,
                                       steps, tol, alpha_step)
    except IntegrationError as e:
        system_logger.warning("Path-independence check could not complete", reason=str(e))
        return None


def cmd_reparam(cfg: RunConfig) -> int:
    started = time.time()
    surface = _load(cfg)
    origin = cfg.origin or surface.domain.center
    print(f"🧭 Building isothermic mesh on {surface.name}: {cfg.n_beta}x{cfg.n_gamma} nodes, "
          f"steps ({cfg.h_beta:g}, {cfg.h_gamma:g}), origin ({origin[0]:.4g}, {origin[1]:.4g})")

    mesh = build_mesh(surface, origin, cfg.k0, cfg.branch, cfg.h_beta, cfg.h_gamma,
                      cfg.n_beta, cfg.n_gamma, cfg.workers, cfg.tol_umbilic, _alpha_step(cfg))
    mesh_elapsed = time.time() - started
    for failure in mesh.failures:
        print(f"   ⚠️  {failure}")

    pi = _path_independence(surface, origin, cfg.k0, cfg.branch, cfg.h_beta, cfg.h_gamma,
                            _path_steps(cfg), cfg.tol_umbilic, _alpha_step(cfg))
    diag = diagnose(mesh, surface, pi)
    verdict, failed = evaluate_verdict(diag, cfg.tol_diagnostics)
    for name, value in diag.residuals().items():
        system_logger.log_residual(name, value, cfg.tol_diagnostics)

    generator = ReportGenerator()
    report_path = Path(cfg.report_path)
    arrays_path = report_path.with_suffix('.npz')
    generator.save_obj(mesh, Path(cfg.mesh_path))
    generator.save_mesh_arrays(mesh, arrays_path)
    report = build_report(
        'reparam', surface_summary(surface, cfg.surface), cfg.to_dict(),
        residuals=diag.residuals(), verdict=verdict,
        mesh_stats=mesh.stats().to_dict(),
        timing={'mesh_s': mesh_elapsed, 'total_s': time.time() - started},
        diagnostics=diag.to_dict(), failed_checks=failed,
        seed={'origin': list(origin), 'k0': cfg.k0, 'branch': cfg.branch},
        path_steps=_path_steps(cfg),
        artifacts={'mesh': str(cfg.mesh_path), 'arrays': arrays_path.name},
    )
    generator.save_report(report, report_path)

    print("   Residuals:")
    for name, value in diag.residuals().items():
        shown = f"{value:.3e}" if value is not None else "n/a"
        print(f"     {name:<20} {shown}")
    code = EXIT_PASS if verdict == 'PASS' else EXIT_FAIL
    print(f"{'✅' if code == EXIT_PASS else '⚠️ '} Verdict: {verdict}  "
          f"(mesh: {cfg.mesh_path}, report: {report_path})")
    system_logger.log_verdict('reparam', verdict, code)
    return code


# ─── verify ──────────────────────────────────────────────────────────────────

def compare_residuals(stored: Dict[str, Any], recomputed: Dict[str, Any],
                      tol: float) -> List[str]:
    mismatched = []
    for name, value in recomputed.items():
        old = stored.get(name)
        if old is None or value is None:
            if old is not value:
                mismatched.append(name)
            continue
        if abs(float(old) - float(value)) > tol * max(1.0, abs(float(old))):
            mismatched.append(name)
    return mismatched


def cmd_verify(report_path: Path) -> int:
    generator = ReportGenerator()
    report = generator.load_report(report_path)
    if report['command'] != 'reparam':
        raise SchemaError("only reparam reports carry a mesh to verify")
    try:
        arrays_name = report['artifacts']['arrays']
        seed = report['seed']
        config = report['config']
        steps = int(report['path_steps'])
    except (KeyError, TypeError) as e:
        raise SchemaError(f"reparam report lacks field {e}")

    # the embedded document wins over the path, which is relative to the reparam run
    stored = report['surface']
    source = stored.get('source')
    surface = parse_surface(source) if source else load_surface(stored['spec'])
    mesh = generator.load_mesh_arrays(Path(report_path).parent / arrays_name, surface)
    fd_step = config.get('fd_step')
    alpha_step = fd_step / 10.0 if fd_step is not None else None
    pi = _path_independence(surface, tuple(seed['origin']), float(seed['k0']), int(seed['branch']),
                            mesh.h_beta, mesh.h_gamma, steps,
                            float(config['tol_umbilic']), alpha_step)
    diag = diagnose(mesh, surface, pi)

    mismatched = compare_residuals(report['residuals'], diag.residuals(),
                                   tolerance_config.VERIFY_MATCH_TOL)
    if mismatched:
        raise Mismatch(f"recomputed residuals differ from the report: {mismatched}")
    print(f"✅ Verified {report_path}: all residuals reproduced")
    system_logger.log_verdict('verify', 'MATCH', EXIT_PASS)
    return EXIT_PASS


# ─── entry point ─────────────────────────────────────────────────────────────

def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.log_level:
            system_logger.set_level(args.log_level)
        system_logger.log_system_event("command", args.command)
        if args.command == 'list':
            return cmd_list()

        if args.command == 'verify':
            path = args.report_file or args.report
            if path is None:
                path = load_run_config(args.config, 'verify').report_path
            return cmd_verify(Path(path))

        cfg = load_run_config(args.config, args.command, overrides_from_args(args))
        if args.command == 'check':
            return cmd_check(cfg)
        return cmd_reparam(cfg)

    except Mismatch as e:
        print(f"❌ {e}")
        system_logger.log_verdict('verify', 'MISMATCH', EXIT_FAIL)
        return EXIT_FAIL
    except (IsoMeshError, OSError, ValueError) as e:
        print(f"❌ Error: {e}")
        system_logger.error("Command failed", error=str(e))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
