"""``casimir-spin`` command line.

Exit codes: 0 success, 2 configuration error, 3 physics-domain error,
4 oracle or internal-consistency failure, 5 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from itertools import product

from ..dipole_radiation import EQ5_PREFACTOR, STRESS_PREFACTOR
from ..errors import ConfigError, ConsistencyError, PhysicsDomainError, QuadratureError
from ..polarizability import (Ellipsoid, depolarization_factors, polarizability_tensor,
                              spheroid_depolarization)
from ..rotating_scatter import (TORQUE_PREFACTOR, IncidentMode, SpinState, mode_torque,
                                printed_closed_form_torque, small_omega_torque)
from ..vacuum_spectrum import FIXED, SIZE_DERIVED, VacuumIntegrationConfig, casimir_torque
from .config import build_config, load_config
from .verify import run_checks

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PHYSICS = 3
EXIT_ORACLE = 4
EXIT_IO = 5

WORKERS_ENV = "CASIMIR_SPIN_WORKERS"

OVERRIDES = {
    "--a": "a", "--b": "b", "--c": "c", "--eps": "eps", "--eps1": "eps1",
    "--alpha": "alpha", "--omega": "omega", "--Omega": "Omega", "--theta": "theta",
    "--cutoff": "cutoff", "--Ex": "Ex", "--Ez": "Ez", "--Ey": "Ey",
}


class OracleFailure(Exception):
    pass


def fmt(x):
    """17 significant digits, locale independent."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return f"{x + 0.0:.17g}"
    return str(x)


def ellipsoid_of(cfg):
    return Ellipsoid(cfg.a, cfg.b, cfg.c, cfg.eps, cfg.eps1)


def resolve_alpha(cfg):
    if cfg.alpha is not None:
        return cfg.alpha, None
    t = polarizability_tensor(ellipsoid_of(cfg), depolarization_factors(ellipsoid_of(cfg), cfg.tol))
    if t.alpha is None:
        raise PhysicsDomainError("ellipsoid is not axisymmetric (a != b); set alpha explicitly")
    return t.alpha, t


def compute_depol(cfg):
    e = ellipsoid_of(cfg)
    m = depolarization_factors(e, cfg.tol)
    t = polarizability_tensor(e, m)
    results = {
        "m_X": m.m_X, "m_Y": m.m_Y, "m_Z": m.m_Z, "sum_rule_residual": m.sum_residual,
        "A_XX": t.A_XX, "A_YY": t.A_YY, "A_ZZ": t.A_ZZ, "alpha": t.alpha, "beta": t.beta,
    }
    checks = {}
    if e.a == e.b:
        exact = spheroid_depolarization(e.a, e.c)
        checks["m_Z_closed_form"] = exact
        checks["m_Z_rel_error"] = abs(m.m_Z / exact - 1.0)
    return results, checks


def compute_mode_torque(cfg):
    alpha, _ = resolve_alpha(cfg)
    c = cfg.speed_of_light
    spin = SpinState(cfg.Omega, cfg.theta)
    mode = IncidentMode(cfg.omega, cfg.Ex, cfg.Ez, E_y=cfg.Ey)
    exact = mode_torque(alpha, spin, mode, c=c)
    lin = small_omega_torque(alpha, spin, mode, c=c).gamma_z
    rel = abs(exact.gamma_z - lin) / abs(exact.gamma_z) if exact.gamma_z else 0.0
    results = {
        "alpha": alpha,
        "gamma_exact": exact.gamma_z,
        "gamma_small_omega": lin,
        "relative_difference": rel,
        "gamma_printed_closed_form": printed_closed_form_torque(alpha, spin, mode, c=c),
        "components": [{"frequency": f, "torque": g} for f, g in exact.components],
        "component_sum": math.fsum(g for _, g in exact.components),
    }
    checks = {"closed_form_vs_component_sum": exact.residual}
    return results, checks


def vacuum_config(cfg):
    rule = SIZE_DERIVED if cfg.cutoff is None else FIXED
    return VacuumIntegrationConfig(
        cutoff_omega=cfg.cutoff, cutoff_rule=rule, cutoff_shape=cfg.cutoff_shape,
        hbar=cfg.hbar, c=cfg.speed_of_light, quadrature_points=cfg.quadrature_points,
        volume=cfg.volume,
    )


def compute_vacuum(cfg, samples=True):
    e = ellipsoid_of(cfg)
    res = casimir_torque(e, SpinState(cfg.Omega, cfg.theta), vacuum_config(cfg),
                         n_samples=cfg.spectrum_samples if samples else 0)
    results = {
        "gamma_c": res.gamma_c,
        "dimensionless_ratio": res.dimensionless_ratio,
        "cutoff_omega": res.cutoff_omega,
        "alpha": res.alpha,
    }
    return results, {}, res.integrand_samples


def units_echo(cfg):
    return {"system": cfg.units_system, "length": cfg.units_length, "time": cfg.units_time,
            "mass": cfg.units_mass, "c": cfg.speed_of_light, "hbar": cfg.hbar}


def report(cfg, results, checks):
    return {"config": cfg.to_dict(), "units": units_echo(cfg), "results": results, "checks": checks}


def _flatten(prefix, obj, rows):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, rows)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}.{i}", v, rows)
    else:
        rows.append((prefix, fmt(obj)))


def render(rep, fmt_tag):
    if fmt_tag == "json":
        return json.dumps(rep, indent=2, allow_nan=True) + "\n"
    rows = []
    _flatten("", rep, rows)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    w.writerows(rows)
    return buf.getvalue()


def open_output(path):
    """Open the output early so an unwritable path fails before any work."""
    if path is None or path == "-":
        return None
    return open(path, "w", newline="", encoding="utf-8")


def emit(text, handle):
    if handle is None:
        sys.stdout.write(text)
    else:
        handle.write(text)
        handle.close()


def write_spectrum(path, samples):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["omega", "dgamma_domega"])
        for om, val in samples:
            w.writerow([fmt(om), fmt(val)])


# sweep ---------------------------------------------------------------------

def _sweep_point(cfg, values):
    point = replace(cfg, **values)
    if cfg.quantity == "depol":
        results, _ = compute_depol(point)
    elif cfg.quantity == "vacuum":
        results, _, _ = compute_vacuum(point, samples=False)
    else:
        results, _ = compute_mode_torque(point)
        results = {k: v for k, v in results.items() if k != "components"}
    return point, results


def run_sweep(cfg, workers):
    axes = cfg.sweep or ()
    grids = [[(ax.name, float(v)) for v in ax.values()] for ax in axes]
    points = [dict(combo) for combo in product(*grids)] if grids else [{}]
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        rows = list(pool.map(lambda v: _sweep_point(cfg, v), points))
    input_keys = [k for k, v in cfg.to_dict().items() if k != "sweep"]
    out_keys = list(rows[0][1].keys())
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(input_keys + [f"result.{k}" for k in out_keys])
    for point, results in rows:
        d = point.to_dict()
        w.writerow([fmt(d[k]) for k in input_keys] + [fmt(results[k]) for k in out_keys])
    return buf.getvalue()


# argument handling -----------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="casimir-spin",
        description="Vacuum friction torque on a spinning dielectric ellipsoid.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value config file or a JSON report")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="json")
    common.add_argument("--workers", type=int, default=None)
    for flag, attr in OVERRIDES.items():
        common.add_argument(flag, dest=attr, default=None)
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override any config key")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("depol", parents=[common], help="depolarization factors and polarizability")
    sub.add_parser("mode-torque", parents=[common], help="torque for one incident mode")
    vac = sub.add_parser("vacuum", parents=[common], help="Casimir torque over the vacuum spectrum")
    vac.add_argument("--spectrum-out", help="write the sampled integrand as CSV")
    ver = sub.add_parser("verify", parents=[common], help="run every oracle check")
    ver.add_argument("--inject-fault", choices=("none", "prefactor", "sign"), default=None)
    sw = sub.add_parser("sweep", parents=[common], help="parameter sweep to CSV")
    sw.add_argument("--sweep", action="append", default=None,
                    metavar="NAME:START:STOP:COUNT[:linear|log]")
    sw.add_argument("--quantity", choices=("depol", "mode-torque", "vacuum"), default=None)
    return parser


def resolve(args):
    file_values = load_config(args.config) if args.config else {}
    overrides = {attr: getattr(args, attr) for attr in OVERRIDES.values()}
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, val = (s.strip() for s in item.split("=", 1))
        from .config import _KEY_TO_ATTR, _FIELD_TYPES
        attr = _KEY_TO_ATTR.get(key, key)
        if attr not in _FIELD_TYPES:
            raise ConfigError(f"--set: unknown key {key!r}")
        overrides[attr] = val
    if getattr(args, "sweep", None):
        overrides["sweep"] = ", ".join(args.sweep)
    if getattr(args, "quantity", None):
        overrides["quantity"] = args.quantity
    if getattr(args, "inject_fault", None):
        overrides["inject_fault"] = args.inject_fault
    return build_config(file_values, overrides)


def worker_count(args):
    if args.workers is not None:
        return args.workers
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV} must be an integer, got {env!r}") from None
    return 1


def dispatch(args):
    cfg = resolve(args)
    workers = worker_count(args)
    handle = open_output(args.out)
    try:
        if args.command == "depol":
            results, checks = compute_depol(cfg)
            emit(render(report(cfg, results, checks), args.format), handle)
        elif args.command == "mode-torque":
            results, checks = compute_mode_torque(cfg)
            emit(render(report(cfg, results, checks), args.format), handle)
        elif args.command == "vacuum":
            results, checks, samples = compute_vacuum(cfg)
            if args.spectrum_out:
                write_spectrum(args.spectrum_out, samples)
            emit(render(report(cfg, results, checks), args.format), handle)
        elif args.command == "verify":
            checks = run_checks(seed=cfg.seed, fault=cfg.inject_fault)
            results = {
                "eq5_prefactor": EQ5_PREFACTOR,
                "stress_prefactor": STRESS_PREFACTOR,
                "torque_prefactor": TORQUE_PREFACTOR,
                "all_passed": all(c["passed"] for c in checks.values()),
            }
            emit(render(report(cfg, results, checks), args.format), handle)
            if not results["all_passed"]:
                failed = [k for k, c in checks.items() if not c["passed"]]
                raise OracleFailure("failed checks: " + ", ".join(failed))
        elif args.command == "sweep":
            emit(run_sweep(cfg, workers), handle)
    finally:
        if handle is not None and not handle.closed:
            handle.close()
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return dispatch(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConsistencyError, OracleFailure) as exc:
        print(f"oracle failure: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except (PhysicsDomainError, QuadratureError) as exc:
        print(f"physics error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
