"""Command-line entry point ``vortexpaths``.

Exit status: 0 success, 1 invalid input, 2 numerical failure, 3 file I/O.
The log level comes from ``VORTEXPATHS_LOG`` (error, warn, info, debug).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import presets
from .config import RunConfig, config_from_dict, parse_config
from .errors import NumericalError, OutputError, ValidationError, VortexPathsError
from .output import write_csv, write_svg
from .special_functions import CaseTag, OneReal, classify_case
from .stagnation import field_stagnation, find_z_stagnation
from .trajectory import beta_from_initial, solve
from .wave_model import pressure_field, surface_elevation, velocity_field

log = logging.getLogger("vortexpaths")

LOG_LEVELS = {
    "error": logging.ERROR,
    "warn": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}

SUBCOMMANDS = ("speed", "field", "trajectory", "stagnation", "reproduce")

TRAJECTORY_HEADER = ["t", "x", "z", "u", "v", "X", "Z", "method"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="vortexpaths", description="Particle paths under linear waves on a shear current.")
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--preset", choices=sorted(presets.PRESETS), help="published parameter set")
    p.add_argument("--out", help="output path prefix")
    p.add_argument("--svg", action="store_true", help="also write an SVG of the path")
    return p


def _setup_logging() -> None:
    name = os.environ.get("VORTEXPATHS_LOG", "warn").strip().lower()
    if name not in LOG_LEVELS:
        raise ValidationError(f"VORTEXPATHS_LOG must be one of {sorted(LOG_LEVELS)}, got {name!r}")
    root = logging.getLogger("vortexpaths")
    root.handlers.clear()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("vortexpaths: %(levelname)s: %(message)s"))
    root.addHandler(handler)
    root.setLevel(LOG_LEVELS[name])
    root.propagate = False


def load_config(args) -> RunConfig:
    doc = presets.preset(args.preset) if args.preset else {}
    if args.config:
        path = Path(args.config)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise OutputError(path, exc.strerror or str(exc)) from exc
        except UnicodeDecodeError as exc:
            raise ValidationError(f"{path}: not UTF-8 text") from exc
        if not doc:
            return parse_config(text)
        try:
            extra = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: malformed JSON: {exc}") from exc
        if not isinstance(extra, dict):
            raise ValidationError(f"{path}: top level must be a JSON object")
        doc.update(extra)
    if not doc:
        raise ValidationError("give --config or --preset")
    return config_from_dict(doc)


def _prefix(args, cfg: RunConfig, default: str | None = None) -> str:
    if args.out:
        return args.out
    return default if default is not None else cfg.output


# ------------------------------------------------------------ commands


def cmd_speed(cfg: RunConfig, args) -> None:
    c = cfg.coeffs
    for name in ("c", "A", "B", "C"):
        print(f"{name} = {getattr(c, name):.17g}")


def cmd_field(cfg: RunConfig, args) -> None:
    params, coeffs, grid = cfg.params, cfg.coeffs, cfg.field
    x_min = 0.0 if grid.x_min is None else grid.x_min
    x_max = params.wavelength if grid.x_max is None else grid.x_max
    z_max = params.h0 * (1.0 + params.epsilon) if grid.z_max is None else grid.z_max
    xs = np.linspace(x_min, x_max, grid.nx)
    zs = np.linspace(0.0, z_max, grid.nz)
    X, Zg = np.meshgrid(xs, zs, indexing="ij")
    u, v = velocity_field(coeffs, X, Zg, grid.t)
    p = pressure_field(params, coeffs, X, Zg, grid.t)
    eta = surface_elevation(params, coeffs.c, X, grid.t)
    inside = Zg <= params.h0 + eta
    rows = zip(X.ravel(), Zg.ravel(), u.ravel(), v.ravel(), p.ravel(), eta.ravel(), inside.ravel())
    path = write_csv(rows, ["x", "z", "u", "v", "p", "eta", "in_column"], f"{_prefix(args, cfg)}_field.csv")
    log.info("wrote %s", path)


def _trajectory(cfg: RunConfig):
    times = np.linspace(0.0, cfg.t_end, cfg.n_samples)
    initial = None
    if cfg.initial is not None:
        x0, z0, sign = cfg.initial
        initial = (x0, z0)
        if sign is not None:
            c = cfg.coeffs
            expected = int(np.sign(c.A * math.sin(c.k * x0)))
            if sign != expected:
                raise ValidationError(f"initial.sign = {sign} but the flow gives dz/dt sign {expected}")
    return solve(
        cfg.coeffs, times, beta=cfg.beta, initial=initial, method=cfg.method,
        z_hi=cfg.scan_top, n_scan=cfg.n_scan, tol=cfg.tol, peakon=cfg.peakon,
    )


def _write_trajectory(traj, prefix: str, svg: bool) -> None:
    u, v = traj.velocity()
    rows = zip(traj.t, traj.x, traj.z, u, v, traj.X, traj.Z, [traj.method.value] * traj.t.size)
    log.info("wrote %s", write_csv(rows, TRAJECTORY_HEADER, f"{prefix}_trajectory.csv"))
    if svg:
        log.info("wrote %s", write_svg(np.column_stack([traj.x, traj.z]), f"{prefix}_trajectory.svg"))
    d = traj.diagnostics
    if d.drift is not None:
        log.info("drift per period %.12g m (period %.12g s)", d.drift, d.orbit.period)


def cmd_trajectory(cfg: RunConfig, args) -> None:
    traj = _trajectory(cfg)
    _write_trajectory(traj, _prefix(args, cfg), args.svg or cfg.emit_svg)
    print(f"method = {traj.method.value}")


def _beta(cfg: RunConfig) -> float:
    if cfg.beta is not None:
        return cfg.beta
    if cfg.initial is not None:
        c = cfg.coeffs
        x0, z0, _ = cfg.initial
        return beta_from_initial(c, c.k * x0, c.k * z0)
    raise ValidationError("stagnation needs beta or an initial position")


def cmd_stagnation(cfg: RunConfig, args) -> None:
    coeffs, beta = cfg.coeffs, _beta(cfg)
    roots = find_z_stagnation(beta, coeffs, cfg.scan_top, cfg.n_scan)
    rows = [(r.Z, r.Z / coeffs.k, r.kind.value, r.residual) for r in roots]
    path = write_csv(rows, ["Z", "z", "kind", "residual"], f"{_prefix(args, cfg)}_stagnation.csv")
    log.info("wrote %s", path)
    for X, z in field_stagnation(coeffs, cfg.scan_top / coeffs.k, cfg.n_scan):
        log.info("velocity-field stagnation point at X = %.6g, z = %.12g", X, z)
    print(f"roots = {len(roots)}")


def _compare(name, computed, spec):
    value, tol, mode = spec
    err = abs(computed - value) if mode == "abs" else abs(computed - value) / abs(value)
    return (name, computed, value, tol, mode, err <= tol)


def reproduce_summary(name: str, cfg: RunConfig):
    """Rows comparing computed quantities with the printed ones."""
    coeffs = cfg.coeffs
    printed = presets.PRINTED[name]
    rows = [_compare(q, getattr(coeffs, q), printed[q]) for q in ("c", "A", "B")]
    red = classify_case(coeffs, cfg.beta, 6, cfg.scan_top)
    if isinstance(red.roots, OneReal):
        R = math.sqrt(red.roots.z0 ** 2 + red.roots.p * red.roots.z0 + red.roots.q)
        computed = {"Z0": red.roots.z0, "p": red.roots.p, "q": red.roots.q, "threshold": (R - red.roots.z0) / (R + red.roots.z0)}
        rows += [_compare(q, computed[q], printed[q]) for q in ("Z0", "p", "q", "threshold") if q in printed]
    verdict = red.case.value if red.case is CaseTag.HYPERELLIPTIC_ONLY else type(red.roots).__name__
    expected = presets.PRINTED_CASE[name]
    rows.append(("classification", verdict, expected, "", "exact", verdict == expected))
    return rows, red


def cmd_reproduce(cfg: RunConfig, args) -> None:
    if not args.preset:
        raise ValidationError("reproduce needs --preset")
    name = args.preset
    prefix = _prefix(args, cfg, default=name)
    rows, red = reproduce_summary(name, cfg)
    header = ["quantity", "computed", "printed", "tolerance", "mode", "pass"]
    log.info("wrote %s", write_csv(rows, header, f"{prefix}_summary.csv"))
    for q, comp, ref, _, _, ok in rows:
        comp_s = f"{comp:.6g}" if isinstance(comp, float) else str(comp)
        print(f"{q:15s} computed {comp_s:>14s}  printed {ref!s:>18s}  {'ok' if ok else 'MISMATCH'}")
    print(f"case = {red.case.value}")
    if name in presets.FIGURE_PRESETS:
        traj = _trajectory(cfg)
        _write_trajectory(traj, prefix, args.svg or cfg.emit_svg)
        print(f"method = {traj.method.value}")
    if not all(r[-1] for r in rows):
        raise NumericalError("computed values disagree with the printed ones")


COMMANDS = {
    "speed": cmd_speed,
    "field": cmd_field,
    "trajectory": cmd_trajectory,
    "stagnation": cmd_stagnation,
    "reproduce": cmd_reproduce,
}


def main(argv=None) -> int:
    try:
        _setup_logging()
        args = build_parser().parse_args(argv)
        cfg = load_config(args)
        COMMANDS[args.subcommand](cfg, args)
    except ValidationError as exc:
        print(f"vortexpaths: invalid input: {exc}", file=sys.stderr)
        return 1
    except OutputError as exc:
        print(f"vortexpaths: I/O error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"vortexpaths: I/O error: {exc}", file=sys.stderr)
        return 3
    except (NumericalError, VortexPathsError) as exc:
        print(f"vortexpaths: numerical failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
