"""Stagnation candidates: heights where ``|k A sinh Z| = |Q(Z)|``.

These are the zeros of the radicand ``F`` of the height equation.  A simple
zero is a turning point (``dZ/dt`` vanishes and reverses); a double zero is
an equilibrium of the moving-frame flow, where the particle velocity is
exactly ``(c, 0)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ValidationError
from .trajectory import DEFAULT_N_SCAN, orbit_q, radicand, radicand_derivative, radicand_scale
from .wave_model import VelocityCoefficients

MIN_SCAN = 256
ROOT_TOL = 1e-10


class StagnationKind(enum.Enum):
    TURNING_POINT = "TurningPoint"
    EQUILIBRIUM = "Equilibrium"


@dataclass(frozen=True)
class StagnationRoot:
    Z: float
    residual: float
    kind: StagnationKind
    F_derivative: float


class FieldStagnationPoint(NamedTuple):
    X: float
    z: float


def stagnation_residual(Z, beta: float, coeffs: VelocityCoefficients):
    """``f(Z) = |k A sinh Z| - |2 beta - k (C - c) Z - B Z^2 / 2|``."""
    Z = np.asarray(Z, dtype=float)
    return np.abs(coeffs.k * coeffs.A * np.sinh(Z)) - np.abs(orbit_q(Z, coeffs, beta))


def _bisect(f, a, b):
    fa = f(a)
    for _ in range(200):
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = f(m)
        if fm == 0:
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    fa, fb = abs(f(a)), abs(f(b))
    return a if fa <= fb else b


def _golden_extremum(f, a, b, maximize):
    # extremum of a unimodal f on [a, b]
    sgn = -1.0 if maximize else 1.0
    g = 0.5 * (math.sqrt(5.0) - 1.0)
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = sgn * f(c), sgn * f(d)
    for _ in range(200):
        if b - a <= 4e-16 * max(1.0, abs(b)):
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = sgn * f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = sgn * f(d)
    return 0.5 * (a + b)


def _scan_roots(f, lo, hi, n_scan, gate):
    """Sign changes and tangential touches of ``f`` on ``[lo, hi]``."""
    grid = np.linspace(lo, hi, int(n_scan) + 1)
    vals = np.asarray(f(grid), dtype=float)
    roots = [float(g) for g, v in zip(grid, vals) if v == 0.0]
    s = np.sign(vals)
    for i in np.nonzero(s[:-1] * s[1:] < 0)[0]:
        roots.append(_bisect(lambda z: float(f(z)), float(grid[i]), float(grid[i + 1])))
    # local extrema that approach zero without crossing it
    for i in range(1, grid.size - 1):
        left, mid, right = vals[i - 1], vals[i], vals[i + 1]
        if mid == 0 or s[i - 1] != s[i] or s[i] != s[i + 1]:
            continue
        is_max = mid >= left and mid >= right and mid < 0
        is_min = mid <= left and mid <= right and mid > 0
        if not (is_max or is_min):
            continue
        z = _golden_extremum(lambda q: float(f(q)), float(grid[i - 1]), float(grid[i + 1]), is_max)
        if abs(float(f(z))) <= gate(z):
            roots.append(z)
    roots.sort()
    out = []
    for r in roots:
        if not out or r - out[-1] > 1e-12 * max(1.0, abs(r)):
            out.append(r)
    return out


def find_z_stagnation(
    beta: float,
    coeffs: VelocityCoefficients,
    Z_hi: float,
    n_scan: int = DEFAULT_N_SCAN,
) -> list[StagnationRoot]:
    """All roots of the stagnation equation on ``[0, Z_hi]``, classified."""
    if not Z_hi > 0:
        raise ValidationError("Z_hi must be positive")
    if n_scan < MIN_SCAN:
        raise ValidationError(f"n_scan must be at least {MIN_SCAN}")

    def f(Z):
        return stagnation_residual(Z, beta, coeffs)

    def gate(Z):
        return ROOT_TOL * float(radicand_scale(Z, coeffs, beta))

    out = []
    for Z in _scan_roots(f, 0.0, float(Z_hi), n_scan, gate):
        scale = float(radicand_scale(Z, coeffs, beta))
        dF = float(radicand_derivative(Z, coeffs, beta))
        kind = StagnationKind.EQUILIBRIUM if abs(dF) <= 1e-6 * scale else StagnationKind.TURNING_POINT
        out.append(StagnationRoot(Z, abs(float(f(Z))), kind, dF))
    return out


def radicand_at(root: StagnationRoot, beta: float, coeffs: VelocityCoefficients) -> float:
    return float(radicand(root.Z, coeffs, beta))


def field_stagnation(
    coeffs: VelocityCoefficients,
    z_hi: float,
    n_scan: int = DEFAULT_N_SCAN,
) -> list[FieldStagnationPoint]:
    """Points with ``u = c`` and ``v = 0`` above the bed.

    ``v`` vanishes off the bed only where ``sin X = 0``; on those two lines
    ``u - c = +-A cosh(k z) + B z + C - c`` is solved for ``z`` in
    ``(0, z_hi]``.
    """
    if not z_hi > 0:
        raise ValidationError("z_hi must be positive")
    out = []
    for X, sgn in ((0.0, 1.0), (math.pi, -1.0)):
        def g(z, sgn=sgn):
            z = np.asarray(z, dtype=float)
            return sgn * coeffs.A * np.cosh(coeffs.k * z) + coeffs.B * z + coeffs.C - coeffs.c

        def gate(z, sgn=sgn):
            return ROOT_TOL * max(1.0, abs(coeffs.A) * math.cosh(coeffs.k * z) + abs(coeffs.B * z)
                                  + abs(coeffs.C - coeffs.c))

        for z in _scan_roots(g, 0.0, float(z_hi), n_scan, gate):
            if z > 0:
                out.append(FieldStagnationPoint(X, z))
    return out


def count_roots(beta: float, coeffs: VelocityCoefficients, Z_hi: float, n_scan: int = DEFAULT_N_SCAN) -> int:
    return len(find_z_stagnation(beta, coeffs, Z_hi, n_scan))
