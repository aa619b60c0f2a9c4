"""Real elliptic functions, real cubics, and the elliptic reductions.

The parameter convention is ``m = k**2`` everywhere.

Along a trajectory with ``C == c`` the squared vertical speed, truncated
at sixth order in ``Z``, is ``Z**6 P(1/Z**2)`` with ``P`` a cubic.  With
``Zh = 1/Z**2`` one gets ``(dZh/dt)**2 = 4 P(Zh)``, which the functions
below bring to Legendre normal form according to the root pattern of ``P``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from math import factorial
from typing import Union

import numpy as np

from ._backend import kernels
from .errors import DegenerateCubicError, DomainError, PreconditionError
from .wave_model import VelocityCoefficients

# Spread-normalized discriminant level below which a cubic is treated as having a
# repeated root.
DOUBLE_ROOT_TOL = 1e-10

# Z above which an elliptic branch is considered outside the water column.
DEFAULT_Z_CEILING = 10.0


def _check_m(m) -> float:
    m = float(m)
    if not (0.0 <= m <= 1.0):
        raise DomainError(f"parameter m must lie in [0, 1], got {m!r}")
    return m


def agm(a: float, b: float) -> float:
    """Arithmetic-geometric mean of two non-negative numbers."""
    if a < 0 or b < 0:
        raise DomainError("agm needs non-negative arguments")
    if a == 0 or b == 0:
        return 0.0
    return kernels.agm(float(max(a, b)), float(min(a, b)))


def elliptic_K(m: float) -> float:
    """Complete integral of the first kind, ``pi / (2 agm(1, sqrt(1 - m)))``."""
    return kernels.ellipk(_check_m(m))


def elliptic_F(phi, m):
    """Incomplete integral of the first kind ``F(phi | m)``.

    Any real ``phi`` is accepted; the result uses
    ``F(phi + pi) = F(phi) + 2 K``.  Arrays are evaluated elementwise.
    """
    m = _check_m(m)
    if np.ndim(phi) == 0:
        return kernels.ellipf(float(phi), m)
    return kernels.ellipf_array(phi, m)


def jacobi_sn_cn_dn(u, m):
    """Return ``(sn, cn, dn)`` of ``u`` for parameter ``m``."""
    m = _check_m(m)
    if np.ndim(u) == 0:
        return kernels.ellipj(float(u), m)
    return kernels.ellipj_array(u, m)


# ---------------------------------------------------------------- cubics


@dataclass(frozen=True)
class ThreeReal:
    z1: float
    z2: float
    z3: float

    @property
    def roots(self) -> tuple[float, float, float]:
        return (self.z1, self.z2, self.z3)


@dataclass(frozen=True)
class OneReal:
    """A real root ``z0`` and the irreducible remainder ``Zh**2 + p Zh + q``."""

    z0: float
    p: float
    q: float


CubicRootsClassification = Union[ThreeReal, OneReal]


def _polish(coefs, x):
    # A few Newton steps on the monic cubic; keep the best residual seen.
    a, b, c = coefs
    best, best_res = x, abs(((x + a) * x + b) * x + c)
    for _ in range(8):
        f = ((x + a) * x + b) * x + c
        df = (3 * x + 2 * a) * x + b
        if df == 0:
            break
        x = x - f / df
        res = abs(((x + a) * x + b) * x + c)
        if res < best_res:
            best, best_res = x, res
        elif res >= best_res:
            break
    return best


def solve_cubic_real(c3: float, c2: float, c1: float, c0: float) -> CubicRootsClassification:
    """Real roots of ``c3 x^3 + c2 x^2 + c1 x + c0``.

    Raises :class:`DegenerateCubicError` when ``c3 == 0`` or the cubic has
    a repeated root: the discriminant of the depressed cubic, divided by
    the sixth power of the root spread, is at most :data:`DOUBLE_ROOT_TOL`.
    """
    if c3 == 0 or not all(math.isfinite(v) for v in (c3, c2, c1, c0)):
        raise DegenerateCubicError("leading coefficient vanishes or coefficients not finite")
    a, b, c = c2 / c3, c1 / c3, c0 / c3

    # root-magnitude scale, so the discriminant test is dimensionless
    s = max(abs(a), math.sqrt(abs(b)), abs(c) ** (1.0 / 3.0))
    if s == 0:
        raise DegenerateCubicError("triple root at zero")
    an, bn, cn = a / s, b / s**2, c / s**3
    p = bn - an * an / 3.0
    q = 2.0 * an**3 / 27.0 - an * bn / 3.0 + cn
    disc = -(4.0 * p**3 + 27.0 * q * q)
    # measure degeneracy against the spread of the roots, not their size,
    # so tightly clustered but distinct roots are not flagged
    spread = max(math.sqrt(abs(p)), abs(q) ** (1.0 / 3.0))
    if spread == 0:
        raise DegenerateCubicError("triple root")
    if abs(disc) / spread**6 <= DOUBLE_ROOT_TOL:
        raise DegenerateCubicError(f"repeated root (normalized discriminant {disc / spread**6:.3e})")

    shift = -an / 3.0
    if disc > 0:
        r = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * r)
        theta = math.acos(max(-1.0, min(1.0, arg))) / 3.0
        ys = [r * math.cos(theta - 2.0 * math.pi * j / 3.0) + shift for j in range(3)]
        xs = sorted(_polish((a, b, c), y * s) for y in ys)
        return ThreeReal(*xs)

    sq = math.sqrt(-disc / 108.0)
    # pick the cube root without cancellation
    w = -0.5 * q - math.copysign(sq, q) if q != 0 else sq
    u = math.copysign(abs(w) ** (1.0 / 3.0), w)
    y = u - p / (3.0 * u) if u != 0 else 0.0
    z0 = _polish((a, b, c), (y + shift) * s)
    P = a + z0
    Q = -c / z0 if abs(z0) > 1.0 else b + z0 * P
    return OneReal(z0=z0, p=P, q=Q)


def cubic_residuals(coefs, roots) -> list[float]:
    c3, c2, c1, c0 = coefs
    return [abs(((c3 * x + c2) * x + c1) * x + c0) for x in roots]


# ------------------------------------------------------- series and cubic


def sextic_coefficients(coeffs: VelocityCoefficients, beta: float, order: int = 6) -> np.ndarray:
    """Power-series coefficients of the radicand, lowest degree first.

    The radicand is ``k^2 A^2 sinh^2 Z - (2 beta - k (C - c) Z - B Z^2 / 2)^2``
    and ``sinh^2`` is expanded up to ``Z**order``.
    """
    if order < 4 or order % 2:
        raise DomainError(f"order must be an even integer >= 4, got {order!r}")
    k, A, B = coeffs.k, coeffs.A, coeffs.B
    d = coeffs.C - coeffs.c
    kA2 = (k * A) ** 2
    out = np.zeros(order + 1)
    out[0] = -4.0 * beta**2
    out[1] = 4.0 * k * d * beta
    out[2] = kA2 + 2.0 * beta * B - (k * d) ** 2
    out[3] = -B * k * d
    out[4] = kA2 / 3.0 - B * B / 4.0
    for n in range(3, order // 2 + 1):
        out[2 * n] = kA2 * 2.0 ** (2 * n - 1) / factorial(2 * n)
    return out


def cubic_in_inverse_square(coeffs: VelocityCoefficients, beta: float) -> tuple[float, float, float, float]:
    """Cubic ``P`` (highest degree first) with ``G(Z) = Z^6 P(1/Z^2)``.

    Only meaningful for ``C == c``, where the odd series terms vanish.
    """
    s = sextic_coefficients(coeffs, beta, 6)
    return (float(s[0]), float(s[2]), float(s[4]), float(s[6]))


# ------------------------------------------------------------ reductions


class CaseTag(enum.Enum):
    CASE1A = "Case1a"
    CASE1B = "Case1b"
    CASE2 = "Case2"
    HYPERELLIPTIC_ONLY = "HyperellipticOnly"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class EllipticReduction:
    """Legendre normal form data.

    ``scale`` multiplies time in the elliptic argument and is kept positive;
    the direction of motion is a separate flag of the caller.
    """

    case: CaseTag
    modulus_sq: float | None
    scale: float | None
    roots: CubicRootsClassification | None
    validity_threshold: float | None = None
    beta: float | None = None


def reduce_case1a(roots: ThreeReal, beta: float) -> EllipticReduction:
    if not isinstance(roots, ThreeReal):
        raise PreconditionError("Case 1a needs three real roots")
    z1, z2, z3 = roots.roots
    if not (0 < z1 < z2 < z3):
        raise PreconditionError(f"Case 1a needs 0 < z1 < z2 < z3, got {roots.roots}")
    if beta == 0:
        raise PreconditionError("beta must be nonzero")
    m = (z3 - z2) / (z3 - z1)
    scale = 2.0 * abs(beta) * math.sqrt(z3 - z1)
    return EllipticReduction(CaseTag.CASE1A, m, scale, roots, None, beta)


# threshold below which the Case 1b window is treated as empty
_EMPTY_WINDOW = 1e-10


def reduce_case1b_or_case2(roots: CubicRootsClassification, beta: float) -> EllipticReduction:
    """Reduction for ``z1 < z2 < 0 < z3`` or for a single real root.

    Case 1b reuses the Case 1a substitution; it gives real ``Z`` only while
    ``sn^2 < validity_threshold``.  Case 2 needs ``cn > validity_threshold``.
    """
    if beta == 0:
        raise PreconditionError("beta must be nonzero")
    if isinstance(roots, ThreeReal):
        z1, z2, z3 = roots.roots
        if not (z1 < z2 < 0 < z3):
            raise PreconditionError(f"Case 1b needs z1 < z2 < 0 < z3, got {roots.roots}")
        threshold = z3 / (z3 - z2)
        m = (z3 - z2) / (z3 - z1)
        scale = 2.0 * abs(beta) * math.sqrt(z3 - z1)
        case = CaseTag.CASE1B if threshold > _EMPTY_WINDOW else CaseTag.HYPERELLIPTIC_ONLY
        return EllipticReduction(case, m, scale, roots, threshold, beta)
    if isinstance(roots, OneReal):
        z0, p, q = roots.z0, roots.p, roots.q
        R = math.sqrt(z0 * z0 + p * z0 + q)
        m = 0.5 * (1.0 + (z0 + 0.5 * p) / R)
        scale = 4.0 * abs(beta) * math.sqrt(R)
        threshold = (R - z0) / (R + z0)
        case = CaseTag.CASE2 if z0 > 0 else CaseTag.HYPERELLIPTIC_ONLY
        return EllipticReduction(case, m, scale, roots, threshold, beta)
    raise PreconditionError(f"unsupported root classification {roots!r}")


def elliptic_z_range(reduction: EllipticReduction) -> tuple[float, float]:
    """Range of ``Z = 1/sqrt(Zh)`` swept by the closed form."""
    r = reduction.roots
    if reduction.case is CaseTag.CASE1A:
        return 1.0 / math.sqrt(r.z3), 1.0 / math.sqrt(r.z2)
    if reduction.case is CaseTag.CASE1B:
        return 1.0 / math.sqrt(r.z3), math.inf
    if reduction.case is CaseTag.CASE2:
        return 1.0 / math.sqrt(r.z0), math.inf
    raise PreconditionError(f"no elliptic range for {reduction.case.value}")


def _is_c_equal_c(coeffs: VelocityCoefficients) -> bool:
    return abs(coeffs.C - coeffs.c) <= 1e-12 * max(1.0, abs(coeffs.c))


def classify_case(
    coeffs: VelocityCoefficients,
    beta: float,
    order: int = 6,
    z_hi: float | None = None,
) -> EllipticReduction:
    """Decide which closed form, if any, applies to the orbit constant ``beta``.

    Returns an :class:`EllipticReduction` whose ``case`` is the tag.  The
    cubic pathway needs ``C == c`` and the sixth-order truncation; anything
    else is ``HYPERELLIPTIC_ONLY``.  So is an elliptic branch that starts
    above ``z_hi`` (in ``Z``), because it never enters the water column.
    """
    if order != 6 or not _is_c_equal_c(coeffs):
        return EllipticReduction(CaseTag.HYPERELLIPTIC_ONLY, None, None, None, None, beta)
    z_hi = DEFAULT_Z_CEILING if z_hi is None else float(z_hi)
    try:
        roots = solve_cubic_real(*cubic_in_inverse_square(coeffs, beta))
    except DegenerateCubicError:
        return EllipticReduction(CaseTag.DEGENERATE, None, None, None, None, beta)
    if isinstance(roots, ThreeReal) and roots.z1 > 0:
        red = reduce_case1a(roots, beta)
    else:
        try:
            red = reduce_case1b_or_case2(roots, beta)
        except PreconditionError:
            return EllipticReduction(CaseTag.HYPERELLIPTIC_ONLY, None, None, roots, None, beta)
    if red.case is CaseTag.HYPERELLIPTIC_ONLY:
        return red
    if elliptic_z_range(red)[0] > z_hi:
        return EllipticReduction(
            CaseTag.HYPERELLIPTIC_ONLY, red.modulus_sq, red.scale, roots, red.validity_threshold, beta
        )
    return red
