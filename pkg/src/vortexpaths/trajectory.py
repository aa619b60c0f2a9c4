"""Particle paths ``dx/dt = u(x, z, t)``, ``dz/dt = v(x, z, t)``.

Three independent routes are provided and cross-check each other:

* adaptive Runge-Kutta integration of the path equations,
* numerical inversion of the separable height equation
  ``(dZ/dt)^2 = F(Z)`` in the moving frame ``X = k (x - c t)``, ``Z = k z``,
* the Jacobi-elliptic closed form of the sixth-order truncation of ``F``.

In the moving frame the motion conserves
``psi = k A sinh Z cos X + B Z^2 / 2 + k (C - c) Z`` and ``beta = psi / 2``.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ._backend import kernels
from .errors import (
    AsymptoteError,
    BranchAmbiguityError,
    NoOrbitError,
    NumericalError,
    OutOfValidityWindowError,
    PeakonValidityError,
    PreconditionError,
    StepSizeUnderflowError,
    ValidationError,
)
from .special_functions import (
    CaseTag,
    EllipticReduction,
    classify_case,
    elliptic_K,
    jacobi_sn_cn_dn,
    sextic_coefficients,
)
from .wave_model import VelocityCoefficients, WaveParameters

log = logging.getLogger(__name__)

DEFAULT_N_SCAN = 4096


class TrajectoryState(NamedTuple):
    t: float
    x: float
    z: float


class MovingFrameState(NamedTuple):
    X: float
    Z: float


class Method(enum.Enum):
    REFERENCE_ODE = "ReferenceODE"
    QUADRATURE = "Quadrature"
    ELLIPTIC_CLOSED_FORM = "EllipticClosedForm"
    PEAKON = "Peakon"


def default_z_hi(params: WaveParameters) -> float:
    """Upper end of the ``Z`` scan: a little above the disturbed surface."""
    return params.k * params.h0 * (1.0 + params.epsilon) + 2.0


# ------------------------------------------------------------- radicand


def _sinh_sq(Z, order):
    Z = np.asarray(Z, dtype=float)
    if order is None:
        return np.sinh(Z) ** 2
    n = np.arange(1, order // 2 + 1)
    c = np.array([2.0 ** (2 * j - 1) / math.factorial(2 * j) for j in n])
    Z2 = Z * Z
    out = np.zeros_like(Z2)
    for cj in c[::-1]:
        out = (out + cj) * Z2
    return out


def orbit_q(Z, coeffs: VelocityCoefficients, beta: float):
    """``Q(Z) = 2 beta - k (C - c) Z - B Z^2 / 2``, equal to ``k A sinh Z cos X``."""
    Z = np.asarray(Z, dtype=float)
    return 2.0 * beta - coeffs.k * (coeffs.C - coeffs.c) * Z - 0.5 * coeffs.B * Z * Z


def radicand(Z, coeffs: VelocityCoefficients, beta: float, order: int | None = None):
    """``F(Z) = k^2 A^2 sinh^2 Z - Q(Z)^2``; ``order`` truncates ``sinh^2``.

    The full form is evaluated as a product of two factors so that it keeps
    relative accuracy near its zeros.
    """
    q = orbit_q(Z, coeffs, beta)
    if order is None:
        s = coeffs.k * coeffs.A * np.sinh(np.asarray(Z, dtype=float))
        return (s - q) * (s + q)
    if order < 4 or order % 2:
        raise ValidationError(f"order must be an even integer >= 4, got {order!r}")
    return (coeffs.k * coeffs.A) ** 2 * _sinh_sq(Z, order) - q * q


def radicand_derivative(Z, coeffs: VelocityCoefficients, beta: float, order: int | None = None):
    Z = np.asarray(Z, dtype=float)
    kA2 = (coeffs.k * coeffs.A) ** 2
    q = orbit_q(Z, coeffs, beta)
    dq = -coeffs.k * (coeffs.C - coeffs.c) - coeffs.B * Z
    if order is None:
        ds = kA2 * np.sinh(2.0 * Z)
    else:
        h = 1e-6 * np.maximum(1.0, np.abs(Z))
        ds = kA2 * (_sinh_sq(Z + h, order) - _sinh_sq(Z - h, order)) / (2 * h)
    return ds - 2.0 * q * dq


def radicand_scale(Z, coeffs: VelocityCoefficients, beta: float, order: int | None = None):
    """Magnitude of the two terms of ``F``, for relative tolerances."""
    kA2 = (coeffs.k * coeffs.A) ** 2
    return np.maximum(1.0, kA2 * _sinh_sq(Z, order) + orbit_q(Z, coeffs, beta) ** 2)


# ------------------------------------------------------------ data types


@dataclass(frozen=True)
class ZOrbit:
    """A bounded oscillation of ``Z`` between two simple zeros of ``F``.

    ``order`` is ``None`` for the full radicand or the truncation order.
    ``winding`` counts how many turns of ``2 pi`` the phase ``X`` makes per
    period (0 for an orbit that closes in the moving frame).
    """

    beta: float
    z_min: float
    z_max: float
    period: float
    coeffs: VelocityCoefficients
    order: int | None = None
    winding: int = 0

    def radicand(self, Z):
        return radicand(Z, self.coeffs, self.beta, self.order)


@dataclass
class Diagnostics:
    beta: float | None = None
    orbit: ZOrbit | None = None
    drift: float | None = None
    case: CaseTag | None = None
    truncation_gap: float | None = None
    steps: int | None = None
    residual: float | None = None
    notes: list[str] = field(default_factory=list)


@dataclass
class Trajectory:
    """Sampled path; ``Z`` and ``dZdt`` are the moving-frame height and its rate."""

    t: np.ndarray
    x: np.ndarray
    z: np.ndarray
    method: Method
    coeffs: VelocityCoefficients
    dZdt: np.ndarray | None = None
    diagnostics: Diagnostics = field(default_factory=Diagnostics)

    def __post_init__(self) -> None:
        self.t = np.asarray(self.t, dtype=float)
        self.x = np.asarray(self.x, dtype=float)
        self.z = np.asarray(self.z, dtype=float)
        if self.t.size > 1 and not np.all(np.diff(self.t) > 0):
            raise ValidationError("trajectory times must be strictly increasing")

    @property
    def samples(self) -> list[TrajectoryState]:
        return [TrajectoryState(*row) for row in zip(self.t.tolist(), self.x.tolist(), self.z.tolist())]

    @property
    def X(self) -> np.ndarray:
        return self.coeffs.k * (self.x - self.coeffs.c * self.t)

    @property
    def Z(self) -> np.ndarray:
        return self.coeffs.k * self.z

    def velocity(self):
        X = self.X
        kz = self.Z
        c = self.coeffs
        return (c.A * np.cosh(kz) * np.cos(X) + c.B * self.z + c.C, c.A * np.sinh(kz) * np.sin(X))


def _as_times(times) -> np.ndarray:
    t = np.atleast_1d(np.asarray(times, dtype=float))
    if t.ndim != 1 or t.size == 0:
        raise ValidationError("times must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(t)):
        raise ValidationError("times must be finite")
    if t.size > 1 and not np.all(np.diff(t) > 0):
        raise ValidationError("times must be strictly increasing")
    return t


# ------------------------------------------------------------ ODE route


def ode_rhs(coeffs: VelocityCoefficients, state: TrajectoryState):
    """``(dx/dt, dz/dt)`` at ``state``; broadcasts over arrays."""
    t, x, z = state
    X = coeffs.k * (np.asarray(x) - coeffs.c * np.asarray(t))
    kz = coeffs.k * np.asarray(z, dtype=float)
    return (
        coeffs.A * np.cosh(kz) * np.cos(X) + coeffs.B * np.asarray(z) + coeffs.C,
        coeffs.A * np.sinh(kz) * np.sin(X),
    )


def integrate_reference(
    coeffs: VelocityCoefficients,
    init: TrajectoryState,
    t_end: float | None = None,
    tol: float = 1e-10,
    times=None,
    n_samples: int = 1001,
    max_steps: int = 10_000_000,
) -> Trajectory:
    """Dormand-Prince 5(4) with per-step error control, landing on each sample time.

    Either ``t_end`` (with ``n_samples`` evenly spaced outputs) or an
    explicit increasing ``times`` array starting at or after ``init.t``.
    """
    if not (1e-12 <= tol <= 1e-6):
        raise ValidationError(f"tol must lie in [1e-12, 1e-6], got {tol!r}")
    t0 = float(init.t)
    if times is None:
        if t_end is None or not t_end > t0:
            raise ValidationError("t_end must exceed the initial time")
        if n_samples < 2:
            raise ValidationError("n_samples must be at least 2")
        times = np.linspace(t0, float(t_end), int(n_samples))
    times = _as_times(times)
    if times[0] < t0:
        raise ValidationError("sample times must not precede the initial time")
    xs, zs, steps, status, t_fail = kernels.dopri_diff2(
        coeffs.A, coeffs.B, coeffs.C, coeffs.c, coeffs.k,
        float(init.x), float(init.z), t0, times, tol, tol, int(max_steps),
    )
    if status == 1:
        raise StepSizeUnderflowError(t_fail)
    if status == 2:
        raise NumericalError(f"step budget of {max_steps} exhausted at t = {t_fail!r}")
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(zs))):
        raise NumericalError("integration produced non-finite values")
    _, v = ode_rhs(coeffs, TrajectoryState(times, xs, zs))
    return Trajectory(
        times, xs, zs, Method.REFERENCE_ODE, coeffs,
        dZdt=coeffs.k * v, diagnostics=Diagnostics(steps=int(steps)),
    )


def beta_from_initial(coeffs: VelocityCoefficients, X0: float, Z0: float) -> float:
    """Orbit constant of the particle at phase ``X0`` and height ``Z0``."""
    k = coeffs.k
    return 0.5 * (
        k * coeffs.A * math.cos(X0) * math.sinh(Z0)
        + k * (coeffs.C - coeffs.c) * Z0
        + 0.5 * coeffs.B * Z0 * Z0
    )


def z_rate_squared(Z, orbit: ZOrbit):
    """``(dZ/dt)^2`` on the orbit, i.e. the radicand at ``Z``."""
    return orbit.radicand(Z)


# --------------------------------------------------------- turning points


def _bisect(f, a, b, fa):
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
    return 0.5 * (a + b)


def radicand_roots(coeffs, beta, z_hi, n_scan=DEFAULT_N_SCAN, order=None, extra=()):
    """Sign changes of ``F`` on ``(0, z_hi]``, refined by bisection."""
    if not z_hi > 0:
        raise ValidationError("z_hi must be positive")
    grid = np.linspace(0.0, float(z_hi), int(n_scan) + 1)
    if extra:
        grid = np.unique(np.concatenate([grid, np.asarray(extra, dtype=float)]))
    vals = radicand(grid, coeffs, beta, order)

    def f(z):
        return float(radicand(z, coeffs, beta, order))

    roots = [float(g) for g, v in zip(grid, vals) if v == 0.0]
    s = np.sign(vals)
    for i in np.nonzero(s[:-1] * s[1:] < 0)[0]:
        roots.append(_bisect(f, float(grid[i]), float(grid[i + 1]), float(vals[i])))
    return sorted(roots)


def _winding(coeffs, beta, z_min, z_max, order):
    kA = coeffs.k * coeffs.A
    if kA == 0:
        return 0
    root_s = np.sqrt(_sinh_sq(np.array([z_min, z_max]), order))
    cos_ends = np.sign(orbit_q(np.array([z_min, z_max]), coeffs, beta) / (kA * root_s))
    return int(round(math.copysign(1.0, kA) * (cos_ends[0] - cos_ends[1]) / 2.0))


def turning_points(
    coeffs: VelocityCoefficients,
    beta: float,
    z_hi: float,
    z_start: float | None = None,
    n_scan: int = DEFAULT_N_SCAN,
    order: int | None = None,
) -> tuple[float, float]:
    """Turning points of the orbit through ``z_start`` (or the lowest orbit).

    Raises :class:`NoOrbitError` when ``F`` is not positive between two
    zeros in ``(0, z_hi]``; its ``roots`` attribute lists the zeros found.
    """
    extra = () if z_start is None else (float(z_start),)
    roots = radicand_roots(coeffs, beta, z_hi, n_scan, order, extra)

    def F(z):
        return float(radicand(z, coeffs, beta, order))

    if z_start is None:
        for a, b in zip(roots, roots[1:]):
            if b > a and F(0.5 * (a + b)) > 0:
                return a, b
        raise NoOrbitError("no bounded orbit in the scan range", tuple(roots))

    z0 = float(z_start)
    if not z0 > 0:
        raise ValidationError("z_start must be positive")
    tol = 1e-12 * float(radicand_scale(z0, coeffs, beta, order))
    f0 = F(z0)
    if abs(f0) <= tol:
        slope = float(radicand_derivative(z0, coeffs, beta, order))
        rest = [r for r in roots if abs(r - z0) > 1e-12 * max(1.0, z0)]
        if slope > 0:
            above = [r for r in rest if r > z0]
            if above:
                return z0, above[0]
        elif slope < 0:
            below = [r for r in rest if r < z0]
            if below:
                return below[-1], z0
        raise NoOrbitError(f"z_start = {z0!r} is a zero of F with no bounded orbit", tuple(roots))
    if f0 < 0:
        raise NoOrbitError(f"F < 0 at z_start = {z0!r}; the state is not on this orbit", tuple(roots))
    below = [r for r in roots if r < z0]
    above = [r for r in roots if r > z0]
    if not below or not above:
        raise NoOrbitError("orbit through z_start is unbounded in the scan range", tuple(roots))
    return below[-1], above[0]


# ------------------------------------------------------------ quadrature


def _inv_sqrt_h(theta, radicand_fn, a, b):
    # Z = mid - half cos(theta) maps [0, pi] onto [a, b]; F = H (Z - a)(b - Z)
    half = 0.5 * (b - a)
    Z = 0.5 * (a + b) - half * np.cos(theta)
    gap = (half * np.sin(theta)) ** 2
    H = radicand_fn(Z) / gap
    if np.any(H <= 0):
        H = np.abs(H)
        if np.any(H == 0):
            raise NumericalError("radicand vanishes inside the orbit")
    return 1.0 / np.sqrt(H)


def _dct2(x):
    # sum_j x_j cos(pi k (j + 1/2) / N) through a length-2N FFT
    n = x.size
    y = np.fft.fft(np.concatenate([x, x[::-1]]))[:n]
    return 0.5 * np.real(y * np.exp(-0.5j * math.pi * np.arange(n) / n))


class _TimeMap:
    """Time ``tau(theta)`` to climb from ``z_min`` to ``Z(theta)``.

    With ``Z = mid - half cos(theta)`` the integrand ``1/sqrt(H)`` is an even,
    2 pi periodic, analytic function of ``theta``.  Its cosine series is
    obtained from midpoint samples (which never touch the turning points)
    and integrated term by term.  The number of terms doubles until the
    tail of the series is negligible.
    """

    def __init__(self, radicand_fn, a, b, rtol=1e-14, n_max=1 << 16):
        if not b > a:
            raise ValidationError("need z_min < z_max")
        self.fn, self.a, self.b = radicand_fn, a, b
        self.half = 0.5 * (b - a)
        n = 32
        prev = math.inf
        while True:
            theta = (np.arange(n) + 0.5) * math.pi / n
            g = self.g(theta)
            coef = (2.0 / n) * _dct2(g)
            tail = np.max(np.abs(coef[(3 * n) // 4:])) / abs(coef[0])
            if tail <= rtol:
                break
            # a tail that stops shrinking is the rounding noise of F itself
            if tail <= 1e-8 and tail > 0.25 * prev:
                log.debug("orbit time map at noise floor: series tail %.2e", tail)
                break
            if n >= n_max:
                log.warning("orbit time map not resolved: series tail %.2e", tail)
                break
            prev = tail
            n *= 2
        keep = max(1, int(np.max(np.nonzero(np.abs(coef) > 1e-17 * abs(coef[0]))[0])) + 1)
        self.coef = coef[:keep]
        self.orders = np.arange(keep)

    def g(self, theta):
        return _inv_sqrt_h(theta, self.fn, self.a, self.b)

    def g_series(self, theta):
        theta = np.asarray(theta, dtype=float)
        terms = np.cos(np.multiply.outer(theta, self.orders[1:])) @ self.coef[1:]
        return 0.5 * self.coef[0] + terms

    @property
    def half_period(self):
        return 0.5 * math.pi * float(self.coef[0])

    def tau(self, theta):
        theta = np.asarray(theta, dtype=float)
        n = self.orders[1:]
        terms = np.sin(np.multiply.outer(theta, n)) @ (self.coef[1:] / n)
        return 0.5 * self.coef[0] * theta + terms

    def theta(self, s):
        s = np.clip(np.asarray(s, dtype=float), 0.0, self.half_period)
        th = s * (math.pi / self.half_period)
        for _ in range(60):
            step = (self.tau(th) - s) / self.g_series(th)
            th = np.clip(th - step, 0.0, math.pi)
            if np.all(np.abs(step) <= 4e-16 * math.pi):
                break
        return th

    def theta_of_z(self, Z):
        # half-angle form stays accurate next to both turning points
        return 2.0 * math.atan2(math.sqrt(max(Z - self.a, 0.0)), math.sqrt(max(self.b - Z, 0.0)))


def period_from_radicand(radicand_fn, a: float, b: float) -> float:
    """``2 * integral_a^b dZ / sqrt(F)`` for ``F`` with simple zeros at ``a`` and ``b``."""
    return 2.0 * _TimeMap(radicand_fn, a, b).half_period


def z_period(orbit: ZOrbit) -> float:
    return period_from_radicand(orbit.radicand, orbit.z_min, orbit.z_max)


def find_orbit(
    coeffs: VelocityCoefficients,
    beta: float,
    z_hi: float,
    z_start: float | None = None,
    n_scan: int = DEFAULT_N_SCAN,
    order: int | None = None,
) -> ZOrbit:
    a, b = turning_points(coeffs, beta, z_hi, z_start, n_scan, order)
    T = period_from_radicand(lambda Z: radicand(Z, coeffs, beta, order), a, b)
    return ZOrbit(beta, a, b, T, coeffs, order, _winding(coeffs, beta, a, b, order))


def invert_z_quadrature(orbit: ZOrbit, Z0: float, sign0: int, times):
    """``Z(t)`` and ``dZ/dt`` on the orbit with ``Z(0) = Z0``.

    Half a period climbs from ``z_min`` to ``z_max`` and the other half
    retraces it; the phase is folded into that sawtooth so ``Z`` reflects
    at the turning points.  ``sign0`` is the sign of ``dZ/dt`` at ``t = 0``;
    0 is allowed at a turning point.
    """
    t = np.asarray(times, dtype=float)
    a, b = orbit.z_min, orbit.z_max
    span = b - a
    if not (a - 1e-12 * span <= Z0 <= b + 1e-12 * span):
        raise ValidationError(f"Z0 = {Z0!r} lies outside [{a!r}, {b!r}]")
    qm = _TimeMap(orbit.radicand, a, b)
    half = qm.half_period
    period = 2.0 * half
    s0 = float(qm.tau(np.array([qm.theta_of_z(Z0)]))[0])
    if sign0 == 0:
        sign0 = 1 if Z0 - a <= b - Z0 else -1
    phase0 = s0 if sign0 > 0 else period - s0
    phase = np.mod(phase0 + t, period)
    rising = phase <= half
    s = np.where(rising, phase, period - phase)
    th = qm.theta(s)
    Z = 0.5 * (a + b) - qm.half * np.cos(th)
    rate = qm.half * np.sin(th) / qm.g_series(th)
    dZdt = np.where(rising, rate, -rate)
    return Z, dZdt


# --------------------------------------------------------- elliptic route


def closed_form_z_elliptic(t, reduction: EllipticReduction, direction: int = 1):
    """``(Z, dZ/dt)`` from the Jacobi-elliptic solution of the truncated equation.

    ``t = 0`` is the lower turning point and ``direction = +1`` means
    ``Z`` increases there.  Case 1b and Case 2 only give real ``Z`` inside
    their validity windows; outside it :class:`OutOfValidityWindowError`
    is raised for the first offending time.
    """
    case = reduction.case
    if case not in (CaseTag.CASE1A, CaseTag.CASE1B, CaseTag.CASE2):
        raise PreconditionError(f"no elliptic closed form for {case.value}")
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    d = 1.0 if direction >= 0 else -1.0
    u = d * reduction.scale * t
    sn, cn, dn = jacobi_sn_cn_dn(u, reduction.modulus_sq)
    r = reduction.roots
    if case in (CaseTag.CASE1A, CaseTag.CASE1B):
        z2, z3 = r.z2, r.z3
        if case is CaseTag.CASE1B:
            bad = ~(sn * sn < reduction.validity_threshold)
            if np.any(bad):
                i = int(np.argmax(bad))
                raise OutOfValidityWindowError(
                    float(t[i]), float(sn[i] ** 2), reduction.validity_threshold, "sn^2 <"
                )
        Zh = z2 * sn * sn + z3 * cn * cn
        Z = Zh ** -0.5
        dZdt = d * reduction.scale * (z3 - z2) * sn * cn * dn * Zh ** -1.5
    else:
        bad = ~(cn > reduction.validity_threshold)
        if np.any(bad):
            i = int(np.argmax(bad))
            raise OutOfValidityWindowError(
                float(t[i]), float(cn[i]), reduction.validity_threshold, "cn >"
            )
        R = math.sqrt(r.z0 ** 2 + r.p * r.z0 + r.q)
        Zh = r.z0 - R * (1.0 - cn) / (1.0 + cn)
        Z = Zh ** -0.5
        dZdt = d * reduction.scale * R * sn * dn / ((1.0 + cn) ** 2 * Zh ** 1.5)
    if scalar:
        return float(Z[0]), float(dZdt[0])
    return Z, dZdt


def _polish_zero(coeffs, beta, z, order):
    best, best_f = z, abs(float(radicand(z, coeffs, beta, order)))
    for _ in range(4):
        f = float(radicand(z, coeffs, beta, order))
        df = float(radicand_derivative(z, coeffs, beta, order))
        if df == 0 or f == 0:
            break
        z = z - f / df
        fz = abs(float(radicand(z, coeffs, beta, order)))
        if fz < best_f:
            best, best_f = z, fz
    return best


def elliptic_orbit(coeffs: VelocityCoefficients, reduction: EllipticReduction) -> ZOrbit:
    """Periodic orbit of the truncated equation in Case 1a."""
    if reduction.case is not CaseTag.CASE1A:
        raise PreconditionError("only Case 1a gives a periodic orbit")
    r = reduction.roots
    beta = reduction.beta
    # land the endpoints on zeros of the truncated radicand itself
    a = _polish_zero(coeffs, beta, r.z3 ** -0.5, 6)
    b = _polish_zero(coeffs, beta, r.z2 ** -0.5, 6)
    T = 2.0 * elliptic_K(reduction.modulus_sq) / reduction.scale
    return ZOrbit(beta, a, b, T, coeffs, 6, _winding(coeffs, beta, a, b, 6))


# ---------------------------------------------------------------- peakon


def peakon_trajectory(
    coeffs: VelocityCoefficients,
    t,
    const1: float | None = None,
    const2: float = 0.0,
    sign: int | None = None,
    force: bool = False,
) -> Trajectory:
    """``x = c t + const1``, ``z = (2/k) artanh(exp(-|k A t + const2|))``.

    This solves the path equations only when ``B = 0``, ``C = c`` and
    ``cos(k const1) = 0`` with ``sin(k const1) = -sign(k A t + const2)``.
    With ``const1=None`` the phase is chosen that way on each side of the
    asymptote; ``sign`` fixes it to ``sign * pi / (2k)`` instead.
    The residual of the path equations is stored in the diagnostics.
    """
    k = coeffs.k
    if not force and (coeffs.B != 0 or abs(coeffs.C - coeffs.c) > 1e-12 * max(1.0, abs(coeffs.c))):
        raise PeakonValidityError(
            f"the peakon needs B = 0 and C = c (got B = {coeffs.B!r}, C - c = {coeffs.C - coeffs.c!r})"
        )
    t = _as_times(t)
    s = k * coeffs.A * t + const2
    if np.any(s == 0):
        raise AsymptoteError(f"z is unbounded at t = {float(t[np.argmax(s == 0)])!r}")
    Z = 2.0 * np.arctanh(np.exp(-np.abs(s)))
    if not np.all(np.isfinite(Z)):
        raise AsymptoteError("too close to the asymptote for double precision")
    if const1 is None:
        side = -np.sign(s) if sign is None else np.full_like(s, float(np.sign(sign)))
        c1 = side * 0.5 * math.pi / k
    else:
        c1 = np.full_like(s, float(const1))
    x = coeffs.c * t + c1
    z = Z / k
    dZdt = -np.sign(s) * k * coeffs.A * np.sinh(Z)
    u, v = ode_rhs(coeffs, TrajectoryState(t, x, z))
    res = float(max(np.max(np.abs(coeffs.c - u)), np.max(np.abs(dZdt / k - v))))
    diag = Diagnostics(residual=res)
    if force and res > 1e-10:
        diag.notes.append(f"peakon residual {res:.3e}: not a solution for these coefficients")
    return Trajectory(t, x, z, Method.PEAKON, coeffs, dZdt=dZdt, diagnostics=diag)


def peakon_residual(coeffs: VelocityCoefficients, t, **kwargs) -> float:
    return peakon_trajectory(coeffs, t, force=True, **kwargs).diagnostics.residual


# ------------------------------------------------------ x reconstruction


def reconstruct_x(
    coeffs: VelocityCoefficients,
    t,
    Z,
    dZdt,
    beta: float,
    x_start: float | None = None,
    order: int | None = None,
    check: bool = True,
):
    """Recover ``x(t) = c t + X(t)/k`` from the height history.

    ``sin X`` comes from ``dZ/dt = k A sinh Z sin X``.  The quadrant is
    fixed by the first integral ``k A sinh Z cos X = Q(Z)``, then the
    continuous branch is followed.  When ``check`` is set, the result is
    verified against ``dX/dt = k A cosh Z cos X + B Z + k (C - c)`` by
    finite differences wherever the sampling resolves it.
    """
    t = np.asarray(t, dtype=float)
    Z = np.asarray(Z, dtype=float)
    dZdt = np.asarray(dZdt, dtype=float)
    if np.any(Z <= 0):
        raise ValidationError("reconstruction needs Z > 0")
    kA = coeffs.k * coeffs.A
    if kA == 0:
        raise ValidationError("no phase information when A = 0")
    amp = kA * np.sqrt(_sinh_sq(Z, order))
    s = dZdt / amp
    over = np.abs(s) - 1.0
    if np.any(over > 1e-12):
        i = int(np.argmax(over))
        raise BranchAmbiguityError(f"|sin X| = {abs(s[i])!r} > 1 at t = {float(t[i])!r}")
    s = np.clip(s, -1.0, 1.0)
    cos_sign = np.where(orbit_q(Z, coeffs, beta) / amp >= 0, 1.0, -1.0)
    X = np.unwrap(np.arctan2(s, cos_sign * np.sqrt(1.0 - s * s)))
    if x_start is not None:
        target = coeffs.k * (x_start - coeffs.c * t[0])
        X = X + 2.0 * math.pi * round((target - X[0]) / (2.0 * math.pi))
    if check and order is None and t.size >= 5:
        _check_phase(coeffs, t, Z, X)
    return coeffs.c * t + X / coeffs.k


def _check_phase(coeffs, t, Z, X):
    kA = coeffs.k * coeffs.A
    shear = coeffs.B * Z + coeffs.k * (coeffs.C - coeffs.c)
    rhs = kA * np.cosh(Z) * np.cos(X) + shear
    alt = -kA * np.cosh(Z) * np.cos(X) + shear
    fd = np.gradient(X, t)
    # curvature of rhs bounds the central-difference error
    err = np.zeros_like(rhs)
    err[1:-1] = np.abs(rhs[2:] - 2.0 * rhs[1:-1] + rhs[:-2])
    tol = 2.0 * err + 1e-6 * (1.0 + np.max(np.abs(rhs)))
    # rounding of X over closely spaced samples
    h = np.diff(t)
    h_min = np.full_like(rhs, np.inf)
    h_min[1:-1] = np.minimum(h[:-1], h[1:])
    tol = tol + 8.0 * np.finfo(float).eps * (1.0 + np.abs(X)) / h_min
    inner = slice(1, -1)
    checkable = np.abs(rhs - alt)[inner] > 10.0 * tol[inner]
    bad = checkable & (np.abs(fd - rhs)[inner] > tol[inner])
    if np.any(bad):
        i = int(np.argmax(bad)) + 1
        both = abs(fd[i] - alt[i]) > tol[i]
        raise BranchAmbiguityError(
            f"phase inconsistent with the path equations at t = {float(t[i])!r}"
            + ("" if both else " (the other quadrant fits: beta does not match the data)")
        )


# --------------------------------------------------------------- drift


def drift_per_period(coeffs: VelocityCoefficients, orbit: ZOrbit) -> float:
    """Horizontal advance over one ``Z`` period.

    ``c T`` for an orbit closed in the moving frame; an orbit whose phase
    winds once per period advances a further ``2 pi / k`` per winding.
    """
    return coeffs.c * orbit.period + 2.0 * math.pi * orbit.winding / coeffs.k


# ------------------------------------------------------------- driver


class MethodRequest(enum.Enum):
    AUTO = "auto"
    REFERENCE = "reference"
    QUADRATURE = "quadrature"
    ELLIPTIC = "elliptic"
    PEAKON = "peakon"


def _start_on_orbit(coeffs, orbit: ZOrbit):
    # lower turning point: sin X = 0 and cos X from the first integral
    kA = coeffs.k * coeffs.A
    q = float(orbit_q(orbit.z_min, coeffs, orbit.beta))
    X0 = 0.0 if q * kA >= 0 else math.pi
    return X0, orbit.z_min


def solve(
    coeffs: VelocityCoefficients,
    times,
    *,
    beta: float | None = None,
    initial: tuple[float, float] | None = None,
    method: MethodRequest | str = MethodRequest.AUTO,
    z_hi: float = 10.0,
    n_scan: int = DEFAULT_N_SCAN,
    tol: float = 1e-11,
    peakon: dict | None = None,
) -> Trajectory:
    """One trajectory on the sample ``times`` (the first is the start).

    Give either the orbit constant ``beta`` (the particle then starts at the
    lower turning point of that orbit) or ``initial = (x0, z0)`` in metres.
    """
    method = MethodRequest(method)
    times = _as_times(times)
    t0 = float(times[0])
    k = coeffs.k

    if method is MethodRequest.PEAKON:
        return peakon_trajectory(coeffs, times, **(peakon or {}))
    if beta is None and initial is None:
        raise ValidationError("need beta or an initial position")

    if coeffs.A == 0:
        if initial is None:
            raise ValidationError("with A = 0 the orbit constant does not fix a path; give initial")
        x0, z0 = initial
        x = x0 + (coeffs.B * z0 + coeffs.C) * (times - t0)
        traj = Trajectory(times, x, np.full_like(times, z0), Method.REFERENCE_ODE, coeffs,
                          dZdt=np.zeros_like(times))
        traj.diagnostics.notes.append("A = 0: uniform horizontal motion")
        return traj

    if initial is not None:
        x0, z0 = map(float, initial)
        X0 = k * (x0 - coeffs.c * t0)
        Z0 = k * z0
        b0 = beta_from_initial(coeffs, X0, Z0)
        if beta is not None and abs(b0 - beta) > 1e-9 * max(1.0, abs(beta)):
            raise ValidationError(f"beta = {beta!r} does not match the initial position (beta = {b0!r})")
        beta = b0
        sign0 = int(np.sign(coeffs.A * math.sin(X0)))
        return _from_state(coeffs, times, beta, X0, Z0, sign0, method, z_hi, n_scan, tol)

    # orbit constant only
    if method in (MethodRequest.AUTO, MethodRequest.ELLIPTIC):
        red = classify_case(coeffs, beta, 6, z_hi)
        eligible = red.case in (CaseTag.CASE1A, CaseTag.CASE1B, CaseTag.CASE2)
        if method is MethodRequest.ELLIPTIC and not eligible:
            raise PreconditionError(f"elliptic closed form unavailable: {red.case.value}")
        if eligible:
            try:
                return _elliptic(coeffs, times, red)
            except OutOfValidityWindowError as exc:
                if method is MethodRequest.ELLIPTIC:
                    raise
                log.warning("%s; falling back to quadrature", exc)
    orbit = find_orbit(coeffs, beta, z_hi, None, n_scan)
    X0, Z0 = _start_on_orbit(coeffs, orbit)
    return _from_state(coeffs, times, beta, X0, Z0, 1, method, z_hi, n_scan, tol, orbit)


def _elliptic(coeffs, times, red: EllipticReduction) -> Trajectory:
    t0 = float(times[0])
    Z, dZdt = closed_form_z_elliptic(times - t0, red)
    x = reconstruct_x(coeffs, times, Z, dZdt, red.beta, order=6)
    diag = Diagnostics(beta=red.beta, case=red.case)
    if red.case is CaseTag.CASE1A:
        orbit = elliptic_orbit(coeffs, red)
        diag.orbit = orbit
        diag.drift = drift_per_period(coeffs, orbit)
        try:
            mid = 0.5 * (orbit.z_min + orbit.z_max)
            a, b = turning_points(coeffs, red.beta, 2.0 * orbit.z_max, mid)
            diag.truncation_gap = max(abs(a - orbit.z_min), abs(b - orbit.z_max))
        except NoOrbitError:
            diag.notes.append("full equation has no orbit near the truncated one")
    diag.notes.append("closed form of the sixth-order truncated height equation")
    return Trajectory(times, x, Z / coeffs.k, Method.ELLIPTIC_CLOSED_FORM, coeffs, dZdt=dZdt,
                      diagnostics=diag)


def _from_state(coeffs, times, beta, X0, Z0, sign0, method, z_hi, n_scan, tol, orbit=None):
    k = coeffs.k
    t0 = float(times[0])
    x0 = X0 / k + coeffs.c * t0
    if method in (MethodRequest.AUTO, MethodRequest.QUADRATURE):
        try:
            if orbit is None:
                orbit = find_orbit(coeffs, beta, z_hi, Z0, n_scan)
        except NoOrbitError as exc:
            if method is MethodRequest.QUADRATURE:
                raise
            log.info("%s; using the reference integrator", exc)
        else:
            Z, dZdt = invert_z_quadrature(orbit, Z0, sign0, times - t0)
            x = reconstruct_x(coeffs, times, Z, dZdt, beta, x_start=x0)
            diag = Diagnostics(beta=beta, orbit=orbit, drift=drift_per_period(coeffs, orbit))
            return Trajectory(times, x, Z / k, Method.QUADRATURE, coeffs, dZdt=dZdt, diagnostics=diag)
    if method is MethodRequest.ELLIPTIC:
        raise PreconditionError("elliptic closed form needs the orbit constant, not a start state")
    traj = integrate_reference(coeffs, TrajectoryState(t0, x0, Z0 / k), tol=tol, times=times)
    traj.diagnostics.beta = beta
    return traj
