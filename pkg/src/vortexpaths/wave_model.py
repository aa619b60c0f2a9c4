"""Linear waves on a constant-vorticity current, in physical variables.

Two linearizations are supported.  ``STILL_WATER`` expands about water at
rest with the vorticity scaled by the amplitude parameter; ``SHEAR_FLOW``
expands about the laminar current ``u = omega0 z + alpha sqrt(g h0)`` and
keeps the vorticity at full size.  Both lead to the same velocity field

    u = A cosh(k z) cos(k (x - c t)) + B z + C
    v = A sinh(k z) sin(k (x - c t))

and differ only in the coefficients, the wave speed and the pressure.
The water density is 1 throughout, so pressures are in m^2/s^2 per unit
density (reported as Pa for rho = 1).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .errors import DomainError, ValidationError


class Linearization(enum.Enum):
    STILL_WATER = "still"
    SHEAR_FLOW = "shear"


class RootSign(enum.IntEnum):
    PLUS = 1
    MINUS = -1


@dataclass(frozen=True)
class WaveParameters:
    g: float
    h0: float
    k: float
    epsilon: float
    omega0: float = 0.0
    alpha: float = 0.0
    c_bg: float = 0.0
    p0: float = 101325.0
    linearization: Linearization = Linearization.SHEAR_FLOW
    root_sign: RootSign = RootSign.PLUS

    def __post_init__(self) -> None:
        for name in ("g", "h0", "k"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be a positive finite number, got {value!r}")
        if not (0 < self.epsilon < 1):
            raise ValidationError(
                f"epsilon must satisfy 0 < epsilon < 1 (small amplitude), got {self.epsilon!r}"
            )
        for name in ("omega0", "alpha", "c_bg", "p0"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")
        object.__setattr__(self, "linearization", Linearization(self.linearization))
        object.__setattr__(self, "root_sign", RootSign(self.root_sign))

    @property
    def wavelength(self) -> float:
        return 2 * math.pi / self.k

    @property
    def shallow_speed(self) -> float:
        return math.sqrt(self.g * self.h0)

    def with_C_equal_c(self) -> WaveParameters:
        """Return a copy whose background constant makes ``C == c``.

        This is the choice under which the odd powers of the trajectory
        radicand vanish and the elliptic reduction becomes available.
        """
        c = wave_speed(self)
        root = self.shallow_speed
        if self.linearization is Linearization.STILL_WATER:
            c_bg = c / (self.epsilon * root)
        else:
            c_bg = (c - self.alpha * root) / (self.epsilon * root)
        return replace(self, c_bg=c_bg)


@dataclass(frozen=True)
class VelocityCoefficients:
    """The quintuple that fully determines the particle dynamics."""

    A: float
    B: float
    C: float
    c: float
    k: float

    def phase(self, x, t):
        return self.k * (np.asarray(x) - self.c * np.asarray(t))


class FieldSample(NamedTuple):
    eta: float
    p: float
    u: float
    v: float


def _relative_speed(params: WaveParameters) -> float:
    # c - h0*omega0 - alpha*sqrt(g h0): root of k r^2 + omega0 tanh(kh0) r - g tanh(kh0) = 0.
    # Written so that neither branch suffers cancellation.
    k = params.k
    th = math.tanh(k * params.h0)
    b = params.omega0 * th
    d = 4.0 * params.g * k * th
    root = math.sqrt(b * b + d)
    s = int(params.root_sign)
    if s * b <= 0:
        return (-b + s * root) / (2 * k)
    return d / (2 * k * (b + s * root))


def wave_speed_still(params: WaveParameters) -> float:
    """``c = ±sqrt(g tanh(k h0) / k)``; the minus sign gives a left-going wave."""
    return int(params.root_sign) * math.sqrt(params.g * math.tanh(params.k * params.h0) / params.k)


def wave_speed_shear(params: WaveParameters) -> float:
    return params.h0 * params.omega0 + params.alpha * params.shallow_speed + _relative_speed(params)


def wave_speed(params: WaveParameters) -> float:
    if params.linearization is Linearization.STILL_WATER:
        return wave_speed_still(params)
    return wave_speed_shear(params)


def coefficients(params: WaveParameters) -> VelocityCoefficients:
    k, h0, eps = params.k, params.h0, params.epsilon
    root = params.shallow_speed
    if params.linearization is Linearization.STILL_WATER:
        c = wave_speed_still(params)
        A = eps * k * h0 * c / math.sinh(k * h0)
        B = eps * params.omega0
        C = eps * root * params.c_bg
    else:
        rel = _relative_speed(params)
        c = h0 * params.omega0 + params.alpha * root + rel
        A = eps * k * h0 * rel / math.sinh(k * h0)
        B = params.omega0
        C = params.alpha * root + eps * root * params.c_bg
    return VelocityCoefficients(A=float(A), B=float(B), C=float(C), c=float(c), k=float(k))


def velocity_field(coeffs: VelocityCoefficients, x, z, t):
    """Return ``(u, v)``; broadcasts over array arguments."""
    X = coeffs.phase(x, t)
    kz = coeffs.k * np.asarray(z, dtype=float)
    u = coeffs.A * np.cosh(kz) * np.cos(X) + coeffs.B * np.asarray(z) + coeffs.C
    v = coeffs.A * np.sinh(kz) * np.sin(X)
    return u, v


def surface_elevation(params: WaveParameters, c: float, x, t):
    return params.epsilon * params.h0 * np.cos(params.k * (np.asarray(x) - c * np.asarray(t)))


def pressure_field(params: WaveParameters, coeffs: VelocityCoefficients, x, z, t):
    k, h0, g, eps = params.k, params.h0, params.g, params.epsilon
    z = np.asarray(z, dtype=float)
    cos_phase = np.cos(coeffs.phase(x, t))
    hydrostatic = params.p0 + g * (h0 - z)
    if params.linearization is Linearization.STILL_WATER:
        wave = eps * g * h0 * np.cosh(k * z) * cos_phase / math.cosh(k * h0)
    else:
        root = params.shallow_speed
        rel = coeffs.c - h0 * params.omega0 - root * params.alpha
        local = coeffs.c - params.omega0 * z - root * params.alpha
        bracket = k * h0 * local * np.cosh(k * z) + h0 * params.omega0 * np.sinh(k * z)
        wave = eps * rel / math.sinh(k * h0) * bracket * cos_phase
    return hydrostatic + wave


def field_sample(params: WaveParameters, x: float, z: float, t: float) -> FieldSample:
    coeffs = coefficients(params)
    u, v = velocity_field(coeffs, x, z, t)
    return FieldSample(
        eta=float(surface_elevation(params, coeffs.c, x, t)),
        p=float(pressure_field(params, coeffs, x, z, t)),
        u=float(u),
        v=float(v),
    )
