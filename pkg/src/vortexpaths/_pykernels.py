"""Pure-Python kernels.

Same API and arithmetic as the compiled ``_kernels`` extension; used when
the extension is not built or ``VORTEXPATHS_PURE_PYTHON`` is set.
"""

import math

import numpy as np

NAME = "python"

_EPS = 2.220446049250313e-16
_MAX_AGM = 64

# Dormand-Prince 5(4)
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40,
)


def agm(a, b):
    while abs(a - b) > _EPS * a:
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return a


def ellipk(m):
    if m == 1.0:
        return math.inf
    return math.pi / (2.0 * agm(1.0, math.sqrt(1.0 - m)))


def _ellipf_reduced(phi, m):
    # |phi| <= pi/2; descending Landen in AGM form
    a = 1.0
    b = math.sqrt(1.0 - m)
    scale = 1.0
    for _ in range(_MAX_AGM):
        if abs(a - b) <= _EPS * a:
            break
        phi = phi + math.atan(b / a * math.tan(phi)) + math.pi * round(phi / math.pi)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        scale *= 2.0
    return phi / (scale * a)


def ellipf(phi, m):
    if m == 0.0:
        return phi
    if m == 1.0:
        if abs(phi) >= 0.5 * math.pi:
            return math.copysign(math.inf, phi)
        return math.atanh(math.sin(phi))
    j = round(phi / math.pi)
    r = phi - j * math.pi
    value = _ellipf_reduced(r, m)
    if j:
        value += 2.0 * j * ellipk(m)
    return value


def ellipj(u, m):
    if m == 0.0:
        return math.sin(u), math.cos(u), 1.0
    if m == 1.0:
        sech = 1.0 / math.cosh(u)
        return math.tanh(u), sech, sech
    quarter = ellipk(m)
    period = 4.0 * quarter
    u = u - period * round(u / period)
    a = [1.0]
    c = [math.sqrt(m)]
    b = math.sqrt(1.0 - m)
    n = 0
    while abs(c[n]) > _EPS * a[n] and n < _MAX_AGM:
        an, bn = a[n], b
        a.append(0.5 * (an + bn))
        c.append(0.5 * (an - bn))
        b = math.sqrt(an * bn)
        n += 1
    phi = (2.0 ** n) * a[n] * u
    for i in range(n, 0, -1):
        phi = 0.5 * (phi + math.asin(c[i] / a[i] * math.sin(phi)))
    sn = math.sin(phi)
    cn = math.cos(phi)
    # 1 - m sn^2 rewritten without cancellation near m = 1, |sn| = 1
    return sn, cn, math.sqrt(cn * cn + (1.0 - m) * sn * sn)


def ellipf_array(phi, m):
    phi = np.ascontiguousarray(phi, dtype=np.float64)
    out = np.empty_like(phi)
    flat_in, flat_out = phi.reshape(-1), out.reshape(-1)
    for i in range(flat_in.size):
        flat_out[i] = ellipf(float(flat_in[i]), m)
    return out


def ellipj_array(u, m):
    u = np.ascontiguousarray(u, dtype=np.float64)
    sn = np.empty_like(u)
    cn = np.empty_like(u)
    dn = np.empty_like(u)
    fu, fs, fc, fd = u.reshape(-1), sn.reshape(-1), cn.reshape(-1), dn.reshape(-1)
    for i in range(fu.size):
        fs[i], fc[i], fd[i] = ellipj(float(fu[i]), m)
    return sn, cn, dn


def _rhs(A, B, C, c, k, t, x, z):
    X = k * (x - c * t)
    kz = k * z
    return A * math.cosh(kz) * math.cos(X) + B * z + C, A * math.sinh(kz) * math.sin(X)


def dopri_diff2(A, B, C, c, k, x0, z0, t0, t_out, rtol, atol, max_steps):
    """Integrate the particle-path system, landing exactly on ``t_out``.

    Returns ``(x, z, n_steps, status, t_status)`` with status 0 on success,
    1 on step-size underflow and 2 when ``max_steps`` is exhausted.
    """
    t_out = np.ascontiguousarray(t_out, dtype=np.float64)
    n_out = t_out.shape[0]
    xs = np.empty(n_out)
    zs = np.empty(n_out)
    t, x, z = float(t0), float(x0), float(z0)
    k1x, k1z = _rhs(A, B, C, c, k, t, x, z)

    span = abs(float(t_out[-1]) - t) if n_out else 0.0
    d0 = max(abs(x) / (atol + rtol * abs(x)), abs(z) / (atol + rtol * abs(z)))
    d1 = max(abs(k1x) / (atol + rtol * abs(x)), abs(k1z) / (atol + rtol * abs(z)))
    h = 0.01 * d0 / d1 if d0 > 1e-5 and d1 > 1e-5 else 1e-6
    h = min(h, span) if span > 0 else h

    steps = 0
    for j in range(n_out):
        target = float(t_out[j])
        while t < target:
            if steps >= max_steps:
                return xs, zs, steps, 2, t
            tiny = 16.0 * _EPS * max(abs(t), 1.0)
            if target - t <= tiny:
                t = target
                break
            if h < tiny:
                return xs, zs, steps, 1, t
            h_try = min(h, target - t)
            last = h_try >= target - t

            k2x, k2z = _rhs(A, B, C, c, k, t + 0.2 * h_try,
                            x + h_try * _A21 * k1x, z + h_try * _A21 * k1z)
            k3x, k3z = _rhs(A, B, C, c, k, t + 0.3 * h_try,
                            x + h_try * (_A31 * k1x + _A32 * k2x),
                            z + h_try * (_A31 * k1z + _A32 * k2z))
            k4x, k4z = _rhs(A, B, C, c, k, t + 0.8 * h_try,
                            x + h_try * (_A41 * k1x + _A42 * k2x + _A43 * k3x),
                            z + h_try * (_A41 * k1z + _A42 * k2z + _A43 * k3z))
            k5x, k5z = _rhs(A, B, C, c, k, t + 8.0 / 9.0 * h_try,
                            x + h_try * (_A51 * k1x + _A52 * k2x + _A53 * k3x + _A54 * k4x),
                            z + h_try * (_A51 * k1z + _A52 * k2z + _A53 * k3z + _A54 * k4z))
            k6x, k6z = _rhs(A, B, C, c, k, t + h_try,
                            x + h_try * (_A61 * k1x + _A62 * k2x + _A63 * k3x
                                         + _A64 * k4x + _A65 * k5x),
                            z + h_try * (_A61 * k1z + _A62 * k2z + _A63 * k3z
                                         + _A64 * k4z + _A65 * k5z))
            xn = x + h_try * (_B1 * k1x + _B3 * k3x + _B4 * k4x + _B5 * k5x + _B6 * k6x)
            zn = z + h_try * (_B1 * k1z + _B3 * k3z + _B4 * k4z + _B5 * k5z + _B6 * k6z)
            t_new = target if last else t + h_try
            k7x, k7z = _rhs(A, B, C, c, k, t_new, xn, zn)
            ex = h_try * (_E1 * k1x + _E3 * k3x + _E4 * k4x + _E5 * k5x + _E6 * k6x + _E7 * k7x)
            ez = h_try * (_E1 * k1z + _E3 * k3z + _E4 * k4z + _E5 * k5z + _E6 * k6z + _E7 * k7z)
            err = max(
                abs(ex) / (atol + rtol * max(abs(x), abs(xn))),
                abs(ez) / (atol + rtol * max(abs(z), abs(zn))),
            )
            steps += 1
            if err <= 1.0:
                t, x, z = t_new, xn, zn
                k1x, k1z = k7x, k7z
                factor = 5.0 if err == 0.0 else min(5.0, 0.9 * err ** -0.2)
                h = max(h, h_try * factor) if last else h_try * factor
            else:
                h = h_try * max(0.2, 0.9 * err ** -0.2)
        xs[j] = x
        zs[j] = z
    return xs, zs, steps, 0, t
