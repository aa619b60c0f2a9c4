# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: elliptic functions and the adaptive path integrator.

Line-for-line port of ``_pykernels``; the two must stay in sync.
"""

import numpy as np

from libc.math cimport (asin, atan, atanh, cos, cosh, fabs, sin, sinh, sqrt, tan,
                        tanh, pow, round as c_round, INFINITY, M_PI, copysign)

NAME = "cython"

cdef double _EPS = 2.220446049250313e-16
cdef int _MAX_AGM = 64

cdef double _A21 = 1.0 / 5
cdef double _A31 = 3.0 / 40, _A32 = 9.0 / 40
cdef double _A41 = 44.0 / 45, _A42 = -56.0 / 15, _A43 = 32.0 / 9
cdef double _A51 = 19372.0 / 6561, _A52 = -25360.0 / 2187, _A53 = 64448.0 / 6561, _A54 = -212.0 / 729
cdef double _A61 = 9017.0 / 3168, _A62 = -355.0 / 33, _A63 = 46732.0 / 5247, _A64 = 49.0 / 176
cdef double _A65 = -5103.0 / 18656
cdef double _B1 = 35.0 / 384, _B3 = 500.0 / 1113, _B4 = 125.0 / 192, _B5 = -2187.0 / 6784
cdef double _B6 = 11.0 / 84
cdef double _E1 = 71.0 / 57600, _E3 = -71.0 / 16695, _E4 = 71.0 / 1920
cdef double _E5 = -17253.0 / 339200, _E6 = 22.0 / 525, _E7 = -1.0 / 40


cdef inline double _pyround(double x) nogil:
    # Python's round(): ties to even
    cdef double r = c_round(x)
    if fabs(r - x) == 0.5:
        r = 2.0 * c_round(0.5 * x)
    return r


cdef double _agm(double a, double b) nogil:
    cdef double an
    while fabs(a - b) > _EPS * a:
        an = 0.5 * (a + b)
        b = sqrt(a * b)
        a = an
    return a


cdef double _ellipk(double m) nogil:
    if m == 1.0:
        return INFINITY
    return M_PI / (2.0 * _agm(1.0, sqrt(1.0 - m)))


cdef double _ellipf_reduced(double phi, double m) nogil:
    cdef double a = 1.0, b = sqrt(1.0 - m), scale = 1.0, an
    cdef int i
    for i in range(_MAX_AGM):
        if fabs(a - b) <= _EPS * a:
            break
        phi = phi + atan(b / a * tan(phi)) + M_PI * _pyround(phi / M_PI)
        an = 0.5 * (a + b)
        b = sqrt(a * b)
        a = an
        scale *= 2.0
    return phi / (scale * a)


cdef double _ellipf(double phi, double m) nogil:
    cdef double j, r, value
    if m == 0.0:
        return phi
    if m == 1.0:
        if fabs(phi) >= 0.5 * M_PI:
            return copysign(INFINITY, phi)
        return atanh(sin(phi))
    j = _pyround(phi / M_PI)
    r = phi - j * M_PI
    value = _ellipf_reduced(r, m)
    if j != 0.0:
        value += 2.0 * j * _ellipk(m)
    return value


cdef void _ellipj(double u, double m, double* sn, double* cn, double* dn) nogil:
    cdef double a[66]
    cdef double c[66]
    cdef double b, an, bn, period, phi, s, co, sech
    cdef int n, i
    if m == 0.0:
        sn[0] = sin(u)
        cn[0] = cos(u)
        dn[0] = 1.0
        return
    if m == 1.0:
        sech = 1.0 / cosh(u)
        sn[0] = tanh(u)
        cn[0] = sech
        dn[0] = sech
        return
    period = 4.0 * _ellipk(m)
    u = u - period * _pyround(u / period)
    a[0] = 1.0
    c[0] = sqrt(m)
    b = sqrt(1.0 - m)
    n = 0
    while fabs(c[n]) > _EPS * a[n] and n < _MAX_AGM:
        an = a[n]
        bn = b
        a[n + 1] = 0.5 * (an + bn)
        c[n + 1] = 0.5 * (an - bn)
        b = sqrt(an * bn)
        n += 1
    phi = pow(2.0, n) * a[n] * u
    for i in range(n, 0, -1):
        phi = 0.5 * (phi + asin(c[i] / a[i] * sin(phi)))
    s = sin(phi)
    co = cos(phi)
    sn[0] = s
    cn[0] = co
    dn[0] = sqrt(co * co + (1.0 - m) * s * s)


def agm(double a, double b):
    return _agm(a, b)


def ellipk(double m):
    return _ellipk(m)


def ellipf(double phi, double m):
    return _ellipf(phi, m)


def ellipj(double u, double m):
    cdef double sn, cn, dn
    _ellipj(u, m, &sn, &cn, &dn)
    return sn, cn, dn


def ellipf_array(phi, double m):
    arr = np.ascontiguousarray(phi, dtype=np.float64)
    out = np.empty_like(arr)
    cdef double[::1] src = arr.reshape(-1)
    cdef double[::1] dst = out.reshape(-1)
    cdef Py_ssize_t i, n = src.shape[0]
    with nogil:
        for i in range(n):
            dst[i] = _ellipf(src[i], m)
    return out


def ellipj_array(u, double m):
    arr = np.ascontiguousarray(u, dtype=np.float64)
    sn = np.empty_like(arr)
    cn = np.empty_like(arr)
    dn = np.empty_like(arr)
    cdef double[::1] src = arr.reshape(-1)
    cdef double[::1] s = sn.reshape(-1)
    cdef double[::1] c = cn.reshape(-1)
    cdef double[::1] d = dn.reshape(-1)
    cdef Py_ssize_t i, n = src.shape[0]
    with nogil:
        for i in range(n):
            _ellipj(src[i], m, &s[i], &c[i], &d[i])
    return sn, cn, dn


cdef inline void _rhs(double A, double B, double C, double c, double k,
                      double t, double x, double z, double* fx, double* fz) nogil:
    cdef double X = k * (x - c * t)
    cdef double kz = k * z
    fx[0] = A * cosh(kz) * cos(X) + B * z + C
    fz[0] = A * sinh(kz) * sin(X)


def dopri_diff2(double A, double B, double C, double c, double k,
                double x0, double z0, double t0, t_out,
                double rtol, double atol, long max_steps):
    """Integrate the particle-path system, landing exactly on ``t_out``.

    Returns ``(x, z, n_steps, status, t_status)`` with status 0 on success,
    1 on step-size underflow and 2 when ``max_steps`` is exhausted.
    """
    tarr = np.ascontiguousarray(t_out, dtype=np.float64)
    cdef double[::1] tv = tarr
    cdef Py_ssize_t n_out = tv.shape[0], j
    xs_arr = np.empty(n_out)
    zs_arr = np.empty(n_out)
    cdef double[::1] xs = xs_arr
    cdef double[::1] zs = zs_arr
    cdef double t = t0, x = x0, z = z0
    cdef double k1x, k1z, k2x, k2z, k3x, k3z, k4x, k4z, k5x, k5z, k6x, k6z, k7x, k7z
    cdef double span, d0, d1, h, h_try, target, xn, zn, t_new, ex, ez, err, e2, factor, tiny
    cdef bint last
    cdef long steps = 0
    cdef int status = 0

    _rhs(A, B, C, c, k, t, x, z, &k1x, &k1z)
    span = fabs(tv[n_out - 1] - t) if n_out > 0 else 0.0
    d0 = fabs(x) / (atol + rtol * fabs(x))
    e2 = fabs(z) / (atol + rtol * fabs(z))
    if e2 > d0:
        d0 = e2
    d1 = fabs(k1x) / (atol + rtol * fabs(x))
    e2 = fabs(k1z) / (atol + rtol * fabs(z))
    if e2 > d1:
        d1 = e2
    h = 0.01 * d0 / d1 if (d0 > 1e-5 and d1 > 1e-5) else 1e-6
    if span > 0 and span < h:
        h = span

    with nogil:
        for j in range(n_out):
            target = tv[j]
            while t < target:
                if steps >= max_steps:
                    status = 2
                    break
                tiny = 16.0 * _EPS * (fabs(t) if fabs(t) > 1.0 else 1.0)
                if target - t <= tiny:
                    t = target
                    break
                if h < tiny:
                    status = 1
                    break
                h_try = h if h < target - t else target - t
                last = h_try >= target - t

                _rhs(A, B, C, c, k, t + 0.2 * h_try,
                     x + h_try * _A21 * k1x, z + h_try * _A21 * k1z, &k2x, &k2z)
                _rhs(A, B, C, c, k, t + 0.3 * h_try,
                     x + h_try * (_A31 * k1x + _A32 * k2x),
                     z + h_try * (_A31 * k1z + _A32 * k2z), &k3x, &k3z)
                _rhs(A, B, C, c, k, t + 0.8 * h_try,
                     x + h_try * (_A41 * k1x + _A42 * k2x + _A43 * k3x),
                     z + h_try * (_A41 * k1z + _A42 * k2z + _A43 * k3z), &k4x, &k4z)
                _rhs(A, B, C, c, k, t + 8.0 / 9.0 * h_try,
                     x + h_try * (_A51 * k1x + _A52 * k2x + _A53 * k3x + _A54 * k4x),
                     z + h_try * (_A51 * k1z + _A52 * k2z + _A53 * k3z + _A54 * k4z),
                     &k5x, &k5z)
                _rhs(A, B, C, c, k, t + h_try,
                     x + h_try * (_A61 * k1x + _A62 * k2x + _A63 * k3x
                                  + _A64 * k4x + _A65 * k5x),
                     z + h_try * (_A61 * k1z + _A62 * k2z + _A63 * k3z
                                  + _A64 * k4z + _A65 * k5z), &k6x, &k6z)
                xn = x + h_try * (_B1 * k1x + _B3 * k3x + _B4 * k4x + _B5 * k5x + _B6 * k6x)
                zn = z + h_try * (_B1 * k1z + _B3 * k3z + _B4 * k4z + _B5 * k5z + _B6 * k6z)
                t_new = target if last else t + h_try
                _rhs(A, B, C, c, k, t_new, xn, zn, &k7x, &k7z)
                ex = h_try * (_E1 * k1x + _E3 * k3x + _E4 * k4x + _E5 * k5x
                              + _E6 * k6x + _E7 * k7x)
                ez = h_try * (_E1 * k1z + _E3 * k3z + _E4 * k4z + _E5 * k5z
                              + _E6 * k6z + _E7 * k7z)
                err = fabs(ex) / (atol + rtol * (fabs(x) if fabs(x) > fabs(xn) else fabs(xn)))
                e2 = fabs(ez) / (atol + rtol * (fabs(z) if fabs(z) > fabs(zn) else fabs(zn)))
                if e2 > err:
                    err = e2
                steps += 1
                if err <= 1.0:
                    t = t_new
                    x = xn
                    z = zn
                    k1x = k7x
                    k1z = k7z
                    if err == 0.0:
                        factor = 5.0
                    else:
                        factor = 0.9 * pow(err, -0.2)
                        if factor > 5.0:
                            factor = 5.0
                    if last:
                        if h_try * factor > h:
                            h = h_try * factor
                    else:
                        h = h_try * factor
                else:
                    factor = 0.9 * pow(err, -0.2)
                    if factor < 0.2:
                        factor = 0.2
                    h = h_try * factor
            if status != 0:
                break
            xs[j] = x
            zs[j] = z
    return xs_arr, zs_arr, steps, status, t
