"""Acceptance criteria, one reported line each (see the terminal summary).

Run alone with ``pytest tests/test_acceptance.py`` or ``python3 tests/test_acceptance.py``.
Two checks are known not to hold as stated; they report FAIL and are
marked ``xfail(strict=True)`` so the run stays green only while they keep
failing for the documented reason.
"""

import collections
import itertools
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import ACCEPTANCE, preset_config
from vortexpaths import cli, presets
from vortexpaths.errors import PeakonValidityError
from vortexpaths.special_functions import CaseTag, agm, classify_case, elliptic_F, jacobi_sn_cn_dn
from vortexpaths.stagnation import find_z_stagnation, stagnation_residual
from vortexpaths.trajectory import (
    Method,
    TrajectoryState,
    beta_from_initial,
    closed_form_z_elliptic,
    drift_per_period,
    elliptic_orbit,
    find_orbit,
    integrate_reference,
    invert_z_quadrature,
    peakon_trajectory,
    radicand,
    radicand_scale,
    solve,
)
from vortexpaths.wave_model import VelocityCoefficients, coefficients

TITLES = {
    1: "Printed values, fig3 set",
    2: "Printed values, fig4 set",
    3: "Printed values, fig5 set",
    4: "omega0 = -20 single real root",
    5: "Special-function identities",
    6: "Quadrature vs adaptive RK",
    7: "Elliptic closed form vs truncated quadrature",
    8: "Non-closedness and drift",
    9: "Peakon",
    10: "Stagnation roots",
    11: "Determinism of reproduce fig3",
}

# moving-frame starts (X0, Z0) inside libration orbits of each set
LIBRATION_STARTS = {"fig3": (2.5, 0.08), "fig4": (0.5, 0.05), "fig5": (0.6, 0.12)}
# starts inside the beta ~ 1 rotating orbits
ROTATION_STARTS = {"fig3": (1.0, 1.4), "fig5": (1.0, 1.45)}


def record(n, ok, detail):
    ACCEPTANCE.setdefault(n, (TITLES[n], []))[1].append((bool(ok), detail))
    return bool(ok)


def rel(a, b):
    return abs(a - b) / abs(b)


# ------------------------------------------------------------ 1 to 3


@pytest.mark.parametrize("n, name", [(1, "fig3"), (2, "fig4"), (3, "fig5")])
def test_printed_values(n, name):
    params = preset_config(name).params
    t0 = time.perf_counter()
    co = coefficients(params)
    elapsed = time.perf_counter() - t0
    errs = {q: rel(getattr(co, q), presets.PRINTED[name][q][0]) for q in ("c", "A", "B")}
    ok = all(e <= 1e-4 for e in errs.values())
    detail = ", ".join(f"{q}={getattr(co, q):.6g} (rel {e:.1e})" for q, e in errs.items())
    if n == 1:
        ok = ok and elapsed < 0.010
        detail += f", {elapsed * 1e3:.3f} ms"
    assert record(n, ok, detail)


# ------------------------------------------------------------------ 4


def test_neg20_single_root():
    cfg = preset_config("neg20")
    rows, red = cli.reproduce_summary("neg20", cfg)
    table = {r[0]: r for r in rows}
    ok = all(r[5] for r in rows) and red.case is CaseTag.HYPERELLIPTIC_ONLY
    r = red.roots
    detail = (
        f"Z0={r.z0:.6g} p={r.p:.6g} q={r.q:.6g} threshold={table['threshold'][1]:.6g} "
        f"verdict {red.case.value}"
    )
    assert record(4, ok, detail)


# ------------------------------------------------------------------ 5


def test_special_function_identities():
    t0 = time.perf_counter()
    u = np.linspace(-10, 10, 401)
    ms = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99]
    e1 = e2 = e3 = 0.0
    for m in ms:
        sn, cn, dn = jacobi_sn_cn_dn(u, m)
        e1 = max(e1, float(np.max(np.abs(sn**2 + cn**2 - 1))))
        e2 = max(e2, float(np.max(np.abs(dn**2 + m * sn**2 - 1))))
        K = math.pi / (2 * agm(1.0, math.sqrt(1 - m)))
        e3 = max(e3, rel(elliptic_F(math.pi / 2, m), K))
    elapsed = time.perf_counter() - t0
    ok = e1 <= 1e-12 and e2 <= 1e-12 and e3 <= 1e-13 and elapsed < 1.0
    detail = f"sn2+cn2-1 {e1:.1e}, dn2+m sn2-1 {e2:.1e}, F/K {e3:.1e}, {elapsed:.3f} s"
    assert record(5, ok, detail)


# ------------------------------------------------------------------ 6


def test_quadrature_vs_rk():
    t0 = time.perf_counter()
    worst_z = worst_x = 0.0
    for name in ("fig3", "fig5"):
        co = preset_config(name).coeffs
        for X0, Z0 in (LIBRATION_STARTS[name], ROTATION_STARTS[name]):
            init = (X0 / co.k, Z0 / co.k)
            orbit = find_orbit(co, beta_from_initial(co, X0, Z0), 10.0, Z0)
            times = np.linspace(0, 3 * orbit.period, 601)
            q = solve(co, times, initial=init, method="quadrature")
            o = solve(co, times, initial=init, method="reference", tol=1e-11)
            assert q.method is Method.QUADRATURE
            worst_z = max(worst_z, float(np.max(np.abs(q.z - o.z))))
            worst_x = max(worst_x, float(np.max(np.abs(q.x - o.x))))
    elapsed = time.perf_counter() - t0
    ok = worst_z <= 1e-6 and worst_x <= 1e-5 and elapsed < 5.0
    detail = f"max|dz| {worst_z:.1e}, max|dx| {worst_x:.1e} over 3 periods, 4 orbits, {elapsed:.2f} s"
    assert record(6, ok, detail)


# ------------------------------------------------------------------ 7


def test_elliptic_vs_truncated_quadrature():
    co = preset_config("fig3").coeffs
    t0 = time.perf_counter()
    red = classify_case(co, 1.0)
    orbit = elliptic_orbit(co, red)
    t = np.linspace(0, orbit.period, 1001)
    Ze, _ = closed_form_z_elliptic(t, red)
    Zq, _ = invert_z_quadrature(orbit, orbit.z_min, 1, t)
    dev = float(np.max(np.abs(Ze - Zq)))
    elapsed = time.perf_counter() - t0
    ok = red.case is CaseTag.CASE1A and dev <= 1e-8 and elapsed < 1.0
    assert record(7, ok, f"{red.case.value}, max|dZ| {dev:.1e} over one period, {elapsed * 1e3:.1f} ms")


# ------------------------------------------------------------------ 8


def _closure(co, x, z, x_later, z_later, T):
    dx = float(np.max(np.abs(x_later - x - co.c * T)))
    dz = float(np.max(np.abs(z_later - z)))
    return dx, dz, dx <= 1e-8 * max(1.0, abs(co.c * T)) and dz <= 1e-8


def test_non_closedness_libration_orbits():
    parts = []
    ok = True
    for name, expected in (("fig3", 1), ("fig4", 1), ("fig5", -1)):
        co = preset_config(name).coeffs
        X0, Z0 = LIBRATION_STARTS[name]
        orbit = find_orbit(co, beta_from_initial(co, X0, Z0), 10.0, Z0)
        T = orbit.period
        t = np.linspace(0, 2 * T, 201)
        # sample on t and t + T in one run of each method
        both = np.union1d(t, t + T)
        i0, i1 = np.searchsorted(both, t), np.searchsorted(both, t + T)
        init = (X0 / co.k, Z0 / co.k)
        errs = []
        for method, kw in (("quadrature", {}), ("reference", {"tol": 1e-12})):
            tr = solve(co, both, initial=init, method=method, **kw)
            dx, dz, good = _closure(co, tr.x[i0], tr.z[i0], tr.x[i1], tr.z[i1], T)
            ok &= good
            errs.append(max(dx, dz))
        drift = drift_per_period(co, orbit)
        ok &= orbit.winding == 0 and np.sign(drift) == expected == np.sign(co.c)
        parts.append(f"{name} drift {drift:+.4f} closure quad {errs[0]:.0e} rk {errs[1]:.0e}")
    assert record(8, ok, "libration orbits: " + ", ".join(parts))


@pytest.mark.xfail(strict=True, reason="beta = 1 preset orbits wind once per period: drift is cT + 2 pi / k")
def test_non_closedness_preset_orbits():
    parts = []
    ok = True
    for name in ("fig3", "fig4", "fig5"):
        cfg = preset_config(name)
        co = cfg.coeffs
        tr = solve(co, np.linspace(0, 1, 3), beta=cfg.beta)
        # period of the untruncated radicand, through the same start
        orbit = find_orbit(co, beta_from_initial(co, float(tr.X[0]), float(tr.Z[0])), 10.0, float(tr.Z[0]))
        assert orbit.winding == 1
        T = orbit.period
        t = np.linspace(0, 2 * T, 101)
        both = np.union1d(t, t + T)
        r = integrate_reference(co, TrajectoryState(0.0, tr.x[0], tr.z[0]), tol=1e-12, times=both)
        i0, i1 = np.searchsorted(both, t), np.searchsorted(both, t + T)
        dx, dz, good = _closure(co, r.x[i0], r.z[i0], r.x[i1], r.z[i1], T)
        measured = float(np.mean(r.x[i1] - r.x[i0]))
        sign_ok = np.sign(measured) == np.sign(co.c)
        ok &= good and sign_ok
        parts.append(f"{name} x-cT {measured - co.c * T:+.9f} (2pi/k = {2 * math.pi / co.k:.9f}), drift sign "
                     f"{'ok' if sign_ok else 'opposite to c'}")
    record(8, ok, "beta=1 preset orbits: " + ", ".join(parts))
    assert ok


# ------------------------------------------------------------------ 9


def test_peakon():
    co = VelocityCoefficients(A=0.8, B=0.0, C=2.1, c=2.1, k=1.2)
    const2 = 0.3
    t_star = -const2 / (co.k * co.A)
    t = np.linspace(-5, 5, 2001)
    t = t[np.abs(t - t_star) > 0.05]
    tr = peakon_trajectory(co, t, const2=const2)
    res = tr.diagnostics.residual
    left, right = tr.z[t < t_star], tr.z[t > t_star]
    mono = bool(np.all(np.diff(left) > 0) and np.all(np.diff(right) < 0))
    # independent residual: the path equations by finite differences
    h = 1e-6
    ode_res = 0.0
    for ti in t[::50]:
        a = peakon_trajectory(co, [ti - h, ti + h], const2=const2)
        mid = peakon_trajectory(co, [ti], const2=const2)
        X = co.k * (mid.x[0] - co.c * ti)
        u = co.A * math.cosh(co.k * mid.z[0]) * math.cos(X) + co.B * mid.z[0] + co.C
        v = co.A * math.sinh(co.k * mid.z[0]) * math.sin(X)
        scale = max(1.0, abs(v))
        ode_res = max(ode_res, abs((a.z[1] - a.z[0]) / (2 * h) - v) / scale, abs((a.x[1] - a.x[0]) / (2 * h) - u))
    try:
        peakon_trajectory(VelocityCoefficients(0.8, 0.5, 2.1, 2.1, 1.2), [1.0])
        flagged = False
    except PeakonValidityError:
        flagged = True
    ok = res <= 1e-10 and mono and flagged and ode_res <= 1e-6
    detail = (f"residual {res:.1e} on [-5, 5] off |t - t*| < 0.05, monotone {mono}, "
              f"finite-difference check {ode_res:.0e}, B != 0 flagged {flagged}")
    assert record(9, ok, detail)


# ----------------------------------------------------------------- 10

SWEEP = dict(kA=(0.5, 1.0, 2.0), B=(-4.0, -1.0, 0.0, 1.0, 4.0), d=(-2.0, -0.5, 0.0, 0.5, 2.0),
             beta=(-0.5, -0.1, 0.0, 0.1, 0.5))


def _sweep_counts():
    counts = collections.Counter()
    worst_f = worst_F = 0.0
    for kA, B, d, beta in itertools.product(*SWEEP.values()):
        co = VelocityCoefficients(kA, B, 1.0 + d, 1.0, 1.0)
        roots = find_z_stagnation(beta, co, 20.0)
        counts[len(roots)] += 1
        for r in roots:
            worst_f = max(worst_f, abs(float(stagnation_residual(r.Z, beta, co))))
            worst_F = max(worst_F, abs(float(radicand(r.Z, co, beta))) / float(radicand_scale(r.Z, co, beta)))
    return counts, worst_f, worst_F


def test_stagnation_roots():
    counts, worst_f, worst_F = _sweep_counts()
    r = find_z_stagnation(0.5, VelocityCoefficients(1.0, 0.0, 1.0, 1.0, 1.0), 10.0)
    unique = len(r) == 1 and abs(r[0].Z - math.asinh(1.0)) <= 1e-9
    ok = worst_f <= 1e-10 and worst_F <= 1e-9 and unique
    detail = (f"|f| <= {worst_f:.0e}, |F|/scale <= {worst_F:.0e} over {sum(counts.values())} sweep cases, "
              f"beta=0.5 root {r[0].Z:.9f}")
    assert record(10, ok, detail)


@pytest.mark.xfail(strict=True, reason="at most five roots exist on Z >= 0; five occurs and six cannot")
def test_stagnation_count_set():
    counts, _, _ = _sweep_counts()
    seen = sorted(counts)
    ok = set(seen) <= {1, 2, 3, 4, 6}
    record(10, ok, f"counts seen {dict(sorted(counts.items()))}, expected subset of {{1,2,3,4,6}}")
    assert ok


# ----------------------------------------------------------------- 11


def test_determinism(tmp_path, monkeypatch):
    monkeypatch.delenv("VORTEXPATHS_LOG", raising=False)
    blobs = []
    for d in ("one", "two"):
        run_dir = tmp_path / d
        run_dir.mkdir()
        monkeypatch.chdir(run_dir)
        assert cli.main(["reproduce", "--preset", "fig3", "--svg"]) == 0
        blobs.append({p.name: p.read_bytes() for p in sorted(run_dir.iterdir())})
    names = sorted(blobs[0])
    ok = blobs[0] == blobs[1] and {"fig3_trajectory.csv", "fig3_trajectory.svg"} <= set(names)
    size = sum(len(b) for b in blobs[0].values())
    assert record(11, ok, f"{', '.join(names)} identical across runs ({size} bytes)")


if __name__ == "__main__":
    sys.exit(pytest.main([str(Path(__file__)), "-q"]))
