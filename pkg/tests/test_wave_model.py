import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vortexpaths.errors import ValidationError
from vortexpaths.wave_model import (
    Linearization,
    RootSign,
    VelocityCoefficients,
    WaveParameters,
    coefficients,
    field_sample,
    pressure_field,
    surface_elevation,
    velocity_field,
    wave_speed_shear,
    wave_speed_still,
)

# mpmath, 40 digits
C_STILL = 2.7319631638011695
C_SHALLOW = 3.1304951684997056
U_FIG3_HALF_MINUS_C = 1.1990555727865262
P_FIG3_HALF = 101330.69597801109


def still(**kw):
    base = dict(g=9.8, h0=1.0, k=1.0, epsilon=0.1, linearization=Linearization.STILL_WATER)
    base.update(kw)
    return WaveParameters(**base)


def shear(omega0, sign, **kw):
    base = dict(g=9.8, h0=1.0, k=1.0, epsilon=0.1, omega0=omega0, root_sign=sign)
    base.update(kw)
    return WaveParameters(**base)


def test_still_speed_oracle():
    assert wave_speed_still(still()) == pytest.approx(C_STILL, rel=1e-15)
    assert wave_speed_still(still(root_sign=RootSign.MINUS)) == -wave_speed_still(still())


def test_shallow_water_limit():
    assert wave_speed_still(still(k=1e-6)) == pytest.approx(C_SHALLOW, rel=1e-6)


@pytest.mark.parametrize(
    "omega0, sign, c, A",
    [(2.0, "+", 4.07454, 0.176526), (20.0, "-", 4.29294, -1.33654), (-20.0, "+", -4.29294, 1.33654)],
)
def test_printed_shear_values(omega0, sign, c, A):
    co = coefficients(shear(omega0, RootSign.PLUS if sign == "+" else RootSign.MINUS))
    assert co.c == pytest.approx(c, rel=1e-5)
    assert co.A == pytest.approx(A, rel=1e-5)
    assert co.B == omega0


def test_zero_vorticity_collapses_to_still():
    for sign in RootSign:
        p = shear(0.0, sign)
        assert wave_speed_shear(p) == pytest.approx(wave_speed_still(p), rel=1e-15)


@settings(max_examples=200, deadline=None)
@given(
    g=st.floats(0.1, 50), h0=st.floats(0.01, 20), k=st.floats(1e-3, 20),
)
def test_dispersion_consistency(g, h0, k):
    p = shear(0.0, RootSign.PLUS, g=g, h0=h0, k=k)
    assert wave_speed_shear(p) == pytest.approx(wave_speed_still(p), rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    omega0=st.floats(-50, 50).filter(lambda w: w != 0),
    k=st.floats(0.05, 10),
    h0=st.floats(0.05, 10),
    sign=st.sampled_from(list(RootSign)),
)
def test_sign_laws(omega0, k, h0, sign):
    p = shear(omega0, sign, k=k, h0=h0)
    co = coefficients(p)
    rel = co.c - h0 * omega0
    assert np.sign(rel) == int(sign)
    assert np.sign(co.A) == int(sign)
    s = still(omega0=omega0, k=k, h0=h0, root_sign=sign)
    cs = coefficients(s)
    assert np.sign(cs.A) == np.sign(cs.c)


def test_shear_speed_agrees_with_mpmath():
    mp.mp.dps = 30
    for w in (-20.0, -2.0, 0.5, 2.0, 20.0):
        for sign in RootSign:
            T = mp.tanh(1)
            ref = w + (-w * T + int(sign) * mp.sqrt(w * w * T * T + 4 * mp.mpf("9.8") * T)) / 2
            assert wave_speed_shear(shear(w, sign)) == pytest.approx(float(ref), rel=1e-13)


@pytest.mark.parametrize("kw", [dict(g=0), dict(h0=-1), dict(k=0), dict(epsilon=0), dict(epsilon=1.5)])
def test_invalid_parameters(kw):
    with pytest.raises(ValidationError):
        still(**kw)


def test_velocity_examples(fig3):
    u, v = velocity_field(VelocityCoefficients(1.0, 0.0, 0.0, 1.0, 1.0), 2.0, 1.0, 2.0)
    assert (u, v) == (pytest.approx(math.cosh(1.0), rel=1e-15), 0.0)
    u, v = velocity_field(fig3, 0.0, 0.5, 0.0)
    assert u - fig3.C == pytest.approx(U_FIG3_HALF_MINUS_C, rel=1e-14)
    assert v == 0.0


def test_bottom_is_impermeable(fig4):
    x = np.linspace(-10, 10, 101)
    _, v = velocity_field(fig4, x, 0.0, 0.37)
    assert np.all(v == 0.0)


def test_surface_elevation():
    p = still()
    c = 2.0
    assert surface_elevation(p, c, 3.0, 1.5) == pytest.approx(0.1)
    assert surface_elevation(p, c, c + math.pi / 2, 1.0) == pytest.approx(0.0, abs=1e-16)
    assert surface_elevation(p, c, 0.3 + 2 * math.pi, 0.0) == pytest.approx(surface_elevation(p, c, 0.3, 0.0))


def test_pressure_still_surface_condition():
    p = still(omega0=0.7)
    co = coefficients(p)
    x = np.linspace(0, 7, 50)
    got = pressure_field(p, co, x, p.h0, 0.4)
    eta = surface_elevation(p, co.c, x, 0.4)
    np.testing.assert_allclose(got - p.p0 - p.g * eta, 0.0, atol=1e-10)


def test_pressure_hydrostatic_limit():
    p = shear(2.0, RootSign.PLUS, epsilon=1e-12)
    co = coefficients(p)
    assert pressure_field(p, co, 0.3, 0.2, 0.0) == pytest.approx(p.p0 + p.g * 0.8, rel=1e-14)


def test_pressure_fig3_oracle():
    p = shear(2.0, RootSign.PLUS)
    co = coefficients(p)
    assert pressure_field(p, co, co.c * 1.3, 0.5, 1.3) == pytest.approx(P_FIG3_HALF, rel=1e-13)


def test_field_sample_bundles():
    s = field_sample(shear(2.0, RootSign.PLUS), 0.0, 0.5, 0.0)
    assert s.eta == pytest.approx(0.1)
    assert s.v == 0.0


def test_with_C_equal_c():
    for p in (shear(2.0, RootSign.PLUS, alpha=0.3), still(omega0=1.0)):
        co = coefficients(p.with_C_equal_c())
        assert co.C == pytest.approx(co.c, rel=1e-14)


def _fd(f, h=1e-5):
    return (f(h) - f(-h)) / (2 * h)


@pytest.mark.parametrize("lin", list(Linearization))
def test_mass_and_vorticity(lin):
    p = WaveParameters(g=9.8, h0=1.0, k=1.3, epsilon=0.1, omega0=2.5, alpha=0.2, linearization=lin)
    co = coefficients(p)
    rng = np.random.default_rng(7)
    expected = p.epsilon * p.omega0 if lin is Linearization.STILL_WATER else p.omega0
    for x, z, t in rng.uniform([-3, 0.05, 0], [3, 1.1, 2], size=(20, 3)):
        dudx = _fd(lambda h: velocity_field(co, x + h, z, t)[0])
        dvdz = _fd(lambda h: velocity_field(co, x, z + h, t)[1])
        dudz = _fd(lambda h: velocity_field(co, x, z + h, t)[0])
        dvdx = _fd(lambda h: velocity_field(co, x + h, z, t)[1])
        assert abs(dudx + dvdz) <= 1e-6
        assert dudz - dvdx == pytest.approx(expected, abs=1e-6)
