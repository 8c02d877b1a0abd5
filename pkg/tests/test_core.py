import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multitime.core import (
    INFINITE_PHASE_VELOCITY,
    Event6,
    InvalidVelocityError,
    Tangent6,
    UnitSystem,
    boost,
    boost_matrix,
    interval4,
    minkowski_dot,
    phase_velocity,
    rapidity,
)

coord = st.floats(-50, 50, allow_nan=False)
speed = st.floats(0.0, 0.9)


def velocity(max_speed=0.9):
    return st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1), st.floats(0, max_speed)).map(
        lambda t: _scale(np.array(t[:3]), t[3])
    )


def _scale(v, s):
    n = np.linalg.norm(v)
    return v / n * s if n > 1e-6 else np.zeros(3)


def test_boost_identity():
    e = Event6(1.3, -2.0, 0.5, 4.0, 0.1, 0.2)
    assert boost(e, (0, 0, 0)) == e


def test_boost_reference_values():
    # oracle: gamma and boosted coordinates in 50-digit arithmetic
    mpmath.mp.dps = 50
    g = 1 / mpmath.sqrt(1 - mpmath.mpf("0.6") ** 2)
    exp_x0 = float(g * 1)
    exp_x1 = float(-g * mpmath.mpf("0.6"))
    b = boost(Event6(1, 0, 0, 0, 0.3, 0.7), (0.6, 0, 0))
    assert exp_x0 == pytest.approx(1.25, abs=1e-15)
    assert b.x0 == pytest.approx(exp_x0, abs=1e-14)
    assert b.x1 == pytest.approx(exp_x1, abs=1e-14)
    assert (b.x4, b.x5) == (0.3, 0.7)


@given(st.tuples(*[coord] * 6), velocity())
def test_boost_inverse(xs, u):
    e = Event6(*xs)
    back = boost(boost(e, u), -u)
    assert np.allclose(back.as_array(), e.as_array(), atol=1e-12 * (1 + np.abs(e.as_array()).max()))


@given(st.tuples(*[coord] * 6), velocity())
def test_boost_preserves_interval(xs, u):
    e = Event6(*xs)
    before = interval4(e.as_array())[0]
    after = interval4(boost(e, u).as_array())[0]
    assert abs(before - after) < 1e-10 * max(1.0, float(np.sum(e.as_array()[:4] ** 2)))


@pytest.mark.parametrize("u", [(1.0, 0, 0), (0.8, 0.7, 0.0)])
def test_boost_rejects_superluminal(u):
    with pytest.raises(InvalidVelocityError):
        boost(Event6(), u)


def test_boost_si_units_consistent():
    si = UnitSystem.si()
    u = (0.6 * si.c, 0, 0)
    L = boost_matrix(u, si)
    t, x = 1.0, 0.0
    out = L @ np.array([t, x, 0, 0, 0, 0])
    assert out[0] == pytest.approx(1.25)
    assert out[1] == pytest.approx(-0.75 * si.c)


def test_cylinder_condition_reduces_x4():
    e = Event6(0, 0, 0, 0, 7.0, 0, cylinder=True)
    assert e.x4 == pytest.approx(7.0 - 2 * math.pi)
    with pytest.raises(ValueError):
        Event6(math.nan)


def test_rapidity_rest():
    h = rapidity(0.0)
    assert (h.cosh_a, h.sinh_a, h.cosh_half, h.sinh_half) == (1.0, 0.0, 1.0, 0.0)


def test_rapidity_reference_values():
    mpmath.mp.dps = 50
    u = mpmath.mpf("0.6")
    a = mpmath.atanh(u)
    h = rapidity(0.6)
    assert h.cosh_a == pytest.approx(float(mpmath.cosh(a)), abs=1e-15)
    assert h.sinh_a == pytest.approx(float(mpmath.sinh(a)), abs=1e-15)
    assert h.cosh_half == pytest.approx(float(mpmath.cosh(a / 2)), abs=1e-15)
    assert h.sinh_half == pytest.approx(float(mpmath.sinh(a / 2)), abs=1e-15)
    assert (h.cosh_a, h.sinh_a) == pytest.approx((1.25, 0.75))


@settings(max_examples=1000)
@given(st.floats(0.0, 0.999))
def test_rapidity_identities(u):
    h = rapidity(u)
    assert abs(h.cosh_a**2 - h.sinh_a**2 - 1) < 1e-12 * h.cosh_a**2
    assert abs(h.cosh_half**2 + h.sinh_half**2 - h.cosh_a) < 1e-12 * h.cosh_a


def test_rapidity_rejects_light_speed():
    with pytest.raises(InvalidVelocityError):
        rapidity(1.0)


def test_phase_velocity():
    assert phase_velocity(1.0) == 1.0
    assert phase_velocity(0.5) == 2.0
    assert phase_velocity(0.0) is INFINITE_PHASE_VELOCITY


@given(st.floats(1e-6, 1.0))
def test_phase_times_group_velocity(u):
    assert phase_velocity(u) * u == pytest.approx(1.0, rel=1e-15)


def test_minkowski_orthogonal_tau_sigma():
    u = 0.37
    tau = Tangent6((1.0, u, 0, 0), "tau")
    sig = Tangent6((u, 1.0, 0, 0), "sigma")
    assert minkowski_dot(tau, sig) == 0.0
    t = Tangent6((1.0, 0, 0, 0), "tau")
    assert minkowski_dot(t, t) == 1.0


def test_minkowski_metric_context():
    a = Tangent6((1, 0, 0, 0, 2, 3), "sigma")
    assert minkowski_dot(a, a, psi=0.5) == pytest.approx(1 + 0.25 * 4 - 9)
    with pytest.raises(ValueError):
        Tangent6((0, 0, 0, 0), "tau")


@given(st.tuples(*[st.floats(-5, 5)] * 4), velocity())
def test_minkowski_dot_boost_invariant(comps, u):
    if not any(comps):
        return
    a = Tangent6(comps, "tau")
    L = boost_matrix(u)
    b = Tangent6(tuple(L @ a.as_array()), "tau")
    assert abs(minkowski_dot(a, a) - minkowski_dot(b, b)) < 1e-10 * (1 + float(np.sum(np.square(comps))))


@given(st.floats(0.01, 0.9))
def test_boosted_rest_tangents_stay_orthogonal(u):
    # rest-frame tau along x0 and sigma along x1, seen from a frame moving with -u
    L = boost_matrix((-u, 0, 0))
    tau = Tangent6(tuple(L @ np.array([1.0, 0, 0, 0, 0, 0])), "tau")
    sig = Tangent6(tuple(L @ np.array([0.0, 1, 0, 0, 0, 0])), "sigma")
    assert abs(minkowski_dot(tau, sig)) < 1e-10
    # the boosted tangents have slopes u and 1/u
    assert tau.components[1] / tau.components[0] == pytest.approx(u)
    assert sig.components[1] / sig.components[0] == pytest.approx(1 / u)
