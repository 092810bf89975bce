import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from leafavg.actions1d import iet_rotation
from leafavg.averages import Observable1D, constant, time_average
from leafavg.flows import (FlowPoint, SuspensionFlow, SuspensionSpace, affine_roof, base_cosine,
                           component_sign, constant_roof, dyadic_times, flow, hitting_time_list,
                           hitting_times, leaf_pieces, leaf_time_average, length_average,
                           segments, suspension_preset, time_average_series, trajectory_csv)
from leafavg.group_core import DomainError

import oracles

KEANE = suspension_preset("keane")


def _circ(a, b):
    return abs((a - b + 0.5) % 1.0 - 0.5)


def test_hitting_time_basics():
    s = constant_roof(iet_rotation(Fraction(2, 7)))
    assert hitting_times(s, Fraction(1, 3), 0) == 0
    assert hitting_times(s, Fraction(1, 3), 9) == 9
    assert hitting_times(s, Fraction(1, 3), -4) == -4


def test_hitting_time_affine_roof():
    beta = Fraction(3, 10)
    s = affine_roof(iet_rotation(beta), Fraction(1, 2))
    x = Fraction(1, 5)
    want = oracles.direct_hitting_time(lambda u: 1 + u / 2, lambda u: oracles.rotation_step(beta, u), x, 3)
    assert hitting_times(s, x, 3) == want


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 0.999), st.integers(1, 60))
def test_hitting_time_recurrence(x, n):
    taus = hitting_time_list(KEANE, x, n)
    xn = x
    for k in range(n):
        assert taus[k + 1] == taus[k] + KEANE.height(xn)
        xn = KEANE.base.forward(xn)
    assert all(b > a for a, b in zip(taus, taus[1:]))
    assert KEANE.roof_inf <= taus[-1] / n <= KEANE.roof_sup


def test_flow_examples():
    s = constant_roof(iet_rotation(Fraction(2, 7)))
    z = FlowPoint(Fraction(1, 9), 0)
    assert flow(s, z, 0) == z
    p = flow(s, z, Fraction(5, 2))
    T = s.base
    assert p == FlowPoint(T.forward(T.forward(z.x)), Fraction(1, 2))
    with pytest.raises(DomainError):
        flow(s, FlowPoint(0.1, 1.5), 0.0)


def test_semigroup_random():
    rnd = random.Random(7)
    worst = 0.0
    for _ in range(1000):
        x = rnd.random()
        z = FlowPoint(x, rnd.random() * KEANE.height(x) * 0.999)
        a, b = rnd.uniform(-50, 50), rnd.uniform(-50, 50)
        p, q = flow(KEANE, flow(KEANE, z, a), b), flow(KEANE, z, a + b)
        worst = max(worst, _circ(p.x, q.x) + abs(p.y - q.y))
    assert worst <= 1e-9


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 0.999), st.floats(0.01, 0.99), st.floats(-30, 30))
def test_flow_inverse(x, yf, t):
    z = FlowPoint(x, yf * KEANE.height(x))
    w = flow(KEANE, flow(KEANE, z, t), -t)
    assert _circ(w.x, z.x) + abs(w.y - z.y) <= 1e-12


def test_segments_cover_interval():
    z = FlowPoint(0.4, 0.3)
    segs = segments(KEANE, z, -7.5, 12.25)
    assert segs[0][0] == pytest.approx(-7.5) and segs[-1][1] == pytest.approx(12.25)
    for a, b in zip(segs, segs[1:]):
        assert a[1] == pytest.approx(b[0], abs=1e-12)
    # every piece lies on the orbit
    for ts, te, x, y, L in segs[1:-1]:
        p = flow(KEANE, z, 0.5 * (ts + te))
        assert _circ(p.x, x) < 1e-12 and p.y == pytest.approx(y + 0.5 * L, abs=1e-9)


def test_box_volume_preserved():
    # images of small boxes have the same measure: fibres are translated, base is Lebesgue-preserving
    s = affine_roof(iet_rotation(math.sqrt(2) - 1), 0.5)
    rnd = np.random.default_rng(3)
    pts = [(rnd.random() * 0.8 + 0.1, rnd.random() * 0.5) for _ in range(200)]
    t = 3.7
    imgs = [flow(s, FlowPoint(x, y), t) for x, y in pts]
    back = [flow(s, p, -t) for p in imgs]
    assert max(_circ(b.x, x) + abs(b.y - y) for b, (x, y) in zip(back, pts)) < 1e-12
    # total Lebesgue measure of X_rho via Monte Carlo is invariant: count image points by fibre height
    assert all(0 <= p.y < s.height(p.x) for p in imgs)


def test_time_average_constant():
    v, e = leaf_time_average(KEANE, constant(2.0), FlowPoint(0.2, 0.1), 33.0)
    assert v == pytest.approx(2.0, abs=1e-14)


def test_time_average_uniquely_ergodic():
    s = suspension_preset("rotation")
    v, _ = leaf_time_average(s, base_cosine(), FlowPoint(0.0, 0.0), 1e4)
    assert abs(v) <= 1e-2


def test_time_average_via_generic_quadrature():
    s = suspension_preset("rotation")
    psi = Observable1D(lambda x, y: np.cos(2 * np.pi * x), {})
    v, err = time_average(SuspensionFlow(s), psi, FlowPoint(0.0, 0.0), 1e3)
    w, _ = leaf_time_average(s, base_cosine(), FlowPoint(0.0, 0.0), 1e3)
    assert abs(v - w) <= 1e-9 and err <= 1e-9


def test_reducible_components():
    s = suspension_preset("reducible")
    up, _ = leaf_time_average(s, component_sign(), FlowPoint(0.1, 0.2), 1e4)
    down, _ = leaf_time_average(s, component_sign(), FlowPoint(0.8, 0.2), 1e4)
    assert up == 1.0 and down == -1.0


def test_time_shift_invariance():
    s = suspension_preset("rotation")
    z = FlowPoint(0.3, 0.4)
    T, t0 = 2000.0, 5.0
    a, _ = leaf_time_average(s, base_cosine(), z, T)
    b, _ = leaf_time_average(s, base_cosine(), flow(s, z, t0), T)
    assert abs(a - b) <= 2 * t0 / T


@pytest.mark.parametrize("r", [0.3, 5.0, 123.4])
def test_length_equals_time_average(r):
    z = FlowPoint(0.31, 0.2)
    assert length_average(KEANE, base_cosine(2), z, r) == leaf_time_average(KEANE, base_cosine(2), z, r)[0]
    psi = Observable1D(lambda x, y: np.cos(2 * np.pi * x) * np.sin(y), {})
    assert length_average(KEANE, psi, z, r) == pytest.approx(leaf_time_average(KEANE, psi, z, r)[0],
                                                             abs=1e-12)


def test_leaf_pieces_total_length():
    pieces = leaf_pieces(KEANE, FlowPoint(0.5, 0.5), 40.0)
    assert math.fsum(L for *_, L in pieces) == pytest.approx(80.0, abs=1e-12)


def test_series_and_csv():
    s = suspension_preset("rotation")
    ser = time_average_series(s, base_cosine(), FlowPoint(0.0, 0.0), dyadic_times(0, 9))
    assert len(ser) == 10 and ser.liminfEstimate <= ser.limsupEstimate
    out = trajectory_csv(s, FlowPoint(0.0, 0.0), 1.0, 0.5)
    assert out.splitlines()[0] == "t,x,y" and len(out.splitlines()) == 6


def test_bad_roof():
    with pytest.raises(ValueError):
        SuspensionSpace(iet_rotation(0.3), lambda x: 1.0, 0.0, 1.0)
