from fractions import Fraction
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from leafavg.group_core import (FreeGroupAction, GeneratorSymbol, ResourceCapError, DomainError,
                                Word, ball_size, ball_to_csv, enumerate_ball, folner_bound,
                                folner_defect, lambda_series, orbit_ball, orbit_to_csv, reduce)
from leafavg.actions1d import rotation_action, make_ping_pong, TorusAction, make_torus

import oracles

codes = st.lists(st.integers(0, 5), max_size=12)


def test_generator_inverse():
    g = GeneratorSymbol(2, -1)
    assert g.inverse() == GeneratorSymbol(2, 1)
    assert g.inverse().inverse() == g
    assert str(g) == "A2"
    assert GeneratorSymbol.from_code(g.code) == g


def test_reduce_examples():
    assert reduce(Word.parse("a1A1")) == Word(())
    assert reduce(Word.parse("a1a2A2")) == Word.parse("a1")
    assert reduce(Word.parse("a1a2A1")) == Word.parse("a1a2A1")


def test_parse_roundtrip_and_errors():
    w = Word.parse("a1A2a10")
    assert str(w) == "a1A2a10"
    assert Word.parse("") == Word(()) == Word.parse("e")
    with pytest.raises(ValueError):
        Word.parse("a1b2")


@given(codes)
def test_reduce_is_idempotent_and_reduced(cs):
    w = reduce(Word(tuple(cs)))
    assert w.is_reduced()
    assert reduce(w) == w


@given(codes, codes)
def test_reduce_respects_group_law(a, b):
    wa, wb = Word(tuple(a)), Word(tuple(b))
    assert reduce(wa * wb) == reduce(reduce(wa) * reduce(wb))
    assert reduce(wa * wa.inverse()) == Word(())


@pytest.mark.parametrize("k,n,count", [(2, 1, 4), (2, 3, 52), (1, 3, 6)])
def test_ball_examples(k, n, count):
    assert len(enumerate_ball(k, n)) == count


@pytest.mark.parametrize("k,n", [(1, 5), (2, 1), (2, 4), (3, 3), (4, 2)])
def test_ball_matches_brute_force(k, n):
    ball = enumerate_ball(k, n)
    got = [str(w) for w in ball.words]
    want = {"".join(w) for w in oracles.brute_ball(k, n)}
    assert len(got) == len(set(got)) == len(want)
    assert set(got) == want


def test_ball_matches_product_oracle_small():
    got = {str(w) for w in enumerate_ball(2, 3).words}
    assert got == {"".join(w) for w in oracles.brute_ball_by_products(2, 3)}


def test_ball_canonical_order():
    words = list(enumerate_ball(2, 4).words)
    keys = [w.sort_key() for w in words]
    assert keys == sorted(keys)
    assert all(1 <= len(w) <= 4 and w.is_reduced() for w in words)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 4), st.integers(1, 8))
def test_ball_size_closed_form(k, n):
    if ball_size(k, n) > 2_000_000:
        return
    ball = enumerate_ball(k, n)
    assert len(ball) == oracles.closed_form_ball(k, n)
    assert ball.sphereOffsets[-1] == len(ball)


def test_ball_cap():
    with pytest.raises(ResourceCapError):
        enumerate_ball(3, 12)
    with pytest.raises(ResourceCapError):
        enumerate_ball(2, 5, cap=100)


def test_ball_csv():
    text = ball_to_csv(enumerate_ball(1, 2))
    assert text.splitlines()[0] == "word,length,point"
    assert len(text.splitlines()) == 5


def test_orbit_rational_rotation():
    R = rotation_action(Fraction(1, 3))
    ob = orbit_ball(R, Fraction(0), 5)
    assert ob.cardinality == 3 == oracles.rotation_orbit_size(Fraction(1, 3), Fraction(0), 5)
    reps = ob.representatives()
    assert [str(w) for w, _ in reps] == ["a1", "A1", "a1a1a1"]


def test_orbit_irrational_rotation():
    ob = orbit_ball(rotation_action(math.sqrt(2) - 1), 0.0, 5)
    assert ob.cardinality == 10


def test_orbit_free_group_action():
    F = FreeGroupAction(2)
    ob = orbit_ball(F, Word.parse("a1"), 4)
    assert ob.cardinality == ball_size(2, 4)
    pts = [p for _, p in ob.representatives(2)]
    assert len(set(pts)) == len(pts)
    assert all(p.is_reduced() for p in pts)


def test_orbit_domain_errors():
    with pytest.raises(DomainError):
        orbit_ball(rotation_action(0.1), 1.5, 3)
    with pytest.raises(DomainError):
        orbit_ball(FreeGroupAction(2), Word.parse("a3"), 3)
    with pytest.raises(ValueError):
        orbit_ball(rotation_action(0.1), 0.0, 3, tol=-1)


def test_orbit_cap():
    with pytest.raises(ResourceCapError):
        orbit_ball(rotation_action(0.1, 0.2 ** 0.5), 0.0, 6, cap=100)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 60), st.integers(1, 40), st.integers(1, 12))
def test_orbit_rational_matches_oracle(p, q, n):
    alpha = Fraction(p, q)
    y = Fraction(1, 7)
    ob = orbit_ball(rotation_action(alpha), y, n)
    assert ob.cardinality == oracles.rotation_orbit_size(alpha, y, n)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.01, 0.99), st.integers(2, 9))
def test_orbit_nested(alpha, n):
    ob = orbit_ball(rotation_action(alpha, 0.5 * alpha + 0.1), 0.25, n)
    sizes = ob.sizes
    assert all(a <= b for a, b in zip(sizes, sizes[1:]))
    inner = set(ob.class_ids(n - 1).tolist())
    assert inner <= set(ob.class_ids(n).tolist())


def test_orbit_points_separated():
    ob = orbit_ball(rotation_action(0.1, 0.1 + 1e-12), 0.0, 4)
    pts = np.sort(np.asarray(ob.points()))
    gaps = np.diff(np.concatenate([pts, [pts[0] + 1]]))
    assert gaps.min() > ob.tolerance


def test_orbit_representatives_shortest_lexmin():
    # rotation by 1/4: every class has several shortest words
    ob = orbit_ball(rotation_action(Fraction(1, 4)), Fraction(0), 3)
    reps = {p: str(w) for w, p in ob.representatives()}
    assert reps == {Fraction(1, 4): "a1", Fraction(3, 4): "A1", Fraction(1, 2): "a1a1"}


def test_orbit_csv():
    ob = orbit_ball(rotation_action(Fraction(1, 3)), Fraction(0), 2)
    lines = orbit_to_csv(ob).splitlines()
    assert lines[0] == "word,length,point"
    assert lines[1] == "a1,1,1/3"


def test_lambda_free_group():
    s = lambda_series(FreeGroupAction(2), Word(()), 10)
    assert s.indices == list(range(2, 11))
    assert s.exact[-1] == Fraction(4 * 3 ** 9, 2 * (3 ** 10 - 1)) == Fraction(78732, 118096)
    assert abs(s.values[-1] - 78732 / 118096) <= 1e-12
    assert s.window_size == 3


def test_lambda_z():
    s = lambda_series(rotation_action(math.sqrt(2) - 1), 0.0, 100)
    assert s.values[-1] == 1 / 100
    assert s.exact[-1] == Fraction(1, 100)


def test_lambda_torus_two_generators():
    R = make_torus([[math.sqrt(2), math.sqrt(3)], [math.sqrt(5), math.sqrt(7)]])
    s = lambda_series(TorusAction(R), (0.0, 0.0), 20)
    # y itself is reached by a1a2A1A2, so |G_20(y)| = 2*20*21 + 1
    assert s.exact[-1] == Fraction(80, oracles.z2_orbit_size(20)) == Fraction(80, 841)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_z2_lattice_oracle_agrees_with_words(n):
    R = make_torus([[math.sqrt(2), math.sqrt(3)], [math.sqrt(5), math.sqrt(7)]])
    ob = orbit_ball(TorusAction(R), (0.0, 0.0), n)
    assert ob.cardinality == oracles.z2_orbit_size(n) == oracles.z2_orbit_size_by_words(n)


def test_lambda_one_generator_is_one_over_n():
    s = lambda_series(rotation_action(math.sqrt(3) - 1), 0.1, 30)
    assert all(q == Fraction(1, n) for n, q in zip(s.indices, s.exact))
    assert all(a > b for a, b in zip(s.values, s.values[1:]))


def test_lambda_needs_two():
    with pytest.raises(ValueError):
        lambda_series(FreeGroupAction(2), Word(()), 1)


def test_folner_identity_word():
    R = rotation_action(Fraction(1, 3))
    assert folner_defect(R, Fraction(0), Word.parse("a1a1a1"), 6) == 0


@pytest.mark.parametrize("n", [1, 5, 40])
def test_folner_z(n):
    got = folner_defect(rotation_action(math.sqrt(2) - 1), 0.0, Word.parse("a1"), n)
    assert got == float(oracles.z_folner(n))
    # the punctured interval {-n..n}\{0} loses two points at each shift
    assert got == 2 / n
    assert got <= folner_bound(rotation_action(math.sqrt(2) - 1), 0.0, Word.parse("a1"), n) + 1e-15


def test_folner_free_group_bound():
    F = FreeGroupAction(2)
    a = Word.parse("a1")
    val = folner_defect(F, Word(()), a, 6)
    bound = 2 * 1 * (ball_size(2, 7) - ball_size(2, 6)) / ball_size(2, 6)
    assert val <= bound
    assert folner_bound(F, Word(()), a, 6) == bound


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=5), st.integers(1, 5))
def test_folner_reduce_invariance(cs, n):
    R = rotation_action(math.sqrt(2) - 1, math.sqrt(5) - 2)
    w = Word(tuple(cs))
    assert folner_defect(R, 0.3, w, n) == folner_defect(R, 0.3, reduce(w), n)


def test_ping_pong_orbit_free_small():
    t = make_ping_pong()
    ob = orbit_ball(t.action(), t.base_point, 5)
    assert list(ob.sizes) == [ball_size(3, m) for m in range(6)]
