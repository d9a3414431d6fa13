from __future__ import annotations

import math
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floerlat import region as rg

LATTICE = [(j, a) for j in range(-20, 21, 2) for a in range(-20, 21, 2)]
HALF = [(Q(j, 2), Q(a, 2)) for j in range(-9, 10) for a in range(-9, 10)]


def same(S1, S2, pts=HALF):
    return all(S1.member(p) == S2.member(p) for p in pts)


def symmetric_staircase():
    # wedge along j + A = 0 outside [-2, 2], steps at (-2, 2) and (2, -2)
    return rg.region([[(1, 0, -2), (1, 1, 0)], [(1, 0, 2), (0, 1, 0)], [(0, 1, -2), (1, 1, 0)]])


def test_named_regions():
    assert same(rg.A_t(0), rg.region([[(1, 0, 0)]]))
    assert same(rg.A_t(2), rg.region([[(0, 1, 0)]]))
    assert same(rg.V_k(0), rg.region([[(1, 0, 0), (0, 1, 0)]]))
    with pytest.raises(rg.RegionError):
        rg.A_t(Q(5, 2))
    with pytest.raises(rg.RegionError):
        rg.staircase_region([(0, 0), (0, -1)])


def test_membership_and_shift():
    assert rg.A_t(1).member((0, 0))
    assert not rg.V_k(0).shift(2).member((0, 0))
    assert rg.V_k(0).shift(0).member((0, 0))
    S = rg.staircase_region([(-1, 2), (1, 0)])
    assert same(S.shift(1).shift(Q(1, 2)), S.shift(Q(3, 2)))


def test_strict_half_plane():
    S = rg.region([[(1, 0, 0, True)]])
    assert not S.member((0, 5)) and S.member((Q(-1, 10), 5))
    assert S.closure().member((0, 5))


def test_reflection():
    for t in (0, Q(1, 3), 1, Q(3, 2)):
        assert same(rg.A_t(t).reflect(), rg.A_t(2 - t))
    assert same(rg.V_k(3).reflect(), rg.region([[(0, 1, 0), (1, 0, 3)]]))
    S = symmetric_staircase()
    assert same(S.reflect().reflect(), S)


def test_iota_closure():
    for t in (0, Q(1, 4), Q(2, 3), 1):
        assert same(rg.A_t(t).iota_closure(), rg.A_t(t))
    for k in (-1, 0, 2):
        assert same(rg.V_k(k).iota_closure(), rg.W_k(k))
    T = symmetric_staircase()
    assert T.is_centered()
    assert same(T.iota_closure(), T)


def test_env_and_h():
    for t in (0, Q(1, 2), 1, 2):
        S = rg.A_t(t)
        assert same(rg.env(S), S) and rg.h(S) == 0
    assert same(rg.env(rg.V_k(1)), rg.region([[(1, 0, 0), (0, 1, 2)]]))
    assert rg.h(rg.V_k(1)) == 2
    wedge = rg.region([[(1, 0, 0), (1, 1, 0)]])
    assert rg.h(wedge) == 0
    with pytest.raises(rg.UnsupportedFamily):
        rg.h(symmetric_staircase())


def test_h_brute_force_on_staircases():
    """h against a direct search over k on a lattice probe set."""
    for corners in ([(0, 1), (1, 0)], [(-1, 2), (1, -1)], [(0, 0)], [(-2, 3), (0, 1), (2, 0)]):
        S = rg.staircase_region(corners)
        E = rg.env(S)
        pts = [(j, a) for j in range(-12, 13) for a in range(-12, 13)]
        brute = next(k for k in range(50) if all(S.shift(-k).member(p) for p in pts if E.member(p)))
        assert rg.h(S) == brute


def test_h_point():
    for t in (Q(1, 3), Q(2, 3), 1):
        S = rg.A_t(t)
        for m in range(6):
            assert rg.h_point(S, m, rational=True) == t * m
            assert rg.h_point(S, m) == math.ceil(t * m)
    for m in range(5):
        assert rg.h_point(rg.V_k(0), m) == 2 * m
    assert rg.h_point(symmetric_staircase(), 0) == 0
    with pytest.raises(rg.NotCentered):
        rg.h_point(rg.V_ts(1, 1), 1)


def test_down_closed_and_nested():
    for S in (rg.A_t(Q(1, 3)), rg.W_k(2), symmetric_staircase(), rg.staircase_region([(-3, 4), (0, 0), (5, -1)])):
        for j, a in LATTICE:
            if S.member((j, a)):
                assert S.member((j - 2, a)) and S.member((j, a - 2))
            if S.shift(1).member((j, a)):
                assert S.member((j, a))


def test_json_roundtrip_and_errors():
    S = symmetric_staircase()
    assert same(rg.from_json(S.to_json()), S)
    assert same(rg.from_json({"At": "1/2"}), rg.A_t(Q(1, 2)))
    assert same(rg.from_json({"corners": [[0, 1], [1, 0]]}), rg.staircase_region([(0, 1), (1, 0)]))
    with pytest.raises(rg.RegionError):
        rg.from_json({"nope": 1})
    with pytest.raises(rg.RegionError):
        rg.from_json([1, 2])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=1, max_size=4))
def test_iota_closure_involution_on_random_staircases(raw):
    js = sorted({j for j, _ in raw})
    As = sorted({a for _, a in raw}, reverse=True)[: len(js)]
    js = js[: len(As)]
    S = rg.staircase_region(list(zip(js, As)))
    assert same(S.iota_closure().iota_closure(), S.closure(), LATTICE)
