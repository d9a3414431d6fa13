from __future__ import annotations

import math
from fractions import Fraction as Q

import pytest

from floerlat import complex as cx
from floerlat import invariants as iv
from floerlat import region as rg
from floerlat.invariants import STAR, PLFunction


def pl(points):
    return PLFunction.from_points(points)


def mirrored(points):
    return pl(points + [(2 - Q(t), v) for t, v in points])


# ---- classical functions -------------------------------------------------------------

def test_hopf_functions():
    hp, hm = cx.builtin("hopf+"), cx.builtin("hopf-")
    assert iv.upsilon_function(hp) == mirrored([(0, 0), (1, -1)])
    assert iv.upsilon_function(hp, STAR) == mirrored([(0, 0), (1, 0)])
    assert iv.upsilon_function(hm) == mirrored([(0, 0), (1, 0)])
    assert iv.upsilon_function(hm, STAR) == mirrored([(0, 0), (1, 1)])


def test_t33_functions():
    T = cx.builtin("t33")
    assert iv.upsilon_function(T) == pl([(0, 0), (Q(2, 3), -2), (Q(4, 3), -2), (2, 0)])
    assert iv.upsilon_function(T, STAR) == pl([(0, 0), (1, -1), (2, 0)])
    P = cx.builtin("t33prime")
    assert iv.upsilon_function(P) == pl([(0, 0), (2, 0)])
    assert iv.upsilon_function(P, STAR) == pl([(0, 0), (1, 1), (2, 0)])


def test_fig9_knot():
    K = cx.builtin("fig9")
    assert iv.upsilon_function(K) == pl([(0, 0), (2, 0)])
    assert iv.upsilon_region(K, rg.V_k(0)) == -2
    assert iv.upsilon_region(cx.builtin("unknot"), rg.V_k(0)) == 0


@pytest.mark.parametrize("name,n,sigma", [("trefoil+", 1, -2), ("trefoil-", 1, 2), ("t24star", 2, 3), ("hopf+", 2, -1)])
def test_quasi_alternating_formula(name, n, sigma):
    C = cx.builtin(name)
    u, us = iv.upsilon_function(C), iv.upsilon_function(C, STAR)
    for t in iv.farey(6):
        assert u(t) == Q(1 - n + sigma, 2) * t
        assert us(t) == Q(n - 1 + sigma, 2) * t


def test_t24star_star_value():
    assert iv.upsilon_t(cx.builtin("t24star"), 1, STAR) == 2


def test_pl_function_invariants_on_library():
    for name in cx.builtin_names():
        if name in ("L2", "L3", "j2"):
            continue
        f = iv.upsilon_function(cx.builtin(name))
        assert f(0) == 0 and f.is_symmetric()
        assert all(s.denominator == 1 for s in f.slopes)


def test_pl_function_basics():
    f = pl([(0, 0), (1, -1), (2, 0)])
    assert f(Q(1, 2)) == Q(-1, 2)
    assert f.slopes == (-1, 1)
    assert f.pieces()[0] == (0, 1, -1, 0)
    with pytest.raises(ValueError):
        f(3)
    with pytest.raises(iv.ReconstructionAmbiguity):
        PLFunction.from_points([(0, 0), (0, 1), (1, 0)])
    assert pl([(0, 0), (Q(1, 2), -1), (1, -2)]).breakpoints == (0, 1)


# ---- discrete invariants ----------------------------------------------------------------

def test_tau_family():
    assert iv.tau(cx.builtin("trefoil+")) == 1
    assert iv.tau(cx.builtin("nu")) == 0
    hp = cx.builtin("hopf+")
    assert (iv.tau(hp), iv.tau_star(hp)) == (1, 0)


def test_nu_family():
    N = cx.builtin("nu")
    assert iv.nu_plus(N) == 2
    assert [iv.V_of(N, k) for k in range(4)] == [1, 1, 0, 0]
    u = cx.builtin("unknot")
    assert (iv.nu_plus(u), iv.nu_hat(u), iv.nu_check(u)) == (0, 0, 0)
    t = cx.builtin("trefoil+")
    assert (iv.nu_plus(t), iv.nu_hat(t), iv.nu_check(t)) == (1, 1, 1)


def test_v1_of_trefoil_sum():
    t23, t27 = cx.builtin("trefoil+"), cx.builtin("t27")
    assert iv.upsilon_region(t23, rg.V_k(1)) == 0
    assert iv.upsilon_region(t27, rg.V_k(1)) == -2
    assert iv.upsilon_region(cx.tensor(t23, t27), rg.V_k(1)) == -4


def test_upsilon_sets():
    assert iv.upsilon_set(cx.builtin("t34")).values == (-2,)
    assert iv.upsilon_set(cx.unlink(2)).values == (0, -1)
    hp = iv.upsilon_set(cx.builtin("hopf+"))
    assert hp.values == (-1, -1)
    assert iv.upsilon_set(cx.builtin("t33")).values == (-2, -3, -3, -3)
    assert iv.upsilon_set(cx.builtin("t33prime")).values == (0, -1, -1, -1)
    for n in range(4):
        assert iv.upsilon_set(cx.builtin(f"L{n}")).upsilon_min == 1 - 2 * n


def test_upsilon_set_endpoints_match_functions():
    for name in ("hopf+", "hopf-", "t33", "t33prime", "whitehead", "t24star", "trefoil+"):
        C = cx.builtin(name)
        s = iv.upsilon_set(C)
        assert s.upsilon_1 == iv.upsilon_t(C, 1)
        assert s.upsilon_last == iv.upsilon_t(C, 1, STAR) + 1 - C.n_components


def test_normalized_upsilon_set():
    assert iv.normalized_upsilon_set(cx.builtin("hopf+"), -1, -1) == (0, 0)


def test_reference_classes():
    u = cx.builtin("unknot")
    assert iv.reference_generators(u) == [u.generators[0].id]
    u2 = cx.unlink(2)
    assert [u2.by_id[g].maslov for g in iv.reference_generators(u2, STAR)] == [-1]
    T = cx.builtin("t33")
    x = iv.reference_class(T)
    assert x and T.degree(0).cycles.contains(x)


def test_region_must_be_centered():
    with pytest.raises(rg.NotCentered):
        iv.upsilon_region(cx.builtin("unknot"), rg.V_ts(1, 1))


def test_zero_invariants_everywhere():
    """V(0) = W(0) = 0 forces every Upsilon_S to vanish; spot-check on the unknot and unlinks."""
    regions = [rg.A_t(Q(1, 3)), rg.V_k(0), rg.W_k(2), rg.staircase_region([(-1, 1), (0, 0)])]
    for C in (cx.builtin("unknot"), cx.unlink(2), cx.unlink(3)):
        for S in regions:
            assert iv.upsilon_region(C, S) == 0


def test_secondary_infinite_cases():
    R = (rg.A_t(Q(1, 2)), rg.A_t(1), rg.V_k(0))
    assert iv.upsilon_secondary(cx.builtin("unknot"), *R) == math.inf
    assert iv.upsilon_secondary(cx.unlink(2), *R) == math.inf


def test_secondary_distinguishes_equal_upsilon_pair():
    j1, j2 = cx.builtin("j1"), cx.builtin("j2")
    assert iv.upsilon_function(j1) == iv.upsilon_function(j2)
    assert cx.fingerprints_equal(j1, j2)
    R = (rg.A_t(Q(1, 10)), rg.A_t(Q(9, 10)), rg.A_t(Q(1, 2)))
    assert iv.upsilon_secondary(j1, *R) == Q(-5, 2)
    assert iv.upsilon_secondary(j2, *R) == Q(-7, 2)
    w = iv.secondary_scan(j1, j2)
    assert w == {"t_plus": "1/10", "t_minus": "9/10", "t": "1/2", "values": ["-5/2", "-7/2"]}


def test_report_shape():
    rep = iv.report(cx.builtin("trefoil+"))
    assert set(rep) == {"name", "n_components", "tau", "tau_star", "nu_plus", "nu_hat", "nu_check",
                        "upsilon", "upsilon_star", "upsilon_set", "fingerprint"}
    assert rep["upsilon"][1] == {"t": "1", "value": "-1"}


def test_plot_csv():
    text = iv.plot_csv(cx.builtin("trefoil+"))
    assert text.splitlines() == ["t,upsilon,upsilon_star", "0,0,0", "1,-1,-1", "2,0,0"]
