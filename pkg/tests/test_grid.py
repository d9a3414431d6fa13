from __future__ import annotations

import itertools
import random
import time

import pytest

from conftest import GRID_TREFOIL, GRID_UNKNOT, GRID_UNLINK, oracle_grid
from floerlat import complex as cx
from floerlat import grid as gr
from floerlat import invariants as iv


def strip(summary):
    return summary | {"name": ""}


def check_d_squared(C: cx.ModelComplex) -> None:
    """Count two-step paths between every pair of states; each must be even."""
    out = C.out_edges()
    for x in out:
        counts: dict[str, int] = {}
        for y in out[x]:
            for z in out.get(y, []):
                counts[z] = counts.get(z, 0) ^ 1
        assert not any(counts.values()), x


def test_parse_and_text_roundtrip(test_grids):
    for text in (GRID_UNKNOT, GRID_UNLINK, GRID_TREFOIL):
        G = gr.parse_grid(text)
        assert gr.parse_grid(G.to_text()) == G
    assert test_grids["unlink3"].doubly == frozenset({0})


@pytest.mark.parametrize("text", [
    "grid 2 1\n2 1\n1 2\n",
    "grid 2 1\n2 1\n1 1\n1\n",
    "grid 3 2\n1 2 3\n1 3 2\n1 2\n",
    "grid 2 2\n2 1\n1 2\n1\n",
    "gird 2 1\n2 1\n1 2\n1\n",
    "grid 2 1\n2 x\n1 2\n1\n",
    "grid 3 2\n1! 2 3\n1 3 2\n1\n",
])
def test_parse_errors(text):
    with pytest.raises(gr.GridParseError):
        gr.parse_grid(text)


def test_test_grids_validate(test_grids):
    # edge counts are cross-checked against oracle_grid in the exhaustive small-grid test
    sizes = {}
    for name, G in test_grids.items():
        C = gr.grid_complex(G)
        rep = cx.validate(C)
        sizes[name] = (len(C), len(C.edges), len(cx.reduce(C)), rep["link_rank"])
    assert sizes == {"unknot2": (2, 0, 2, 1), "unlink3": (6, 9, 4, 2), "trefoil5": (120, 850, 48, 1)}


def test_reduced_trefoil_matches_staircase(test_grids):
    R = cx.reduce(gr.grid_complex(test_grids["trefoil5"]))
    assert strip(iv.invariant_summary(R)) == strip(iv.invariant_summary(cx.builtin("trefoil+")))
    assert iv.tau(R) == 1


def test_unlink_grid_matches_model(test_grids):
    R = cx.reduce(gr.grid_complex(test_grids["unlink3"]))
    assert strip(iv.invariant_summary(R)) == strip(iv.invariant_summary(cx.unlink(2)))


def test_matches_independent_builder_for_all_small_grids():
    count = 0
    for g in (2, 3, 4):
        for O, X in itertools.product(itertools.permutations(range(g)), repeat=2):
            G = gr.from_markings(O, X)
            grades, edges = oracle_grid(G)
            assert gr.graded_states(G) == grades
            C = gr.grid_complex(G, check=False)
            assert set(C.edges) == {(gr.state_id(x), gr.state_id(y)) for x, y in edges}
            check_d_squared(C)
            count += 1
    assert count == 4 + 36 + 576


def _stabilized(G, seq):
    for row, corner in seq:
        G = gr.stabilize(G, row, corner)
    return G


def test_d_squared_exhaustive_through_size_six(test_grids):
    rng = random.Random(5)
    grids = [
        _stabilized(test_grids["trefoil5"], [(0, "NE")]),
        _stabilized(test_grids["unlink3"], [(1, "SW"), (0, "NW"), (2, "SE")]),
        _stabilized(test_grids["unknot2"], [(0, "NE"), (1, "SW"), (2, "NW")]),
    ]
    for g in (5, 6):
        for _ in range(3):
            O, X = list(range(g)), list(range(g))
            rng.shuffle(O)
            rng.shuffle(X)
            grids.append(gr.from_markings(O, X))
    for G in grids:
        C = gr.grid_complex(G)
        assert len(C) == len(gr.states(G.size))
        check_d_squared(C)


def test_rectangle_alexander_change(test_grids):
    G = test_grids["trefoil5"]
    gs = gr.graded_states(G)
    for r in gr.all_rectangles(G):
        Mx, Ax = gs[r.source]
        My, Ay = gs[r.target]
        assert Ay - Ax == r.n_o - r.n_x
        assert Mx - My == 1 - 2 * r.n_o


def _divide(num: dict[int, int], den: dict[int, int]) -> dict[int, int]:
    """Exact Laurent division, leading terms first."""
    num = dict(num)
    dt = max(den)
    out = {}
    while any(num.values()):
        top = max(e for e, v in num.items() if v)
        c = num[top] // den[dt]
        out[top - dt] = c
        for e, v in den.items():
            num[e + top - dt] = num.get(e + top - dt, 0) - c * v
        num = {e: v for e, v in num.items() if v}
    return out


def test_euler_characteristic_recovers_alexander(test_grids):
    one_minus = {0: 1, -1: -1}
    for name, expected in (("trefoil5", {1: 1, 0: -1, -1: 1}), ("unknot2", {0: 1})):
        G = test_grids[name]
        q = gr.grid_euler_characteristic(G)
        for _ in range(G.size - G.n_components):
            q = _divide(q, one_minus)
        assert q == expected
    assert gr.grid_euler_characteristic(test_grids["unlink3"]) == {}


def test_i_map_on_test_grids(test_grids):
    for G in test_grids.values():
        rep = gr.i_map_check(G)
        assert rep["ok"] and rep["prime_rank"] == 1 << (G.n_components - 1)


def test_upsilon_set_two_ways(test_grids):
    for G in test_grids.values():
        C = gr.grid_complex(G)
        assert gr.upsilon_set_prime(G).values == iv.upsilon_set(C).values
    assert gr.upsilon_set_prime(test_grids["trefoil5"]).values == (-1,)


def test_size_limit(test_grids):
    with pytest.raises(gr.GridSizeError):
        gr.grid_complex(test_grids["trefoil5"], limit=4)


def test_grid_info(test_grids):
    info = gr.grid_info(test_grids["unlink3"])
    assert info["n_components"] == 2 and info["states"] == 6 and info["special"] == [1, 2]


@pytest.mark.slow
def test_size_seven_benchmark(test_grids):
    G = _stabilized(test_grids["trefoil5"], [(1, "NE"), (1, "SW")])
    assert G.size == 7
    start = time.perf_counter()
    C = gr.grid_complex(G)
    R = cx.reduce(C)
    assert strip(iv.invariant_summary(R)) == strip(iv.invariant_summary(cx.builtin("trefoil+")))
    assert time.perf_counter() - start < 300
