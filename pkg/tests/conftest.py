from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from floerlat import complex as cx
from floerlat import grid as gr

GRID_UNKNOT = "grid 2 1\n2 1\n1 2\n1\n"
GRID_UNLINK = "grid 3 2\n1! 2 3\n1 3 2\n1 2\n"
GRID_TREFOIL = "grid 5 1\n4 5 1 2 3\n1 2 3 4 5\n1\n"


@pytest.fixture(scope="session")
def test_grids() -> dict[str, gr.GridDiagram]:
    return {
        "unknot2": gr.parse_grid(GRID_UNKNOT),
        "unlink3": gr.parse_grid(GRID_UNLINK),
        "trefoil5": gr.parse_grid(GRID_TREFOIL),
    }


# ---- brute-force oracles ------------------------------------------------------
# These deliberately avoid floerlat.f2linalg: plain xor enumeration only.

def span_set(vectors: list[int]) -> set[int]:
    out = {0}
    for v in vectors:
        out |= {x ^ v for x in out}
    return out


def raw_degree(C: cx.ModelComplex, d: int, a_off: int = 0) -> tuple[list[str], list[tuple[int, int]], dict[str, int], dict[str, int]]:
    """Basis ids and (j, A) positions of C_d, straight from the generator list."""
    ids, pos = [], []
    for g in C.generators:
        if (g.maslov - d) % 2 == 0:
            k = (g.maslov - d) // 2
            ids.append(g.id)
            pos.append((-k, g.alexander - k + a_off))
    idx = {x: i for i, x in enumerate(ids)}
    up = {g.id: i for i, g in enumerate(x for x in C.generators if (x.maslov - d - 1) % 2 == 0)}
    return ids, pos, idx, up


def raw_boundary_images(C: cx.ModelComplex, d: int) -> list[int]:
    """Images of the C_{d+1} basis in C_d."""
    _, _, idx, up = raw_degree(C, d)
    cols = [0] * len(up)
    for x, y in C.edges:
        if x in up:
            cols[up[x]] ^= 1 << idx[y]
    return cols


def raw_cycles(C: cx.ModelComplex, d: int) -> list[int]:
    ids, _, idx, _ = raw_degree(C, d)
    lower = {g.id: i for i, g in enumerate(x for x in C.generators if (x.maslov - d + 1) % 2 == 0)}
    out = []
    for v in range(1 << len(ids)):
        img = 0
        for x, y in C.edges:
            if x in idx and (v >> idx[x]) & 1:
                img ^= 1 << lower[y]
        if img == 0:
            out.append(v)
    return out


def brute_upsilon(C: cx.ModelComplex, S, ks: list[Fraction]) -> Fraction:
    """max k in ks such that a cycle supported in S_k represents the top class."""
    ids, pos, _, _ = raw_degree(C, 0)
    Z = raw_cycles(C, 0)
    B = span_set(raw_boundary_images(C, 0))

    def supp_ok(v: int, pred) -> bool:
        return all(pred(pos[i]) for i in range(len(ids)) if (v >> i) & 1)

    low = {z ^ b for z in Z if supp_ok(z, lambda p: p[0] <= -1) for b in B}
    ref = next(z for z in Z if supp_ok(z, lambda p: p[0] <= 0) and z not in low)
    best = None
    for k in sorted(ks):
        Sk = S.shift(k)
        if any(supp_ok(z, Sk.member) and (z ^ ref) in B for z in Z):
            best = k
    return best


def brute_upsilon_star(C: cx.ModelComplex, S, ks: list[Fraction]) -> Fraction:
    """max k in ks such that some cycle in S_k survives modulo lower-level cycles and boundaries."""
    m = C.free_basepoints
    d = 1 - C.n_components - m
    ids, pos, _, _ = raw_degree(C, d, m)
    Z = raw_cycles(C, d)
    B = span_set(raw_boundary_images(C, d))

    def supp_ok(v: int, pred) -> bool:
        return all(pred(pos[i]) for i in range(len(ids)) if (v >> i) & 1)

    low = {z ^ b for z in Z if supp_ok(z, lambda p: p[0] <= -1) for b in B}
    best = None
    for k in sorted(ks):
        Sk = S.shift(k)
        if any(supp_ok(z, Sk.member) and z not in low for z in Z):
            best = k
    return best


def brute_solve(cols: list[int], b: int, constraint_basis: list[int]) -> bool:
    span_c = span_set(constraint_basis)
    for w in range(1 << len(cols)):
        mw = 0
        for i, c in enumerate(cols):
            if (w >> i) & 1:
                mw ^= c
        if (b ^ mw) in span_c:
            return True
    return False


def small_library() -> list[cx.ModelComplex]:
    """Every shipped or derived complex with at most six generators."""
    names = [n for n in cx.builtin_names() if n[0] not in "Lj"]
    out = [c for c in (cx.builtin(n) for n in names) if len(c) <= 6]
    for n, sigma in ((1, -4), (1, -2), (1, 2), (1, 4), (2, -1), (2, 1)):
        out.append(cx.staircase_thin(n, sigma))
    out += [cx.unlink(2), cx.unlink(3), cx.direct_sum(cx.builtin("unknot"), cx.acyclic_square())]
    assert all(len(c) <= 6 for c in out)
    return out


def all_grid_pairs(g: int):
    return itertools.product(itertools.permutations(range(g)), repeat=2)


def gf2_solve(rows: list[int], ncols: int) -> int | None:
    """Each row is a bitset over ncols unknowns plus a constant bit at position ncols."""
    pivots: dict[int, int] = {}
    for r in rows:
        for c in range(ncols):
            if (r >> c) & 1:
                if c not in pivots:
                    pivots[c] = r
                    break
                r ^= pivots[c]
        else:
            if r:
                return None
    x = 0
    for c in sorted(pivots, reverse=True):
        r = pivots[c]
        bit = (r >> ncols) & 1
        for c2 in range(c + 1, ncols):
            if (r >> c2) & 1 and (x >> c2) & 1:
                bit ^= 1
        x |= bit << c
    return x


def gf2_solvable(rows: list[int], ncols: int) -> bool:
    return gf2_solve(rows, ncols) is not None


def _level_data(C: cx.ModelComplex):
    _, pos, idx, _ = raw_degree(C, 0)
    lower = {g.id: i for i, g in enumerate(x for x in C.generators if (x.maslov + 1) % 2 == 0)}
    d0 = [0] * len(pos)
    for x, y in C.edges:
        if x in idx:
            d0[idx[x]] ^= 1 << lower[y]
    return pos, d0, raw_boundary_images(C, 0)


def is_lower_class(C: cx.ModelComplex, v: int) -> bool:
    """v = z + boundary with z a cycle supported at j <= -1, by a separate elimination."""
    pos, d0, bnd = _level_data(C)
    n0 = len(pos)
    low = [i for i in range(n0) if pos[i][0] <= -1]
    N = len(low) + len(bnd)
    rows = []
    for i in range(n0):
        row = (1 << low.index(i)) if i in low else 0
        row |= sum(1 << (len(low) + c) for c in range(len(bnd)) if (bnd[c] >> i) & 1)
        rows.append(row | (((v >> i) & 1) << N))
    nlow = max((d.bit_length() for d in d0), default=0)
    for r in range(nlow):
        rows.append(sum(1 << a for a, i in enumerate(low) if (d0[i] >> r) & 1))
    return gf2_solvable(rows, N)


def is_cycle(C: cx.ModelComplex, v: int) -> bool:
    _, d0, _ = _level_data(C)
    img = 0
    for i, d in enumerate(d0):
        if (v >> i) & 1:
            img ^= d
    return img == 0


def reference_cycle(C: cx.ModelComplex) -> int:
    """A cycle at filtration level 0 that is nonzero modulo (cycles at j <= -1) + boundaries."""
    pos, d0, _ = _level_data(C)
    n0 = len(pos)
    low = [i for i in range(n0) if pos[i][0] <= -1]
    top = [i for i in range(n0) if pos[i][0] == 0]
    nrows = max((d.bit_length() for d in d0), default=0)
    for mask in range(1, 1 << len(top)):
        fixed = sum(1 << top[a] for a in range(len(top)) if (mask >> a) & 1)
        rows = []
        for r in range(nrows):
            const = sum((d0[i] >> r) & 1 for i in top if (fixed >> i) & 1) & 1
            rows.append(sum(1 << a for a, i in enumerate(low) if (d0[i] >> r) & 1) | (const << len(low)))
        sol = gf2_solve(rows, len(low))
        if sol is None:
            continue
        v = fixed | sum(1 << low[a] for a in range(len(low)) if (sol >> a) & 1)
        assert is_cycle(C, v)
        if not is_lower_class(C, v):
            return v
    raise AssertionError("no reference cycle")


def elim_upsilon(C: cx.ModelComplex, S, ks: list[Fraction]) -> Fraction:
    """max k in ks with ref + d(w) supported in S_k, decided by gf2_solve."""
    _, pos, _, _ = raw_degree(C, 0)
    bnd = raw_boundary_images(C, 0)
    ref = reference_cycle(C)
    best = None
    for k in sorted(ks):
        Sk = S.shift(k)
        rows = []
        for i, p in enumerate(pos):
            if not Sk.member(p):
                rows.append(sum(1 << c for c in range(len(bnd)) if (bnd[c] >> i) & 1) | (((ref >> i) & 1) << len(bnd)))
        if gf2_solvable(rows, len(bnd)):
            best = k
    return best


def brute_secondary(C: cx.ModelComplex, Sp, Sm, S, gp, gm, base, k_range=range(-40, 41)):
    """Secondary Upsilon by zero-coordinate constraints solved with a separate elimination.

    Unknowns: w1, w2 in C_1 and a in C_1 (restricted support). Constraints:
    ref + dw1 vanishes off S+_{gp}, ref + dw2 vanishes off S-_{gm}, da = dw1 + dw2.
    """
    _, pos0, _, _ = raw_degree(C, 0)
    n0 = len(pos0)
    d1 = raw_boundary_images(C, 0)
    n1 = len(d1)
    pos1 = [(-(g.maslov - 1) // 2, g.alexander - (g.maslov - 1) // 2) for g in C.generators if (g.maslov - 1) % 2 == 0]
    ref = reference_cycle(C)
    Spg, Smg = Sp.shift(gp), Sm.shift(gm)

    def feasible(allowed_a: set[int]) -> bool:
        # unknown layout: w1 (n1) | w2 (n1) | a (n1); constant bit at 3*n1
        N = 3 * n1
        rows = []
        for i in range(n0):
            col = [c for c in range(n1) if (d1[c] >> i) & 1]
            const = ((ref >> i) & 1) << N
            if not Spg.member(pos0[i]):
                rows.append(sum(1 << c for c in col) | const)
            if not Smg.member(pos0[i]):
                rows.append(sum(1 << (n1 + c) for c in col) | const)
            rows.append(sum((1 << c) | (1 << (n1 + c)) | (1 << (2 * n1 + c)) for c in col))
        for c in range(n1):
            if c not in allowed_a:
                rows.append(1 << (2 * n1 + c))
        return gf2_solvable(rows, N)

    base_set = {c for c in range(n1) if Spg.member(pos1[c]) or Smg.member(pos1[c])}
    if feasible(base_set):
        return float("inf")
    best = None
    for k in k_range:
        Sk = S.shift(k)
        if feasible(base_set | {c for c in range(n1) if Sk.member(pos1[c])}):
            best = k
    return -base + best


# ---- independent grid builder -------------------------------------------------

def oracle_grid(G: gr.GridDiagram) -> tuple[dict, set]:
    """Gradings and mod-2 rectangle edges from half-integer marking coordinates."""
    g, n = G.size, G.n_components
    Opts = [(G.O[r] + Fraction(1, 2), g - 1 - r + Fraction(1, 2)) for r in range(g)]
    Xpts = [(G.X[r] + Fraction(1, 2), g - 1 - r + Fraction(1, 2)) for r in range(g)]

    def I(P, Q):
        return sum(1 for p in P for q in Q if p[0] < q[0] and p[1] < q[1])

    def J(P, Q):
        return Fraction(I(P, Q) + I(Q, P), 2)

    def M(x, marks):
        P = [(i, x[i]) for i in range(g)]
        return J(P, P) - 2 * J(P, marks) + J(marks, marks) + 1

    grades = {}
    for x in itertools.permutations(range(g)):
        mo, mx = M(x, Opts), M(x, Xpts)
        grades[x] = (mo, (mo - mx) / 2 - Fraction(g - n, 2))
    edges: dict = {}
    for x in grades:
        for i in range(g):
            for j in range(i + 1, g):
                y = list(x)
                y[i], y[j] = x[j], x[i]
                y = tuple(y)
                for left, width, bottom, height in ((i, j - i, x[i], (x[j] - x[i]) % g),
                                                    (j, g - (j - i), x[j], (x[i] - x[j]) % g)):
                    cols = [(left + t) % g for t in range(width)]
                    rows = [(bottom + t) % g for t in range(height)]
                    if any(c in cols[1:] and x[c] in rows[1:] for c in range(g)):
                        continue
                    edges[(x, y)] = edges.get((x, y), 0) ^ 1
    return grades, {e for e, v in edges.items() if v}
