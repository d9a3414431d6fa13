"""Grid diagrams and their combinatorial chain complexes.

Rows are listed top to bottom and indexed from 0 internally; row ``r`` sits
at height ``g - 1 - r``. A marking in row ``r`` and column ``c`` occupies the
unit square with lower-left corner ``(c, g - 1 - r)``. A grid state is a
permutation ``x`` meaning the lattice points ``(i, x[i])``.

All variables are collapsed to ``U`` when building the F[U, U^-1] model, so
the result carries ``g - n`` free basepoints (see ``complex``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .complex import ModelComplex, make, validate
from .f2linalg import F2Matrix, F2Subspace, coordinate_subspace, kernel_image
from .invariants import UpsilonSet

DEFAULT_LIMIT = 7


class GridError(ValueError):
    pass


class GridParseError(GridError):
    pass


class GridSizeError(GridError):
    pass


@dataclass(frozen=True)
class GridDiagram:
    size: int
    O: tuple[int, ...]  # row -> column, 0-based
    X: tuple[int, ...]
    special: frozenset[int]  # rows of special O's
    doubly: frozenset[int] = frozenset()  # rows whose O and X share a square

    def __post_init__(self) -> None:
        g = self.size
        if g < 1 or len(self.O) != g or len(self.X) != g:
            raise GridError("marking lists must have length g")
        for name, perm in (("O", self.O), ("X", self.X)):
            if sorted(perm) != list(range(g)):
                raise GridError(f"{name} markings are not a permutation")
        for r in range(g):
            if (self.O[r] == self.X[r]) != (r in self.doubly):
                raise GridError(f"row {r + 1}: shared O/X square must be flagged with '!'")
        if not self.special or any(not 0 <= r < g for r in self.special):
            raise GridError("special O rows out of range")
        comps = trace_components(self)
        for comp in comps:
            if len(self.special.intersection(comp)) != 1:
                raise GridError("need exactly one special O per component")

    @property
    def n_components(self) -> int:
        return len(self.special)

    def o_squares(self) -> dict[tuple[int, int], int]:
        g = self.size
        return {(self.O[r], g - 1 - r): r for r in range(g)}

    def x_squares(self) -> dict[tuple[int, int], int]:
        g = self.size
        return {(self.X[r], g - 1 - r): r for r in range(g)}

    def to_text(self) -> str:
        o = " ".join(f"{c + 1}!" if r in self.doubly else str(c + 1) for r, c in enumerate(self.O))
        x = " ".join(str(c + 1) for c in self.X)
        s = " ".join(str(r + 1) for r in sorted(self.special))
        return f"grid {self.size} {self.n_components}\n{o}\n{x}\n{s}\n"


def _ints(line: str, what: str) -> list[str]:
    toks = line.split()
    if not toks:
        raise GridParseError(f"empty {what} line")
    return toks


def parse_grid(text: str) -> GridDiagram:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) != 4:
        raise GridParseError(f"expected 4 non-empty lines, got {len(lines)}")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "grid":
        raise GridParseError("first line must be 'grid g n'")
    try:
        g, n = int(head[1]), int(head[2])
        o_tok = _ints(lines[1], "O")
        doubly = frozenset(r for r, t in enumerate(o_tok) if t.endswith("!"))
        O = tuple(int(t.rstrip("!")) - 1 for t in o_tok)
        X = tuple(int(t) - 1 for t in _ints(lines[2], "X"))
        special = frozenset(int(t) - 1 for t in _ints(lines[3], "special"))
    except ValueError as exc:
        raise GridParseError(str(exc)) from exc
    if len(O) != g or len(X) != g:
        raise GridParseError(f"expected {g} O and X columns")
    try:
        G = GridDiagram(g, O, X, special, doubly)
    except GridError as exc:
        raise GridParseError(str(exc)) from exc
    if G.n_components != n:
        raise GridParseError(f"header says {n} components, diagram has {G.n_components}")
    return G


def load_grid(path) -> GridDiagram:
    with open(path) as fh:
        return parse_grid(fh.read())


def trace_components(G: GridDiagram) -> list[list[int]]:
    """Partition of rows (O markings) into link components."""
    o_row_of_col = {c: r for r, c in enumerate(G.O)}
    seen: set[int] = set()
    comps = []
    for start in range(G.size):
        if start in seen:
            continue
        comp = []
        r = start
        while r not in seen:
            seen.add(r)
            comp.append(r)
            r = o_row_of_col[G.X[r]]
        comps.append(sorted(comp))
    return comps


def unlink_markings(G: GridDiagram) -> GridDiagram:
    """Move the X's so each special O starts a cyclic run of rows forming an unknot."""
    g = G.size
    starts = sorted(G.special)
    X = [0] * g
    for i, s in enumerate(starts):
        end = (starts[(i + 1) % len(starts)] - 1) % g
        run = [s]
        while run[-1] != end:
            run.append((run[-1] + 1) % g)
        for a, b in zip(run, run[1:]):
            X[b] = G.O[a]
        X[s] = G.O[end]
    doubly = frozenset(r for r in range(g) if X[r] == G.O[r])
    return GridDiagram(g, G.O, tuple(X), G.special, doubly)


def stabilize(G: GridDiagram, row: int = 0, corner: str = "NE") -> GridDiagram:
    """X-stabilization at the X of ``row``; ``corner`` places the new O in the 2x2 block."""
    if corner not in ("NE", "NW", "SE", "SW"):
        raise GridError(f"bad corner {corner!r}")
    g = G.size
    c = G.X[row]
    new_r = row if corner[0] == "N" else row + 1  # index of the inserted row
    new_c = c + 1 if corner[1] == "E" else c  # index of the inserted column
    old_c = c if corner[1] == "E" else c + 1

    def col(k: int) -> int:
        return k + 1 if k >= new_c else k

    O: list[int] = []
    X: list[int] = []
    special = set()
    doubly = set()
    for r in range(g + 1):
        if r == new_r:
            O.append(new_c)
            X.append(old_c)
            continue
        src = r - 1 if r > new_r else r
        O.append(col(G.O[src]))
        X.append(new_c if src == row else col(G.X[src]))
        if src in G.special:
            special.add(r)
    doubly = {r for r in range(g + 1) if O[r] == X[r]}
    return GridDiagram(g + 1, tuple(O), tuple(X), frozenset(special), frozenset(doubly))


# ---- gradings ---------------------------------------------------------------

def _I(P: list[tuple[int, int]], Q: list[tuple[int, int]]) -> int:
    return sum(1 for p in P for q in Q if p[0] < q[0] and p[1] < q[1])


def _m_function(pts: list[tuple[int, int]], marks: list[tuple[int, int]], mm: int) -> int:
    # J(x,x) - 2 J(x,M) + J(M,M) + 1 with J symmetrized; coordinates doubled
    return _I(pts, pts) - _I(pts, marks) - _I(marks, pts) + mm + 1


class _Grader:
    def __init__(self, G: GridDiagram) -> None:
        g = G.size
        self.g = g
        self.n = G.n_components
        self.Op = [(2 * G.O[r] + 1, 2 * (g - 1 - r) + 1) for r in range(g)]
        self.Xp = [(2 * G.X[r] + 1, 2 * (g - 1 - r) + 1) for r in range(g)]
        self.oo = _I(self.Op, self.Op)
        self.xx = _I(self.Xp, self.Xp)

    def __call__(self, x: tuple[int, ...]) -> tuple[int, int]:
        pts = [(2 * i, 2 * x[i]) for i in range(self.g)]
        mo = _m_function(pts, self.Op, self.oo)
        mx = _m_function(pts, self.Xp, self.xx)
        twice_a = mo - mx - (self.g - self.n)
        if twice_a % 2:
            raise GridError("half-integral Alexander grading; check the special set")
        return mo, twice_a // 2


def gradings(G: GridDiagram, x: tuple[int, ...]) -> tuple[int, int, int]:
    M, A = _Grader(G)(tuple(x))
    return M, A, M - A


# ---- rectangles -------------------------------------------------------------

@dataclass(frozen=True)
class Rectangle:
    source: tuple[int, ...]
    target: tuple[int, ...]
    n_o: int
    n_x: int
    squares: frozenset[tuple[int, int]]


def states(g: int) -> list[tuple[int, ...]]:
    return list(itertools.permutations(range(g)))


def state_id(x: tuple[int, ...]) -> str:
    return "".join(str(v) for v in x) if len(x) <= 10 else ",".join(map(str, x))


def rectangles_from(G: GridDiagram, x: tuple[int, ...]) -> Iterator[Rectangle]:
    """Empty rectangles out of ``x`` (X markings allowed inside)."""
    g = G.size
    osq = G.o_squares()
    xsq = G.x_squares()
    for i in range(g):
        for j in range(i + 1, g):
            y = list(x)
            y[i], y[j] = x[j], x[i]
            yt = tuple(y)
            for left, width, bottom, height in (
                (i, j - i, x[i], (x[j] - x[i]) % g),
                (j, g - (j - i), x[j], (x[i] - x[j]) % g),
            ):
                cols = [(left + t) % g for t in range(width)]
                rows = [(bottom + t) % g for t in range(height)]
                inner_c = set(cols[1:])
                inner_r = set(rows[1:])
                if any(x[c] in inner_r for c in inner_c):
                    continue
                sq = frozenset((c, r) for c in cols for r in rows)
                yield Rectangle(x, yt, sum(1 for s in sq if s in osq), sum(1 for s in sq if s in xsq), sq)


def all_rectangles(G: GridDiagram) -> Iterator[Rectangle]:
    for x in states(G.size):
        yield from rectangles_from(G, x)


def _check_size(G: GridDiagram, limit: int) -> None:
    if G.size > limit:
        raise GridSizeError(f"grid size {G.size} exceeds limit {limit}")


def graded_states(G: GridDiagram) -> dict[tuple[int, ...], tuple[int, int]]:
    grade = _Grader(G)
    return {x: grade(x) for x in states(G.size)}


def _edge_parity(G: GridDiagram, key) -> dict:
    acc: dict = {}
    for r in all_rectangles(G):
        k = key(r)
        acc[k] = acc.get(k, 0) ^ 1
    return acc


def grid_complex(G: GridDiagram, limit: int = DEFAULT_LIMIT, name: str = "grid", check: bool = True) -> ModelComplex:
    _check_size(G, limit)
    gr = graded_states(G)
    # the O-count is determined by the Maslov gradings, so parity by (x, y) is enough
    par = _edge_parity(G, lambda r: (r.source, r.target))
    gens = [(state_id(x), M, A) for x, (M, A) in gr.items()]
    edges = sorted((state_id(x), state_id(y)) for (x, y), v in par.items() if v)
    C = make(name, G.n_components, gens, edges, m=G.size - G.n_components)
    if check:
        validate(C)
    return C


# ---- the delta-graded complex ------------------------------------------------

@dataclass(frozen=True)
class PrimeComplex:
    """Complex over F[U, U^-1] with U lowering delta by one; powers are implied."""

    n_components: int
    free_basepoints: int
    delta: dict  # id -> delta grading
    edges: tuple[tuple[str, str], ...]

    def power(self, x: str, y: str) -> int:
        return self.delta[y] - self.delta[x] + 1

    @property
    def ids(self) -> list[str]:
        return list(self.delta)

    def matrix(self) -> F2Matrix:
        idx = {g: i for i, g in enumerate(self.delta)}
        cols = [0] * len(idx)
        for x, y in self.edges:
            cols[idx[x]] ^= 1 << idx[y]
        return F2Matrix(len(idx), len(idx), tuple(cols))

    def positions(self, d: int) -> list[int]:
        """j-level of each basis element in delta degree d."""
        return [d - self.delta[g] for g in self.delta]

    def homology_rank(self) -> int:
        D = self.matrix()
        ker, img = kernel_image(D)
        return ker.dim - img.dim

    def top_level_dims(self) -> dict[int, int]:
        """dim F^0 H_d / F^-1 H_d for every d where it is nonzero."""
        D = self.matrix()
        ker, img = kernel_image(D)
        ds = sorted(set(self.delta.values()))
        out = {}
        for d in range(ds[0], ds[-1] + 1):
            js = self.positions(d)
            f0 = ker.intersection(coordinate_subspace(len(js), [i for i, j in enumerate(js) if j <= 0]))
            f1 = ker.intersection(coordinate_subspace(len(js), [i for i, j in enumerate(js) if j <= -1]))
            dim = f0.sum(img).dim - f1.sum(img).dim
            if dim:
                out[d] = dim
        return out


def prime_complex(G: GridDiagram, limit: int = DEFAULT_LIMIT) -> PrimeComplex:
    _check_size(G, limit)
    gr = graded_states(G)
    par = _edge_parity(G, lambda r: (r.source, r.target, r.n_o + r.n_x))
    edges = []
    for (x, y, p), v in par.items():
        if v:
            if gr[y][0] - gr[y][1] - (gr[x][0] - gr[x][1]) + 1 != p:
                raise GridError("delta grading does not match rectangle count")
            edges.append((state_id(x), state_id(y)))
    if len(set(edges)) != len(edges):
        raise GridError("parallel rectangles with different powers")
    C = PrimeComplex(
        G.n_components,
        G.size - G.n_components,
        {state_id(x): M - A for x, (M, A) in gr.items()},
        tuple(sorted(edges)),
    )
    if not C.matrix().compose(C.matrix()).is_zero():
        raise GridError("CFL' differential does not square to zero")
    return C


def i_map_check(G: GridDiagram, limit: int = DEFAULT_LIMIT) -> dict:
    """Check U^k x -> U^(2k - A(x)) x carries the collapsed complex onto CFL'."""
    C = grid_complex(G, limit, check=False)
    P = prime_complex(G, limit)
    predicted = set()
    for x, y in C.edges:
        k = C.power(x, y)
        Ax, Ay = C.by_id[x].alexander, C.by_id[y].alexander
        predicted.add((x, y, int(2 * k - Ay + Ax)))
    actual = {(x, y, P.power(x, y)) for x, y in P.edges}
    delta_ok = all(P.delta[g.id] + g.alexander == g.maslov for g in C.generators)
    ok = predicted == actual and delta_ok
    rep = {
        "ok": ok,
        "edges": len(actual),
        "missing": len(actual - predicted),
        "extra": len(predicted - actual),
        "delta_matches_maslov": delta_ok,
        "prime_rank": P.homology_rank() >> P.free_basepoints,
    }
    if not ok:
        raise GridError(f"i-map check failed: {rep}")
    return rep


def upsilon_set_prime(G: GridDiagram, limit: int = DEFAULT_LIMIT) -> UpsilonSet:
    """delta-gradings of the top algebraic level of CFL' homology."""
    P = prime_complex(G, limit)
    dims = P.top_level_dims()
    scale = 1 << P.free_basepoints
    vals = []
    for d, c in dims.items():
        if c % scale:
            raise GridError(f"multiplicity {c} at delta {d} not divisible by {scale}")
        vals += [d] * (c // scale)
    if len(vals) != 1 << (P.n_components - 1):
        raise GridError(f"expected {1 << (P.n_components - 1)} values, got {len(vals)}")
    return UpsilonSet(tuple(sorted(vals, reverse=True)))


def grid_info(G: GridDiagram) -> dict:
    comps = trace_components(G)
    return {
        "size": G.size,
        "n_components": G.n_components,
        "components": [[r + 1 for r in c] for c in comps],
        "special": sorted(r + 1 for r in G.special),
        "states": len(states(G.size)) if G.size <= DEFAULT_LIMIT else None,
        "expected_rank": 1 << (G.size - 1),
    }


def grid_euler_characteristic(G: GridDiagram) -> dict[int, int]:
    chi: dict[int, int] = {}
    for M, A in graded_states(G).values():
        chi[A] = chi.get(A, 0) + (-1) ** (M % 2)
    return {a: v for a, v in chi.items() if v}


def from_marking_set(g: int, squares: set[tuple[int, int]]) -> GridDiagram:
    """Orient an unoriented marking set (col, row) with two marks per row and column.

    Walks each cycle alternating between rows and columns, calling the first
    mark of each row an O.
    """
    by_row: dict[int, list[int]] = {r: [] for r in range(g)}
    by_col: dict[int, list[int]] = {c: [] for c in range(g)}
    for c, r in squares:
        by_row[r].append(c)
        by_col[c].append(r)
    if any(len(v) != 2 for v in by_row.values()) or any(len(v) != 2 for v in by_col.values()):
        raise GridError("need exactly two marks per row and column")
    O = [-1] * g
    X = [-1] * g
    for start in range(g):
        if O[start] != -1:
            continue
        r, c = start, sorted(by_row[start])[0]
        while O[r] == -1:
            O[r] = c
            rows = by_col[c]
            r2 = rows[1] if rows[0] == r else rows[0]
            cs = by_row[r2]
            X[r2] = c
            c = cs[1] if cs[0] == c else cs[0]
            r = r2
    return from_markings(O, X)


def from_markings(O: Sequence[int], X: Sequence[int]) -> GridDiagram:
    """Grid from O/X permutations; the top row of each component carries the special O."""
    g = len(O)
    tmp = GridDiagram.__new__(GridDiagram)
    object.__setattr__(tmp, "size", g)
    object.__setattr__(tmp, "O", tuple(O))
    object.__setattr__(tmp, "X", tuple(X))
    special = frozenset(comp[0] for comp in trace_components(tmp))
    doubly = frozenset(r for r in range(g) if O[r] == X[r])
    return GridDiagram(g, tuple(O), tuple(X), special, doubly)
