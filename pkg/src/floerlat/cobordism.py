"""Chain maps induced by elementary grid moves, with checkable grading contracts."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Union

from .complex import ModelComplex, reduce
from .grid import (
    DEFAULT_LIMIT,
    GridDiagram,
    GridError,
    PrimeComplex,
    grid_complex,
    prime_complex,
    stabilize,
    state_id,
    from_markings,
    states,
)
from .invariants import invariant_summary

Complex = Union[ModelComplex, PrimeComplex]


class CobordismError(ValueError):
    pass


class NotRelated(CobordismError):
    pass


class NotAChainMap(CobordismError):
    pass


# ---- uniform access to both complex flavors ----------------------------------

def _out(C: Complex) -> dict[str, list[str]]:
    if isinstance(C, ModelComplex):
        return C.out_edges()
    out: dict[str, list[str]] = {g: [] for g in C.delta}
    for x, y in C.edges:
        out[x].append(y)
    return out


def _power(C: Complex, x: str, y: str) -> int:
    return int(C.power(x, y))


def _ids(C: Complex) -> list[str]:
    return [g.id for g in C.generators] if isinstance(C, ModelComplex) else list(C.delta)


@dataclass
class ChainMap:
    """U-equivariant map: each source generator goes to a sum of U^p y."""

    source: Complex
    target: Complex
    images: dict[str, list[tuple[str, int]]]
    declared: dict[str, int] = field(default_factory=dict)

    def apply(self, terms: dict[tuple[str, int], int]) -> dict[tuple[str, int], int]:
        out: dict[tuple[str, int], int] = {}
        for (x, p), c in terms.items():
            if not c:
                continue
            for y, q in self.images.get(x, ()):
                key = (y, p + q)
                out[key] = out.get(key, 0) ^ 1
        return {k: v for k, v in out.items() if v}

    def check_chain(self) -> bool:
        dsrc, dtgt = _out(self.source), _out(self.target)
        for x in _ids(self.source):
            lhs: dict[tuple[str, int], int] = {}
            for y in dsrc[x]:
                for z, q in self.images.get(y, ()):
                    key = (z, _power(self.source, x, y) + q)
                    lhs[key] = lhs.get(key, 0) ^ 1
            rhs: dict[tuple[str, int], int] = {}
            for z, q in self.images.get(x, ()):
                for w in dtgt[z]:
                    key = (w, q + _power(self.target, z, w))
                    rhs[key] = rhs.get(key, 0) ^ 1
            if {k for k, v in lhs.items() if v} != {k for k, v in rhs.items() if v}:
                return False
        return True

    def entry_shifts(self) -> list[dict[str, int]]:
        """Per entry: grading shift, Alexander shift (model only), j shift."""
        out = []
        for x, imgs in self.images.items():
            for y, p in imgs:
                if isinstance(self.source, ModelComplex):
                    gx, gy = self.source.by_id[x], self.target.by_id[y]
                    out.append({"dM": gy.maslov - 2 * p - gx.maslov, "dA": gy.alexander - p - gx.alexander, "dj": -p})
                else:
                    out.append({"dDelta": self.target.delta[y] - p - self.source.delta[x], "dj": -p})
        return out

    def shift_ranges(self) -> dict[str, tuple[int, int]]:
        rng: dict[str, tuple[int, int]] = {}
        for e in self.entry_shifts():
            for k, v in e.items():
                lo, hi = rng.get(k, (v, v))
                rng[k] = (min(lo, v), max(hi, v))
        return rng

    def check_declared(self, sharp: bool = True) -> bool:
        """Gradings shift exactly; filtrations shift by at most the declared amount."""
        rng = self.shift_ranges()
        for k, v in self.declared.items():
            if k not in rng:
                continue
            lo, hi = rng[k]
            if k in ("dM", "dDelta"):
                if lo != v or hi != v:
                    return False
            elif hi > v or (sharp and hi != v):
                return False
        return True

    def verify(self, sharp: bool = True) -> "ChainMap":
        if not self.check_chain():
            raise NotAChainMap("map does not commute with the differentials")
        if not self.check_declared(sharp):
            raise NotAChainMap(f"declared shifts {self.declared} violated: {self.shift_ranges()}")
        return self

    def compose(self, first: "ChainMap") -> "ChainMap":
        """self after first."""
        imgs = {x: sorted(_compose_terms(first.images.get(x, []), self.images)) for x in _ids(first.source)}
        return ChainMap(first.source, self.target, imgs)


def _compose_terms(terms: list[tuple[str, int]], images: dict[str, list[tuple[str, int]]]) -> list[tuple[str, int]]:
    acc: dict[tuple[str, int], int] = {}
    for y, p in terms:
        for z, q in images.get(y, ()):
            acc[(z, p + q)] = acc.get((z, p + q), 0) ^ 1
    return [k for k, v in acc.items() if v]


# ---- band move -----------------------------------------------------------------

def band_related(G1: GridDiagram, G2: GridDiagram) -> tuple[int, int] | None:
    """Rows (r, r+1) whose X's swap between adjacent columns, if that is the only change."""
    if G1.size != G2.size or G1.O != G2.O:
        return None
    g = G1.size
    diff = [r for r in range(g) if G1.X[r] != G2.X[r]]
    if len(diff) != 2:
        return None
    r1, r2 = diff
    if r2 - r1 != 1:
        return None
    a, b = G1.X[r1], G1.X[r2]
    if abs(a - b) != 1 or (G2.X[r1], G2.X[r2]) != (b, a):
        return None
    return r1, r2


def _identity(G1: GridDiagram, G2: GridDiagram, limit: int) -> ChainMap:
    C1 = grid_complex(G1, limit, check=False)
    C2 = grid_complex(G2, limit, check=False)
    return ChainMap(C1, C2, {g.id: [(g.id, 0)] for g in C1.generators})


def band_identity_map(G1: GridDiagram, G2: GridDiagram, limit: int = DEFAULT_LIMIT) -> ChainMap:
    """Identity on grid states across a band that merges two components.

    Only the X's move, so differential and Maslov grading are untouched; the
    Alexander grading can only drop when components merge.
    """
    if G1 != G2 and band_related(G1, G2) is None:
        raise NotRelated("grids are not related by an adjacent X swap")
    f = _identity(G1, G2, limit)
    if f.shift_ranges()["dA"][1] > 0:
        raise NotRelated("band runs the other way: Alexander grading would increase")
    f.declared = {"dM": 0, "dA": 0, "dj": 0}
    return f.verify()


def torus_map(G1: GridDiagram, G2: GridDiagram, G3: GridDiagram, limit: int = DEFAULT_LIMIT) -> ChainMap:
    """Two band identities on one component: a split followed by a merge."""
    for a, b in ((G1, G2), (G2, G3)):
        if band_related(a, b) is None:
            raise NotRelated("consecutive grids must differ by an adjacent X swap")
    if G1.n_components != G3.n_components:
        raise NotRelated("a torus move keeps the number of components")
    f = _identity(G2, G3, limit).compose(_identity(G1, G2, limit))
    f.declared = {"dM": 0, "dA": 1, "dj": 0}
    return f.verify(sharp=False)


def band_swap(G: GridDiagram, row: int) -> GridDiagram:
    """Swap the X's of ``row`` and ``row + 1``; special O's are reassigned."""
    X = list(G.X)
    X[row], X[row + 1] = X[row + 1], X[row]
    return from_markings(G.O, X)


# ---- split map ----------------------------------------------------------------------

def split_corner(G1: GridDiagram, G2: GridDiagram) -> tuple[int, int]:
    """Lattice point at the center of the 2x2 block where the O's move."""
    if G1.size != G2.size or G1.X != G2.X:
        raise NotRelated("split needs equal size and X markings")
    g = G1.size
    diff = [r for r in range(g) if G1.O[r] != G2.O[r]]
    if len(diff) != 2 or diff[1] - diff[0] != 1:
        raise NotRelated("O markings must differ in two adjacent rows")
    r, s = diff
    c = G1.O[r]
    if G1.O[s] != c + 1 or (G2.O[r], G2.O[s]) != (c + 1, c):
        raise NotRelated("expected O's moving from UL/LR to LL/UR")
    if r not in G1.special or s in G1.special:
        raise NotRelated("UL marking must be special and LR normal in the source")
    if not {r, s} <= G2.special or G2.n_components != G1.n_components + 1:
        raise NotRelated("both new O's must be special in the target")
    return c + 1, g - 1 - r


def split_map(G1: GridDiagram, G2: GridDiagram, c: tuple[int, int] | None = None, limit: int = DEFAULT_LIMIT) -> ChainMap:
    """x -> x when the corner point is in x, U x otherwise."""
    corner = split_corner(G1, G2)
    if c is not None and tuple(c) != corner:
        raise NotRelated(f"corner {c} is not the block center {corner}")
    C1 = grid_complex(G1, limit, check=False)
    C2 = grid_complex(G2, limit, check=False)
    imgs = {}
    for x in states(G1.size):
        p = 0 if x[corner[0]] == corner[1] else 1
        imgs[state_id(x)] = [(state_id(x), p)]
    return ChainMap(C1, C2, imgs, {"dM": -1, "dA": 0, "dj": 0}).verify()


def induced_on_homology(f: ChainMap, d: int) -> tuple[int, int]:
    """(rank of H_d(f), dim of target H_{d + dM}) for model complexes."""
    from .f2linalg import F2Matrix, F2Subspace

    src, tgt = f.source, f.target
    assert isinstance(src, ModelComplex) and isinstance(tgt, ModelComplex)
    dM = f.declared.get("dM", 0)
    s, t = src.degree(d), tgt.degree(d + dM)
    tidx = {g.id: i for i, g in enumerate(t.gens)}
    cols = []
    for g in s.gens:
        v = 0
        for y, _p in f.images.get(g.id, ()):
            v ^= 1 << tidx[y]
        cols.append(v)
    M = F2Matrix(t.dim, s.dim, tuple(cols))
    img = F2Subspace.span(t.dim, [M.apply(z) for z in s.cycles.basis])
    return img.sum(t.boundaries).dim - t.boundaries.dim, t.homology_dim


# ---- unoriented saddle --------------------------------------------------------------

def saddle_block(G1: GridDiagram, G2: GridDiagram) -> tuple[tuple[int, int], bool]:
    """Center of the 2x2 block where the marking sets differ, and whether G1
    holds the lower-left/upper-right pair there."""
    if G1.size != G2.size:
        raise NotRelated("sizes differ")
    g = G1.size

    def marks(G: GridDiagram) -> set[tuple[int, int]]:
        return {(G.O[r], r) for r in range(g)} | {(G.X[r], r) for r in range(g)}

    m1, m2 = marks(G1), marks(G2)
    a, b = sorted(m1 - m2), sorted(m2 - m1)
    if len(a) != 2 or len(b) != 2:
        raise NotRelated("marking sets must differ in exactly two squares each")
    cols = {c for c, _ in a + b}
    rows = {r for _, r in a + b}
    if len(cols) != 2 or len(rows) != 2 or max(cols) - min(cols) != 1 or max(rows) - min(rows) != 1:
        raise NotRelated("changed markings must fill a 2x2 block")
    top, left = min(rows), min(cols)
    g1_anti = set(a) == {(left, top + 1), (left + 1, top)}
    return (left + 1, g - 1 - top), g1_anti


def saddle_corner(G1: GridDiagram, G2: GridDiagram) -> tuple[int, int]:
    return saddle_block(G1, G2)[0]


def nu_maps(G1: GridDiagram, G2: GridDiagram, limit: int = DEFAULT_LIMIT) -> tuple[ChainMap, ChainMap]:
    """(nu, nu') between the delta-graded complexes.

    nu multiplies by U exactly on states through the block center and runs
    from the grid whose block marks sit lower-left/upper-right.
    """
    c, g1_anti = saddle_block(G1, G2)
    if not g1_anti:
        raise NotRelated("source grid must carry the lower-left/upper-right marks; swap the arguments")
    P1 = prime_complex(G1, limit)
    P2 = prime_complex(G2, limit)

    def build(src: PrimeComplex, tgt: PrimeComplex, at_corner: int) -> ChainMap:
        imgs = {}
        for x in states(G1.size):
            p = at_corner if x[c[0]] == c[1] else 1 - at_corner
            imgs[state_id(x)] = [(state_id(x), p)]
        m = ChainMap(src, tgt, imgs)
        lo, hi = m.shift_ranges()["dDelta"]
        if lo != hi:
            raise NotAChainMap("saddle map is not delta-homogeneous")
        m.declared = {"dDelta": lo, "dj": 0}
        return m.verify()

    return build(P1, P2, 1), build(P2, P1, 0)


def delta_drop(m: ChainMap) -> int:
    return -m.shift_ranges()["dDelta"][0]


def saddle_drop_formula(e: int, lk1: int, lk2: int) -> tuple[Any, Any]:
    """Predicted delta drops of (nu, nu') from the Euler number and linking numbers."""
    from fractions import Fraction

    a = Fraction(2 - e, 4) - Fraction(lk1 - lk2, 2)
    b = Fraction(2 + e, 4) + Fraction(lk1 - lk2, 2)
    return a, b


def is_multiplication_by_u(m: ChainMap) -> bool:
    return all(imgs == [(x, 1)] for x, imgs in m.images.items()) and len(m.images) == len(_ids(m.source))


# ---- stabilization -------------------------------------------------------------------

def stabilization_invariance_check(G: GridDiagram, row: int = 0, corner: str = "NE", limit: int = DEFAULT_LIMIT) -> dict:
    if G.size + 1 > limit:
        raise GridError(f"stabilized size {G.size + 1} exceeds limit {limit}")
    H = stabilize(G, row, corner)
    a = invariant_summary(reduce(grid_complex(G, limit)))
    b = invariant_summary(reduce(grid_complex(H, limit)))
    a.pop("name")
    b.pop("name")
    return {"equal": a == b, "before": a, "after": b, "sizes": [G.size, H.size]}
