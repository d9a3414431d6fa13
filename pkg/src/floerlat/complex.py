"""Finitely generated bifiltered chain complexes over F[U, U^-1].

A generator ``x`` is stored at algebraic level zero with integer Maslov and
Alexander gradings. An edge ``x -> y`` is the term ``U^k y`` of ``d x`` with
``k = (M(y) - M(x) + 1) / 2``, so the U-power never has to be stored.

In Maslov degree ``d`` the chain group has one basis element ``U^k x`` for
every generator with ``M(x) = d (mod 2)``, ``k = (M(x) - d) / 2``, sitting at
plane position ``(j, A) = (-k, A(x) - k)``. The differential matrix between
the two parity classes is the same for every ``d``; only positions move.

``free_basepoints`` counts extra tensor factors of the two-generator complex
``W`` (zero differential, gradings (0, 0) and (-1, -1)) that appear when all
grid variables are collapsed to ``U``. They change ranks but none of the
invariants, which correct for them explicitly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb
from pathlib import Path
from typing import Any, Iterable, Sequence

from .f2linalg import F2Matrix, F2Subspace, bits, coordinate_subspace, kernel_image


class ComplexError(ValueError):
    pass


class MalformedComplex(ComplexError):
    pass


class InvalidDifferential(ComplexError):
    pass


class FiltrationViolation(ComplexError):
    pass


class WrongHomologyRank(ComplexError):
    pass


@dataclass(frozen=True, order=True)
class Generator:
    id: str
    maslov: int
    alexander: int


@dataclass(frozen=True)
class LatticePoint:
    j: int
    A: int


@dataclass(frozen=True)
class BasisElement:
    gen: str
    u_power: int
    position: tuple[int, int]
    maslov: int


class DegreeSpace:
    """Chain groups C_d, C_{d+1}, C_{d-1} of one Maslov degree, as bitsets."""

    def __init__(self, C: "ModelComplex", d: int, a_offset: int = 0) -> None:
        self.d = d
        p = d % 2
        self.gens = C.parity_class(p)
        self.dim = len(self.gens)
        self.positions: list[tuple[int, int]] = []
        for g in self.gens:
            k = (g.maslov - d) // 2
            self.positions.append((-k, g.alexander - k + a_offset))
        self.out = C.diff_matrix(p)  # C_d -> C_{d-1}
        self.inc = C.diff_matrix(1 - p)  # C_{d+1} -> C_d
        self._up_positions: list[tuple[int, int]] | None = None
        self._C = C
        self._a_offset = a_offset

    @cached_property
    def cycles(self) -> F2Subspace:
        return kernel_image(self.out)[0]

    @cached_property
    def boundaries(self) -> F2Subspace:
        return kernel_image(self.inc)[1]

    @property
    def homology_dim(self) -> int:
        return self.cycles.dim - self.boundaries.dim

    def support(self, pred) -> F2Subspace:
        return coordinate_subspace(self.dim, [i for i, pos in enumerate(self.positions) if pred(pos)])

    def cycles_in(self, pred) -> F2Subspace:
        return self.cycles.intersection(self.support(pred))

    def level_dim(self, pred) -> int:
        """dim of the image of (cycles supported where pred holds) in homology."""
        return self.cycles_in(pred).quotient_dim(self.boundaries)

    @cached_property
    def upper_positions(self) -> list[tuple[int, int]]:
        """Positions of the basis of C_{d+1}."""
        out = []
        for g in self._C.parity_class(1 - self.d % 2):
            k = (g.maslov - self.d - 1) // 2
            out.append((-k, g.alexander - k + self._a_offset))
        return out


@dataclass(frozen=True)
class ModelComplex:
    name: str
    n_components: int
    generators: tuple[Generator, ...]
    edges: tuple[tuple[str, str], ...]
    free_basepoints: int = 0
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        if self.n_components < 1:
            raise MalformedComplex("n_components must be positive")
        if self.free_basepoints < 0:
            raise MalformedComplex("free_basepoints must be non-negative")
        ids = [g.id for g in self.generators]
        if len(set(ids)) != len(ids):
            raise MalformedComplex("duplicate generator ids")
        known = set(ids)
        if len(set(self.edges)) != len(self.edges):
            raise MalformedComplex("duplicate edges")
        for x, y in self.edges:
            if x not in known or y not in known:
                raise MalformedComplex(f"edge {x}->{y} references unknown generator")
            if x == y:
                raise MalformedComplex(f"self-loop at {x}")

    # ---- basic accessors ---------------------------------------------------

    @property
    def total_basepoints(self) -> int:
        return self.n_components + self.free_basepoints

    @cached_property
    def by_id(self) -> dict[str, Generator]:
        return {g.id: g for g in self.generators}

    def power(self, x: str, y: str) -> Fraction:
        gx, gy = self.by_id[x], self.by_id[y]
        return Fraction(gy.maslov - gx.maslov + 1, 2)

    def parity_class(self, p: int) -> list[Generator]:
        key = ("parity", p)
        if key not in self._cache:
            self._cache[key] = [g for g in self.generators if g.maslov % 2 == p]
        return self._cache[key]

    def parity_index(self, p: int) -> dict[str, int]:
        key = ("pidx", p)
        if key not in self._cache:
            self._cache[key] = {g.id: i for i, g in enumerate(self.parity_class(p))}
        return self._cache[key]

    def diff_matrix(self, p: int) -> F2Matrix:
        """Differential from the parity-p generators to the other class."""
        key = ("diff", p)
        if key not in self._cache:
            src = self.parity_index(p)
            dst = self.parity_index(1 - p)
            cols = [0] * len(src)
            for x, y in self.edges:
                if x in src:
                    if y not in dst:
                        raise FiltrationViolation(f"edge {x}->{y} does not change Maslov parity")
                    cols[src[x]] ^= 1 << dst[y]
            self._cache[key] = F2Matrix(len(dst), len(src), tuple(cols))
        return self._cache[key]

    def degree(self, d: int, a_offset: int = 0) -> DegreeSpace:
        key = ("deg", d, a_offset)
        if key not in self._cache:
            self._cache[key] = DegreeSpace(self, d, a_offset)
        return self._cache[key]

    def basis(self, d: int) -> list[BasisElement]:
        sp = self.degree(d)
        return [
            BasisElement(g.id, (g.maslov - d) // 2, pos, d)
            for g, pos in zip(sp.gens, sp.positions)
        ]

    def alexander_span(self) -> int:
        if not self.generators:
            return 0
        a = [g.alexander for g in self.generators]
        return max(a) - min(a)

    def out_edges(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {g.id: [] for g in self.generators}
        for x, y in self.edges:
            out[x].append(y)
        return out

    def __len__(self) -> int:
        return len(self.generators)

    # ---- JSON --------------------------------------------------------------

    def to_json(self) -> dict[str, Any]:
        obj: dict[str, Any] = {
            "name": self.name,
            "n_components": self.n_components,
            "generators": [{"id": g.id, "maslov": g.maslov, "alexander": g.alexander} for g in self.generators],
            "edges": [[x, y] for x, y in self.edges],
        }
        if self.free_basepoints:
            obj["free_basepoints"] = self.free_basepoints
        return obj

    @classmethod
    def from_json(cls, obj: Any) -> "ModelComplex":
        try:
            gens = tuple(Generator(str(g["id"]), int(g["maslov"]), int(g["alexander"])) for g in obj["generators"])
            edges = tuple((str(e[0]), str(e[1])) for e in obj["edges"])
            return cls(
                str(obj.get("name", "complex")),
                int(obj["n_components"]),
                gens,
                edges,
                int(obj.get("free_basepoints", 0)),
            )
        except (KeyError, TypeError, IndexError) as exc:
            raise MalformedComplex(f"bad complex JSON: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    def renamed(self, name: str) -> "ModelComplex":
        return ModelComplex(name, self.n_components, self.generators, self.edges, self.free_basepoints)


def load_complex(path: str | Path) -> ModelComplex:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedComplex(f"{path}: {exc}") from exc
    return ModelComplex.from_json(obj)


def make(name: str, n: int, gens: Iterable[tuple[str, int, int]], edges: Iterable[tuple[str, str]], m: int = 0) -> ModelComplex:
    return ModelComplex(name, n, tuple(Generator(i, M, A) for i, M, A in gens), tuple(edges), m)


def from_positions(
    name: str,
    n: int,
    items: Iterable[tuple[str, int, int, int]],
    edges: Iterable[tuple[str, str]],
    m: int = 0,
) -> ModelComplex:
    """Build from ``(id, j, A, M)`` plane positions; normalizes to j = 0."""
    gens = [(i, M - 2 * j, A - j) for i, j, A, M in items]
    return make(name, n, gens, edges, m)


# ---- validation ------------------------------------------------------------

def expected_level_dims(N: int, d: int, t: int) -> int:
    return sum(comb(N - 1, k) for k in range(N) if (k - d) % 2 == 0 and (d + k) // 2 <= t)


def check_structure(C: ModelComplex) -> None:
    for x, y in C.edges:
        k2 = C.by_id[y].maslov - C.by_id[x].maslov + 1
        if k2 % 2:
            raise FiltrationViolation(f"edge {x}->{y}: Maslov gradings differ by an even amount")
        k = k2 // 2
        if k < 0:
            raise FiltrationViolation(f"edge {x}->{y}: negative U-power {k}")
        if C.by_id[y].alexander - k > C.by_id[x].alexander:
            raise FiltrationViolation(f"edge {x}->{y}: raises the Alexander filtration")
    for p in (0, 1):
        if not C.diff_matrix(1 - p).compose(C.diff_matrix(p)).is_zero():
            raise InvalidDifferential(f"{C.name}: d^2 != 0")


def validate(C: ModelComplex) -> dict[str, Any]:
    check_structure(C)
    N = C.total_basepoints
    report: dict[str, Any] = {"name": C.name, "generators": len(C), "levels": {}}
    total = 0
    for d in (0, -1):
        sp = C.degree(d)
        js = [pos[0] for pos in sp.positions] or [0]
        lo, hi = min(js) - 1, max(max(js), (d + N - 1) // 2 + 1)
        dims = {}
        for t in range(lo, hi + 1):
            got = sp.level_dim(lambda pos, t=t: pos[0] <= t)
            want = expected_level_dims(N, d, t)
            if got != want:
                raise WrongHomologyRank(
                    f"{C.name}: dim j^{t} H_{d} = {got}, expected {want} for {N} basepoints"
                )
            dims[t] = got
        report["levels"][d] = dims
        total += sp.homology_dim
    report["rank"] = total
    report["link_rank"] = total >> C.free_basepoints
    report["distribution"] = {-k: comb(N - 1, k) for k in range(N)}
    return report


def is_valid(C: ModelComplex) -> bool:
    try:
        validate(C)
    except ComplexError:
        return False
    return True


# ---- algebraic operations --------------------------------------------------

def _pair_id(a: str, b: str) -> str:
    return f"{a}&{b}"


def tensor(C1: ModelComplex, C2: ModelComplex, name: str | None = None) -> ModelComplex:
    gens = [
        (_pair_id(g.id, h.id), g.maslov + h.maslov, g.alexander + h.alexander)
        for g in C1.generators
        for h in C2.generators
    ]
    edges = []
    for x, y in C1.edges:
        for h in C2.generators:
            edges.append((_pair_id(x, h.id), _pair_id(y, h.id)))
    for g in C1.generators:
        for x, y in C2.edges:
            edges.append((_pair_id(g.id, x), _pair_id(g.id, y)))
    return make(
        name or f"{C1.name}#{C2.name}",
        C1.n_components + C2.n_components - 1,
        gens,
        edges,
        C1.free_basepoints + C2.free_basepoints,
    )


def tensor_power(C: ModelComplex, k: int) -> ModelComplex:
    out = unlink(1)
    for _ in range(k):
        out = tensor(out, C)
    return out.renamed(f"{C.name}^{k}")


def _toggle_star(s: str) -> str:
    return s[:-1] if s.endswith("*") else s + "*"


def mirror(C: ModelComplex) -> ModelComplex:
    N = C.total_basepoints
    m = C.free_basepoints
    gens = [(_toggle_star(g.id), -g.maslov + 1 - N, -g.alexander - m) for g in C.generators]
    edges = [(_toggle_star(y), _toggle_star(x)) for x, y in C.edges]
    return make(_toggle_star(C.name), C.n_components, gens, edges, m)


def shift(C: ModelComplex, a: int) -> ModelComplex:
    gens = [(g.id, g.maslov + a, g.alexander) for g in C.generators]
    return make(C.name if a == 0 else f"{C.name}[{a}]", C.n_components, gens, C.edges, C.free_basepoints)


def direct_sum(C1: ModelComplex, C2: ModelComplex, name: str | None = None) -> ModelComplex:
    if C1.n_components != C2.n_components:
        raise MalformedComplex("direct sum needs equal component counts")
    if C1.free_basepoints != C2.free_basepoints:
        raise MalformedComplex("direct sum needs equal free basepoint counts")
    ids1 = {g.id for g in C1.generators}
    clash = any(g.id in ids1 for g in C2.generators)
    f1 = (lambda s: "0:" + s) if clash else (lambda s: s)
    f2 = (lambda s: "1:" + s) if clash else (lambda s: s)
    gens = [(f1(g.id), g.maslov, g.alexander) for g in C1.generators]
    gens += [(f2(g.id), g.maslov, g.alexander) for g in C2.generators]
    edges = [(f1(x), f1(y)) for x, y in C1.edges] + [(f2(x), f2(y)) for x, y in C2.edges]
    return make(name or f"{C1.name}+{C2.name}", C1.n_components, gens, edges, C1.free_basepoints)


def unlink(n: int) -> ModelComplex:
    if n < 1:
        raise MalformedComplex("unlink needs at least one component")
    gens = []
    for mask in range(1 << (n - 1)):
        gens.append((f"u{mask:0{max(n - 1, 1)}b}", -bin(mask).count("1"), 0))
    return make("unknot" if n == 1 else f"unlink{n}", n, gens, [])


def disjoint_union(C1: ModelComplex, C2: ModelComplex) -> ModelComplex:
    return tensor(tensor(C1, C2), unlink(2), name=f"{C1.name}|{C2.name}")


# ---- closed-form builders --------------------------------------------------

def positive_staircase(s: int, top: int = 0, prefix: str = "") -> tuple[list, list]:
    """Unit-step staircase from (0, s) to (s, 0); whites at Maslov ``top``."""
    items = [(f"{prefix}w{i}", i, s - i, top) for i in range(s + 1)]
    items += [(f"{prefix}b{i}", i, s - i + 1, top + 1) for i in range(1, s + 1)]
    edges = []
    for i in range(1, s + 1):
        edges += [(f"{prefix}b{i}", f"{prefix}w{i - 1}"), (f"{prefix}b{i}", f"{prefix}w{i}")]
    return items, edges


def negative_staircase(s: int, top: int = 0, prefix: str = "") -> tuple[list, list]:
    """Mirror-image staircase with |s| steps; whites at Maslov ``top``."""
    s = abs(s)
    items = [(f"{prefix}w{i}", -i, -(s - i), top) for i in range(s + 1)]
    items += [(f"{prefix}g{i}", -i, -(s - i) - 1, top - 1) for i in range(1, s + 1)]
    edges = []
    for i in range(1, s + 1):
        edges += [(f"{prefix}w{i - 1}", f"{prefix}g{i}"), (f"{prefix}w{i}", f"{prefix}g{i}")]
    return items, edges


def acyclic_square_items(j: int, A: int, maslov: int, prefix: str = "q") -> tuple[list, list]:
    """Corner D at (j, A); A', B at (j-1, A), (j, A-1); C at (j-1, A-1)."""
    items = [
        (f"{prefix}D", j, A, maslov),
        (f"{prefix}A", j - 1, A, maslov - 1),
        (f"{prefix}B", j, A - 1, maslov - 1),
        (f"{prefix}C", j - 1, A - 1, maslov - 2),
    ]
    edges = [
        (f"{prefix}D", f"{prefix}A"),
        (f"{prefix}D", f"{prefix}B"),
        (f"{prefix}A", f"{prefix}C"),
        (f"{prefix}B", f"{prefix}C"),
    ]
    return items, edges


def acyclic_square(n: int = 1, j: int = 1, A: int = 3, maslov: int = 0, prefix: str = "q") -> ModelComplex:
    items, edges = acyclic_square_items(j, A, maslov, prefix)
    return from_positions("square", n, items, edges)


# Laurent polynomials in t as {exponent: coefficient}

def _lmul(p: dict[int, int], q: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for a, x in p.items():
        for b, y in q.items():
            out[a + b] = out.get(a + b, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _ladd(p: dict[int, int], q: dict[int, int], sign: int = 1) -> dict[int, int]:
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, 0) + sign * v
    return {k: v for k, v in out.items() if v}


def euler_characteristic(C: ModelComplex) -> dict[int, int]:
    chi: dict[int, int] = {}
    for g in C.generators:
        chi[g.alexander] = chi.get(g.alexander, 0) + (-1) ** (g.maslov % 2)
    return {k: v for k, v in chi.items() if v}


def conway_target(n: int, conway: Sequence[int]) -> dict[int, int]:
    """(t^1/2 - t^-1/2)^(n-1) * nabla(t^1/2 - t^-1/2) as a Laurent polynomial."""
    z2 = {1: 1, 0: -2, -1: 1}
    out: dict[int, int] = {}
    for k, c in enumerate(conway):
        if not c:
            continue
        e = n - 1 + k
        if e % 2:
            raise ComplexError("Conway polynomial parity does not match the component count")
        term = {0: c}
        for _ in range(e // 2):
            term = _lmul(term, z2)
        out = _ladd(out, term)
    return out


def staircase_thin(
    n: int,
    sigma: int,
    conway: Sequence[int] | None = None,
    include_squares: bool = False,
    name: str | None = None,
) -> ModelComplex:
    if n < 1:
        raise ComplexError("n must be positive")
    if (n - 1 - sigma) % 2:
        raise ComplexError(f"sigma = {sigma} has the wrong parity for n = {n}")
    items: list = []
    edges: list = []
    for k in range(n):
        s = (n - 1 - sigma) // 2 - k
        for r in range(comb(n - 1, k)):
            prefix = f"k{k}r{r}"
            if s > 0:
                it, ed = positive_staircase(s, -k, prefix)
            elif s < 0:
                it, ed = negative_staircase(s, -k, prefix)
            else:
                it, ed = [(prefix + "w0", 0, 0, -k)], []
            items += it
            edges += ed
    C = from_positions(name or f"thin({n},{sigma})", n, items, edges)
    if include_squares:
        if conway is None:
            raise ComplexError("squares need a Conway polynomial")
        residual = _ladd(conway_target(n, conway), euler_characteristic(C), -1)
        # each square at normalized Alexander a contributes c * t^(a-1) (t-1)^2
        coeffs = _divide_by_square(residual)
        c0 = (sigma - n + 1) // 2
        for a, c in sorted(coeffs.items()):
            maslov = a + c0
            sign = -((-1) ** (maslov % 2))
            if c * sign < 0:
                raise ComplexError("Euler characteristic cannot be matched by thin acyclic squares")
            for r in range(abs(c)):
                it, ed = acyclic_square_items(0, a, maslov, prefix=f"sq{a}_{r}")
                items += it
                edges += ed
        C = from_positions(C.name, n, items, edges)
    return C


def _divide_by_square(p: dict[int, int]) -> dict[int, int]:
    """Write p = sum c_a t^(a-1) (t-1)^2; return {a: c_a}."""
    if not p:
        return {}
    # multiply by t, then divide by t^2 - 2t + 1 from the top degree down
    rem = {k + 1: v for k, v in p.items()}
    out: dict[int, int] = {}
    while rem:
        top = max(rem)
        c = rem[top]
        a = top - 2
        out[a] = c
        rem = _ladd(rem, {a + 2: c, a + 1: -2 * c, a: c}, -1)
        if rem and max(rem) < min(p) - 2:
            raise ComplexError("Euler characteristic residual is not divisible by (t-1)^2")
        if len(out) > 10_000:
            raise ComplexError("runaway division")
    return out


def lspace_staircase(coeffs: Sequence[int], name: str = "lspace") -> ModelComplex:
    """Staircase for an L-space knot; ``coeffs`` runs from t^g down to t^-g."""
    cs = list(coeffs)
    if not cs or len(cs) % 2 == 0 or cs != cs[::-1]:
        raise ComplexError("coefficients must be a symmetric list of odd length")
    g = (len(cs) - 1) // 2
    exps = [g - i for i, c in enumerate(cs) if c]
    signs = [c for c in cs if c]
    if any(abs(c) != 1 for c in signs) or any(signs[i] != (-1) ** i for i in range(len(signs))):
        raise ComplexError("L-space coefficients must alternate +1, -1, ... starting with +1")
    gaps = [exps[i] - exps[i + 1] for i in range(len(exps) - 1)]
    items = []
    edges = []
    j, A = 0, g
    items.append(("x0", j, A, 0))
    for i in range(0, len(gaps), 2):
        # horizontal step to a black generator, vertical step down to a white
        j += gaps[i]
        items.append((f"x{i + 1}", j, A, 1))
        A -= gaps[i + 1]
        items.append((f"x{i + 2}", j, A, 0))
        edges += [(f"x{i + 1}", f"x{i}"), (f"x{i + 1}", f"x{i + 2}")]
    return from_positions(name, 1, items, edges)


def _poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    """Exact integer polynomial division, coefficient lists low to high."""
    num = num[:]
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        out[i] = c
        for k, dk in enumerate(den):
            num[i + k] -= c * dk
    if any(num):
        raise ComplexError("inexact division")
    return out


def torus_knot_alexander(p: int, q: int) -> list[int]:
    """Symmetrized Alexander polynomial of T(p, q), from t^g down to t^-g."""
    def xpow(e: int) -> list[int]:
        v = [0] * (e + 1)
        v[0], v[e] = -1, 1
        return v

    num = _lmul_list(xpow(p * q), xpow(1))
    den = _lmul_list(xpow(p), xpow(q))
    low_to_high = _poly_div_exact(num, den)
    return low_to_high[::-1]


def _lmul_list(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for k, y in enumerate(b):
            out[i + k] += x * y
    return out


# ---- reduction ---------------------------------------------------------------

def reduce(C: ModelComplex) -> ModelComplex:
    """Cancel edges with U-power 0 and no Alexander drop until none remain."""
    by = C.by_id
    out: dict[str, set[str]] = {g.id: set() for g in C.generators}
    inn: dict[str, set[str]] = {g.id: set() for g in C.generators}
    for x, y in C.edges:
        out[x].add(y)
        inn[y].add(x)
    alive = {g.id: None for g in C.generators}  # insertion-ordered set
    queue = list(alive)
    while queue:
        x = queue.pop()
        if x not in alive:
            continue
        target = None
        for y in sorted(out[x]):
            if by[y].maslov == by[x].maslov - 1 and by[y].alexander == by[x].alexander:
                target = y
                break
        if target is None:
            continue
        y = target
        zs = [z for z in inn[y] if z != x]
        ws = [w for w in out[x] if w != y]
        for z in zs:
            for w in ws:
                if w in out[z]:
                    out[z].remove(w)
                    inn[w].remove(z)
                else:
                    out[z].add(w)
                    inn[w].add(z)
        for v in (x, y):
            for w in out[v]:
                inn[w].discard(v)
            for z in inn[v]:
                out[z].discard(v)
            out[v] = set()
            inn[v] = set()
            del alive[v]
        queue.extend(zs)
    gens = [by[g] for g in alive]
    edges = sorted((x, y) for x in alive for y in out[x])
    return ModelComplex(C.name, C.n_components, tuple(gens), tuple(edges), C.free_basepoints)


# ---- comparisons -------------------------------------------------------------

def default_window(C: ModelComplex) -> tuple[int, int, int, int]:
    js, As = [], []
    for d in (0, -1):
        for pos in C.degree(d).positions:
            js.append(pos[0])
            As.append(pos[1])
    if not js:
        return (0, 0, 0, 0)
    return min(js), max(js), min(As), max(As)


def fingerprint(C: ModelComplex, window: tuple[int, int, int, int] | None = None) -> dict[tuple[int, int, int], int]:
    """dim F^{V_{t,s}} H_d for d in {0, -1} and (t, s) in the window."""
    own = default_window(C)
    if window is None:
        window = own
    jlo, jhi, alo, ahi = window
    if len(C) and (own[0] < jlo or own[1] > jhi or own[2] < alo or own[3] > ahi):
        raise ComplexError(f"window {window} does not cover generator positions {own}")
    table = {}
    for d in (0, -1):
        sp = C.degree(d)
        if sp.homology_dim == 0:
            continue
        for t in range(jlo, jhi + 1):
            for s in range(alo, ahi + 1):
                table[(d, t, s)] = sp.level_dim(lambda p, t=t, s=s: p[0] <= t and p[1] <= s)
    return table


def union_window(*cs: ModelComplex) -> tuple[int, int, int, int]:
    ws = [default_window(c) for c in cs if len(c)]
    if not ws:
        return (0, 0, 0, 0)
    return min(w[0] for w in ws), max(w[1] for w in ws), min(w[2] for w in ws), max(w[3] for w in ws)


def fingerprints_equal(C1: ModelComplex, C2: ModelComplex) -> bool:
    if C1.n_components != C2.n_components or C1.free_basepoints != C2.free_basepoints:
        return False
    w = union_window(C1, C2)
    return fingerprint(C1, w) == fingerprint(C2, w)


def _signature(C: ModelComplex) -> dict[str, tuple]:
    by = C.by_id
    outs: dict[str, list] = {g.id: [] for g in C.generators}
    ins: dict[str, list] = {g.id: [] for g in C.generators}
    for x, y in C.edges:
        outs[x].append((by[y].maslov, by[y].alexander))
        ins[y].append((by[x].maslov, by[x].alexander))
    return {g.id: (g.maslov, g.alexander, tuple(sorted(outs[g.id])), tuple(sorted(ins[g.id]))) for g in C.generators}


def isomorphic(C1: ModelComplex, C2: ModelComplex) -> bool:
    """Graded isomorphism of generator graphs (relabeling only)."""
    if (C1.n_components, C1.free_basepoints, len(C1), len(C1.edges)) != (
        C2.n_components, C2.free_basepoints, len(C2), len(C2.edges)
    ):
        return False
    s1, s2 = _signature(C1), _signature(C2)
    if sorted(s1.values()) != sorted(s2.values()):
        return False
    e2 = set(C2.edges)
    order = sorted(s1, key=lambda g: s1[g])
    cands = {g: [h for h in s2 if s2[h] == s1[g]] for g in order}
    order.sort(key=lambda g: len(cands[g]))
    adj1 = C1.out_edges()
    assign: dict[str, str] = {}
    used: set[str] = set()

    def ok(g: str, h: str) -> bool:
        for y in adj1[g]:
            if y in assign and (h, assign[y]) not in e2:
                return False
        for x, y in C1.edges:
            if y == g and x in assign and (assign[x], h) not in e2:
                return False
        return True

    def go(i: int) -> bool:
        if i == len(order):
            return True
        g = order[i]
        for h in cands[g]:
            if h not in used and ok(g, h):
                assign[g] = h
                used.add(h)
                if go(i + 1):
                    return True
                del assign[g]
                used.discard(h)
        return False

    return go(0)


def _map_space(C1: ModelComplex, C2: ModelComplex) -> list[tuple[str, str, int]]:
    """Basis of F-filtered degree-0 U-equivariant maps: x -> U^k y."""
    out = []
    for g in C1.generators:
        for h in C2.generators:
            if (h.maslov - g.maslov) % 2:
                continue
            k = (h.maslov - g.maslov) // 2
            if k >= 0 and h.alexander - k <= g.alexander:
                out.append((g.id, h.id, k))
    return out


def _chain_maps(C1: ModelComplex, C2: ModelComplex) -> tuple[list[tuple[str, str, int]], F2Subspace]:
    """All filtered chain maps as a subspace of the map-space coordinates."""
    basis = _map_space(C1, C2)
    # f d - d f evaluated on every generator, coordinates (source gen, target gen)
    # powers are forced by Maslov gradings, so coordinates can drop them
    idx: dict[tuple[str, str], int] = {}
    cols = []
    d1 = C1.out_edges()
    d2 = C2.out_edges()
    pre1: dict[str, list[str]] = {g.id: [] for g in C1.generators}
    for x, y in C1.edges:
        pre1[y].append(x)
    for (x, y, _k) in basis:
        v = 0
        # (d f)(x) contains d y
        for z in d2[y]:
            key = (x, z)
            if key not in idx:
                idx[key] = len(idx)
            v ^= 1 << idx[key]
        # (f d)(w) contains f(x) = y for every w with w -> x
        for w in pre1[x]:
            key = (w, y)
            if key not in idx:
                idx[key] = len(idx)
            v ^= 1 << idx[key]
        cols.append(v)
    ker, _ = kernel_image(F2Matrix(len(idx), len(basis), tuple(cols)))
    return basis, ker


def _induces_iso(C1: ModelComplex, C2: ModelComplex, basis: list[tuple[str, str, int]], v: int) -> bool:
    for d in (0, -1):
        s1, s2 = C1.degree(d), C2.degree(d)
        if s1.homology_dim != s2.homology_dim:
            return False
        i1 = C1.parity_index(d % 2)
        i2 = C2.parity_index(d % 2)
        cols = [0] * s1.dim
        for b in bits(v):
            x, y, _k = basis[b]
            if x in i1:
                cols[i1[x]] ^= 1 << i2[y]
        f = F2Matrix(s2.dim, s1.dim, tuple(cols))
        img = F2Subspace.span(s2.dim, [f.apply(z) for z in s1.cycles.basis])
        if img.sum(s2.boundaries).dim - s2.boundaries.dim != s2.homology_dim:
            return False
    return True


def exhaustive_local_equiv(C1: ModelComplex, C2: ModelComplex, budget: int = 16) -> str:
    """'yes', 'no', or 'exceeded' (map spaces too large to enumerate)."""
    if C1.n_components != C2.n_components or C1.free_basepoints != C2.free_basepoints:
        return "no"
    if not fingerprints_equal(C1, C2):
        return "no"
    for a, b in ((C1, C2), (C2, C1)):
        basis, ker = _chain_maps(a, b)
        if len(basis) > budget and ker.dim > budget:
            return "exceeded"
        found = any(_induces_iso(a, b, basis, v) for v in ker.elements() if v)
        if not found:
            return "no"
    return "yes"


# ---- example library -----------------------------------------------------------

def builtin_names() -> list[str]:
    from importlib import resources

    files = resources.files("floerlat") / "data"
    names = sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".json"))
    return names + [f"L{i}" for i in range(4)] + ["j1", "j2"]


def builtin(name: str) -> ModelComplex:
    """Shipped example complex.

    ``L<n>`` is T(2,4)* # T(3,4)^n; ``j1`` is T(5,7) and ``j2`` is
    T(2,5) # T(5,6), a pair with equal Upsilon functions.
    """
    from importlib import resources

    if name == "j1":
        return lspace_staircase(torus_knot_alexander(5, 7), "j1")
    if name == "j2":
        a = lspace_staircase(torus_knot_alexander(2, 5))
        b = lspace_staircase(torus_knot_alexander(5, 6))
        return tensor(a, b).renamed("j2")

    if len(name) >= 2 and name[0] == "L" and name[1:].isdigit():
        out = builtin("t24star")
        t34 = builtin("t34")
        for _ in range(int(name[1:])):
            out = tensor(out, t34)
        return out.renamed(name)
    res = resources.files("floerlat") / "data" / f"{name}.json"
    if not res.is_file():
        raise KeyError(f"unknown builtin {name!r}")
    return ModelComplex.from_json(json.loads(res.read_text()))
