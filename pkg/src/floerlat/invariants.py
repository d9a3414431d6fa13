"""Concordance invariants read off a ModelComplex.

Every invariant here is a feasibility question about filtered cycles in one
or two Maslov degrees. Region shifts are tested at the finitely many contact
values of basis positions, which is where membership can change.
"""

from __future__ import annotations

import bisect
import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Any, Iterable, Sequence

from . import region as rg
from .complex import ComplexError, DegreeSpace, ModelComplex, fingerprint, mirror
from .f2linalg import F2Matrix, F2Subspace, bits, coordinate_subspace, solve, solve_in_subspace

Q = Fraction
INF = math.inf

PRIMARY = "primary"
STAR = "star"


class InvariantError(ValueError):
    pass


class NoGenerator(InvariantError):
    pass


class ReconstructionAmbiguity(InvariantError):
    pass


class UpsilonSetMismatch(InvariantError):
    pass


# ---- degree bookkeeping ----------------------------------------------------

def _flavor_degree(C: ModelComplex, flavor: str) -> tuple[int, int]:
    """(Maslov degree, Alexander offset) that carries the reference class."""
    if flavor == PRIMARY:
        return 0, 0
    if flavor == STAR:
        # the W factors push the bottom class down by m in M and A
        return 1 - C.total_basepoints, C.free_basepoints
    raise InvariantError(f"unknown flavor {flavor!r}")


def _space(C: ModelComplex, flavor: str) -> DegreeSpace:
    d, off = _flavor_degree(C, flavor)
    return C.degree(d, off)


def reference_class(C: ModelComplex, flavor: str = PRIMARY) -> int:
    """A cycle at j-level 0 whose class is nonzero modulo j-level -1."""
    sp = _space(C, flavor)
    top = sp.cycles_in(lambda p: p[0] <= 0)
    low = sp.cycles_in(lambda p: p[0] <= -1).sum(sp.boundaries)
    for v in top.basis:
        if not low.contains(v):
            return v
    raise NoGenerator(f"{C.name}: no {flavor} generator at j-level 0")


def reference_generators(C: ModelComplex, flavor: str = PRIMARY) -> list[str]:
    sp = _space(C, flavor)
    return [sp.gens[i].id for i in bits(reference_class(C, flavor))]


# ---- Upsilon_S -------------------------------------------------------------

def _kappas(S: rg.SouthWestRegion, positions: Sequence[tuple[int, int]]) -> list[Fraction]:
    return [S.kappa(p) for p in positions]


def _max_feasible(cands: list, feasible) -> Any:
    """Largest candidate (sorted ascending) where monotone ``feasible`` holds."""
    lo, hi = 0, len(cands) - 1
    if hi < 0 or not feasible(cands[0]):
        return None
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if feasible(cands[mid]):
            lo = mid
        else:
            hi = mid - 1
    return cands[lo]


def _check_region(S: rg.SouthWestRegion) -> None:
    if not S.is_centered():
        raise rg.NotCentered("region is not centered at the origin")


def upsilon_region(C: ModelComplex, S: rg.SouthWestRegion, flavor: str = PRIMARY) -> Fraction:
    _check_region(S)
    sp = _space(C, flavor)
    kap = _kappas(S, sp.positions)
    cands = sorted(set(kap))
    if not cands:
        raise InvariantError("empty candidate set")

    if flavor == PRIMARY:
        x0 = reference_class(C, PRIMARY)

        def feasible(k: Fraction) -> bool:
            sub = coordinate_subspace(sp.dim, [i for i, v in enumerate(kap) if v >= k])
            return solve_in_subspace(sp.inc, x0, sub) is not None
    else:
        low = sp.cycles_in(lambda p: p[0] <= -1).sum(sp.boundaries)

        def feasible(k: Fraction) -> bool:
            sub = coordinate_subspace(sp.dim, [i for i, v in enumerate(kap) if v >= k])
            return sp.cycles.intersection(sub).quotient_dim(low) > 0

    best = _max_feasible(cands, feasible)
    if best is None:
        raise NoGenerator(f"{C.name}: reference class not captured by any shift")
    return best


def upsilon_t(C: ModelComplex, t: Any, flavor: str = PRIMARY) -> Fraction:
    return upsilon_region(C, rg.A_t(t), flavor)


# ---- piecewise-linear functions -------------------------------------------

@dataclass(frozen=True)
class PLFunction:
    breakpoints: tuple[Fraction, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.breakpoints) != len(self.values) or len(self.breakpoints) < 2:
            raise ValueError("need matching breakpoints and values")
        if any(a >= b for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must increase")

    def __call__(self, t: Any) -> Fraction:
        t = Q(t)
        bp = self.breakpoints
        if t < bp[0] or t > bp[-1]:
            raise ValueError(f"{t} outside domain")
        i = bisect.bisect_right(bp, t) - 1
        if i == len(bp) - 1:
            return self.values[-1]
        t0, t1 = bp[i], bp[i + 1]
        v0, v1 = self.values[i], self.values[i + 1]
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0)

    @property
    def slopes(self) -> tuple[Fraction, ...]:
        return tuple(
            (v1 - v0) / (t1 - t0)
            for t0, t1, v0, v1 in zip(self.breakpoints, self.breakpoints[1:], self.values, self.values[1:])
        )

    def is_symmetric(self) -> bool:
        return all(self(2 - t) == v for t, v in zip(self.breakpoints, self.values))

    def pieces(self) -> list[tuple[Fraction, Fraction, Fraction, Fraction]]:
        """(start, end, slope, intercept) for each linear piece."""
        out = []
        for t0, t1, s, v0 in zip(self.breakpoints, self.breakpoints[1:], self.slopes, self.values):
            out.append((t0, t1, s, v0 - s * t0))
        return out

    def to_json(self) -> list[dict[str, str]]:
        return [{"t": str(t), "value": str(v)} for t, v in zip(self.breakpoints, self.values)]

    @classmethod
    def from_points(cls, pts: Iterable[tuple[Any, Any]]) -> "PLFunction":
        table: dict[Fraction, Fraction] = {}
        for t, v in pts:
            t, v = Q(t), Q(v)
            if table.setdefault(t, v) != v:
                raise ReconstructionAmbiguity(f"two values at t = {t}")
        pts = sorted(table.items())
        return cls(tuple(p[0] for p in pts), tuple(p[1] for p in pts)).simplified()

    def simplified(self) -> "PLFunction":
        ts, vs = [self.breakpoints[0]], [self.values[0]]
        for i in range(1, len(self.breakpoints)):
            t, v = self.breakpoints[i], self.values[i]
            if len(ts) >= 2:
                s_prev = (vs[-1] - vs[-2]) / (ts[-1] - ts[-2])
                s_new = (v - vs[-1]) / (t - ts[-1])
                if s_prev == s_new:
                    ts[-1], vs[-1] = t, v
                    continue
            ts.append(t)
            vs.append(v)
        return PLFunction(tuple(ts), tuple(vs))


def farey(q: int, lo: Fraction = Q(0), hi: Fraction = Q(1)) -> list[Fraction]:
    pts = {Q(p, d) for d in range(1, q + 1) for p in range(0, 2 * d + 1)}
    return sorted(x for x in pts if lo <= x <= hi)


def sample_denominator(C: ModelComplex) -> int:
    return 2 * max(C.alexander_span(), 1) + 1


def upsilon_function(C: ModelComplex, flavor: str = PRIMARY, check_mirror_half: bool = False) -> PLFunction:
    ts = farey(sample_denominator(C))
    pts = [(t, upsilon_t(C, t, flavor)) for t in ts]
    if check_mirror_half:
        for t, v in pts[:: max(1, len(pts) // 5)]:
            if upsilon_t(C, 2 - t, flavor) != v:
                raise ReconstructionAmbiguity(f"value at {2 - t} differs from value at {t}")
    half = PLFunction.from_points(pts)
    if half.values[0] != 0:
        raise ReconstructionAmbiguity(f"value at 0 is {half.values[0]}")
    full = PLFunction.from_points(pts + [(2 - t, v) for t, v in pts])
    for s in full.slopes:
        if s.denominator != 1:
            raise ReconstructionAmbiguity(f"non-integer slope {s}")
    for (t0, t1, s0, _), (_, _, s1, _) in zip(full.pieces(), full.pieces()[1:]):
        if (t1 * abs(s1 - s0)).denominator != 1:
            raise ReconstructionAmbiguity(f"breakpoint {t1} incompatible with slope jump {s0}->{s1}")
    return full


def tau(C: ModelComplex) -> int:
    return int(-upsilon_function(C, PRIMARY).slopes[0])


def tau_star(C: ModelComplex) -> int:
    return int(-upsilon_function(C, STAR).slopes[0])


# ---- V, W and the nu family -----------------------------------------------

def V_of(C: ModelComplex, k: int) -> Fraction:
    return -upsilon_region(C, rg.V_k(k)) / 2


def W_of(C: ModelComplex, k: int) -> Fraction:
    return -upsilon_region(C, rg.W_k(k)) / 2


def _first_zero(f, C: ModelComplex) -> int:
    # V_k and W_k stop changing once k passes every Alexander level
    limit = 2 * (C.alexander_span() + C.total_basepoints) + 2
    for k in range(limit + 1):
        if f(C, k) == 0:
            return k
    raise InvariantError(f"{C.name}: no zero found up to k = {limit}")


def nu_plus(C: ModelComplex) -> int:
    return _first_zero(V_of, C)


def nu_hat(C: ModelComplex) -> int:
    return max(nu_plus(C), nu_plus(mirror(C)))


def nu_check(C: ModelComplex) -> int:
    return max(_first_zero(W_of, C), _first_zero(W_of, mirror(C)))


# ---- secondary Upsilon -------------------------------------------------------

def _support_vec(kap: Sequence[Fraction], k: Fraction) -> list[int]:
    return [i for i, v in enumerate(kap) if v >= k]


def upsilon_secondary(
    C: ModelComplex,
    S_plus: rg.SouthWestRegion,
    S_minus: rg.SouthWestRegion,
    S: rg.SouthWestRegion,
    flavor: str = PRIMARY,
) -> float | Fraction:
    for R in (S_plus, S_minus, S):
        _check_region(R)
    sp = _space(C, flavor)
    n0 = sp.dim
    up = sp.upper_positions
    n1 = len(up)
    g_plus = upsilon_region(C, S_plus, flavor)
    g_minus = upsilon_region(C, S_minus, flavor)
    base = upsilon_region(C, S, flavor)
    x_ref = reference_class(C, flavor)

    P_plus = _support_vec(_kappas(S_plus, sp.positions), g_plus)
    P_minus = _support_vec(_kappas(S_minus, sp.positions), g_minus)
    P_plus1 = set(_support_vec(_kappas(S_plus, up), g_plus))
    P_minus1 = set(_support_vec(_kappas(S_minus, up), g_minus))
    kap1 = _kappas(S, up)
    Y = sp.cycles_in(lambda p: p[0] <= -1).basis
    dcols = sp.inc.columns

    def blocks(b1: int, b2: int, b3: int) -> int:
        return b1 | (b2 << n0) | (b3 << (2 * n0))

    fixed = []
    fixed += [blocks(1 << i, 0, 1 << i) for i in P_plus]  # x1
    fixed += [blocks(0, 1 << i, 1 << i) for i in P_minus]  # x2
    fixed += [blocks(dcols[c], 0, 0) for c in range(n1)]  # w1
    fixed += [blocks(0, dcols[c], 0) for c in range(n1)]  # w2
    fixed += [blocks(y, y, 0) for y in Y]
    rhs = blocks(x_ref, x_ref, 0)

    def feasible(a_coords: Iterable[int]) -> bool:
        cols = fixed + [blocks(0, 0, dcols[c]) for c in a_coords]
        M = F2Matrix(3 * n0, len(cols), tuple(cols))
        return solve(M, rhs) is not None

    if feasible(sorted(P_plus1 | P_minus1)):
        return INF

    def feas_k(k: int) -> bool:
        return feasible(sorted(P_plus1 | P_minus1 | set(_support_vec(kap1, k))))

    cands = sorted({math.floor(v) for v in kap1})
    if not cands:
        return INF
    # clamp: nothing beyond twice the lattice diameter can change feasibility
    diam = max(max(abs(p[0]) + abs(p[1]) for p in up + sp.positions), 1)
    cands = [k for k in cands if abs(k) <= 2 * diam + 2 * abs(base) + 2] or cands
    best = _max_feasible(cands, feas_k)
    if best is None:
        raise NoGenerator(f"{C.name}: secondary system infeasible even with all of C_1")
    return -base + best


def secondary_scan(
    C1: ModelComplex, C2: ModelComplex, ts: Sequence[Any] | None = None, flavor: str = PRIMARY
) -> dict[str, Any] | None:
    """First triple (A_x, A_y, A_z), x < y, where secondary Upsilon differs, or None."""
    ts = [Q(t) for t in (ts if ts is not None else [Q(k, 10) for k in range(1, 11)])]
    for i, x in enumerate(ts):
        for y in ts[i + 1:]:
            for z in ts:
                R = (rg.A_t(x), rg.A_t(y), rg.A_t(z))
                a = upsilon_secondary(C1, *R, flavor=flavor)
                b = upsilon_secondary(C2, *R, flavor=flavor)
                if a != b:
                    return {"t_plus": str(x), "t_minus": str(y), "t": str(z), "values": [str(a), str(b)]}
    return None


# ---- upsilon set -------------------------------------------------------------

@dataclass(frozen=True)
class UpsilonSet:
    values: tuple[int, ...]  # descending

    @property
    def upsilon_max(self) -> int:
        return self.values[0]

    @property
    def upsilon_min(self) -> int:
        return self.values[-1]

    @property
    def upsilon_1(self) -> int:
        """Equals Upsilon(1)."""
        return self.values[0]

    @property
    def upsilon_last(self) -> int:
        """Equals Upsilon*(1) + 1 - n."""
        return self.values[-1]

    def to_json(self) -> list[int]:
        return list(self.values)


def _jumps(levels: dict[int, int]) -> dict[int, int]:
    """levels[k] = dim of the part with u >= k, sampled at the keys only."""
    ks = sorted(levels)
    out = {}
    for i, k in enumerate(ks):
        # levels only change at sampled keys
        nxt = levels[ks[i + 1]] if i + 1 < len(ks) else 0
        if levels[k] - nxt:
            out[k] = levels[k] - nxt
    return out


def u_values(C: ModelComplex, d: int) -> dict[int, int]:
    """Multiplicities of A_1-jump values on F^{j<=0} H_d / F^{j<=-1} H_d."""
    sp = C.degree(d)
    B = sp.boundaries
    Q0 = sp.cycles_in(lambda p: p[0] <= 0).sum(B)
    Q1 = sp.cycles_in(lambda p: p[0] <= -1).sum(B)
    top = Q0.dim - Q1.dim
    if top == 0:
        return {}
    us = sorted({-(p[0] + p[1]) for p in sp.positions})
    levels = {}
    for k in us:
        Pk = sp.cycles_in(lambda p, k=k: -(p[0] + p[1]) >= k).sum(B)
        levels[k] = Pk.intersection(Q0).sum(Q1).dim - Q1.dim
    levels[us[0] - 1] = top
    if levels[us[0]] != top:
        raise UpsilonSetMismatch("lowest level does not exhaust the quotient")
    return _jumps(levels)


def upsilon_set(C: ModelComplex) -> UpsilonSet:
    N = C.total_basepoints
    scale = 1 << C.free_basepoints
    values: list[int] = []
    for i in range(N):
        d = -i
        mult = u_values(C, d)
        if sum(mult.values()) != comb(N - 1, i):
            raise UpsilonSetMismatch(f"degree {d}: quotient dim {sum(mult.values())} != {comb(N - 1, i)}")
        for u, c in mult.items():
            values += [u + d] * c
    counts: dict[int, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    out = []
    for v, c in counts.items():
        if c % scale:
            raise UpsilonSetMismatch(f"multiplicity {c} of {v} not divisible by {scale}")
        out += [v] * (c // scale)
    if len(out) != 1 << (C.n_components - 1):
        raise UpsilonSetMismatch("wrong cardinality")
    return UpsilonSet(tuple(sorted(out, reverse=True)))


def normalized_upsilon_set(C: ModelComplex, sigma: int, h: int) -> tuple[Fraction, ...]:
    shift = Q(sigma + h, 2)
    return tuple(v - shift for v in upsilon_set(C).values)


# ---- reports -------------------------------------------------------------------

def report(C: ModelComplex, with_fingerprint: bool = True) -> dict[str, Any]:
    ups = upsilon_function(C, PRIMARY)
    ups_star = upsilon_function(C, STAR)
    out: dict[str, Any] = {
        "name": C.name,
        "n_components": C.n_components,
        "tau": int(-ups.slopes[0]),
        "tau_star": int(-ups_star.slopes[0]),
        "nu_plus": nu_plus(C),
        "nu_hat": nu_hat(C),
        "nu_check": nu_check(C),
        "upsilon": ups.to_json(),
        "upsilon_star": ups_star.to_json(),
        "upsilon_set": upsilon_set(C).to_json(),
    }
    if with_fingerprint:
        fp = fingerprint(C)
        out["fingerprint"] = [[d, t, s, v] for (d, t, s), v in sorted(fp.items())]
    return out


def invariant_summary(C: ModelComplex) -> dict[str, Any]:
    """Report without the fingerprint, which depends on the chosen model size."""
    return report(C, with_fingerprint=False)


def plot_csv(C: ModelComplex) -> str:
    ups = upsilon_function(C, PRIMARY)
    ups_star = upsilon_function(C, STAR)
    ts = sorted(set(ups.breakpoints) | set(ups_star.breakpoints))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "upsilon", "upsilon_star"])
    for t in ts:
        w.writerow([str(t), str(ups(t)), str(ups_star(t))])
    return buf.getvalue()
