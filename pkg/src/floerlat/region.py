"""South-west regions of the (j, A) plane.

A region is a finite union of primitives; each primitive is an intersection of
half-planes ``a*j + b*A <= c`` (or ``<`` when strict) with ``a, b >= 0``.
Down-closedness is automatic from the sign condition.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

Q = Fraction
INF = math.inf
PROBE_RADIUS = 10**6


class RegionError(ValueError):
    pass


class UnsupportedFamily(RegionError):
    """env/h requested on a shape outside the supported families."""


class NotCentered(RegionError):
    pass


def as_q(x: Any) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**9)
    return Fraction(x)


@dataclass(frozen=True, order=True)
class HalfPlane:
    a: Fraction
    b: Fraction
    c: Fraction
    strict: bool = False

    def __post_init__(self) -> None:
        if self.a < 0 or self.b < 0 or (self.a == 0 and self.b == 0):
            raise RegionError(f"half-plane needs a, b >= 0 not both zero: {self}")

    @staticmethod
    def make(a: Any, b: Any, c: Any, strict: bool = False) -> "HalfPlane":
        return HalfPlane(as_q(a), as_q(b), as_q(c), bool(strict))

    def contains(self, j: Fraction, A: Fraction) -> bool:
        v = self.a * j + self.b * A
        return v < self.c if self.strict else v <= self.c

    def contact(self, j: Fraction, A: Fraction) -> Fraction:
        """Largest shift k with (j, A) in the shifted half-plane."""
        return 2 * (self.c - self.a * j - self.b * A) / (self.a + self.b)


Primitive = tuple[HalfPlane, ...]


@dataclass(frozen=True)
class SouthWestRegion:
    primitives: tuple[Primitive, ...]

    def __post_init__(self) -> None:
        if not self.primitives or any(len(p) == 0 for p in self.primitives):
            raise RegionError("a region needs nonempty primitives")

    # ---- membership -------------------------------------------------------

    def member(self, p: Sequence[Any]) -> bool:
        j, A = as_q(p[0]), as_q(p[1])
        return any(all(h.contains(j, A) for h in prim) for prim in self.primitives)

    __contains__ = member

    def contact(self, p: Sequence[Any]) -> tuple[Fraction, bool]:
        """``(kappa, attained)``: sup of k with p in S_k, and whether it is a max."""
        j, A = as_q(p[0]), as_q(p[1])
        best: tuple[Fraction, bool] | None = None
        for prim in self.primitives:
            val, att = None, True
            for h in prim:
                v = h.contact(j, A)
                if val is None or v < val:
                    val, att = v, not h.strict
                elif v == val and h.strict:
                    att = False
            assert val is not None
            if best is None or val > best[0] or (val == best[0] and att and not best[1]):
                best = (val, att)
        assert best is not None
        return best

    def kappa(self, p: Sequence[Any]) -> Fraction:
        return self.contact(p)[0]

    # ---- combinators -------------------------------------------------------

    def shift(self, k: Any) -> "SouthWestRegion":
        """S_k = {(t, s) : (t + k/2, s + k/2) in S}."""
        k = as_q(k)
        return SouthWestRegion(
            tuple(tuple(HalfPlane(h.a, h.b, h.c - (h.a + h.b) * k / 2, h.strict) for h in prim) for prim in self.primitives)
        )

    def translate(self, dj: Any, dA: Any) -> "SouthWestRegion":
        """{p + (dj, dA) : p in S}."""
        dj, dA = as_q(dj), as_q(dA)
        return SouthWestRegion(
            tuple(tuple(HalfPlane(h.a, h.b, h.c + h.a * dj + h.b * dA, h.strict) for h in prim) for prim in self.primitives)
        )

    def reflect(self) -> "SouthWestRegion":
        return SouthWestRegion(tuple(tuple(HalfPlane(h.b, h.a, h.c, h.strict) for h in prim) for prim in self.primitives))

    def closure(self) -> "SouthWestRegion":
        return SouthWestRegion(
            tuple(tuple(HalfPlane(h.a, h.b, h.c, False) for h in prim) for prim in self.primitives)
        ).simplified()

    def iota(self) -> "SouthWestRegion":
        """{p : -p not in S}, as a union of intersections."""
        # -p notin S  <=>  for every primitive some half-plane fails at -p
        choices = [[HalfPlane(h.a, h.b, -h.c, not h.strict) for h in prim] for prim in self.primitives]
        prims = []
        for combo in itertools.product(*choices):
            prims.append(tuple(sorted(set(combo))))
        return SouthWestRegion(tuple(prims)).simplified()

    def iota_closure(self) -> "SouthWestRegion":
        # open intersections of down-sets are never empty, so closure is exact
        return self.iota().closure()

    def simplified(self) -> "SouthWestRegion":
        seen: list[Primitive] = []
        for prim in self.primitives:
            prim = _drop_parallel(prim)
            if prim not in seen:
                seen.append(prim)
        return SouthWestRegion(tuple(seen))

    # ---- predicates --------------------------------------------------------

    def is_proper(self, radius: int = PROBE_RADIUS) -> bool:
        return self.member((-radius, -radius)) and not self.member((radius, radius))

    def is_centered(self) -> bool:
        return self.kappa((0, 0)) == 0

    def is_closed(self) -> bool:
        return not any(h.strict for prim in self.primitives for h in prim)

    def to_json(self) -> dict[str, Any]:
        return {
            "primitives": [
                [{"a": str(h.a), "b": str(h.b), "c": str(h.c), "strict": h.strict} for h in prim]
                for prim in self.primitives
            ]
        }


def _drop_parallel(prim: Primitive) -> Primitive:
    """Keep only the tightest half-plane among those with proportional (a, b)."""
    best: dict[tuple[Fraction, Fraction], HalfPlane] = {}
    for h in prim:
        s = h.a + h.b
        key = (h.a / s, h.b / s)
        hn = HalfPlane(key[0], key[1], h.c / s, h.strict)
        cur = best.get(key)
        if cur is None or hn.c < cur.c or (hn.c == cur.c and hn.strict):
            best[key] = hn
    return tuple(sorted(best.values()))


def region(primitives: Iterable[Iterable[tuple]]) -> SouthWestRegion:
    """Build from nested ``(a, b, c[, strict])`` tuples."""
    return SouthWestRegion(tuple(tuple(HalfPlane.make(*h) for h in prim) for prim in primitives))


# ---- named families --------------------------------------------------------

def A_t(t: Any) -> SouthWestRegion:
    t = as_q(t)
    if not 0 <= t <= 2:
        raise RegionError(f"t = {t} outside [0, 2]")
    return region([[(1 - t / 2, t / 2, 0)]])


def V_k(k: Any) -> SouthWestRegion:
    return region([[(1, 0, 0), (0, 1, k)]])


def W_k(k: Any) -> SouthWestRegion:
    return region([[(1, 0, 0)], [(0, 1, -as_q(k))]])


def V_ts(t: Any, s: Any) -> SouthWestRegion:
    return region([[(1, 0, t), (0, 1, s)]])


def W_ts(t: Any, s: Any) -> SouthWestRegion:
    return region([[(1, 0, t)], [(0, 1, s)]])


def staircase_region(corners: Sequence[Sequence[Any]]) -> SouthWestRegion:
    """Union of quadrants {j <= j_i, A <= A_i}; j strictly up, A strictly down."""
    pts = [(as_q(c[0]), as_q(c[1])) for c in corners]
    if not pts:
        raise RegionError("no corners")
    for (j0, a0), (j1, a1) in zip(pts, pts[1:]):
        if not (j1 > j0 and a1 < a0):
            raise RegionError("corners must have increasing j and decreasing A")
    return region([[(1, 0, j), (0, 1, a)] for j, a in pts])


# ---- env and h -------------------------------------------------------------

def _line_meets(h: HalfPlane, others: Sequence[HalfPlane]) -> bool:
    """Does the line a*j + b*A = c meet the closed intersection of ``others``?"""
    # parametrize: p0 + tau * (b, -a)
    if h.b != 0:
        p0 = (Fraction(0), h.c / h.b)
    else:
        p0 = (h.c / h.a, Fraction(0))
    d = (h.b, -h.a)
    lo, hi = -INF, INF
    for o in others:
        coef = o.a * d[0] + o.b * d[1]
        rhs = o.c - o.a * p0[0] - o.b * p0[1]
        if coef == 0:
            if rhs < 0:
                return False
        elif coef > 0:
            hi = min(hi, rhs / coef)
        else:
            lo = max(lo, rhs / coef)
    return lo <= hi


def _axis_corner(prim: Primitive) -> tuple[float | Fraction, float | Fraction] | None:
    """Primitive as a generalized quadrant {j <= p, A <= q}, or None."""
    p: float | Fraction = INF
    q: float | Fraction = INF
    for h in prim:
        if h.b == 0:
            p = min(p, h.c / h.a)
        elif h.a == 0:
            q = min(q, h.c / h.b)
        else:
            return None
    return p, q


def _ceil(x: float | Fraction) -> float | int:
    if x == INF or x == -INF:
        return x  # type: ignore[return-value]
    return math.ceil(x)


def env(S: SouthWestRegion) -> SouthWestRegion:
    """Coordinate-wise sumset S + S, for the supported families."""
    S = S.closure()
    if len(S.primitives) == 1:
        return SouthWestRegion((tuple(HalfPlane(h.a, h.b, 2 * h.c) for h in S.primitives[0]),))
    corners = [_axis_corner(p) for p in S.primitives]
    if any(c is None for c in corners):
        raise UnsupportedFamily("env supports a single convex primitive or a union of axis quadrants")
    prims = []
    for (p1, q1), (p2, q2) in itertools.combinations_with_replacement(corners, 2):  # type: ignore[misc]
        P, Qv = p1 + p2, q1 + q2
        hs = []
        if P != INF:
            hs.append((1, 0, P))
        if Qv != INF:
            hs.append((0, 1, Qv))
        if not hs:
            raise UnsupportedFamily("sumset is the whole plane")
        prims.append(hs)
    return region(prims).simplified()


def h(S: SouthWestRegion) -> float | int:
    """min{k in N : S_{-k} contains env(S)}; ``math.inf`` if none exists."""
    S = S.closure()
    if len(S.primitives) == 1:
        prim = S.primitives[0]
        need = Fraction(0)
        for i, hp in enumerate(prim):
            others = prim[:i] + prim[i + 1:]
            if not _line_meets(hp, others):
                continue  # redundant; implied by the rest
            need = max(need, 2 * hp.c / (hp.a + hp.b))
        return max(0, math.ceil(need))
    corners = [_axis_corner(p) for p in S.primitives]
    if any(c is None for c in corners):
        raise UnsupportedFamily("h supports a single convex primitive or a union of axis quadrants")
    worst: float | Fraction = Fraction(0)
    for (p1, q1), (p2, q2) in itertools.combinations_with_replacement(corners, 2):  # type: ignore[misc]
        P, Qv = p1 + p2, q1 + q2
        best: float | Fraction = INF
        for pm, qm in corners:  # type: ignore[misc]
            best = min(best, max(_need(P, pm), _need(Qv, qm)))
        worst = max(worst, best)
    return max(0, _ceil(worst))


def _need(P: float | Fraction, pm: float | Fraction) -> float | Fraction:
    """Smallest k with P <= pm + k/2 (infinite coordinates allowed)."""
    if pm == INF:
        return -INF
    if P == INF:
        return INF
    return 2 * (P - pm)


def h_point(S: SouthWestRegion, m: Any, rational: bool = False) -> Fraction | int:
    """min{k : (0, m) in S_{-k}} over naturals, or the real infimum if ``rational``."""
    if not S.is_centered():
        raise NotCentered("h_point needs a centered region")
    kap, att = S.contact((0, m))
    if rational:
        return max(Fraction(0), -kap)
    need = -kap
    k = math.ceil(need)
    if k == need and not att:
        k += 1
    return max(0, k)


# ---- probes and JSON -------------------------------------------------------

def probe_points(radius: int = 20, step: Fraction = Fraction(1, 2)) -> list[tuple[Fraction, Fraction]]:
    n = int(radius / step)
    vals = [step * i for i in range(-n, n + 1)]
    return [(x, y) for x in vals for y in vals]


def equal_on_probes(S1: SouthWestRegion, S2: SouthWestRegion, points: Iterable[tuple] | None = None) -> bool:
    pts = probe_points(10) if points is None else points
    return all(S1.member(p) == S2.member(p) for p in pts)


def from_json(obj: Any) -> SouthWestRegion:
    if not isinstance(obj, dict):
        raise RegionError("region JSON must be an object")
    if "At" in obj:
        return A_t(as_q(obj["At"]))
    if "Vk" in obj:
        return V_k(as_q(obj["Vk"]))
    if "Wk" in obj:
        return W_k(as_q(obj["Wk"]))
    if "corners" in obj:
        return staircase_region(obj["corners"])
    if "primitives" in obj:
        try:
            prims = [
                [(as_q(h["a"]), as_q(h["b"]), as_q(h["c"]), bool(h.get("strict", False))) for h in prim]
                for prim in obj["primitives"]
            ]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise RegionError(f"bad half-plane: {exc}") from exc
        S = region(prims)
        if not S.is_proper():
            raise RegionError("region is empty or the whole plane")
        return S
    raise RegionError("unknown region JSON shape")
