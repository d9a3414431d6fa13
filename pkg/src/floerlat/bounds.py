"""Lower bounds on slice genus and crosscap numbers from computed invariants.

Topological inputs (signature, linking numbers, writhes, surface data) are
always supplied by the caller. Half-integer bounds are kept exactly and also
rounded up, since the quantities they bound are integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

from . import region as rg

Q = Fraction


class BoundsError(ValueError):
    pass


class MissingInput(BoundsError):
    pass


def ceil_q(x: Any) -> int:
    return math.ceil(Q(x))


def euler_number(writhe1: int, writhe2: int, epsilon: int) -> int:
    if epsilon not in (1, -1):
        raise BoundsError("epsilon must be +1 or -1")
    return writhe1 - writhe2 + epsilon


def orientable_saddle_warnings(writhe1: int, writhe2: int, epsilon: int) -> list[str]:
    """An orientable knot saddle must have Euler number 0."""
    e = euler_number(writhe1, writhe2, epsilon)
    return [] if e == 0 else [f"orientable cobordism declared but Euler number is {e}"]


# ---- slice genus -------------------------------------------------------------

def _min_m(S: rg.SouthWestRegion, need: Fraction, rational: bool, cap: int = 10_000) -> int | None:
    if need <= 0:
        return 0
    for m in range(cap + 1):
        h = rg.h_point(S, m, rational=rational)
        if h != math.inf and h >= need:
            return m
    return None


def region_genus_bound(S: rg.SouthWestRegion, value: Any, n: int, rational: bool = False) -> int:
    """From -Upsilon_S <= h_{+-S}(g4 + n - 1): the implied lower bound on g4."""
    need = -Q(value)
    best = 0
    for R in (S, S.reflect()):
        m = _min_m(R, need, rational)
        if m is None:
            continue
        best = max(best, m - n + 1)
    return max(best, 0)


def _samples(report: dict, key: str) -> list[tuple[Fraction, Fraction]]:
    return [(Q(p["t"]), Q(p["value"])) for p in report.get(key, [])]


def slice_genus_bounds(
    report: dict,
    n: int,
    regions: Iterable[tuple[rg.SouthWestRegion, Any]] = (),
) -> dict[str, Any]:
    if n < 1:
        raise BoundsError("n must be positive")
    out: list[dict[str, Any]] = []

    def add(source: str, bound: int) -> None:
        out.append({"source": source, "bound": int(max(bound, 0))})

    for t, v in _samples(report, "upsilon"):
        if 0 < t <= 1:
            # h_{A_t}(m) = t m exactly
            add(f"upsilon(t={t})", region_genus_bound(rg.A_t(t), v, n, rational=True))
    for t, v in _samples(report, "upsilon_star"):
        if 0 < t <= 1:
            add(f"upsilon_star(t={t})", ceil_q(-v / t))
    for S, v in regions:
        add(f"region {S.to_json()}", region_genus_bound(S, v, n))
    if "tau" in report:
        add("tau", int(report["tau"]) - n + 1)
    if "tau_star" in report:
        add("tau_star", int(report["tau_star"]))
    if "nu_plus" in report:
        add("nu_plus", int(report["nu_plus"]) - n + 1)
    if "nu_hat" in report:
        add("nu_hat", int(report["nu_hat"]) - n + 1)
    if "nu_check" in report:
        add("nu_check", int(report["nu_check"]))
    ups = [v for _, v in _samples(report, "upsilon")] + [Q(v) for _, v in regions]
    stars = [v for _, v in _samples(report, "upsilon_star")]
    return {
        "g4_lower": out,
        "best": max((b["bound"] for b in out), default=0),
        "planar_consistent": all(v <= 0 for v in ups) and all(v >= 0 for v in stars),
    }


# ---- crosscap numbers ------------------------------------------------------------

@dataclass(frozen=True)
class BoundInput:
    n: int
    sigma: int | None
    k: int
    upsilon_max: int | None
    upsilon_min: int | None
    upsilon_values: tuple[int, ...] = ()
    e_bar: int | None = None
    quasi_alternating: bool = False

    def __post_init__(self) -> None:
        if self.n < 1 or self.k < 1:
            raise BoundsError("need n >= 1 and k >= 1")


def _entry(name: str, exact: Fraction) -> dict[str, Any]:
    return {"name": name, "exact": str(exact), "value": ceil_q(exact)}


def crosscap_bounds(inp: BoundInput) -> dict[str, Any]:
    if inp.upsilon_max is None or inp.upsilon_min is None or inp.sigma is None:
        raise MissingInput("need upsilon_max, upsilon_min and sigma")
    n, k, s = inp.n, inp.k, Q(inp.sigma)
    hi, lo = Q(inp.upsilon_max), Q(inp.upsilon_min)
    bounds = [
        _entry("wideness", abs(k - 1 - hi + lo)),
        _entry("upsilon_max", abs(hi - (s + k - n) / 2)),
        _entry("upsilon_min", abs(lo - 1 - (s - k - n) / 2)),
    ]
    if k == 1:
        vals = inp.upsilon_values or (inp.upsilon_max, inp.upsilon_min)
        bounds.append(_entry("single_component", max(abs(Q(v) - (s + 1 - n) / 2) for v in vals)))
    if inp.e_bar is not None:
        bounds.append(_entry("gordon_litherland", abs(s - Q(inp.e_bar, 2))))
    return {"gamma4": {"k": k, "bounds": bounds}, "best": max(b["value"] for b in bounds)}


def oriented_surface_check(
    upsilon_max: int, upsilon_min: int, g: int, v: int, e_bar: int, n: int, k: int
) -> dict[str, bool]:
    """Whether the inequalities for one orientation hold for a surface with genus g and v cross-caps."""
    half = Q(v, 2) + Q(e_bar, 4)
    return {
        "max_lower": -g - Q(v, 2) + k - n + Q(e_bar, 4) <= upsilon_max,
        "max_upper": upsilon_max <= g + half,
        "min_lower": -g - Q(v, 2) + 1 - n + Q(e_bar, 4) <= upsilon_min,
        "min_upper": upsilon_min <= g + Q(v, 2) + 1 - k + Q(e_bar, 4),
    }


def chi_max_report(inp: BoundInput, disks: int | None = None) -> dict[str, Any]:
    """Surfaces bounded by a quasi-alternating link have Euler characteristic at most 1."""
    if not inp.quasi_alternating:
        raise MissingInput("chi bound needs the quasi-alternating flag")
    if inp.upsilon_max is not None and inp.upsilon_min is not None and inp.upsilon_max != inp.upsilon_min:
        raise BoundsError("quasi-alternating input must have a single upsilon value")
    out: dict[str, Any] = {"chi_max": 1, "gamma4_lower": inp.k - 1}
    if disks is not None:
        # a disks and n - a Mobius bands have chi = a
        out["disks_at_most"] = 1
        out["disks_ok"] = disks <= 1
    return out


def bound_report(
    report: dict,
    inp: BoundInput | None = None,
    regions: Iterable[tuple[rg.SouthWestRegion, Any]] = (),
) -> dict[str, Any]:
    """Combined JSON document: g4 bounds, crosscap bounds, and where each came from."""
    n = inp.n if inp is not None else int(report.get("n_components", 1))
    g4 = slice_genus_bounds(report, n, regions)
    out: dict[str, Any] = {
        "g4_lower": g4["g4_lower"],
        "g4_best": g4["best"],
        "planar_consistent": g4["planar_consistent"],
        "gamma4": None,
        "witnesses": [f"g4 >= {b['bound']} from {b['source']}" for b in g4["g4_lower"]],
    }
    if inp is not None and inp.sigma is not None and inp.upsilon_max is not None:
        cc = crosscap_bounds(inp)
        out["gamma4"] = dict(cc["gamma4"], best=cc["best"])
        out["witnesses"] += [
            f"gamma4^({inp.k}) >= {b['value']} from {b['name']} (|...| = {b['exact']})" for b in cc["gamma4"]["bounds"]
        ]
    return out


def from_upsilon_set(values: Sequence[int], n: int, sigma: int | None, k: int, **kw: Any) -> BoundInput:
    vals = tuple(values)
    return BoundInput(n, sigma, k, max(vals), min(vals), vals, **kw)
