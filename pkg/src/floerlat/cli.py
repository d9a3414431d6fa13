"""Command-line front end.

Exit codes: 0 ok, 1 parse error, 2 validation failure, 3 unsupported region.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Sequence

from . import bounds as bd
from . import complex as cx
from . import grid as gr
from . import invariants as iv
from . import region as rg

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_REGION = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, msg: str, code: int) -> None:
        super().__init__(msg)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # usage errors are parse errors, not validation
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


# ---- input resolution ------------------------------------------------------------

def _sources(args: argparse.Namespace) -> list[tuple[str, str]]:
    out = []
    for kind in ("builtin", "grid", "complex"):
        for v in getattr(args, kind) or []:
            out.append((kind, v))
    return out


def load_source(kind: str, value: str, limit: int = gr.DEFAULT_LIMIT) -> cx.ModelComplex:
    try:
        if kind == "builtin":
            C = cx.builtin(value)
        elif kind == "grid":
            G = gr.load_grid(value)
            C = cx.reduce(gr.grid_complex(G, limit, name=value))
        else:
            C = cx.load_complex(value)
    except KeyError as exc:
        raise CliError(str(exc), EXIT_PARSE) from exc
    except OSError as exc:
        raise CliError(str(exc), EXIT_PARSE) from exc
    except (gr.GridParseError, cx.MalformedComplex) as exc:
        raise CliError(str(exc), EXIT_PARSE) from exc
    except (gr.GridError, cx.ComplexError) as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from exc
    try:
        cx.validate(C)
    except cx.ComplexError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from exc
    return C


def _one(args: argparse.Namespace) -> cx.ModelComplex:
    srcs = _sources(args)
    if len(srcs) != 1:
        raise CliError("give exactly one of --builtin, --grid, --complex", EXIT_PARSE)
    return load_source(*srcs[0])


def _region(text: str) -> rg.SouthWestRegion:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        try:
            with open(text) as fh:
                obj = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read region {text!r}: {exc}", EXIT_PARSE) from exc
    try:
        return rg.from_json(obj)
    except rg.RegionError as exc:
        raise CliError(str(exc), EXIT_REGION) from exc


def _emit(obj: Any, out: str | None) -> None:
    text = obj if isinstance(obj, str) else json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---- commands ------------------------------------------------------------------------

def cmd_invariants(args: argparse.Namespace) -> int:
    C = _one(args)
    rep = iv.report(C)
    try:
        if args.region:
            S = _region(args.region)
            rep["region"] = {"region": S.to_json(), "upsilon": str(iv.upsilon_region(C, S)),
                             "upsilon_star": str(iv.upsilon_region(C, S, iv.STAR))}
    except rg.RegionError as exc:
        raise CliError(str(exc), EXIT_REGION) from exc
    if args.t is not None:
        rep["at_t"] = {"t": args.t, "upsilon": str(iv.upsilon_t(C, args.t)),
                       "upsilon_star": str(iv.upsilon_t(C, args.t, iv.STAR))}
    _emit(rep, args.out)
    return EXIT_OK


def cmd_upsilon_plot(args: argparse.Namespace) -> int:
    _emit(iv.plot_csv(_one(args)), args.out)
    return EXIT_OK


def cmd_bounds(args: argparse.Namespace) -> int:
    C = _one(args)
    n = args.n if args.n is not None else C.n_components
    if args.k is not None and args.sigma is None:
        raise CliError("--k needs --sigma", EXIT_PARSE)
    rep = iv.report(C, with_fingerprint=False)
    inp = None
    if args.sigma is not None:
        vals = rep["upsilon_set"]
        inp = bd.from_upsilon_set(vals, n, args.sigma, args.k if args.k is not None else n)
    regions = []
    try:
        if args.region:
            S = _region(args.region)
            regions.append((S, iv.upsilon_region(C, S)))
    except rg.RegionError as exc:
        raise CliError(str(exc), EXIT_REGION) from exc
    try:
        out = bd.bound_report(rep, inp, regions) if inp else bd.bound_report(
            dict(rep, n_components=n), None, regions)
    except bd.BoundsError as exc:
        raise CliError(str(exc), EXIT_PARSE) from exc
    _emit(out, args.out)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    srcs = _sources(args)
    if len(srcs) != 2:
        raise CliError("compare needs exactly two inputs", EXIT_PARSE)
    A, B = (load_source(*s) for s in srcs)
    sa, sb = iv.invariant_summary(A), iv.invariant_summary(B)
    sa.pop("name")
    sb.pop("name")
    same_m = A.free_basepoints == B.free_basepoints
    fp = cx.fingerprints_equal(A, B) if same_m else None
    local = cx.exhaustive_local_equiv(A, B) if fp else ("no" if fp is False else None)
    secondary = None
    if sa == sb and fp and local != "yes" and A.n_components == B.n_components:
        secondary = iv.secondary_scan(A, B)
    distinct = sa != sb or fp is False or local == "no" or secondary is not None
    verdict = "distinguishable" if distinct else "indistinguishable"
    _emit({
        "inputs": [f"{k}:{v}" for k, v in srcs],
        "summary_equal": sa == sb,
        "fingerprint_equal": fp,
        "local_equivalence": local,
        "secondary_witness": secondary,
        "verdict": verdict,
    }, args.out)
    return EXIT_OK


def cmd_grid_info(args: argparse.Namespace) -> int:
    if len(args.grid or []) != 1:
        raise CliError("grid-info needs one --grid", EXIT_PARSE)
    try:
        G = gr.load_grid(args.grid[0])
    except (OSError, gr.GridParseError) as exc:
        raise CliError(str(exc), EXIT_PARSE) from exc
    except gr.GridError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from exc
    info = gr.grid_info(G)
    info["euler_characteristic"] = {str(a): v for a, v in sorted(gr.grid_euler_characteristic(G).items())}
    try:
        C = gr.grid_complex(G)
        info["generators"] = len(C)
        info["edges"] = len(C.edges)
        info["reduced_generators"] = len(cx.reduce(C))
        info["i_map"] = gr.i_map_check(G)
    except (gr.GridError, cx.ComplexError) as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from exc
    _emit(info, args.out)
    return EXIT_OK


def _check_builtin(name: str) -> tuple[str, str | None]:
    try:
        cx.validate(cx.builtin(name))
    except cx.ComplexError as exc:
        return name, str(exc)
    return name, None


def cmd_self_test(args: argparse.Namespace) -> int:
    names = cx.builtin_names()
    if args.jobs and args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            results = list(ex.map(_check_builtin, names))
    else:
        results = [_check_builtin(nm) for nm in names]
    failed = {nm: err for nm, err in results if err}
    _emit({"checked": names, "failed": failed}, args.out)
    return EXIT_VALIDATION if failed else EXIT_OK


COMMANDS = {
    "invariants": cmd_invariants,
    "upsilon-plot": cmd_upsilon_plot,
    "bounds": cmd_bounds,
    "compare": cmd_compare,
    "grid-info": cmd_grid_info,
    "self-test": cmd_self_test,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="floerlat", description="Concordance invariants from bifiltered complexes.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--builtin", action="append", help="shipped example name (repeatable for compare)")
    p.add_argument("--grid", action="append", help="grid diagram file")
    p.add_argument("--complex", action="append", help="complex JSON file")
    p.add_argument("--region", help="region JSON text or file")
    p.add_argument("--t", help="evaluate Upsilon at this t (rational, e.g. 2/3)")
    p.add_argument("--sigma", type=int, help="signature")
    p.add_argument("--n", type=int, help="number of link components")
    p.add_argument("--k", type=int, help="number of surface components")
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (self-test)")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except CliError as exc:
        print(f"floerlat: {exc}", file=sys.stderr)
        return exc.code
    except rg.RegionError as exc:
        print(f"floerlat: {exc}", file=sys.stderr)
        return EXIT_REGION
    except ValueError as exc:
        print(f"floerlat: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
