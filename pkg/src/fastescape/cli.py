"""Command-line front end.

Subcommands: modulus, orbit, regularity, beurling, cascade, example, thm43.
Outputs are deterministic: identical configs produce byte-identical artifacts
regardless of --jobs.  Exit status: 0 on a completed run, 2 when --strict is
set and any verdict is violated, 1 on errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence

import numpy as np

from . import constructions, efun, escape, growth, regularity
from .errors import RangeError, ThresholdNotFound
from .serialize import dump_csv, dump_json

VIOLATION_STATUSES = (regularity.VIOLATED, regularity.VIOLATION_ALL_LAGS)


def parse_grid(spec: str) -> np.ndarray:
    """lo:hi:n[:log] -> grid array."""
    parts = spec.split(":")
    if len(parts) not in (3, 4):
        raise ValueError(f"bad grid spec {spec!r}, want lo:hi:n[:log]")
    lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    if not (lo < hi and n >= 2):
        raise ValueError("grid must be increasing with at least 2 points")
    if len(parts) == 4:
        if parts[3] != "log":
            raise ValueError(f"unknown grid flavor {parts[3]!r}")
        if lo <= 0:
            raise ValueError("log grid needs lo > 0")
        return np.exp(np.linspace(math.log(lo), math.log(hi), n))
    return np.linspace(lo, hi, n)


def builtin(name: str):
    """Builtin objects: exp, lacunary5 (zeros 5^m), e62model, e61model."""
    if name == "exp":
        return efun.ExpFamily(1.0)
    if name == "lacunary5":
        zeros = tuple(5.0 ** m for m in range(1, 400))
        return efun.LacunaryProduct(zeros, tail_ratio=5.0, name="lacunary5")
    if name == "e62model":
        return constructions.build_example62(0.25, 0.75)
    if name == "e61model":
        return constructions.build_example61(20.0, levels=8)
    raise ValueError(f"unknown builtin {name!r}; have exp, lacunary5, e62model, e61model")


def load_target(args) -> object:
    if args.descriptor:
        with open(args.descriptor, "r", encoding="utf-8") as fh:
            desc = json.load(fh)
        if "seeds" in desc:
            desc = desc.get("function", desc)
        return efun.from_descriptor(desc)
    if args.function:
        return builtin(args.function)
    raise ValueError("supply --function or --descriptor")


def require_function(target) -> efun.EntireFunction:
    if isinstance(target, (efun.ExpFamily, efun.LacunaryProduct, efun.TruncatedSeries)):
        return target
    raise ValueError("this criterion needs a function with a minimum-modulus "
                     "oracle; growth models do not carry one")


def pmap(fn: Callable, items: Sequence, jobs: int) -> list:
    """Ordered map, optionally fanned out over a thread pool."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def eps_list(spec: str | None, default=(0.5,)) -> list[float]:
    if not spec:
        return list(default)
    return [float(s) for s in spec.split(",")]


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_modulus(args) -> tuple[object, list[str]]:
    f = require_function(load_target(args))
    grid = parse_grid(args.grid or "1:100:64:log")

    def row(r: float):
        mx = efun.max_modulus(f, r)
        mn = efun.min_modulus(f, r)
        return (r, mx, mn)

    rows = pmap(row, [float(r) for r in grid], args.jobs)
    if args.format == "csv":
        table = [(r, mx.value, mn.value if mn.value is not None else 0.0)
                 for r, mx, mn in rows]
        return dump_csv(["r", "M", "m"], table), []
    payload = {"function": f.name, "rows": [
        {"r": r, "M": mx.value, "M_err_log": mx.err_log, "M_method": mx.method,
         "m": (mn.value if mn.value is not None else "zero"),
         "m_err_log": mn.err_log, "m_method": mn.method}
        for r, mx, mn in rows]}
    return payload, []


def cmd_orbit(args) -> tuple[object, list[str]]:
    target = load_target(args)
    f = require_function(target)
    g = growth.as_growth_model(f)
    seeds: list[complex] = []
    if args.descriptor:
        with open(args.descriptor, "r", encoding="utf-8") as fh:
            desc = json.load(fh)
        for s in desc.get("seeds", []):
            seeds.append(complex(s[0], s[1]) if isinstance(s, list) else complex(s))
    if args.grid:
        seeds.extend(complex(float(r)) for r in parse_grid(args.grid))
    if not seeds:
        raise ValueError("no seeds: give --grid or a descriptor with \"seeds\"")
    t_r = growth.threshold_R(g)
    eps = eps_list(args.eps, default=(0.5,))

    def run(z0: complex):
        rec = escape.compute_orbit(f, z0, args.depth)
        return escape.classify(rec, g, t_r, eps, args.lags)

    records = pmap(run, seeds, args.jobs)
    if args.format == "csv":
        rows = []
        for rec in records:
            for n, m in enumerate(rec.moduli):
                rows.append((n, m.h, m.x, "modulus", ""))
        return dump_csv(["n", "h", "x", "map", "epsilon"], rows), []
    payload = {"function": f.name, "t_R": t_r, "records": [
        {"start": rec.start, "mode": rec.mode, "status": rec.status,
         "moduli": rec.moduli, "certificates": rec.certificates,
         "notes": rec.notes} for rec in records]}
    return payload, []


def cmd_regularity(args) -> tuple[object, list[str]]:
    target = load_target(args)
    crit = args.criterion
    if crit is None:
        raise ValueError("--criterion required")
    grid = parse_grid(args.grid) if args.grid else None
    if crit == "minmod":
        v = regularity.check_minmod_criterion(
            require_function(target), grid if grid is not None else
            regularity.log_grid(16.0, 1000.0))
    elif crit == "derivative":
        v = regularity.check_log_regular_derivative(
            target, grid if grid is not None else regularity.log_grid(2.0, 1e4),
            c_min=args.c if args.c is not None else 0.0)
    elif crit == "hadamard":
        v = regularity.check_log_regular_hadamard(
            target, args.k or 2.0, args.d or 2.0,
            grid if grid is not None else regularity.log_grid(2.0, 1e3))
    elif crit == "psi":
        v = regularity.check_psi_regularity(
            target, args.k or 2.0, args.m or 2.0,
            grid if grid is not None else regularity.log_grid(2.0, 1e3))
    elif crit == "eps":
        eps = eps_list(args.eps)
        g = growth.as_growth_model(target)
        t_r = growth.threshold_R(g)
        if len(eps) == 1:
            v = regularity.check_eps_regularity(g, eps[0], t_r, args.lags, args.depth)
        else:
            v = regularity.check_weak_regularity(g, eps, t_r, args.lags, args.depth)
    elif crit == "weak":
        eps = eps_list(args.eps, default=tuple(i / 10 for i in range(1, 10)))
        g = growth.as_growth_model(target)
        v = regularity.check_weak_regularity(g, eps, growth.threshold_R(g),
                                             args.lags, args.depth)
    elif crit == "fr":
        v = regularity.check_Fr_criterion(
            require_function(target), args.k or 2.0, args.alpha or 0.2,
            args.beta or 0.8, grid if grid is not None else
            regularity.log_grid(10.0, 100.0, 16))
    elif crit == "doubling":
        lo, hi = doubling_ratios = regularity.doubling_stats(
            require_function(target), grid if grid is not None else
            regularity.log_grid(10.0, 1e6))
        return {"criterion": "doubling", "inf_ratio": lo, "sup_ratio": hi}, []
    else:
        raise ValueError(f"unknown criterion {crit!r}")
    return v.to_json(), [v.status]


def cmd_beurling(args) -> tuple[object, list[str]]:
    f = require_function(load_target(args))
    if args.r1 is None or args.r2 is None or args.mu is None:
        raise ValueError("--r1, --r2 and --mu required")
    rep = regularity.beurling_check(f, args.r1, args.r2, args.mu)
    return rep.to_json(), [] if rep.confirmed else ["violated"]


def cmd_cascade(args) -> tuple[object, list[str]]:
    if args.r1 is None:
        raise ValueError("--r1 (radius) required")
    k = args.k or 2.0
    payload = {"constants": regularity.cascade_constants(args.r1, k).to_json()}
    if args.function or args.descriptor:
        payload["conclusion"] = regularity.cascade_conclusion_check(
            require_function(load_target(args)), args.r1, k)
    return payload, []


def cmd_example(args) -> tuple[object, list[str]]:
    which = args.which
    statuses: list[str] = []
    if which == "6.1":
        model = constructions.build_example61(20.0, levels=8)
        payload = constructions.verify_example61(model, k=args.k or 2.0)
    elif which == "6.2":
        model = constructions.build_example62(args.a or 0.25, args.b or 0.75)
        payload = constructions.verify_example62(
            model, lag_bound=args.lags, horizon_violation=args.depth)
        statuses.extend([payload["run_small_eps"]["status"],
                         payload["run_large_eps"]["status"]])
    elif which == "lacunary":
        eps = eps_list(args.eps, default=(0.5, 0.8))
        if len(eps) != 2:
            raise ValueError("--eps eps,eps' (two values) required for lacunary")
        m_max = int(args.m or 6)
        recipe = constructions.build_lacunary_recipe(eps[0], eps[1], m_max)
        payload = {"recipe": recipe.to_json(),
                   "invariants": constructions.verify_recipe_invariants(recipe),
                   "nonregularity": constructions.verify_nonregularity(
                       recipe, lag_bound=args.lags, horizon=args.depth)}
        statuses.append(payload["nonregularity"]["verdict"]["status"])
    else:
        raise ValueError("--which must be 6.1, 6.2 or lacunary")
    return payload, statuses


def cmd_thm43(args) -> tuple[object, list[str]]:
    target = load_target(args)
    grid = parse_grid(args.grid) if args.grid else regularity.log_grid(2.0, 1e3)
    payload = constructions.thm43_equivalence_test(
        target, args.k or 2.0, grid, d=args.d, c=args.c)
    statuses = [payload["dilation_given_d"]["status"]]
    return payload, statuses


COMMANDS = {
    "modulus": cmd_modulus,
    "orbit": cmd_orbit,
    "regularity": cmd_regularity,
    "beurling": cmd_beurling,
    "cascade": cmd_cascade,
    "example": cmd_example,
    "thm43": cmd_thm43,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fastescape",
        description="Growth, regularity and escape-rate analysis of entire functions")
    p.add_argument("subcommand", choices=sorted(COMMANDS))
    p.add_argument("--function", help="builtin: exp, lacunary5, e62model, e61model")
    p.add_argument("--descriptor", help="JSON function descriptor path")
    p.add_argument("--criterion", help="regularity criterion id")
    p.add_argument("--eps", help="comma-separated epsilon list")
    p.add_argument("--grid", help="lo:hi:n[:log]")
    p.add_argument("--depth", type=int, default=regularity.DEFAULT_HORIZON,
                   help="orbit horizon N")
    p.add_argument("--lags", type=int, default=regularity.DEFAULT_LAG_BOUND,
                   help="lag bound L")
    p.add_argument("--k", type=float)
    p.add_argument("--d", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--m", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--r1", type=float)
    p.add_argument("--r2", type=float)
    p.add_argument("--which", help="example id: 6.1, 6.2, lacunary")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--strict", action="store_true",
                   help="exit 2 on any violated verdict")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload, statuses = COMMANDS[args.subcommand](args)
    except (ValueError, RangeError, ThresholdNotFound, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = payload if isinstance(payload, str) else dump_json(payload)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.strict and any(s in VIOLATION_STATUSES or s == "violated"
                           for s in statuses):
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
