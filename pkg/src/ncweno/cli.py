"""Command-line driver.

Subcommands: solve (default runs a registered problem), converge (error
table against an exact solution), bench (zones-per-second table),
reference (fine-mesh self-reference run), list-problems.

Exit codes: 0 success, 2 configuration error, 3 numerical failure
(inadmissible state or blow-up), 4 relaxation-solver failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .config import ConfigError, load_config
from .problems import list_problems
from .run import benchmark_table, run_benchmark, run_convergence, run_reference, \
    run_simulation
from .systems.base import AdmissibilityError


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="TOML config file")
    p.add_argument("--problem", help="registered problem name")
    p.add_argument("--order", type=int, choices=(3, 5, 7, 9))
    p.add_argument("--formulation", choices=("eq2", "eq13", "eq15", "central"))
    p.add_argument("--riemann", choices=("llf", "hll", "hlli"))
    p.add_argument("--zones", help="N or N,M")
    p.add_argument("--cfl", type=float)
    p.add_argument("--tend", type=float, dest="t_end")
    p.add_argument("--flattener", choices=("on", "off"))
    p.add_argument("--stepper", choices=("ssp3", "imex433"))
    p.add_argument("--threads", type=int)
    p.add_argument("--out", dest="out_dir")
    p.add_argument("--snapshots", type=int)


def _overrides(args) -> dict:
    over = {k: getattr(args, k, None)
            for k in ("problem", "order", "formulation", "riemann", "cfl",
                      "t_end", "stepper", "threads", "out_dir", "snapshots")}
    if getattr(args, "flattener", None) is not None:
        over["flattener"] = args.flattener == "on"
    if getattr(args, "zones", None):
        parts = args.zones.split(",")
        over["nx"] = int(parts[0])
        if len(parts) > 1:
            over["ny"] = int(parts[1])
    return over


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ncweno",
        description="High-order finite-difference WENO solver for hyperbolic "
                    "systems with non-conservative products")
    subs = parser.add_subparsers(dest="command")
    for name in ("solve", "converge", "bench", "reference"):
        sp = subs.add_parser(name)
        _add_common(sp)
        if name == "converge":
            sp.add_argument("--resolutions", default="32,64,128",
                            help="comma-separated zone counts")
    subs.add_parser("list-problems")
    args = parser.parse_args(argv)
    command = args.command or "solve"

    if command == "list-problems":
        for name in list_problems():
            print(name)
        return 0

    try:
        cfg = load_config(getattr(args, "config", None), _overrides(args))
    except (ConfigError, FileNotFoundError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        if command == "solve":
            art = run_simulation(cfg)
            print(f"{cfg.problem}: {art.steps} steps to t={art.t:.6g} in "
                  f"{art.wall_time:.3f}s ({art.zones_per_sec:,.0f} zones/s)")
            drift = max(v["relative_change"] for v in art.conservation.values()
                        if v["conservative_row"])
            note = "" if art.setup.bcs["xlo"].kind == "periodic" \
                else " (open boundaries: change is physical outflow)"
            print(f"worst flux-form-component sum change: {drift:.3e}{note}")
            if cfg.out_dir:
                for f in art.files:
                    print(f"wrote {f}")
            return 0
        if command == "converge":
            resolutions = [int(s) for s in args.resolutions.split(",")]
            report = run_convergence(cfg, resolutions)
            print(report.table())
            if cfg.out_dir:
                import os
                os.makedirs(cfg.out_dir, exist_ok=True)
                path = os.path.join(cfg.out_dir, f"{cfg.problem}_convergence.csv")
                with open(path, "w") as fh:
                    fh.write(report.csv() + "\n")
                print(f"wrote {path}")
            return 0
        if command == "bench":
            results = run_benchmark()
            print(benchmark_table(results))
            ratio = max(results[(f, 3)] / results[(f, 9)]
                        for f in {k[0] for k in results})
            print(f"worst order-9/order-3 cost ratio: {ratio:.2f}")
            if ratio > 2.0:
                print("flag: order-9 runs cost more than twice order-3")
            return 0
        if command == "reference":
            x, u = run_reference(cfg.problem, nx=cfg.nx, constants=cfg.constants)
            if cfg.out_dir:
                import os
                os.makedirs(cfg.out_dir, exist_ok=True)
                path = os.path.join(cfg.out_dir, f"{cfg.problem}_reference.npz")
                np.savez(path, x=x, u=u)
                print(f"wrote {path}")
            else:
                print(f"reference computed on {len(x)} zones "
                      f"(use --out to save it)")
            return 0
    except AdmissibilityError as exc:
        if "relaxation" in str(exc):
            print(f"relaxation-solver failure: {exc}", file=sys.stderr)
            return 4
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
