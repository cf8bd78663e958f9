"""Command-line entry point: construct, verify, bounds, approx, region.

Outputs are machine readable (JSON for protocols and reports, CSV for
curves) and byte-identical across runs with the same flags and seed.  All
numeric output uses 12 significant digits.  Exit codes: 0 success, 1
verification failure, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import approx as approx_mod
from . import bounds as bounds_mod
from . import construct as construct_mod
from . import covering as covering_mod
from . import verify as verify_mod
from .core import BudgetError, matrix_from_text

_EXIT_OK = 0
_EXIT_VERIFY_FAIL = 1
_EXIT_USAGE = 2


def _parse_grid(spec: str) -> list[float]:
    try:
        lo, hi, step = (float(tok) for tok in spec.split(":"))
    except ValueError as exc:
        raise ValueError(f"bad grid {spec!r}, expected MIN:MAX:STEP") from exc
    if step <= 0 or hi < lo:
        raise ValueError(f"bad grid {spec!r}")
    count = int((hi - lo) / step + 1e-9) + 1
    return [round(lo + i * step, 12) for i in range(count)]


def _round12(x: float) -> float:
    return float(f"{float(x):.12g}")


def _print_json(data: dict) -> None:
    print(json.dumps(data, indent=2, sort_keys=True))


def _load_code_arg(args) -> covering_mod.CoveringCode:
    if getattr(args, "repetition", None):
        return covering_mod.repetition_pair(args.repetition)
    if getattr(args, "code", None):
        return covering_mod.load_code(args.code)
    raise ValueError("a covering code is required: pass --code FILE or --repetition K0")


def _cmd_construct(args) -> int:
    if args.type == "trivial":
        if args.k0 is None:
            raise ValueError("--type trivial requires --k0 (the data length k)")
        protocol = construct_mod.trivial_protocol(args.k0)
    else:
        if args.type == "nonsystematic":
            if args.k0 is None:
                raise ValueError("--type nonsystematic requires --k0")
            spec = construct_mod.nonsystematic_block(args.k0)
        elif args.type == "covering":
            spec = construct_mod.covering_code_block(_load_code_arg(args))
        elif args.type == "custom":
            if args.matrix is None or args.ell0 is None:
                raise ValueError("--type custom requires --matrix FILE and --ell0")
            with open(args.matrix, "r", encoding="utf-8") as fh:
                matrix = matrix_from_text(fh.read())
            spec = construct_mod.custom_block(matrix, args.ell0)
        else:  # pragma: no cover - argparse restricts choices
            raise ValueError(f"unknown construction {args.type}")
        protocol = construct_mod.expand_blocks(spec, args.m)
    construct_mod.save_protocol(protocol, args.output)
    rp = construct_mod.rate_point(protocol)
    _print_json(
        {
            "k": protocol.k,
            "n": protocol.n,
            "ell": protocol.ell,
            "nu": _round12(rp.nu),
            "lambda": _round12(rp.lam),
            "output": args.output,
        }
    )
    return _EXIT_OK


def _cmd_verify(args) -> int:
    protocol = construct_mod.load_protocol(args.protocol)
    report = verify_mod.verify_protocol(protocol, tol=args.tol)
    payload = report.to_dict()
    payload["max_residual"] = _round12(payload["max_residual"])
    _print_json(payload)
    return _EXIT_OK if report.ok else _EXIT_VERIFY_FAIL


def _cmd_bounds(args) -> int:
    grid = _parse_grid(args.grid)
    if args.curve == "cor1":
        curve = bounds_mod.cor1_curve(grid)
    elif args.curve == "thm1":
        curve = bounds_mod.thm1_curve(grid)
    elif args.curve == "thm2":
        # finite-k curve: smallest admissible ell/k at n = round(nu * k)
        points = []
        for nu in grid:
            n = round(nu * args.k)
            lam = next(
                (
                    ell / args.k
                    for ell in range(1, n + 1)
                    if bounds_mod.thm2_admissible(args.k, n, ell)[0]
                ),
                None,
            )
            if lam is not None and lam > 0:
                points.append(construct_mod.RatePoint(nu, lam))
        curve = bounds_mod.BoundCurve(label=f"thm2_k={args.k}", points=tuple(points))
    elif args.curve == "block":
        if args.k0 is None:
            raise ValueError("--curve block requires --k0")
        curve = bounds_mod.block_bound_curve(args.k0, args.n0_max)
    else:  # pragma: no cover
        raise ValueError(f"unknown curve {args.curve}")
    bounds_mod.region_export([curve], path=args.output)
    print(f"wrote {len(curve.points)} points to {args.output}")
    return _EXIT_OK


def _construction_points() -> list:
    RatePoint = construct_mod.RatePoint
    return [
        ("trivial", RatePoint(1.0, 0.5)),
        ("block_5x6", RatePoint(1.2, 0.4)),
        ("nonsystematic_k0=3", RatePoint(4 / 3, 1 / 3)),
        ("nonsystematic_k0=4", RatePoint(2.0, 0.25)),
    ]


def _cmd_region(args) -> int:
    grid = _parse_grid(args.grid)
    curves = [bounds_mod.cor1_curve(grid), bounds_mod.thm1_curve(grid)]
    for k0 in (4, 5, 6):
        curves.append(bounds_mod.block_bound_curve(k0, args.n0_max))
    bounds_mod.region_export(curves, _construction_points(), path=args.output)
    print(f"wrote region data to {args.output}")
    return _EXIT_OK


def _cmd_approx(args) -> int:
    if args.method == "covering":
        code = _load_code_arg(args)
        if args.codeonly:
            ap = approx_mod.approx_covering_codeonly(code)
        else:
            if args.b is None:
                raise ValueError("--method covering requires --b (uncorrected errors)")
            ap = approx_mod.approx_covering(code, args.b)
    elif args.method == "discard":
        if args.matrix is None or args.ell0 is None or args.eps is None:
            raise ValueError("--method discard requires --matrix, --ell0 and --eps")
        with open(args.matrix, "r", encoding="utf-8") as fh:
            matrix = matrix_from_text(fh.read())
        spec = construct_mod.custom_block(matrix, args.ell0)
        ap = approx_mod.discard_blocks(spec, args.eps, args.m)
    elif args.method == "ksvd":
        init = None
        if args.init == "antipodal":
            init = construct_mod.nonsystematic_block(args.k).matrix
        result = approx_mod.ksvd(args.k, args.n, args.ell, args.iters, args.seed, init)
        ap = approx_mod.ksvd_approx_protocol(result, args.ell)
    else:  # pragma: no cover
        raise ValueError(f"unknown method {args.method}")
    measured = approx_mod.measure_epsilon(ap)
    rp = construct_mod.rate_point(ap)
    report = {
        "epsilon_bound": _round12(ap.epsilon_bound),
        "epsilon_measured": _round12(measured),
        "nu": _round12(rp.nu),
        "lambda": _round12(rp.lam),
    }
    if args.output:
        construct_mod.save_protocol(ap.protocol, args.output)
        report["output"] = args.output
    _print_json(report)
    if args.csv:
        label = f"approx_{args.method}"
        new = not os.path.exists(args.csv)
        with open(args.csv, "a", encoding="utf-8", newline="") as fh:
            if new:
                fh.write("label,nu,lambda,epsilon_bound,epsilon_measured\n")
            fh.write(
                f"{label},{rp.nu:.12g},{rp.lam:.12g},"
                f"{ap.epsilon_bound:.12g},{measured:.12g}\n"
            )
    return _EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlcomp",
        description="Access-redundancy protocols for {+1,-1} linear computation: "
        "constructions, exhaustive verification, lower bounds, approximations.",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=os.cpu_count() or 1,
        help="worker cap for internal parallelism; results never depend on it "
        "(desk-scale runs are sequential)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a protocol and write it as JSON")
    p.add_argument("--type", required=True, choices=["trivial", "nonsystematic", "covering", "custom"])
    p.add_argument("--k0", type=int, help="block length (or k for --type trivial)")
    p.add_argument("--m", type=int, default=1, help="number of blocks to expand to")
    p.add_argument("--matrix", help="block matrix file (text format) for --type custom")
    p.add_argument("--ell0", type=int, help="per-block access cap for --type custom")
    p.add_argument("--code", help="covering code file for --type covering")
    p.add_argument("--repetition", type=int, help="use the length-K0 repetition pair as the code")
    p.add_argument("-o", "--output", required=True, help="protocol JSON path")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("verify", help="exhaustively verify a protocol JSON file")
    p.add_argument("protocol", help="protocol JSON path")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bounds", help="export one lower-bound curve as CSV")
    p.add_argument("--curve", required=True, choices=["thm1", "thm2", "cor1", "block"])
    p.add_argument("--k0", type=int, help="block length for --curve block")
    p.add_argument("--k", type=int, default=64, help="protocol length for the finite --curve thm2")
    p.add_argument("--n0-max", type=int, default=64, dest="n0_max")
    p.add_argument("--grid", default="1.0:3.0:0.1", help="nu grid as MIN:MAX:STEP")
    p.add_argument("-o", "--output", required=True, help="CSV path")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("approx", help="build an approximation protocol and report epsilon")
    p.add_argument("--method", required=True, choices=["covering", "discard", "ksvd"])
    p.add_argument("--code", help="covering code file")
    p.add_argument("--repetition", type=int, help="use the length-K0 repetition pair as the code")
    p.add_argument("--b", type=int, help="uncorrected errors per block (covering)")
    p.add_argument("--codeonly", action="store_true", help="store only code nodes (covering)")
    p.add_argument("--matrix", help="block matrix file (discard)")
    p.add_argument("--ell0", type=int, help="per-block access cap (discard)")
    p.add_argument("--eps", type=float, help="target epsilon (discard)")
    p.add_argument("--m", type=int, default=10, help="number of blocks (discard)")
    p.add_argument("--k", type=int, default=6, help="data length (ksvd)")
    p.add_argument("--n", type=int, default=12, help="dictionary atoms (ksvd)")
    p.add_argument("--ell", type=int, default=2, help="sparsity (ksvd)")
    p.add_argument("--iters", type=int, default=30, help="iterations (ksvd)")
    p.add_argument("--seed", type=int, default=0, help="rng seed (ksvd)")
    p.add_argument("--init", choices=["sample", "antipodal"], default="sample",
                   help="ksvd start: seeded column sample or one atom per antipodal class")
    p.add_argument("-o", "--output", help="protocol JSON path")
    p.add_argument("--csv", help="append a scatter row label,nu,lambda,eps_bound,eps_measured")
    p.set_defaults(func=_cmd_approx)

    p = sub.add_parser("region", help="export bound curves plus construction points")
    p.add_argument("--all", action="store_true", help="include every shipped curve and point")
    p.add_argument("--grid", default="1.0:3.0:0.1", help="nu grid as MIN:MAX:STEP")
    p.add_argument("--n0-max", type=int, default=64, dest="n0_max")
    p.add_argument("-o", "--output", required=True, help="CSV path")
    p.set_defaults(func=_cmd_region)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, BudgetError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
