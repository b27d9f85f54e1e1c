"""Command-line front end: sweeps and simulations emitting CSV or JSON.

All angles on the command line and in output files are degrees; the library
works in radians internally.  Exit codes: 0 success, 1 usage error,
2 verification failure, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import checks
from .chsh import MixedStrategy
from .frontier import (
    RegionGridSpec,
    deterministic_pair,
    equal_point,
    full_frontier,
    make_case,
    region_map,
)
from .linalg import NumericalError
from .shotsim import ShotConfig, run_experiment
from .states import StateSpec
from .strategies import optimal_chi

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_NUMERICAL = 3

ANGLE_UNIT_COMMENT = "angle unit: degrees"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _emit(args, fields: list[str], rows: list[dict], comments: list[str]) -> None:
    comments = [ANGLE_UNIT_COMMENT] + comments
    if args.format == "json":
        doc = {"meta": comments, "fields": fields, "rows": rows}
        text = json.dumps(doc, indent=2) + "\n"
        if args.out == "-":
            sys.stdout.write(text)
        else:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        return
    out = sys.stdout if args.out == "-" else open(args.out, "w", encoding="utf-8", newline="")
    try:
        for comment in comments:
            out.write(f"# {comment}\n")
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(fields)
        for row in rows:
            writer.writerow([_fmt(row[f]) for f in fields])
    finally:
        if out is not sys.stdout:
            out.close()


def _parse_int_list(text: str) -> list[int]:
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValueError(f"expected a comma-separated integer list, got {text!r}") from exc
    if not values:
        raise ValueError("empty case list")
    return values


def _parse_pair(text: str) -> tuple[int, int]:
    values = _parse_int_list(text)
    if len(values) != 2:
        raise ValueError(f"--pair needs exactly two cases, got {text!r}")
    return values[0], values[1]


def _phi_state(args) -> float:
    if not (0.0 <= args.phi_state <= 45.0):
        raise ValueError(f"--phi-state must be in [0, 45] degrees, got {args.phi_state}")
    return math.radians(args.phi_state)


def cmd_tradeoff(args) -> int:
    phi_state = _phi_state(args)
    cases = _parse_int_list(args.cases)
    if args.angle_step is None:
        sweep = np.linspace(0.0, 90.0, 13)
    else:
        sweep = np.arange(0.0, 90.0 + args.angle_step / 2, args.angle_step)
    rows = []
    for lam in cases:
        if lam == 2:
            chi = optimal_chi(phi_state).value
            s_ab, s_ac = deterministic_pair(2, phi_state, chi)
            rows.append(
                {"lambda": lam, "setting_deg": math.degrees(chi),
                 "s_ab": float(s_ab), "s_ac": float(s_ac)}
            )
            continue
        for deg in sweep:
            s_ab, s_ac = deterministic_pair(lam, phi_state, math.radians(deg))
            rows.append(
                {"lambda": lam, "setting_deg": float(deg),
                 "s_ab": float(s_ab), "s_ac": float(s_ac)}
            )
    _emit(args, ["lambda", "setting_deg", "s_ab", "s_ac"], rows,
          [f"phi_state_deg = {args.phi_state}"])
    return EXIT_OK


def cmd_sweep_p(args) -> int:
    phi_state = _phi_state(args)
    pair = _parse_pair(args.pair)
    opt = equal_point(phi_state, pair)
    setting_i = opt.setting_of(pair[0])
    setting_j = opt.setting_of(pair[1])
    xi, yi = deterministic_pair(pair[0], phi_state, setting_i)
    xj, yj = deterministic_pair(pair[1], phi_state, setting_j)
    rows = []
    for p in np.arange(0.0, 1.0 + args.p_step / 2, args.p_step):
        s_ab = p * float(xi) + (1 - p) * float(xj)
        s_ac = p * float(yi) + (1 - p) * float(yj)
        rows.append(
            {"p": float(p), "s_ab": s_ab, "s_ac": s_ac,
             "violates_both": bool(s_ab > 2.0 and s_ac > 2.0)}
        )
    comments = [
        f"phi_state_deg = {args.phi_state}",
        f"pair = {pair[0]},{pair[1]}",
        f"setting_{pair[0]}_deg = {math.degrees(setting_i):.6f}",
        f"setting_{pair[1]}_deg = {math.degrees(setting_j):.6f}",
    ]
    _emit(args, ["p", "s_ab", "s_ac", "violates_both"], rows, comments)
    return EXIT_OK


def cmd_frontier(args) -> int:
    phi_state = _phi_state(args)
    n_dense = 20001
    if args.angle_step is not None:
        n_dense = max(10000, int(round(90.0 / args.angle_step)) + 1)
    curve = full_frontier(phi_state, n_points=args.points, n_dense=n_dense)
    rows = [
        {
            "s_ab": pt.s_ab,
            "s_ac": pt.s_ac,
            "segment": pt.segment,
            "case_a": pt.case_a.lam,
            "setting_a_deg": math.degrees(pt.case_a.setting),
            "case_b": pt.case_b.lam,
            "setting_b_deg": math.degrees(pt.case_b.setting),
            "weight_a": pt.weight_a,
        }
        for pt in curve.points
    ]
    _emit(
        args,
        ["s_ab", "s_ac", "segment", "case_a", "setting_a_deg", "case_b", "setting_b_deg", "weight_a"],
        rows,
        [f"phi_state_deg = {args.phi_state}"],
    )
    return EXIT_OK


def cmd_region(args) -> int:
    phi_state = _phi_state(args)
    pair = _parse_pair(args.pair)
    grid = RegionGridSpec(
        angle_points=int(round(90.0 / args.angle_step)) + 1,
        p_points=int(round(1.0 / args.p_step)) + 1,
    )
    rmap = region_map(phi_state, pair, grid)
    rows = [
        {"setting_deg": math.degrees(rmap.settings_axis[i]), "p": float(rmap.p_axis[j]),
         "violates_both": bool(rmap.mask[i, j])}
        for i in range(len(rmap.settings_axis))
        for j in range(len(rmap.p_axis))
    ]
    comments = [
        f"phi_state_deg = {args.phi_state}",
        f"pair = {pair[0]},{pair[1]}",
        f"fixed_other_deg = {math.degrees(rmap.fixed_other):.6f}",
        f"area_fraction = {rmap.area_fraction:.17g}",
    ]
    _emit(args, ["setting_deg", "p", "violates_both"], rows, comments)
    return EXIT_OK


def cmd_mc(args) -> int:
    phi_state = _phi_state(args)
    pair = _parse_pair(args.pair)
    opt = equal_point(phi_state, pair)
    p = opt.p_star if args.p is None else args.p
    strategy = MixedStrategy(
        (
            (make_case(pair[0], opt.setting_of(pair[0])), p),
            (make_case(pair[1], opt.setting_of(pair[1])), 1.0 - p),
        )
    )
    state = StateSpec(phi_state, args.noise_v)
    cfg = ShotConfig(args.mean, seed=args.seed, n_repeats=args.repeats)
    rows = []
    for r in range(cfg.n_repeats):
        res = run_experiment(state, strategy, cfg, repeat=r)
        rows.append(
            {
                "repeat": r,
                "s_ab": res.s_ab.value, "s_ab_sigma": res.s_ab.sigma,
                "s_ac": res.s_ac.value, "s_ac_sigma": res.s_ac.sigma,
                "p_hat": res.p_hat.value, "p_hat_sigma": res.p_hat.sigma,
            }
        )
    comments = [
        f"phi_state_deg = {args.phi_state}",
        f"pair = {pair[0]},{pair[1]}",
        f"p = {p:.17g}",
        f"mean_counts_per_setting = {args.mean:.17g}",
        f"seed = {args.seed}",
        f"noise_v = {args.noise_v:.17g}",
    ]
    _emit(
        args,
        ["repeat", "s_ab", "s_ab_sigma", "s_ac", "s_ac_sigma", "p_hat", "p_hat_sigma"],
        rows,
        comments,
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    results = checks.run_all(fast=not args.full)
    for res in results:
        print(res.line())
    if args.out != "-":
        rows = [
            {"check": r.name, "passed": r.passed, "worst": r.worst, "tol": r.tol, "detail": r.detail}
            for r in results
        ]
        _emit(args, ["check", "passed", "worst", "tol", "detail"], rows, [])
    if all(r.passed for r in results):
        print("verify: all checks passed")
        return EXIT_OK
    print("verify: FAILURES detected", file=sys.stderr)
    return EXIT_VERIFY


def build_parser() -> _Parser:
    parser = _Parser(
        prog="seqchsh",
        description="Sequential CHSH recycling: trade-off sweeps, frontiers, "
                    "double-violation maps, and shot-noise simulations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, pair_default=None):
        p.add_argument("--phi-state", type=float, default=45.0,
                       help="state angle in degrees (0..45)")
        p.add_argument("--out", default="-", help="output path, '-' for stdout")
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        if pair_default is not None:
            p.add_argument("--pair", default=pair_default,
                           help="two cases to combine, e.g. 1,2")

    p = sub.add_parser("tradeoff", help="deterministic trade-off sweep per case")
    common(p)
    p.add_argument("--cases", default="1,2,3", help="cases to sweep, e.g. 1,2,3")
    p.add_argument("--angle-step", type=float, default=None,
                   help="setting step in degrees (default: 13 points)")
    p.set_defaults(func=cmd_tradeoff)

    p = sub.add_parser("sweep-p", help="mixed CHSH values versus probability p")
    common(p, pair_default="1,2")
    p.add_argument("--p-step", type=float, default=0.01)
    p.set_defaults(func=cmd_sweep_p)

    p = sub.add_parser("frontier", help="optimal labeled trade-off frontier")
    common(p)
    p.add_argument("--points", type=int, default=200, help="output samples (>= 16)")
    p.add_argument("--angle-step", type=float, default=None,
                   help="dense sweep step in degrees")
    p.set_defaults(func=cmd_frontier)

    p = sub.add_parser("region", help="double-violation map over (setting, p)")
    common(p, pair_default="1,2")
    p.add_argument("--angle-step", type=float, default=0.1)
    p.add_argument("--p-step", type=float, default=0.001)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("mc", help="shot-noise Monte Carlo of a mixed strategy")
    common(p, pair_default="1,2")
    p.add_argument("--p", type=float, default=None,
                   help="probability of the first case (default: equal point)")
    p.add_argument("--mean", type=float, default=1e5,
                   help="expected coincidences per setting")
    p.add_argument("--seed", type=int, default=12345)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--noise-v", type=float, default=0.0, dest="noise_v")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("verify", help="closed-form vs numeric oracle suite")
    common(p)
    p.add_argument("--full", action="store_true",
                   help="full-size sweeps (matches the acceptance suite)")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"seqchsh: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"seqchsh: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
