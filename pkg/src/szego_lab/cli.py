"""Command-line interface.

Exit codes: 0 all checks pass, 1 some inequality is violated, 2 configuration
error, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import bounds
from .curve import ConformalPair, make_boundary_grid
from .errors import ConfigError, NonConvergence
from .extremal import solve_extremal
from .harness import (
    ExperimentConfig,
    read_csv,
    rows_to_csv,
    run_convergence,
    run_random_checks,
    run_theorem_matrix,
    summarize_rows,
)
from .szego import build_outer
from .weight import WeightSpec

EXIT_OK, EXIT_VIOLATION, EXIT_CONFIG, EXIT_NONCONVERGENCE = 0, 1, 2, 3

_VERIFY_KINDS = {
    "proposition": bounds.PROPOSITION,
    "corollary1": bounds.COROLLARY1,
    "corollary2": bounds.COROLLARY2,
    "fejer-riesz": bounds.FEJER_RIESZ,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _pair(text: str) -> list[float]:
    parts = text.split(",")
    if len(parts) == 1:
        parts.append("0")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")
    return [float(parts[0]), float(parts[1])]


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x]


def _add_common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("configuration (flags override --config)")
    g.add_argument("--config", type=Path, help="JSON experiment configuration")
    g.add_argument("--curve", choices=["disk", "quadratic"])
    g.add_argument("--curve-a", type=_pair, metavar="RE,IM", help="quadratic map coefficient")
    g.add_argument("--xi", type=_pair, metavar="RE,IM", help="base point psi(0)")
    g.add_argument("--weight", choices=["const", "expcos", "szego_a"])
    g.add_argument("--weight-a", type=_pair, metavar="RE,IM", help="szego_a weight parameter")
    g.add_argument("--a", type=_pair, metavar="RE,IM",
                   help="shorthand for whichever of --curve-a / --weight-a applies")
    g.add_argument("--c", type=float, help="const weight value")
    g.add_argument("--p", type=_int_list, metavar="P[,P...]")
    g.add_argument("--n", type=int)
    g.add_argument("--n-min", type=int)
    g.add_argument("--n-max", type=int)
    g.add_argument("--M", type=int)
    g.add_argument("--K", type=int)
    g.add_argument("--segment-nodes", type=int)
    g.add_argument("--radii", type=_float_list)
    g.add_argument("--seed", type=int)
    g.add_argument("--trials", type=int)
    o = p.add_argument_group("output")
    o.add_argument("--out", type=Path, default=None, help="directory for report.csv and summary.json")
    o.add_argument("--record-timings", action="store_true",
                   help="fill the ms column (makes the CSV non-reproducible)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="szego-lab", description="Weighted extremal polynomials and transport-bound checks.",
                     epilog="exit codes: 0 ok, 1 inequality violated, 2 config error, 3 non-convergence")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add_common(sub.add_parser("solve", help="solve one extremal problem and print JSON"))
    verify = sub.add_parser("verify", help="check the theorem or one of the embedding inequalities")
    vsub = verify.add_subparsers(dest="target", required=True, parser_class=_Parser)
    for name in ("theorem", *_VERIFY_KINDS):
        _add_common(vsub.add_parser(name))
    _add_common(sub.add_parser("sweep", help="convergence study with fitted decay rate"))
    rep = sub.add_parser("report", help="summarise an existing report.csv")
    rep.add_argument("input", type=Path)
    rep.add_argument("--out", type=Path, default=None)
    return parser


def _line_of(text: str, key: str | None) -> int:
    if key:
        for i, line in enumerate(text.splitlines(), start=1):
            if f'"{key}"' in line:
                return i
    return 1


def _load_config_file(path: Path) -> tuple[dict, str]:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}:1: configuration must be a JSON object")
    return data, text


def config_from_args(args) -> ExperimentConfig:
    data: dict = {}
    text = ""
    if args.config is not None:
        data, text = _load_config_file(args.config)
    try:
        _apply_flags(data, args)
        return ExperimentConfig.from_dict(data)
    except ConfigError as exc:
        if args.config is not None:
            raise ConfigError(f"{args.config}:{_line_of(text, exc.key)}: {exc}", exc.key) from None
        raise


def _apply_flags(data: dict, args) -> None:
    if args.curve or args.curve_a or args.xi:
        base = dict(data.get("curve") or {"kind": "disk"})
        if args.curve:
            base = {"kind": args.curve, **({"xi": base["xi"]} if "xi" in base else {})}
        data.pop("curves", None)
        data["curve"] = base
    if args.weight or args.weight_a or args.c is not None:
        base = dict(data.get("weight") or {"kind": "const"})
        if args.weight:
            base = {"kind": args.weight}
        data.pop("weights", None)
        data["weight"] = base
    if args.a is not None:
        takers = []
        curve, weight = data.get("curve"), data.get("weight")
        if isinstance(curve, dict) and curve.get("kind") == "quadratic":
            takers.append("curve")
        if isinstance(weight, dict) and weight.get("kind") == "szego_a":
            takers.append("weight")
        if len(takers) != 1:
            raise ConfigError("--a is ambiguous here; use --curve-a or --weight-a")
        data[takers[0]]["a"] = args.a
    if args.curve_a is not None:
        data["curve"]["a"] = args.curve_a
    if args.xi is not None:
        data["curve"]["xi"] = args.xi
    if args.weight_a is not None:
        data["weight"]["a"] = args.weight_a
    if args.c is not None:
        data["weight"]["c"] = args.c
    for flag, key in (("p", "p"), ("n_min", "n_min"), ("n_max", "n_max"), ("M", "M"), ("K", "K"),
                      ("segment_nodes", "segment_nodes"), ("radii", "radii"), ("seed", "seed"),
                      ("trials", "trials")):
        val = getattr(args, flag)
        if val is not None:
            data[key] = val
    if args.n is not None:
        data.pop("n_min", None)
        data.pop("n_max", None)
        data["n"] = args.n


def _emit(args, csv_text: str | None, summary: dict) -> None:
    blob = json.dumps(summary, indent=2, sort_keys=True)
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        if csv_text is not None:
            (args.out / "report.csv").write_text(csv_text)
        (args.out / "summary.json").write_text(blob + "\n")
    elif csv_text is not None:
        sys.stdout.write(csv_text)
    print(blob, file=sys.stderr if (args.out is None and csv_text is not None) else sys.stdout)


def _cmd_solve(args) -> int:
    cfg = config_from_args(args)
    pair, weight, p = cfg.cells()[0]
    grid = make_boundary_grid(pair, weight, cfg.M)
    D = build_outer(grid, p, cfg.K)
    sol = solve_extremal(pair, grid, D, cfg.n_max, p)
    out = {"curve": pair.to_config(), "weight": weight.to_config(), "n": sol.n, "p": sol.p,
           "coefficients": sol.Q.tolist(), "m": sol.m, "iterations": sol.iterations,
           "converged": sol.converged, "D0": D.d0}
    print(json.dumps(out, indent=2))
    return EXIT_OK if sol.converged else EXIT_NONCONVERGENCE


def _rows_exit(rows, summary) -> int:
    if summary["totals"]["fail"]:
        return EXIT_VIOLATION
    if summary["totals"]["nonconverged"]:
        return EXIT_NONCONVERGENCE
    return EXIT_OK


def _cmd_theorem(args) -> int:
    cfg = config_from_args(args)
    rows = run_theorem_matrix(cfg, args.record_timings)
    summary = summarize_rows(rows, cfg)
    _emit(args, rows_to_csv(rows), summary)
    return _rows_exit(rows, summary)


def _cmd_sweep(args) -> int:
    cfg = config_from_args(args)
    rows, rates = run_convergence(cfg, args.record_timings)
    summary = summarize_rows(rows, cfg)
    summary["decay_rate"] = {k: v for k, v in rates.items() if v is not None}
    _emit(args, rows_to_csv(rows), summary)
    return _rows_exit(rows, summary)


def _cmd_random(args) -> int:
    cfg = config_from_args(args)
    summary = run_random_checks(cfg, [_VERIFY_KINDS[args.target]])
    _emit(args, None, summary)
    return EXIT_VIOLATION if summary["totals"]["fail"] else EXIT_OK


def _cmd_report(args) -> int:
    try:
        text = args.input.read_text()
    except OSError as exc:
        raise ConfigError(f"{args.input}: cannot read: {exc.strerror}") from None
    try:
        rows = read_csv(text)
    except ConfigError as exc:
        raise ConfigError(f"{args.input}:{exc}") from None
    fails = [r for r in rows if not r["pass"]]
    summary = {
        "totals": {"rows": len(rows), "pass": len(rows) - len(fails), "fail": len(fails)},
        "failures": [{"config": r["config_digest"], "n": r["n"], "lhs": r["lhs"], "rhs": r["rhs_proof"]}
                     for r in fails],
        "worst_slack": min((r["slack"] for r in rows), default=None),
        "configs": sorted({r["config_digest"] for r in rows}),
    }
    _emit(args, None, summary)
    return EXIT_VIOLATION if fails else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "report":
            return _cmd_report(args)
        if args.target == "theorem":
            return _cmd_theorem(args)
        return _cmd_random(args)
    except ConfigError as exc:
        print(f"szego-lab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonConvergence as exc:
        print(f"szego-lab: non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
