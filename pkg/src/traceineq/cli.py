"""Command line front end: ``traceineq run-campaign | check-single | gibbs-solve``.

Exit codes: 0 all checks pass, 1 inequality failure (or ascent
non-convergence), 2 configuration / input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from traceineq import campaign, serialize, variational as var
from traceineq.hermitian import DimensionMismatch, NotHermitian, PDFloorViolation

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _parse_dims(text: str) -> tuple[int, int]:
    parts = text.replace(":", ",").split(",")
    if len(parts) == 1:
        parts = parts * 2
    try:
        lo, hi = (int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--dims expects N or NMIN:NMAX, got {text!r}")
    return lo, hi


def _parse_tol(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"--tol expects NAME=VALUE, got {text!r}")
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--tol value must be a number, got {value!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="traceineq", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run-campaign", help="run seeded checks and write a report")
    p.add_argument("config", nargs="?", help="JSON campaign config; flags override its fields")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int, help="trials per check")
    p.add_argument("--dims", type=_parse_dims, help="dimension range, e.g. 2:8")
    p.add_argument("--tol", type=_parse_tol, action="append", default=[], metavar="NAME=VALUE")
    p.add_argument("--checks", help="comma-separated subset of checks")
    p.add_argument("--out", help="output directory for report.json, report.txt, witnesses/")
    p.add_argument("--csv", action="store_true", help="also write slacks.csv")
    p.add_argument("--jobs", type=int)

    p = sub.add_parser("check-single", help="recompute one check on a stored instance")
    p.add_argument("check", choices=sorted(campaign.CHECKS))
    p.add_argument("files", nargs="*", help="witness files or instance bundles")
    p.add_argument("--arg", action="append", default=[], metavar="NAME=FILE",
                   help="bind one raw matrix/map JSON file to an instance field")

    p = sub.add_parser("gibbs-solve", help="closed-form and mirror-ascent solution of a Gibbs problem")
    p.add_argument("K", help="Hermitian matrix JSON")
    p.add_argument("--W", help="positive definite matrix JSON")
    p.add_argument("--x0", help="starting density matrix JSON (default I/n)")
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--rate", type=float, default=0.5)
    p.add_argument("--gap-tol", type=float, default=1e-4)
    p.add_argument("--maximizer-out", help="write the closed-form maximiser here")
    p.add_argument("--trace-csv", help="write the ascent trace (step,objective,gap) here")
    return parser


def _campaign_config(args) -> campaign.CampaignConfig:
    raw = {}
    if args.config:
        raw = serialize.load_json(args.config)
        if not isinstance(raw, dict):
            raise campaign.ConfigError("config: top level must be a JSON object")
    if "seed" not in raw and os.environ.get("TRACEINEQ_SEED"):
        try:
            raw["seed"] = int(os.environ["TRACEINEQ_SEED"])
        except ValueError:
            raise campaign.ConfigError(f"TRACEINEQ_SEED must be an integer, got {os.environ['TRACEINEQ_SEED']!r}")
    if args.seed is not None:
        raw["seed"] = args.seed
    if args.trials is not None:
        raw["trials"] = args.trials
    if args.dims is not None:
        raw["dim_range"] = list(args.dims)
    if args.tol:
        raw["tolerances"] = {**raw.get("tolerances", {}), **dict(args.tol)}
    if args.checks:
        raw["checks"] = [c.strip() for c in args.checks.split(",") if c.strip()]
    if args.out:
        raw["out_dir"] = args.out
    if args.csv:
        raw["csv"] = True
    if args.jobs is not None:
        raw["jobs"] = args.jobs
    return campaign.CampaignConfig.from_json(raw)


def cmd_run_campaign(args) -> int:
    cfg = _campaign_config(args)
    t0 = time.time()
    report = campaign.run_campaign(cfg)
    print(report.table(), end="")
    if cfg.out_dir:
        info = {"started": time.strftime("%Y-%m-%dT%H:%M:%S", time.localtime(t0)), "wall_seconds": time.time() - t0}
        (Path(cfg.out_dir) / "run_info.json").write_text(json.dumps(info, indent=2) + "\n")
        print(f"report written to {Path(cfg.out_dir) / 'report.json'}")
    return EXIT_OK if report.passed else EXIT_FAIL


def _raw_value(obj, where):
    if isinstance(obj, dict) and "form" in obj:
        return serialize.map_from_json(obj, where)
    if isinstance(obj, dict) and "entries" in obj:
        return serialize.matrix_from_json(obj, where)
    return serialize.value_from_json(obj, where)


def load_instance(files, bindings) -> tuple[dict, list]:
    """Merge witness files / bundles and NAME=FILE bindings into one instance."""
    instance, recorded = {}, []
    for f in files:
        obj = serialize.load_json(f)
        if isinstance(obj, dict) and "instance" in obj:
            recorded = list(obj.get("records", []))
            obj = obj["instance"]
        instance.update(serialize.instance_from_json(obj, str(f)))
    for spec in bindings:
        name, sep, path = spec.partition("=")
        if not sep:
            raise serialize.ParseError(f"--arg expects NAME=FILE, got {spec!r}")
        instance[name] = _raw_value(serialize.load_json(path), f"{path}")
    return instance, recorded


def cmd_check_single(args) -> int:
    instance, recorded = load_instance(args.files, args.arg)
    try:
        records = campaign.evaluate(args.check, instance, "replay")
    except KeyError as exc:
        raise serialize.ParseError(f"instance is missing field {exc}") from exc
    ok = True
    if len(recorded) != len(records):
        recorded = [None] * len(records)
    for r, old in zip(records, recorded):
        line = f"{r.check}.{r.metric}: slack={r.slack!r} scale={r.scale!r} normalized={r.normalized!r} {r.status.upper()}"
        if old is not None:
            line += f" (recorded slack {old['slack']!r})"
        print(line)
        ok &= r.status != "fail"
    return EXIT_OK if ok else EXIT_FAIL


def cmd_gibbs_solve(args) -> int:
    K = serialize.matrix_from_json(serialize.load_json(args.K), args.K)
    W = serialize.matrix_from_json(serialize.load_json(args.W), args.W) if args.W else None
    p = var.GibbsProblem(K, W)
    n = p.dim
    X0 = serialize.matrix_from_json(serialize.load_json(args.x0), args.x0) if args.x0 else np.eye(n) / n
    value = var.gibbs_value(p)
    X_star = var.gibbs_maximizer(p)
    closed = var.gibbs_objective(X_star, p)
    asc = var.mirror_ascent(p, X0, steps=args.steps, rate=args.rate, gap_tol=args.gap_tol)
    print(f"value              {value!r}")
    print(f"objective(X*)      {closed!r}")
    print(f"ascent objective   {asc.objectives[-1]!r}  ({len(asc.objectives) - 1} steps, {asc.backoffs} backoffs)")
    print(f"closed/ascent gap  {closed - asc.objectives[-1]!r}")
    if args.maximizer_out:
        Path(args.maximizer_out).write_text(json.dumps(serialize.matrix_to_json(X_star)) + "\n")
    if args.trace_csv:
        asc.write_csv(args.trace_csv)
    if not asc.converged:
        print(f"NOT CONVERGED: gap to value {asc.gap:.3e} > {args.gap_tol:g}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


COMMANDS = {"run-campaign": cmd_run_campaign, "check-single": cmd_check_single, "gibbs-solve": cmd_gibbs_solve}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (campaign.ConfigError, serialize.ParseError, DimensionMismatch, NotHermitian, PDFloorViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
