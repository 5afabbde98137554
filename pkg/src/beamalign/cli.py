"""Command line front end: ``beamalign {sweep,snapshot,validate}``.

``sweep`` writes one CSV row per (strategy, sweep point) with the columns
``strategy,sweep_value,mean_rate,std_error,n_trials,seed``. When ``--out``
is given, a ``<out>.meta.json`` sidecar records the scenario hash, seed
and the resolved scenario so the run can be reproduced.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import logging
import sys
from pathlib import Path

from . import checks
from .evaluation import run_experiment, snapshot_beams
from .scenario import PARAMETER_SETS, Scenario, ScenarioError, SweepSpec, builtin_scenario, load_scenario
from .strategies import Strategy

CSV_COLUMNS = ("strategy", "sweep_value", "mean_rate", "std_error", "n_trials", "seed")


class UsageError(Exception):
    pass


def _resolve_scenario(ref: str | None) -> Scenario:
    if ref is None:
        return builtin_scenario()
    if ref in PARAMETER_SETS:
        return builtin_scenario(ref)
    return load_scenario(ref)


def _parse_strategies(text: str) -> list[Strategy]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    if not names:
        raise UsageError("--strategies: at least one strategy is required")
    out = []
    for n in names:
        try:
            s = Strategy(n)
        except ValueError:
            valid = ", ".join(s.value for s in Strategy)
            raise UsageError(f"--strategies: unknown strategy {n!r} (choose from {valid})") from None
        if s not in out:
            out.append(s)
    return out


def _apply_mc_overrides(scenario: Scenario, args) -> Scenario:
    cfg = scenario.strategy
    changes = {}
    if args.mc is not None:
        changes["mc_iterations"] = args.mc
    if args.mc_inner is not None:
        changes["mc_inner_iterations"] = args.mc_inner
    if args.d is not None:
        changes["d_tx"] = changes["d_rx"] = args.d
    if not changes:
        return scenario
    try:
        return dataclasses.replace(scenario, strategy=dataclasses.replace(cfg, **changes))
    except ValueError as exc:
        raise UsageError(f"--mc/--mc-inner/--d: {exc}") from None


def _fmt(x: float) -> str:
    return repr(float(x))


def _write(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_sweep(args) -> int:
    strategies = _parse_strategies(args.strategies)
    scenario = _apply_mc_overrides(_resolve_scenario(args.scenario), args)
    try:
        sweep = SweepSpec.parse(args.sweep) if args.sweep else scenario.sweep
    except ValueError as exc:
        raise UsageError(f"--sweep: {exc}") from None
    seed = scenario.strategy.seed if args.seed is None else args.seed
    results = run_experiment(scenario, strategies, sweep, n_trials=args.trials, seed=seed)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in results:
        writer.writerow(
            [r.strategy.value, _fmt(r.sweep_value), _fmt(r.mean_rate), _fmt(r.std_error), r.n_trials, seed]
        )
    _write(buf.getvalue(), args.out)
    if args.out is not None:
        meta = {
            "param_hash": scenario.param_hash(),
            "seed": seed,
            "trials": args.trials,
            "strategies": [s.value for s in strategies],
            "sweep": str(sweep),
            "scenario": scenario.to_dict(),
        }
        Path(args.out + ".meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_snapshot(args) -> int:
    strategies = _parse_strategies(args.strategies)
    scenario = _apply_mc_overrides(_resolve_scenario(args.scenario), args)
    seed = scenario.strategy.seed if args.seed is None else args.seed
    snap = snapshot_beams(scenario, strategies, seed=seed)
    _write(json.dumps(snap.to_dict(), indent=2, sort_keys=True) + "\n", args.out)
    return 0


def cmd_validate(args) -> int:
    seed = 0 if args.seed is None else args.seed
    results = checks.run_all(seed=seed, n_samples=args.samples)
    text = "".join(r.line() + "\n" for r in results)
    _write(text, args.out)
    if args.out is not None:
        sys.stdout.write(text)
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="beamalign", description="Robust location-aided beam pre-selection simulator.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    all_names = ",".join(s.value for s in Strategy)

    def common(p, strategies=True):
        if strategies:
            p.add_argument("--scenario", help="scenario JSON file, or params-A / params-B (default: params-A)")
            p.add_argument("--strategies", default=all_names, help=f"comma-separated subset of {all_names}")
            p.add_argument("--mc", type=int, help="override Monte-Carlo iterations per expectation")
            p.add_argument("--mc-inner", type=int, help="override the two-step inner Monte-Carlo iterations")
            p.add_argument("--d", type=int, help="override the beam budget on both sides")
        p.add_argument("--seed", type=int, help="base random seed (default: the scenario's seed)")
        p.add_argument("--out", help="output file (default: stdout)")

    p = sub.add_parser("sweep", help="expected rate per strategy across an SNR or beam-count sweep")
    common(p)
    p.add_argument("--sweep", help="snr:<lo>:<hi>[:<step>] or d:<lo>:<hi>[:<step>] (default: scenario's)")
    p.add_argument("--trials", type=int, default=1000, help="Monte-Carlo trials per sweep point")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("snapshot", help="one realization's beam selections as JSON")
    common(p)
    p.set_defaults(func=cmd_snapshot)

    p = sub.add_parser("validate", help="run the oracle self-checks")
    common(p, strategies=False)
    p.add_argument("--samples", type=int, default=100_000, help="channel draws per gain-oracle instance")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if getattr(args, "trials", 1) < 1:
            raise UsageError("--trials: must be >= 1")
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"beamalign: error: {exc}", file=sys.stderr)
        return 2
    except ScenarioError as exc:
        print(f"beamalign: invalid scenario: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"beamalign: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
