"""Command-line interface: run scenarios, validate configs, replay traces.

Exit codes: 0 on success, 2 for configuration problems, 1 for runtime
failures.  Errors go to stderr as a JSON object so callers can parse
them.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

MASTER_SEED_ENV = "LAINSIM_MASTER_SEED"


def _fail(code: int, error: str, details=None) -> int:
    print(json.dumps({"error": error, "details": details or []}), file=sys.stderr)
    return code


def cmd_run(args) -> int:
    from .config import ConfigError, load_config
    from .scenarios import run_scenario

    try:
        config = load_config(args.config)
    except ConfigError as exc:
        return _fail(2, "invalid config", exc.problems)
    except OSError as exc:
        return _fail(2, "cannot read config", [str(exc)])
    if args.workers is not None:
        config.workers = args.workers
    if MASTER_SEED_ENV in os.environ:
        config.master_seed = int(os.environ[MASTER_SEED_ENV])
    os.makedirs(args.output, exist_ok=True)
    try:
        path = run_scenario(config, args.output)
    except Exception as exc:  # pragma: no cover - surfaced for operators
        return _fail(1, "scenario failed", [f"{type(exc).__name__}: {exc}"])
    print(path)
    return 0


def cmd_validate(args) -> int:
    from .config import ConfigError, load_config

    try:
        load_config(args.config)
    except ConfigError as exc:
        return _fail(2, "invalid config", exc.problems)
    except OSError as exc:
        return _fail(2, "cannot read config", [str(exc)])
    print("ok")
    return 0


def cmd_list_scenarios(_args) -> int:
    from .config import SCENARIOS

    for name in SCENARIOS:
        print(name)
    return 0


def cmd_replay(args) -> int:
    """Re-derive episode metrics from a per-slot trace CSV."""
    import math

    from ..env import TraceRow, metrics_from_trace
    from .csvio import read_csv

    try:
        header, raw = read_csv(args.trace)
    except OSError as exc:
        return _fail(2, "cannot read trace", [str(exc)])
    expected = ["slot", "demand_id", "location", "action", "hop_delay_s",
                "reward", "status", "cause"]
    if header != expected:
        return _fail(2, "unexpected trace schema", [f"header {header}"])
    rows = [TraceRow(int(r[0]), int(r[1]), int(r[2]), int(r[3]), float(r[4]),
                     float(r[5]), r[6], r[7]) for r in raw]
    n_demands = args.n_demands or len({r.demand_id for r in rows})
    m = metrics_from_trace(rows, n_demands)
    print(json.dumps({
        "n_demands": m.n_demands,
        "delivered": m.delivered,
        "failed": m.failed,
        "tsr": m.tsr,
        "mean_e2e_s": None if math.isnan(m.mean_e2e_s) else m.mean_e2e_s,
        "objective": None if math.isnan(m.objective) else m.objective,
        "reward_sum": m.reward_sum,
    }))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lainsim",
        description="Secure-routing simulator for low-altitude UAV networks")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a scenario config")
    p_run.add_argument("-c", "--config", required=True)
    p_run.add_argument("-o", "--output", default="results")
    p_run.add_argument("-w", "--workers", type=int, default=None)
    p_run.set_defaults(fn=cmd_run)

    p_val = sub.add_parser("validate", help="check a config without running it")
    p_val.add_argument("-c", "--config", required=True)
    p_val.set_defaults(fn=cmd_validate)

    p_list = sub.add_parser("list-scenarios", help="print known scenario names")
    p_list.set_defaults(fn=cmd_list_scenarios)

    p_replay = sub.add_parser("replay", help="recompute metrics from a trace CSV")
    p_replay.add_argument("trace")
    p_replay.add_argument("--n-demands", type=int, default=None)
    p_replay.set_defaults(fn=cmd_replay)
    return parser


def main(argv=None) -> int:
    os.environ.setdefault("OMP_NUM_THREADS", "1")
    os.environ.setdefault("OPENBLAS_NUM_THREADS", "1")
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
