"""Command-line front end: scenario runs, weight sweeps, prediction eval.

Subcommands::

    fanetsim run           --config S.cfg --out results.csv
    fanetsim sweep-weights --config S.cfg --out sweep.csv [--grid w3]
    fanetsim predict-eval  --config S.cfg --out pred.csv

Every emitted row carries the exact seed that reproduces it. The main CSV
gets two sidecars: ``<out stem>_flows.csv`` (or ``_best.csv`` /
``_summary.csv`` for the other subcommands) with the detail table, and
``<out>.meta.json`` with the config hash, base seed, and tool version.

Exit codes: 0 success, 2 configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .config import ConfigError, ScenarioConfig, load_config, with_overrides
from .simengine import (
    MetricsReport,
    PredictionReport,
    SweepReport,
    run,
    run_prediction_eval,
    run_weight_sweep,
    w1w2_grid,
    w3_grid,
)

__all__ = ["main", "read_results"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3

RUN_HEADER = [
    "router",
    "replication",
    "seed",
    "flows",
    "success_rate",
    "weighted_throughput_mbps",
    "mean_fct_s",
    "mean_fct_successful_s",
    "reroutes_total",
]

FLOW_HEADER = [
    "router",
    "replication",
    "seed",
    "flow_id",
    "src",
    "dst",
    "size_bytes",
    "start_time",
    "bytes_delivered",
    "reroute_count",
    "completion_time",
    "fct_s",
    "success",
]

SWEEP_HEADER = [
    "w1",
    "w2",
    "w3",
    "replication",
    "seed",
    "success_rate",
    "weighted_throughput_mbps",
    "mean_fct_s",
]

PREDICT_HEADER = [
    "replication",
    "seed",
    "node_i",
    "node_j",
    "predicted_kinematic_s",
    "predicted_extrapolation_s",
    "observed_s",
    "error_kinematic_s",
    "error_extrapolation_s",
]


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        writer.writerows(rows)


def _sidecar(out: Path, suffix: str) -> Path:
    return out.with_name(out.stem + suffix + out.suffix)


def _write_meta(out: Path, config_path: str, cfg: ScenarioConfig,
                seeds: List[int], command: str) -> None:
    digest = hashlib.sha256(Path(config_path).read_bytes()).hexdigest()
    meta = {
        "tool": "fanetsim",
        "version": __version__,
        "command": command,
        "config_path": str(config_path),
        "config_sha256": digest,
        "base_seed": cfg.seed,
        "cell_seeds": seeds,
    }
    with open(out.with_suffix(out.suffix + ".meta.json"), "w", encoding="utf-8") as f:
        json.dump(meta, f, indent=2, sort_keys=True)
        f.write("\n")


def read_results(path: str) -> List[Dict[str, object]]:
    """Re-parse an emitted CSV; numeric fields come back as exact floats."""
    out: List[Dict[str, object]] = []
    with open(path, "r", encoding="utf-8", newline="") as f:
        for row in csv.DictReader(f):
            parsed: Dict[str, object] = {}
            for key, val in row.items():
                if val == "" or val is None:
                    parsed[key] = None
                elif val in ("True", "False"):
                    parsed[key] = val == "True"
                else:
                    try:
                        parsed[key] = int(val)
                    except ValueError:
                        try:
                            parsed[key] = float(val)
                        except ValueError:
                            parsed[key] = val
            out.append(parsed)
    return out


def _load(args: argparse.Namespace) -> ScenarioConfig:
    cfg = load_config(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.routers is not None:
        overrides["routers"] = tuple(
            r.strip() for r in args.routers.split(",") if r.strip()
        )
    if overrides:
        cfg = with_overrides(cfg, **overrides)
    return cfg


def _report_rows(report: MetricsReport, flow_count: int):
    main_rows = []
    flow_rows = []
    for c in report.cells:
        main_rows.append(
            [
                c.router,
                c.replication,
                c.seed,
                flow_count,
                c.success_rate,
                c.weighted_throughput_mbps,
                c.mean_fct,
                "" if c.mean_fct_successful is None else c.mean_fct_successful,
                c.reroutes_total,
            ]
        )
        for fr in c.flows:
            flow_rows.append(
                [
                    c.router,
                    c.replication,
                    c.seed,
                    fr.spec.flow_id,
                    fr.spec.src,
                    fr.spec.dst,
                    fr.spec.size_bytes,
                    fr.spec.start_time,
                    fr.bytes_delivered,
                    fr.reroute_count,
                    fr.completion_time,
                    fr.fct(c.duration),
                    fr.success,
                ]
            )
    return main_rows, flow_rows


def cmd_run(args: argparse.Namespace) -> int:
    cfg = _load(args)
    report = run(cfg, jobs=args.jobs)
    out = Path(args.out)
    main_rows, flow_rows = _report_rows(report, cfg.flow_count)
    _write_csv(out, RUN_HEADER, main_rows)
    _write_csv(_sidecar(out, "_flows"), FLOW_HEADER, flow_rows)
    _write_meta(out, args.config, cfg,
                sorted({c.seed for c in report.cells}), "run")
    return EXIT_OK


def _parse_grid(spec: str) -> List[Tuple[float, float, float]]:
    spec = spec.strip()
    if spec == "w3":
        return w3_grid()
    if spec.startswith("w1w2@"):
        try:
            w3 = float(spec.split("@", 1)[1])
        except ValueError as e:
            raise ConfigError(f"grid: cannot parse {spec!r}") from e
        if not (0.0 <= w3 <= 1.0):
            raise ConfigError(f"grid: w3 must be in [0, 1], got {w3}")
        return w1w2_grid(w3)
    grid = []
    for chunk in spec.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 3:
            raise ConfigError(f"grid: expected w1,w2,w3 triples, got {chunk!r}")
        try:
            grid.append(tuple(float(p) for p in parts))
        except ValueError as e:
            raise ConfigError(f"grid: cannot parse {chunk!r}") from e
    if not grid:
        raise ConfigError(f"grid: no points in {spec!r}")
    return grid


def cmd_sweep_weights(args: argparse.Namespace) -> int:
    cfg = _load(args)
    grid = _parse_grid(args.grid)
    report = run_weight_sweep(cfg, grid, jobs=args.jobs)
    out = Path(args.out)
    rows = []
    for point in report.points:
        for c in point.cells:
            rows.append(
                [
                    point.weights[0],
                    point.weights[1],
                    point.weights[2],
                    c.replication,
                    c.seed,
                    c.success_rate,
                    c.weighted_throughput_mbps,
                    c.mean_fct,
                ]
            )
    _write_csv(out, SWEEP_HEADER, rows)
    best_rows = [
        ["metric", "w1", "w2", "w3"],
    ]
    for metric, triple in sorted(report.best_by_metric.items()):
        best_rows.append([metric, *triple])
    best_rows.append(["composite", *report.best])
    _write_csv(_sidecar(out, "_best"), best_rows[0], best_rows[1:])
    seeds = sorted({c.seed for p in report.points for c in p.cells})
    _write_meta(out, args.config, cfg, seeds, "sweep-weights")
    return EXIT_OK


def cmd_predict_eval(args: argparse.Namespace) -> int:
    cfg = _load(args)
    report = run_prediction_eval(cfg, jobs=args.jobs)
    out = Path(args.out)
    rows = [
        [
            r.replication,
            r.seed,
            r.node_i,
            r.node_j,
            r.predicted_kinematic,
            r.predicted_extrapolation,
            r.observed,
            abs(r.predicted_kinematic - r.observed),
            abs(r.predicted_extrapolation - r.observed),
        ]
        for r in report.rows
    ]
    _write_csv(out, PREDICT_HEADER, rows)
    summary = [
        ["predictor", "mean_abs_error_s", "std_abs_error_s", "links"],
        ["kinematic", report.kinematic_mean, report.kinematic_std, len(report.rows)],
        ["extrapolation", report.extrapolation_mean, report.extrapolation_std,
         len(report.rows)],
    ]
    _write_csv(_sidecar(out, "_summary"), summary[0], summary[1:])
    seeds = sorted({r.seed for r in report.rows})
    _write_meta(out, args.config, cfg, seeds, "predict-eval")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fanetsim",
        description="Routing and flow simulation for highly dynamic UAV networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser):
        p.add_argument("--config", required=True, help="scenario file (key = value)")
        p.add_argument("--out", required=True, help="output CSV path")
        p.add_argument("--seed", type=int, default=None, help="override base seed")
        p.add_argument("--jobs", type=int, default=1, help="worker processes")
        p.add_argument(
            "--routers", default=None,
            help="comma-separated router list overriding the config",
        )

    p_run = sub.add_parser("run", help="run all (router x replication) cells")
    common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep-weights", help="sweep objective weights")
    common(p_sweep)
    p_sweep.add_argument(
        "--grid", default="w3",
        help='"w3", "w1w2@<w3>", or explicit "w1,w2,w3;..." triples',
    )
    p_sweep.set_defaults(func=cmd_sweep_weights)

    p_pred = sub.add_parser(
        "predict-eval", help="compare lifetime predictors against observation"
    )
    common(p_pred)
    p_pred.set_defaults(func=cmd_predict_eval)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
