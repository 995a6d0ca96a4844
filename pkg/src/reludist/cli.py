"""Command-line interface.

Subcommands: psi, expect, mc, refute, theta-sweep, concentration, angle,
separate, depth, meanwidth, selftest. Angles are radians unless ``--deg``
is given. A JSON file mirroring the run configuration can be supplied with
``--config``; explicit flags override it. Exit codes: 0 success, 1
validation error, 2 runtime error, 3 when refute does not support the
corrected formula.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import rng
from .errors import (
    DimensionMismatch,
    DomainError,
    ReludistError,
    TooFewPoints,
    UsageError,
    ZeroVector,
)
from .estimators import (
    VerdictKind,
    mc_output_cos,
    mc_sq_dist,
    mean_width_estimate,
    refutation_test,
)
from .experiments import (
    ClassConfig,
    SweepRecord,
    _distance_record,
    concentration_sweep,
    depth_sweep,
    fit_loglog_slope,
    planar_pair,
    separation_experiment,
    theta_sweep,
)
from .geometry import (
    Variant,
    expected_output_cos,
    expected_sq_dist,
    pair_geometry_from_angle,
    psi_of_angle,
)
from .reporting import (
    ReportDocument,
    RunConfig,
    emit_csv,
    emit_json,
    format_float,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); 2 is our runtime-error code
        raise UsageError(message)


def _add_common(sp, *, out=True):
    sp.add_argument("--config", help="JSON file mirroring the run configuration")
    sp.add_argument("--deg", action="store_true", help="interpret angles in degrees")
    if out:
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--format", choices=["csv", "json"], help="output format")


def _build_parser(config_defaults: dict) -> _Parser:
    parser = _Parser(prog="reludist")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    def sub(name, **kwargs):
        sp = subs.add_parser(name, **kwargs)
        return sp

    sp = sub("psi", help="evaluate the distortion function psi(theta)")
    sp.add_argument("--theta", type=float)
    _add_common(sp, out=False)

    sp = sub("expect", help="closed-form expected squared output distance")
    sp.add_argument("--theta", type=float)
    sp.add_argument("--claim", choices=["corrected", "original", "both"], default="both")
    sp.add_argument("--norm-x", type=float, default=1.0)
    sp.add_argument("--norm-y", type=float, default=1.0)
    _add_common(sp, out=False)

    for name, desc in [
        ("mc", "Monte Carlo squared output distance for a planar unit pair"),
        ("angle", "Monte Carlo output cosine vs the angle-map prediction"),
    ]:
        sp = sub(name, help=desc)
        sp.add_argument("--theta", type=float)
        sp.add_argument("--n", type=int, default=64)
        sp.add_argument("--m", type=int, default=1024)
        sp.add_argument("--trials", type=int, default=400)
        sp.add_argument("--seed", type=int, default=0)
        _add_common(sp)

    sp = sub("refute", help="statistically discriminate corrected vs original claim")
    sp.add_argument("--theta", type=float)
    sp.add_argument("--n", type=int, default=64)
    sp.add_argument("--m", type=int, default=1024)
    sp.add_argument("--trials", type=int, default=400)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--norm-x", type=float, default=1.0)
    sp.add_argument("--norm-y", type=float, default=1.0)
    sp.add_argument("--z-accept", type=float, default=4.0)
    sp.add_argument("--z-reject", type=float, default=10.0)
    _add_common(sp)

    sp = sub("theta-sweep", help="empirical vs analytic distance over an angle grid")
    sp.add_argument("--grid", type=int, default=181)
    sp.add_argument("--n", type=int, default=64)
    sp.add_argument("--m", type=int, default=1024)
    sp.add_argument("--trials", type=int, default=400)
    sp.add_argument("--seed", type=int, default=0)
    _add_common(sp)

    sp = sub("concentration", help="deviation from the corrected value vs layer width")
    sp.add_argument("--m-list", help="comma-separated strictly increasing widths")
    sp.add_argument("--theta", type=float, default=math.pi / 2)
    sp.add_argument("--n", type=int, default=64)
    sp.add_argument("--trials", type=int, default=400)
    sp.add_argument("--seed", type=int, default=0)
    _add_common(sp)

    sp = sub("separate", help="synthetic class-separation experiment")
    sp.add_argument("--n", type=int, default=64)
    sp.add_argument("--classes", type=int, default=2)
    sp.add_argument("--points-per-class", type=int, default=20)
    sp.add_argument("--intra-angle-max", type=float)
    sp.add_argument("--inter-angle-min", type=float)
    sp.add_argument("--m", type=int, default=1024)
    sp.add_argument("--layers", type=int, default=1)
    sp.add_argument("--trials", type=int, default=400)
    sp.add_argument("--seed", type=int, default=0)
    _add_common(sp)

    sp = sub("depth", help="output cosine vs depth against the iterated angle map")
    sp.add_argument("--theta", type=float)
    sp.add_argument("--n", type=int, default=64)
    sp.add_argument("--m", type=int, default=1024)
    sp.add_argument("--layers", type=int, default=5)
    sp.add_argument("--trials", type=int, default=400)
    sp.add_argument("--seed", type=int, default=0)
    _add_common(sp)

    sp = sub("meanwidth", help="Gaussian mean width of a finite point set")
    sp.add_argument("--n", type=int, default=64)
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--points", help="JSON file with a list of vectors (default: {e1, e2})")
    _add_common(sp)

    sub("selftest", help="run the full acceptance suite")

    if config_defaults:
        for action in subs.choices.values():
            dests = {a.dest for a in action._actions}
            action.set_defaults(**{k: v for k, v in config_defaults.items() if k in dests})
    return parser


def _load_config_defaults(argv: list[str]) -> dict:
    for i, tok in enumerate(argv):
        if tok == "--config":
            if i + 1 >= len(argv):
                raise UsageError("--config expects a path")
            path = argv[i + 1]
            break
        if tok.startswith("--config="):
            path = tok.split("=", 1)[1]
            break
    else:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"--config: cannot read {path}: {exc}")
    if not isinstance(data, dict):
        raise UsageError("--config: expected a JSON object")
    return data


def _theta(args) -> float:
    if args.theta is None:
        raise UsageError("--theta is required")
    t = float(args.theta)
    return math.radians(t) if args.deg else t


def _emit(args, report: ReportDocument, csv_records=None) -> None:
    fmt = args.format or "csv"
    if fmt == "json":
        text = emit_json(report)
    else:
        text = emit_csv(report.records if csv_records is None else csv_records)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _run_config(args, **overrides) -> RunConfig:
    fields = {f for f in RunConfig.__dataclass_fields__}
    merged = {k: v for k, v in vars(args).items() if k in fields and v is not None}
    merged.update({k: v for k, v in overrides.items() if v is not None})
    merged["subcommand"] = args.subcommand
    return RunConfig(**merged)


def _cmd_psi(args) -> int:
    print(format_float(psi_of_angle(_theta(args))))
    return 0


def _cmd_expect(args) -> int:
    geom = pair_geometry_from_angle(_theta(args), args.norm_x, args.norm_y)
    if args.claim in ("corrected", "both"):
        print("corrected", format_float(expected_sq_dist(geom, Variant.CORRECTED).value))
    if args.claim in ("original", "both"):
        print("original", format_float(expected_sq_dist(geom, Variant.ORIGINAL_CLAIM).value))
    return 0


def _cmd_mc(args) -> int:
    theta = _theta(args)
    x, y = planar_pair(theta, args.n)
    est = mc_sq_dist(x, y, args.m, args.trials, args.seed)
    record = _distance_record(theta, args.m, est)
    _emit(args, ReportDocument(config=_run_config(args, theta=theta), records=[record]))
    return 0


def _cmd_angle(args) -> int:
    theta = _theta(args)
    x, y = planar_pair(theta, args.n)
    est, _excluded = mc_output_cos(x, y, args.m, args.trials, args.seed)
    record = SweepRecord(
        kind="angle", theta=theta, m=args.m, trials=est.trials, layer_count=1,
        mc_mean=est.mean, mc_stderr=est.stderr, predicted_cos=expected_output_cos(theta),
    )
    _emit(args, ReportDocument(config=_run_config(args, theta=theta), records=[record]))
    return 0


def _cmd_refute(args) -> int:
    theta = _theta(args)
    x, y = planar_pair(theta, args.n)
    x *= args.norm_x
    y *= args.norm_y
    verdict, est = refutation_test(
        x, y, args.m, args.trials, args.seed,
        z_accept=args.z_accept, z_reject=args.z_reject,
    )
    geom = pair_geometry_from_angle(theta, args.norm_x, args.norm_y)
    record = {
        "theta": theta,
        "m": args.m,
        "trials": est.trials,
        "mc_mean": est.mean,
        "mc_stderr": est.stderr,
        "analytic_corrected": expected_sq_dist(geom, Variant.CORRECTED).value,
        "analytic_original": expected_sq_dist(geom, Variant.ORIGINAL_CLAIM).value,
        "z_corrected": verdict.z_corrected,
        "z_original": verdict.z_original,
        "verdict": verdict.verdict.value,
    }
    if args.format is None:
        args.format = "json"
    _emit(args, ReportDocument(
        config=_run_config(args, theta=theta),
        records=[record],
        verdict=verdict.verdict.value,
    ))
    return 0 if verdict.verdict is VerdictKind.SUPPORTS_CORRECTED else 3


def _cmd_theta_sweep(args) -> int:
    if args.grid < 1:
        raise UsageError("--grid must be >= 1")
    grid = np.linspace(0.0, math.pi, args.grid)
    records = theta_sweep(grid, args.m, args.trials, args.seed, n=args.n)
    _emit(args, ReportDocument(config=_run_config(args), records=records))
    return 0


def _cmd_concentration(args) -> int:
    if not args.m_list:
        raise UsageError("--m-list is required")
    try:
        m_list = [int(v) for v in str(args.m_list).split(",")]
    except ValueError:
        raise UsageError(f"--m-list: cannot parse {args.m_list!r}")
    theta = _theta(args) if args.theta is not None else math.pi / 2
    records = concentration_sweep(m_list, theta, args.trials, args.seed, n=args.n)
    slope = fit_loglog_slope(records)
    if slope is not None:
        print(f"loglog_slope {format_float(slope)}", file=sys.stderr)
    else:
        print("loglog_slope absent", file=sys.stderr)
    _emit(args, ReportDocument(
        config=_run_config(args, theta=theta, m_list=m_list), records=records,
    ))
    return 0


def _cmd_separate(args) -> int:
    if args.intra_angle_max is None or args.inter_angle_min is None:
        raise UsageError("--intra-angle-max and --inter-angle-min are required")
    intra = math.radians(args.intra_angle_max) if args.deg else args.intra_angle_max
    inter = math.radians(args.inter_angle_min) if args.deg else args.inter_angle_min
    config = ClassConfig(
        ambient_dim=args.n, classes=args.classes,
        points_per_class=args.points_per_class,
        intra_angle_max=intra, inter_angle_min=inter, master_seed=args.seed,
    )
    report = separation_experiment(config, args.m, args.layers, args.trials, args.seed)
    _emit(args, ReportDocument(
        config=_run_config(args, intra_angle_max=intra, inter_angle_min=inter),
        records=[report],
    ))
    return 0


def _cmd_depth(args) -> int:
    theta = _theta(args)
    records = depth_sweep(theta, [args.m], args.layers, args.trials, args.seed, n=args.n)
    _emit(args, ReportDocument(config=_run_config(args, theta=theta), records=records))
    return 0


def _cmd_meanwidth(args) -> int:
    if args.points:
        try:
            with open(args.points) as fh:
                pts = np.asarray(json.load(fh), dtype=np.float64)
        except (OSError, json.JSONDecodeError, ValueError) as exc:
            raise UsageError(f"--points: cannot read {args.points}: {exc}")
    else:
        pts = np.eye(args.n)[:2]
    est = mean_width_estimate(pts, args.samples, args.seed)
    record = {
        "points": pts.shape[0],
        "samples": est.trials,
        "mean": est.mean,
        "stderr": est.stderr,
    }
    if args.format is None:
        args.format = "json"
    _emit(args, ReportDocument(config=_run_config(args), records=[record]))
    return 0


def _cmd_selftest(args) -> int:
    from . import acceptance

    results = acceptance.run_all(verbose=True)
    return 0 if all(r.passed for r in results) else 2


_COMMANDS = {
    "psi": _cmd_psi,
    "expect": _cmd_expect,
    "mc": _cmd_mc,
    "angle": _cmd_angle,
    "refute": _cmd_refute,
    "theta-sweep": _cmd_theta_sweep,
    "concentration": _cmd_concentration,
    "separate": _cmd_separate,
    "depth": _cmd_depth,
    "meanwidth": _cmd_meanwidth,
    "selftest": _cmd_selftest,
}


def run(argv: list[str]) -> int:
    """Execute one CLI invocation; returns the process exit code."""
    try:
        defaults = _load_config_defaults(argv)
        parser = _build_parser(defaults)
        args = parser.parse_args(argv)
        return _COMMANDS[args.subcommand](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DomainError, DimensionMismatch, ZeroVector, TooFewPoints) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ReludistError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
