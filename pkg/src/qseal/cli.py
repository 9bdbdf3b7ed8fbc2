"""Command-line front end.

    qseal verify
    qseal sweep --n 4,8,16 --theta 0.3927 --alpha 0.25 --nu 0.5 --trials 100000 --seed 42 --out run.csv
    qseal scaling --n 4,8,16,32,64 --theta-deg 22.5
    qseal channel --n 3 --nu 0.5
    qseal attack --n 8 --nu 0,0.5,1 --message 5 --trials 100000
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass

from . import checks
from .harness import ExperimentConfig, run_experiment, scaling_table
from .infometrics import channel_matrix
from .report import atomic_output, emit_report, format_value, load_dense_scheme
from .seal import canonical_amplitudes, make_params

SUBCOMMANDS = ("verify", "channel", "attack", "sweep", "scaling")


@dataclass(frozen=True)
class CliInvocation:
    subcommand: str
    config: ExperimentConfig
    message: int = 0


def _int_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list of integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _float_list(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list of numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _messages(text):
    if text == "all":
        return "all"
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'all' or a count, got {text!r}")
    if k < 1:
        raise argparse.ArgumentTypeError("message count must be positive")
    return k


def _scheme(text):
    if text == "canonical":
        return None
    if text.startswith("dense:") and len(text) > 6:
        return text[6:]
    raise argparse.ArgumentTypeError(f"expected 'canonical' or 'dense:PATH', got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=_int_list, default=[4], help="comma list of string lengths")
    angle = common.add_mutually_exclusive_group()
    angle.add_argument("--theta", type=float, help="Theta in radians (default pi/8)")
    angle.add_argument("--theta-deg", type=float, help="Theta in degrees")
    common.add_argument("--alpha", type=float, default=0.25)
    common.add_argument("--nu", type=_float_list, default=[0.5], help="comma list of attack strengths")
    common.add_argument("--trials", type=int, default=0)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--messages", type=_messages, default=64, help="'all' or a sample size")
    common.add_argument("--message", type=int, default=0, help="sealed message for 'attack'")
    common.add_argument("--scheme", type=_scheme, default=None, metavar="{canonical|dense:PATH}")
    common.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    common.add_argument("--out", default=None, metavar="PATH")
    common.add_argument("--workers", type=int, default=1)

    parser = argparse.ArgumentParser(prog="qseal", description="Imperfect quantum string seal toolkit.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    helps = {
        "verify": "run the invariant suite and print a pass/fail table",
        "channel": "print one decode channel matrix",
        "attack": "attack report for a single sealed message",
        "sweep": "full (n, nu, message) grid",
        "scaling": "p_max scaling table",
    }
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def parse_args(argv=None) -> CliInvocation:
    """Parse and validate ``argv``; usage errors exit with status 2."""
    parser = build_parser()
    ns = parser.parse_args(argv)

    def fail(msg):
        parser.error(msg)

    if ns.theta_deg is not None:
        Theta = math.radians(ns.theta_deg)
    elif ns.theta is not None:
        Theta = ns.theta
    else:
        Theta = math.pi / 8
    if not 0.0 < Theta < math.pi / 4:
        fail(f"argument --theta: Theta must lie in (0, pi/4), got {Theta!r}")
    if not 0.0 < ns.alpha < 0.5:
        fail(f"argument --alpha: alpha must lie in (0, 1/2), got {ns.alpha!r}")
    for nu in ns.nu:
        if not 0.0 <= nu <= 1.0:
            fail(f"argument --nu: nu must lie in [0, 1], got {nu!r}")
    for n in ns.n:
        if n < 1:
            fail(f"argument --n: n must be a positive integer, got {n}")
    if ns.trials < 0:
        fail("argument --trials: trials must be non-negative")
    if ns.trials and ns.trials < 100:
        fail("argument --trials: Monte Carlo needs at least 100 trials")
    if not 0 <= ns.seed < 2**64:
        fail("argument --seed: seed must be a 64-bit unsigned integer")
    if ns.workers < 1:
        fail("argument --workers: must be at least 1")
    if ns.subcommand in ("channel", "attack") and ns.scheme is None and len(ns.n) != 1:
        fail(f"argument --n: '{ns.subcommand}' takes a single n")
    if ns.subcommand == "channel" and len(ns.nu) != 1:
        fail("argument --nu: 'channel' takes a single nu")
    if ns.message < 0:
        fail("argument --message: must be non-negative")

    messages = [ns.message] if ns.subcommand == "attack" else ns.messages
    try:
        config = _config(ns, Theta, messages)
    except ValueError as exc:
        fail(str(exc))
    return CliInvocation(ns.subcommand, config, ns.message)


def _config(ns, Theta, messages):
    return ExperimentConfig(
        n_values=tuple(ns.n),
        Theta=Theta,
        alpha=ns.alpha,
        dense_path=ns.scheme,
        nu_grid=tuple(ns.nu),
        trials=ns.trials,
        seed=ns.seed,
        messages=messages,
        out_path=ns.out,
        fmt=ns.format,
        workers=ns.workers,
    )


def _output(config, write):
    if config.out_path is not None:
        with atomic_output(config.out_path) as fh:
            write(fh)
    else:
        write(sys.stdout)


def _channel(inv: CliInvocation):
    config = inv.config
    if config.dense_path is not None:
        amps = load_dense_scheme(config.dense_path)
    else:
        amps = canonical_amplitudes(make_params(config.n_values[0], config.Theta, config.alpha))
    ch = channel_matrix(amps, config.nu_grid[0])

    def write(fh):
        if config.fmt == "csv":
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["message"] + [str(i) for i in range(ch.N)])
            for i, row in enumerate(ch.rows):
                writer.writerow([i] + [format_value(v) for v in row])
        else:
            for i, row in enumerate(ch.rows):
                record = {"message": i, "nu": ch.nu, "row": [float(format_value(v)) for v in row]}
                fh.write(json.dumps(record) + "\n")

    _output(config, write)


def _verify(inv: CliInvocation) -> int:
    results = checks.run_all()
    width = max(len(r.name) for r in results)

    def write(fh):
        for r in results:
            fh.write(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.detail}\n")
        failed = sum(not r.passed for r in results)
        fh.write(f"{len(results) - failed}/{len(results)} checks passed\n")

    _output(inv.config, write)
    return 0 if all(r.passed for r in results) else 1


def run(inv: CliInvocation) -> int:
    config = inv.config
    if inv.subcommand == "verify":
        return _verify(inv)
    if inv.subcommand == "channel":
        _channel(inv)
    elif inv.subcommand == "scaling":
        rows = scaling_table(config.Theta, config.alpha, config.n_values)
        if config.out_path is not None:
            emit_report(rows, config.fmt, path=config.out_path)
        else:
            emit_report(rows, config.fmt, stream=sys.stdout)
    else:
        rows = run_experiment(config)
        if config.out_path is None:
            emit_report(rows, config.fmt, stream=sys.stdout)
    return 0


def main(argv=None) -> int:
    inv = parse_args(argv)
    try:
        return run(inv)
    except (ValueError, IndexError, OSError, ArithmeticError) as exc:
        print(f"qseal: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
