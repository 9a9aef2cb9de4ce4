"""Command line entry point.

    hotgate presets
    hotgate run <config>
    hotgate run --preset <name> [--out DIR] [--seed N] [--set key=value ...]
"""
import argparse
import sys
from collections.abc import Sequence
from typing import Optional

import numpy as np
from wasabi import msg

from hotgate.about import __version__
from hotgate.cli.config import apply_overrides, load_config
from hotgate.cli.exit_codes import EXIT_OK, exit_on_exception
from hotgate.cli.presets import list_presets, load_preset
from hotgate.cli.scenarios import CurveRecord, run_scenario
from hotgate.cli.writer import write_record
from hotgate.errors import ConfigError

DEFAULT_OUT = "results"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hotgate", description="Logical ZZ gate fidelity curves.")
    parser.add_argument("--version", action="version", version=f"hotgate {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("presets", help="list the named presets")

    run = commands.add_parser("run", help="compute a curve from a config file or preset")
    run.add_argument("config", nargs="?", help="run configuration file")
    run.add_argument("--preset", help="name of a preset instead of a config file")
    run.add_argument("--out", help=f"output directory (default: {DEFAULT_OUT})")
    run.add_argument("--seed", type=int, help="override the seed")
    run.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    run.add_argument("--no-progress", action="store_true", help="hide progress bars")
    return parser


@exit_on_exception
def run_command(args: argparse.Namespace) -> int:
    if (args.config is None) == (args.preset is None):
        raise ConfigError("give exactly one of a config file or --preset", key="config")
    config = load_config(args.config) if args.config else load_preset(args.preset)
    apply_overrides(config, args.overrides)
    if args.seed is not None:
        config.seed = args.seed
    out = args.out or config.out or DEFAULT_OUT

    record = run_scenario(config, progress=not args.no_progress)
    name = config.preset or config.scenario
    write_record(record, out, name)

    if isinstance(record, CurveRecord):
        frame = record.to_frame()
        best = int(np.argmin(frame["infidelity_optimized"]))
        msg.good(
            f"{name}: best optimized infidelity {frame['infidelity_optimized'][best]:.3e} "
            f"at Δt = {frame['delta_t'][best]:.4g}",
        )
    else:
        msg.good(f"{name}: max echo residual {record.max_residual:.3e}")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "presets":
        list_presets()
        return EXIT_OK
    return run_command(args)


if __name__ == "__main__":
    sys.exit(main())
