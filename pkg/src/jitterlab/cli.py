"""
Command Line Interface

jitterlab <experiment> --config <path> [--seed N] [--trials N] [--out <path>]
          [--paper-scale] [--emit-plotdata <path>] [--workers N] [--log-level LEVEL]
"""

import argparse
import json
import sys
from typing import List, Optional

from .errors import ConfigError
from .harness.config import Experiment, ExperimentConfig
from .harness.runner import ExperimentRunner


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jitterlab",
        description="Signal estimation from jittered samples: simulation experiments",
    )
    parser.add_argument("experiment", choices=[e.value for e in Experiment])
    parser.add_argument("--config", "-c", required=True, help="Path to a YAML experiment config")
    parser.add_argument("--seed", type=int, help="Override the configured seed")
    parser.add_argument("--trials", type=int, help="Override the number of trials")
    parser.add_argument("--out", "-o", help="Output CSV path")
    parser.add_argument("--paper-scale", "--full-scale", dest="full_scale", action="store_true",
                        help="1000 trials, 100 chains and 100000 likelihood draws")
    parser.add_argument("--emit-plotdata", metavar="PATH", help="Write per-sweep-point MSE tables")
    parser.add_argument("--workers", "-w", type=int, help="Worker processes")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    return parser


def _error_line(error: BaseException) -> str:
    return json.dumps({"error": type(error).__name__, "message": str(error)})


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    args = build_parser().parse_args(argv)

    try:
        config = ExperimentConfig.from_yaml(
            args.config,
            experiment=args.experiment,
            seed=args.seed,
            output=args.out,
            emit_plotdata=args.emit_plotdata,
            workers=args.workers,
            log_level=args.log_level,
        )
        if args.full_scale:
            config = config.with_full_scale()
        if args.trials is not None:
            config = config.with_overrides(trials=args.trials)
        summary = ExperimentRunner(config).run()
    except ConfigError as e:
        print(_error_line(e), file=sys.stderr)
        return 2
    except Exception as e:  # noqa: BLE001
        print(_error_line(e), file=sys.stderr)
        return 1

    print(json.dumps(summary.to_dict(), indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
