"""Command-line entry point: ``salpeter-lab run --config FILE`` and ``salpeter-lab verify``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import AccuracyError, DomainTooSmallError, InvalidArgumentError
from .experiment import ConfigError, ExperimentConfig, parse_config, run

log = logging.getLogger("salpeter_lab")

EXIT_OK, EXIT_ASSERTION, EXIT_CONFIG, EXIT_ACCURACY = 0, 1, 2, 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="salpeter-lab",
        description="Cross-validated evolution of the free 1D Salpeter equation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run the experiment described by a config file")
    p_run.add_argument("--config", required=True, type=Path, help="flat key = value config file")
    p_run.add_argument("--out", type=Path, help="output directory (overrides output_dir)")
    p_verify = sub.add_parser("verify", help="run every suite with the default configuration")
    p_verify.add_argument("--out", type=Path, help="output directory")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "run":
            config = parse_config(args.config.read_text())
        else:
            config = ExperimentConfig(mode="verify-all")
        result = run(config, args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AccuracyError as exc:
        print(f"accuracy failure: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except (ConfigError, InvalidArgumentError, DomainTooSmallError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    width = max(len(a.name) for a in result.assertions) if result.assertions else 0
    for a in result.assertions:
        status = "pass" if a.passed else "FAIL"
        print(f"{status}  {a.name:<{width}}  {a.achieved:.3e} {a.relation} {a.tolerance:.3e}")
    failed = [a for a in result.assertions if not a.passed]
    if failed:
        print(f"{len(failed)} of {len(result.assertions)} assertions failed", file=sys.stderr)
        return EXIT_ASSERTION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
