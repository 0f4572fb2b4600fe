"""Command-line front end: ``python cli.py <command> --curve FILE ...``."""
import argparse
import logging
import sys
import time

from codec import dumps, run_report
from commands import bound, enumerate as enumerate_cmd, height, invariants, mu, pairing, selftest
from data_processing import render
from errors import (BadReduction, InputError, InvalidPoint, KummerHeightError, NoConvergence,
                    NonIntegralModel, NotOnKummer, PrecisionExhausted, RangeError,
                    RootIsolationFailure, UnsupportedTransformation, ValidationFailure)
from settings import get_settings, override_settings

logger = logging.getLogger(__name__)

COMMANDS = (height, mu, bound, invariants, pairing, enumerate_cmd, selftest)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INTERNAL = 2

EXIT_CODES = {
    InputError: EXIT_INPUT,
    InvalidPoint: EXIT_INPUT,
    NotOnKummer: EXIT_INPUT,
    NonIntegralModel: EXIT_INPUT,
    BadReduction: EXIT_INPUT,
    RangeError: EXIT_INPUT,
    UnsupportedTransformation: EXIT_INPUT,
    ValidationFailure: EXIT_INTERNAL,
    PrecisionExhausted: EXIT_INTERNAL,
    NoConvergence: EXIT_INTERNAL,
    RootIsolationFailure: EXIT_INTERNAL,
}


def exit_code_for(exc):
    for cls in type(exc).__mro__:
        if cls in EXIT_CODES:
            return EXIT_CODES[cls]
    return EXIT_INTERNAL


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, default=None, metavar="DIGITS",
                        help="working precision in decimal digits (default from config.toml)")
    common.add_argument("--json", action="store_true", help="print a JSON run report")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--jobs", type=int, default=None)
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="kummer-heights",
                                     description="Canonical heights on Jacobians of genus-2 curves.")
    sub = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        p = sub.add_parser(command.NAME, help=command.HELP, parents=[common])
        if command is not selftest:
            p.add_argument("--curve", required=True, help="curve JSON")
        command.add_arguments(p)
        p.set_defaults(handler=command)
    return parser


def _log_level(verbose):
    if verbose >= 2:
        return logging.DEBUG
    if verbose == 1:
        return logging.INFO
    return getattr(logging, get_settings().log_level, logging.WARNING)


def _inputs(args):
    skip = {"handler", "json", "verbose"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.prec is not None and args.prec < 5:
        parser.error("--prec must be at least 5")
    override_settings(default_digits=args.prec, seed=args.seed, jobs=args.jobs)
    logging.basicConfig(level=_log_level(args.verbose),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    cfg = get_settings()
    start = time.monotonic()
    try:
        if args.handler is not selftest:
            selftest.exact_gate(cfg.gate_samples, cfg.seed)
        outcome = args.handler.run(args)
    except KummerHeightError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return exit_code_for(exc)
    except OSError as exc:
        logger.error("cannot read input: %s", exc)
        return EXIT_INPUT
    elapsed = round(time.monotonic() - start, 3)
    if args.json:
        inputs = _inputs(args)
        inputs.update(outcome.inputs)
        report = run_report(args.command, inputs, outcome.results, outcome.warnings,
                            digits=cfg.default_digits, seed=cfg.seed, timing=elapsed)
        print(dumps(report))
    else:
        for title, frame in outcome.tables:
            print(f"== {title} ==")
            print(render(frame))
            print()
        for msg in outcome.warnings:
            print(f"warning: {msg}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
