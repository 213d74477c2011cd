import argparse
import logging
import sys
from typing import List

from sturmlab._version import __version__
from sturmlab.approximation import DEFAULT_CUTOFF_Q
from sturmlab.exceptions import PrecisionError, SpecError, SturmlabError
from sturmlab.experiments import (
    DEFAULT_N_MAX,
    DEFAULT_N_TAIL,
    DEFAULT_PREFIX_LENGTH,
    DEFAULT_ZMAX,
    cmd_cf_analysis,
    cmd_complexity,
    cmd_dependent_bases,
    cmd_sunit,
)
from sturmlab.specs import DEFAULT_REBASE_GUARD, FibonacciSpec, NumberSpec, from_json


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PRECISION = 2
EXIT_SPEC = 3

logger = logging.getLogger("sturmlab.cli")


def _add_number_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--spec", default=None,
                        help="JSON number spec (default: the binary Fibonacci-word number)")
    parser.add_argument("--prefix", "-L", type=int, default=DEFAULT_PREFIX_LENGTH,
                        help="number of native digits to use")
    parser.add_argument("--seed", type=int, default=None, help="seed for random number specs")
    parser.add_argument("--guard", type=int, default=DEFAULT_REBASE_GUARD,
                        help="digits given up when converting to another base")


def _add_output_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    parser.add_argument("--out", default=None, help="output file (default: stdout)")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sturmlab",
        description="Block complexity, continued fractions and S-unit searches for digit-defined reals.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    complexity = commands.add_parser("complexity", help="p(n), r(n) and D(n) tables in one or more bases")
    _add_number_arguments(complexity)
    complexity.add_argument("--bases", type=int, nargs="+", default=[2])
    complexity.add_argument("--nmax", type=int, default=DEFAULT_N_MAX)
    complexity.add_argument("--include-uncertified", action="store_true",
                            help="keep rows beyond the certified range (flagged)")
    _add_output_arguments(complexity)

    dependent = commands.add_parser("dependent", help="D(n) against m + l for bases with r^m = s^l")
    _add_number_arguments(dependent)
    dependent.add_argument("--bases", type=int, nargs=2, metavar=("R", "S"), required=True)
    dependent.add_argument("--nmax", type=int, default=DEFAULT_N_MAX)
    dependent.add_argument("--ntail", type=int, default=DEFAULT_N_TAIL)
    dependent.add_argument("--include-uncertified", action="store_true")
    _add_output_arguments(dependent)

    cf = commands.add_parser("cf", help="continued fraction and convergent shape analysis in one base")
    _add_number_arguments(cf)
    cf.add_argument("--base", "-b", type=int, default=2)
    cf.add_argument("--cutoff-q", type=int, default=DEFAULT_CUTOFF_Q,
                    help="smallest q for which a missing shape counts as a violation")
    cf.add_argument("--s-max", type=int, default=None)
    _add_output_arguments(cf)

    sunit = commands.add_parser("sunit", help="bounded search of the S-unit equation")
    sunit.add_argument("--m1", type=int, default=1)
    sunit.add_argument("--m2", type=int, default=1)
    sunit.add_argument("--r", type=int, default=2)
    sunit.add_argument("--s", type=int, default=3)
    sunit.add_argument("--zmax", type=int, default=DEFAULT_ZMAX)
    _add_output_arguments(sunit)
    return parser


def _load_spec(args: argparse.Namespace) -> NumberSpec:
    if args.spec is None:
        return FibonacciSpec()
    return from_json(args.spec, seed=args.seed)


def _configure_logging(verbosity: int):
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(asctime)s %(name)s %(levelname)s %(message)s")


def run(args: argparse.Namespace):
    if args.command == "complexity":
        return cmd_complexity(_load_spec(args), args.bases, n_max=args.nmax, L=args.prefix,
                              include_uncertified=args.include_uncertified, guard=args.guard)
    if args.command == "dependent":
        r, s = args.bases
        return cmd_dependent_bases(_load_spec(args), r, s, n_max=args.nmax, L=args.prefix, n_tail=args.ntail,
                                   include_uncertified=args.include_uncertified, guard=args.guard)
    if args.command == "cf":
        return cmd_cf_analysis(_load_spec(args), args.base, L=args.prefix, cutoff_q=args.cutoff_q,
                               s_max=args.s_max, guard=args.guard)
    return cmd_sunit(args.m1, args.m2, args.r, args.s, zmax=args.zmax)


def main(argv: List[str] = None) -> int:
    """
    Entry point of the sturmlab command. Exit codes: 0 success, 1 usage error,
    2 not enough precision, 3 invalid number spec.
    """
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse exits with 2 on bad arguments, which is the precision code here
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    _configure_logging(args.verbose)
    try:
        report = run(args)
    except PrecisionError as e:
        logger.error(f"precision failure: {e}")
        return EXIT_PRECISION
    except SpecError as e:
        logger.error(f"invalid spec: {e}")
        return EXIT_SPEC
    except (SturmlabError, ValueError, TypeError) as e:
        logger.error(str(e))
        return EXIT_USAGE

    if args.out:
        report.write(args.out, args.format)
    else:
        sys.stdout.write(report.render(args.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
