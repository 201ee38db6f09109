# cli.py

import sys
import math
import logging
import argparse
from pathlib import Path
from typing import Sequence

from mpmath import mp, mpf

from sinkhornpoly.errors import (
    ConjectureFalsifiedError, ConvergenceError, DegenerateInputError,
    DimensionError, DomainError, GenerationError, InconsistentTargetsError,
    InsufficientPrecisionError, NeedsMoreDataError, UnsupportedAmbientError,
    WorkLimitError, CorruptRecordError
)
from sinkhornpoly.exact_linalg import ExactMatrix
from sinkhornpoly.minors import basis_size, swap_to_entry
from sinkhornpoly.symmetry import enumerate_classes
from sinkhornpoly.scaling import KruithofTargets, PreciseValue, certified, format_decimal
from sinkhornpoly.recognition import (
    RecognitionFailure, default_precision, minimal_polynomial
)
from sinkhornpoly.tables import (
    TABLES_PATH, builtin_table, degenerate_3x3, install_table, polynomial_for,
    verify_polynomial
)
from sinkhornpoly.config import RunConfig, DEFAULT_DATA_DIR
from sinkhornpoly.pipeline.data import matrix_rng, random_matrix
from sinkhornpoly.pipeline.campaign import Campaign

__all__ = [
    "EXIT_OK",
    "EXIT_PRECONDITION",
    "EXIT_FAILURE",
    "EXIT_FALSIFIED",
    "exit_code",
    "build_parser",
    "main"
]

_logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_FAILURE = 3
EXIT_FALSIFIED = 4

DEFAULT_LIMIT_PRECISION = 256

PRECONDITION_ERRORS = (
    DimensionError, DegenerateInputError, DomainError, UnsupportedAmbientError,
    InconsistentTargetsError, NeedsMoreDataError, GenerationError,
    WorkLimitError, CorruptRecordError, OSError
)
FAILURE_ERRORS = (ConvergenceError, InsufficientPrecisionError)

def exit_code(error: Exception) -> int:
    """
    Returns the exit status of a command that raised an error.

    :param error: The error.

    :return: 4 for falsification, 3 for numeric failures, 2 for bad input.
    """

    if isinstance(error, ConjectureFalsifiedError):
        return EXIT_FALSIFIED

    if isinstance(error, FAILURE_ERRORS):
        return EXIT_FAILURE

    if isinstance(error, PRECONDITION_ERRORS):
        return EXIT_PRECONDITION

    raise error

def _read_matrix(path: str) -> ExactMatrix:

    return ExactMatrix.parse(Path(path).read_text())

def cmd_limit(args: argparse.Namespace) -> int:
    """
    Prints the scaling limit of a matrix with its certified digits.

    :param args: The parsed arguments.

    :return: The exit status.
    """

    matrix = _read_matrix(args.matrix)
    precision = args.precision or DEFAULT_LIMIT_PRECISION
    targets = None

    if args.kruithof:
        rows, columns = (Path(path).read_text() for path in args.kruithof)
        targets = KruithofTargets.parse(rows, columns)

    result = certified(matrix, precision, targets=targets)
    digits = max(1, result.certified_digits)

    for i in range(matrix.rows):
        print(
            " ".join(
                format_decimal(result.limit[i, j], digits) for j in range(matrix.cols)
            )
        )

    print(f"iterations: {result.iterations}")
    print(f"residual: {mp.nstr(result.residual.value, 5)}")
    print(f"certified digits: {result.certified_digits}")

    return EXIT_OK

def cmd_poly(args: argparse.Namespace) -> int:
    """
    Prints the exact polynomial of one limit entry of a matrix.

    :param args: The parsed arguments.

    :return: The exit status.
    """

    matrix = _read_matrix(args.matrix)

    if args.entry:
        matrix = swap_to_entry(matrix, *args.entry)

    if matrix.shape == (3, 3):
        try:
            poly = degenerate_3x3(matrix)

        except DegenerateInputError:
            poly = None

        if poly is not None:
            print("rows 2 and 3 are proportional, the polynomial is the cubic:")
            print(poly.primitive)

            return EXIT_OK

    try:
        table = builtin_table(*matrix.shape, directories=[args.data_dir])

    except UnsupportedAmbientError as e:
        print(e, file=sys.stderr)

        return EXIT_PRECONDITION

    poly = polynomial_for(matrix, table)

    if poly.degenerate:
        print("the table polynomial vanishes identically for this matrix", file=sys.stderr)

        return EXIT_PRECONDITION

    print(poly.primitive)

    if args.exact:
        print(poly.exact)

    return EXIT_OK

def cmd_recognize(args: argparse.Namespace) -> int:
    """
    Prints the minimal polynomial of a decimal number read from a file.

    :param args: The parsed arguments.

    :return: The exit status.
    """

    text = Path(args.file).read_text().strip()
    digits = sum(character.isdigit() for character in text)
    precision = args.precision or max(64, math.ceil(digits * math.log2(10)))

    with mp.workprec(precision):
        try:
            value = mpf(text)

        except ValueError as e:
            raise DomainError(f"Invalid decimal number in {args.file}.") from e

    result = minimal_polynomial(PreciseValue(value=value, precision=precision), args.degree)

    if isinstance(result, RecognitionFailure):
        print(result, file=sys.stderr)

        return EXIT_FAILURE

    print(result.poly)

    if result.reduced:
        print(f"degree {result.degree} is below the target {result.target}")

    if not result.stable:
        print("the polynomial is not stable")

    return EXIT_OK

def cmd_interpolate(args: argparse.Namespace) -> int:
    """
    Collects records for an ambient and solves its coefficient table.

    :param args: The parsed arguments.

    :return: The exit status.
    """

    config = RunConfig(
        m=args.m, n=args.n, precision=args.precision, seed=args.seed,
        data_dir=args.data_dir, workers=args.workers, count=args.count,
        harvest=args.harvest
    )

    if args.resume and config.config_path.exists():
        stored = RunConfig.read(config.config_path)
        stored.workers = args.workers
        stored.count = args.count or stored.count
        config = stored

    config.save()

    campaign = Campaign.resume(config) if args.resume else Campaign(config)

    campaign.collect(progress=not args.quiet)
    table = campaign.solve()

    print(f"{len(table)} coefficients for {config.m}x{config.n}, {len(table.pinning)} pinned to 0")
    print(f"table written to {config.table_path}")

    if args.install:
        print(f"table installed at {install_table(table, args.install)}")

    return EXIT_OK

def cmd_verify(args: argparse.Namespace) -> int:
    """
    Checks the table polynomial of random matrices against their computed limits.

    :param args: The parsed arguments.

    :return: The exit status.
    """

    table = builtin_table(args.m, args.n, directories=[args.data_dir])
    precision = args.precision or default_precision(basis_size(args.m, args.n))
    passed = 0
    worst = None

    for trial in range(args.trials):
        matrix = random_matrix(args.m, args.n, matrix_rng(args.seed, trial))
        check = verify_polynomial(matrix, table, precision)
        passed += check.passed

        if worst is None or check.residual.value > worst:
            worst = check.residual.value

    print(f"{passed}/{args.trials} pass")

    if worst is not None:
        print(f"largest residual: {mp.nstr(worst, 5)}")

    return EXIT_OK if passed == args.trials else EXIT_FALSIFIED

def cmd_classes(args: argparse.Namespace) -> int:
    """
    Prints the number of classes of subsets of one size.

    :param args: The parsed arguments.

    :return: The exit status.
    """

    classes = enumerate_classes(args.m, args.n, args.k)

    print(len(classes))

    if args.list:
        for rep in classes:
            print(rep.encode())

    return EXIT_OK

def build_parser() -> argparse.ArgumentParser:
    """
    Creates the command line parser.

    :return: The parser.
    """

    parser = argparse.ArgumentParser(
        prog="sinkhornpoly",
        description="Exact polynomials of Sinkhorn limit entries."
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("-q", "--quiet", action="store_true")

    commands = parser.add_subparsers(dest="command", required=True)

    limit = commands.add_parser("limit", help="compute a scaling limit")
    limit.add_argument("matrix")
    limit.add_argument("--precision", type=int)
    limit.add_argument("--kruithof", nargs=2, metavar=("V", "W"))
    limit.set_defaults(action=cmd_limit)

    poly = commands.add_parser("poly", help="print the exact polynomial of an entry")
    poly.add_argument("matrix")
    poly.add_argument("--entry", nargs=2, type=int, metavar=("I", "J"))
    poly.add_argument("--exact", action="store_true")
    poly.add_argument("--data-dir", default=DEFAULT_DATA_DIR)
    poly.set_defaults(action=cmd_poly)

    recognize = commands.add_parser("recognize", help="recognize a decimal number")
    recognize.add_argument("file")
    recognize.add_argument("--degree", type=int, required=True)
    recognize.add_argument("--precision", type=int)
    recognize.set_defaults(action=cmd_recognize)

    interpolate = commands.add_parser("interpolate", help="interpolate a coefficient table")
    interpolate.add_argument("m", type=int)
    interpolate.add_argument("n", type=int)
    interpolate.add_argument("--count", type=int)
    interpolate.add_argument("--resume", action="store_true")
    interpolate.add_argument("--seed", type=int, default=0)
    interpolate.add_argument("--workers", type=int, default=1)
    interpolate.add_argument("--data-dir", default=DEFAULT_DATA_DIR)
    interpolate.add_argument("--precision", type=int)
    interpolate.add_argument("--harvest", action="store_true")
    interpolate.add_argument("--install", nargs="?", const=str(TABLES_PATH), metavar="DIR")
    interpolate.set_defaults(action=cmd_interpolate)

    verify = commands.add_parser("verify", help="check a table on random matrices")
    verify.add_argument("m", type=int)
    verify.add_argument("n", type=int)
    verify.add_argument("--trials", type=int, default=10)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--precision", type=int)
    verify.add_argument("--data-dir", default=DEFAULT_DATA_DIR)
    verify.set_defaults(action=cmd_verify)

    classes = commands.add_parser("classes", help="count equivalence classes")
    classes.add_argument("m", type=int)
    classes.add_argument("n", type=int)
    classes.add_argument("k", type=int)
    classes.add_argument("--list", action="store_true")
    classes.set_defaults(action=cmd_classes)

    return parser

def main(argv: Sequence[str] = None) -> int:
    """
    Runs the command line.

    :param argv: The arguments, the process arguments by default.

    :return: The exit status.
    """

    args = build_parser().parse_args(argv)

    if args.quiet:
        level = logging.ERROR

    else:
        level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)

    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    try:
        return args.action(args)

    except Exception as e:
        code = exit_code(e)

        _logger.debug("Command failed.", exc_info=e)

        print(f"error: {e}", file=sys.stderr)

        return code
