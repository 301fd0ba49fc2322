"""
Command-line interface for the commutator equation toolkit.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from logging import Logger
from typing import TYPE_CHECKING, Any, NoReturn, override

from . import ladder, polyrec, two_eigen, variety_dims
from .equation import EquationInstance, residual
from .exceptions import CommutatorError, InputValidationError, RejectedInputError
from .polynomial import CUBIC, FactoredPoly, expand
from .rational import format_rational, to_rational
from .serialization import (
    dump_json,
    load_json,
    matrix_from_json,
    poly_from_json,
    rationals_from_json,
)
from .utils import setup_logging

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence

    from .matrix import RatMatrix

logger: Logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_REJECTED = 2


class _ArgumentParser(argparse.ArgumentParser):
    """Reports bad flags as InputValidationError instead of exiting with argparse's own code."""

    @override
    def error(self, message: str) -> NoReturn:
        raise InputValidationError(f"{self.prog}: {message}")


def _load_matrix(path: str) -> RatMatrix:
    return matrix_from_json(load_json(path))


def _load_factored(path: str) -> FactoredPoly:
    f = poly_from_json(load_json(path))
    if not isinstance(f, FactoredPoly):
        msg = f"{path}: f must be given in factored form {{'lead', 'roots'}}"
        raise InputValidationError(msg)
    return f


def _couple(text: str) -> tuple[int, int]:
    try:
        p, q = (int(part) for part in text.split(","))
    except ValueError as e:
        msg = f"Expected P,Q with positive integers, got {text!r}"
        raise argparse.ArgumentTypeError(msg) from e
    if p < 1 or q < 1:
        msg = f"Expected P,Q with positive integers, got {text!r}"
        raise argparse.ArgumentTypeError(msg)
    return p, q


def _add_two_eigen_arguments(parser: argparse.ArgumentParser) -> None:
    _ = parser.add_argument("--p", type=int, required=True, help="Multiplicity of mu")
    _ = parser.add_argument("--q", type=int, required=True, help="Multiplicity of lambda")
    _ = parser.add_argument("--mu", type=to_rational, required=True, help="First eigenvalue of A")
    _ = parser.add_argument("--lambda", dest="lam", type=to_rational, required=True, help="Second eigenvalue of A")
    _ = parser.add_argument("--f", required=True, help="JSON file with f in factored form")
    _ = parser.add_argument(
        "--enumerate",
        action="store_true",
        default=False,
        help="Enumerate every diagonal (P, S) with entries among the roots of f",
    )
    _ = parser.add_argument("--P", dest="p_block", help="JSON file with the p x p diagonal block")
    _ = parser.add_argument("--S", dest="s_block", help="JSON file with the q x q diagonal block")
    _ = parser.add_argument(
        "--cap",
        type=int,
        default=two_eigen.DEFAULT_ENUMERATION_CAP,
        help=f"Maximum number of enumerated (P, S) pairs (default: {two_eigen.DEFAULT_ENUMERATION_CAP})",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="commutator-solver",
        description="Construct, verify and count solutions of XA - AX = f(X) in exact rational arithmetic",
    )
    _ = parser.add_argument(
        "--verbose",
        "-v",
        action="count",
        default=0,
        help="Increase verbosity: -v shows INFO messages, -vv shows DEBUG messages",
    )
    _ = parser.add_argument("--log-file", help="Also write DEBUG logs to this file")

    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    verify = commands.add_parser("verify", help="Check whether X solves XA - AX = f(X)")
    _ = verify.add_argument("--A", dest="a", required=True, help="JSON file with A")
    _ = verify.add_argument("--X", dest="x", required=True, help="JSON file with X")
    _ = verify.add_argument("--f", required=True, help="JSON file with f (dense or factored)")
    _ = verify.add_argument(
        "--ladder",
        action="store_true",
        default=False,
        help="Also check the ladder decomposition (A diagonal, f = x^2 - x^3)",
    )

    solve2 = commands.add_parser("solve2", help="Solution families for A = diag(mu I_p, lambda I_q)")
    _add_two_eigen_arguments(solve2)

    degenerate = commands.add_parser("degenerate", help="Non-triangular families with sampled members")
    _add_two_eigen_arguments(degenerate)
    _ = degenerate.add_argument(
        "--samples",
        type=int,
        default=two_eigen.DEFAULT_SAMPLE_COUNT,
        help=f"Members sampled per family (default: {two_eigen.DEFAULT_SAMPLE_COUNT})",
    )
    _ = degenerate.add_argument(
        "--seed",
        type=int,
        default=two_eigen.DEFAULT_SAMPLE_SEED,
        help=f"Seed of the sampler (default: {two_eigen.DEFAULT_SAMPLE_SEED})",
    )

    ladder_cmd = commands.add_parser("ladder", help="Partition a spectrum into ladders")
    _ = ladder_cmd.add_argument("--spectrum", required=True, help="JSON list of rational eigenvalues")

    extend = commands.add_parser("extend", help="Extend diagonal blocks of a single ladder to a solution")
    _ = extend.add_argument("--A", dest="a", required=True, help="JSON file with diag((l+c) I, ..., l I)")
    _ = extend.add_argument("--Y", dest="y", nargs="+", required=True, help="JSON files with Y_c, ..., Y_0")

    dims = commands.add_parser("dims", help="Solution variety dimensions for A = diag(I_p, 0_q)")
    _ = dims.add_argument("--p", type=int, help="Size of the identity block")
    _ = dims.add_argument("--q", type=int, help="Size of the zero block")
    _ = dims.add_argument(
        "--scan",
        nargs=2,
        type=int,
        metavar=("PMAX", "QMAX"),
        help="Compare nu with rho over [1, PMAX] x [1, QMAX] and print CSV",
    )
    _ = dims.add_argument(
        "--ratio",
        type=to_rational,
        default=variety_dims.DEFAULT_RATIO_BOUND,
        help=f"Ratio bound of the scan (default: {format_rational(variety_dims.DEFAULT_RATIO_BOUND)})",
    )
    _ = dims.add_argument("--workers", type=int, help="Worker processes of the scan (default: CPU count)")
    _ = dims.add_argument(
        "--include",
        type=_couple,
        action="append",
        default=[],
        metavar="P,Q",
        help="Extra couple to evaluate in the scan; can be given multiple times",
    )

    rec = commands.add_parser("polyrec", help="Table of the recurrence polynomials P_s")
    _ = rec.add_argument("--s-max", type=int, required=True, help="Last index of the table")

    return parser


def _emit(payload: Any) -> None:
    print(dump_json(payload))


def _two_eigen_pairs(args: argparse.Namespace, inst: two_eigen.TwoEigInstance) -> Iterator[tuple[RatMatrix, RatMatrix]]:
    if args.enumerate:
        if args.p_block or args.s_block:
            msg = "--enumerate cannot be combined with --P/--S"
            raise InputValidationError(msg)
        yield from two_eigen.enumerate_diagonal_ps(inst, cap=args.cap)
        return
    if not args.p_block or not args.s_block:
        msg = "Give either --enumerate or both --P and --S"
        raise InputValidationError(msg)
    yield _load_matrix(args.p_block), _load_matrix(args.s_block)


def _two_eigen_instance(args: argparse.Namespace) -> two_eigen.TwoEigInstance:
    return two_eigen.TwoEigInstance(p=args.p, q=args.q, mu=args.mu, lam=args.lam, f=_load_factored(args.f))


def _witness_json(inst: two_eigen.TwoEigInstance) -> dict[str, Any] | None:
    pair = two_eigen.witness_pair(inst)
    if pair is None:
        return None
    return {"alpha": format_rational(pair[0][0, 0])}


def _cmd_verify(args: argparse.Namespace) -> int:
    inst = EquationInstance(a=_load_matrix(args.a), f=poly_from_json(load_json(args.f)))
    x = _load_matrix(args.x)
    report = residual(inst, x)
    payload: dict[str, Any] = {"residual": report.to_dict()}
    ok = report.is_solution
    if args.ladder:
        if not inst.a.is_diagonal():
            msg = "--ladder needs a diagonal A"
            raise InputValidationError(msg)
        if (expand(inst.f) if isinstance(inst.f, FactoredPoly) else inst.f) != CUBIC:
            msg = "--ladder applies only to f = x^2 - x^3"
            raise InputValidationError(msg)
        part = ladder.partition_spectrum(inst.a.diagonal_entries())
        payload["partition"] = part.to_dict()
        if ok:
            a_ordered, x_ordered = ladder.order_by_partition(inst.a, x, part)
            decomposition = ladder.verify_decomposition(a_ordered, x_ordered, part)
            payload["decomposition"] = decomposition.to_dict()
            ok = decomposition.conforms
    _emit(payload)
    return EXIT_OK if ok else EXIT_REJECTED


def _cmd_solve2(args: argparse.Namespace) -> int:
    inst = _two_eigen_instance(args)
    regime = two_eigen.classify(inst)
    families = [two_eigen.solve(inst, p_block, s_block).to_dict() for p_block, s_block in _two_eigen_pairs(args, inst)]
    _emit({"regime": str(regime), "witness": _witness_json(inst), "families": families})
    return EXIT_OK


def _cmd_degenerate(args: argparse.Namespace) -> int:
    if args.samples < 0:
        msg = f"--samples must be non-negative, got {args.samples}"
        raise InputValidationError(msg)
    inst = _two_eigen_instance(args)
    regime = two_eigen.classify(inst)
    if regime is not two_eigen.Regime.DEGENERATE:
        logger.warning(f"Instance is in regime {regime}; the non-triangular hull is reported anyway")
    families: list[dict[str, Any]] = []
    for p_block, s_block in _two_eigen_pairs(args, inst):
        family = two_eigen.solve_degenerate(inst, p_block, s_block)
        members = two_eigen.sample_members(family, count=args.samples, seed=args.seed)
        entry = family.to_dict()
        entry["samples"] = [m.to_dict() for m in members]
        entry["samples_passing"] = sum(1 for m in members if m.bilinear_ok)
        families.append(entry)
    _emit({"regime": str(regime), "witness": _witness_json(inst), "families": families})
    return EXIT_OK


def _cmd_ladder(args: argparse.Namespace) -> int:
    part = ladder.partition_spectrum(rationals_from_json(load_json(args.spectrum)))
    _emit(part.to_dict())
    return EXIT_OK


def _cmd_extend(args: argparse.Namespace) -> int:
    extension = ladder.extend_diagonal_to_solution(_load_matrix(args.a), [_load_matrix(path) for path in args.y])
    _emit(extension.to_dict())
    return EXIT_OK


def _cmd_dims(args: argparse.Namespace) -> int:
    if args.scan is not None:
        if args.p is not None or args.q is not None:
            msg = "--scan cannot be combined with --p/--q"
            raise InputValidationError(msg)
        p_max, q_max = args.scan
        report = variety_dims.scan(
            p_max,
            q_max,
            Fraction(args.ratio),
            workers=args.workers,
            extra_couples=args.include,
        )
        sys.stdout.write(report.to_csv())
        return EXIT_OK if not report.mismatches else EXIT_REJECTED
    if args.p is None or args.q is None:
        msg = "Give both --p and --q, or --scan PMAX QMAX"
        raise InputValidationError(msg)
    _emit(variety_dims.nu(args.p, args.q).to_dict())
    return EXIT_OK


def _cmd_polyrec(args: argparse.Namespace) -> int:
    _emit(polyrec.compute_p(args.s_max).to_dict())
    return EXIT_OK


_COMMANDS = {
    "verify": _cmd_verify,
    "solve2": _cmd_solve2,
    "degenerate": _cmd_degenerate,
    "ladder": _cmd_ladder,
    "extend": _cmd_extend,
    "dims": _cmd_dims,
    "polyrec": _cmd_polyrec,
}


def run(argv: Sequence[str] | None = None) -> int:
    """Execute one subcommand and return its exit code; errors are printed as JSON objects."""
    try:
        args = build_parser().parse_args(argv)
        setup_logging(verbosity=args.verbose, log_file=args.log_file)
        return _COMMANDS[args.command](args)
    except InputValidationError as e:
        logger.error(str(e))  # noqa: TRY400
        _emit(e.to_dict())
        return EXIT_INVALID
    except RejectedInputError as e:
        logger.error(str(e))  # noqa: TRY400
        _emit(e.to_dict())
        return EXIT_REJECTED
    except CommutatorError as e:
        logger.exception("Internal consistency check failed")
        _emit(e.to_dict())
        return EXIT_REJECTED


def main() -> None:
    """Main entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
