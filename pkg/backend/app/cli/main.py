"""
Command-line entry point. Each verb lives in app.cli.commands and is
registered here, the way endpoint routers are mounted on one app.

Exit codes: 0 success / KS proved, 1 not proved, 2 bad input,
3 budget exhausted or unknown-only evidence, 4 internal inconsistency.
"""
import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from app.cli.commands import bases, code, ks, pipeline, rays
from app.core.config import settings
from app.core.errors import (
    BasisError,
    BudgetExhaustedError,
    CodeInputError,
    EnumerationLimitError,
    ExpensiveOperationError,
    InconsistencyError,
    RayInputError,
)
from app.schemas.run import RunConfig

logger = logging.getLogger(__name__)

EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_INTERNAL = 4

COMMANDS = {
    "code": code,
    "rays": rays,
    "bases": bases,
    "ks": ks,
    "pipeline": pipeline,
}

INPUT_ERRORS = (CodeInputError, RayInputError, BasisError, EnumerationLimitError, ExpensiveOperationError)


def _labels(text: str) -> List[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated ray labels, got {text!r}")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("code", help="golay24, golay12, qr48, hamming8, a matrix file, or (ks) a bases/certificate JSON")
    parser.add_argument("--out", default=settings.OUTPUT_DIR, help="output directory")
    parser.add_argument("--budget", type=int, help="node budget for seed search / clique enumeration")
    parser.add_argument("--oracle-budget", type=int, help="node budget for the exact-cover oracle")
    parser.add_argument("--threads", type=int, default=settings.THREADS, help="worker processes for enumeration")
    parser.add_argument("--override-expensive", action="store_true", help="allow gated computations")
    parser.add_argument("--mode", choices=["translate", "enumerate"])
    parser.add_argument("--weight", type=int, help="keep ternary rays of this codeword weight")
    parser.add_argument("--restrict", type=_labels, default=[], help="mutually orthogonal anchor labels, e.g. 1,127,128,136")
    parser.add_argument("--puncture", type=int, help="delete this coordinate (0-based)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="golayks", description="Kochen-Specker proofs from Golay codes")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, module in COMMANDS.items():
        p = sub.add_parser(name, help=(module.__doc__ or "").strip())
        _add_common(p)
        if hasattr(module, "add_arguments"):
            module.add_arguments(p)
    return parser


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else settings.LOG_LEVEL,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        config = RunConfig(
            command=args.command,
            code=args.code,
            out=args.out,
            budget=args.budget,
            oracle_budget=args.oracle_budget,
            threads=args.threads,
            mode=args.mode,
            weight=args.weight,
            restrict=args.restrict,
            puncture=args.puncture,
            override_expensive=args.override_expensive,
            emit_matrix=getattr(args, "emit_matrix", False),
        )
    except ValidationError as e:
        logger.error(f"Invalid arguments: {e}")
        return EXIT_INPUT

    try:
        return COMMANDS[config.command].run(config)
    except INPUT_ERRORS as e:
        logger.error(str(e))
        return EXIT_INPUT
    except BudgetExhaustedError as e:
        logger.error(f"{e} (after {e.nodes} nodes)")
        return EXIT_BUDGET
    except InconsistencyError as e:
        logger.error(f"Internal inconsistency: {e}")
        return EXIT_INTERNAL
    except OSError as e:
        logger.error(f"Cannot write artifacts to {config.out}: {e}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
