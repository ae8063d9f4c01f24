import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .config import get_settings
from .errors import InputError, ObstructionError
from .pipeline import corpus_listing, error_report, run, run_corpus
from .schema import Report

# Configure logging
logger = logging.getLogger(__name__)


def _add_input(parser: argparse.ArgumentParser, help_text: str = "presentation file or corpus:NAME") -> None:
    parser.add_argument("input", help=help_text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bigraded-formality",
                                     description="Cohomology, ∂∂̄-Lemma and strong formality of cbbas")
    parser.add_argument("--out", type=Path, help="Write the report to this path instead of standard output.")
    parser.add_argument("--threads", type=int, help="Worker threads for this run (overrides FORMALITY_THREADS).")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    _add_input(sub.add_parser("validate", help="Validate a presentation."))
    p = sub.add_parser("cohomology", help="Cohomology dimensions and representatives.")
    _add_input(p)
    p.add_argument("--kind", default="BC", help="BC, A, Dolbeault, antiDolbeault or deRham.")
    p.add_argument("--bidegree", help="Restrict to one bidegree (p,q), or one total degree for deRham.")
    _add_input(sub.add_parser("dims", help="Dimensions of every cohomology kind."))
    _add_input(sub.add_parser("zigzag", help="Decompose a finite bicomplex into dots, squares and zigzags."))
    p = sub.add_parser("ddbar-check", help="Check the ∂∂̄-Lemma.")
    _add_input(p)
    p.add_argument("--up-to", type=int, dest="up_to", help="Check on the sub-cbba generated in degrees ≤ S.")
    p = sub.add_parser("sd-check", help="Check the n-SD duality pairing.")
    _add_input(p)
    p.add_argument("--n", type=int, required=True)
    p = sub.add_parser("split", help="Search for or verify a splitting certificate.")
    _add_input(p)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--search", action="store_true", help="Search for a certificate (default).")
    mode.add_argument("--verify", metavar="CERT", help="Verify a certificate JSON file.")
    p.add_argument("--s", type=int, required=True)
    p = sub.add_parser("s-strong", help="Decide s-strong formality.")
    _add_input(p)
    p.add_argument("--s", type=int, required=True)
    p = sub.add_parser("strong", help="Decide strong formality of an n-SD model.")
    _add_input(p)
    p.add_argument("--n", type=int, required=True)
    p = sub.add_parser("promote", help="Promote (n−1)-strong formality to strong formality.")
    _add_input(p)
    p.add_argument("--n", type=int, required=True)
    _add_input(sub.add_parser("central-model", help="Build a central-cohomology model."),
               "Hodge specification JSON or corpus:NAME")
    p = sub.add_parser("relations-check", help="Check for multiplicative relations below degree n+2.")
    _add_input(p)
    p.add_argument("--n", type=int, required=True)
    p = sub.add_parser("relations-model", help="Build and promote the model of a ring without low relations.")
    _add_input(p)
    p.add_argument("--n", type=int, required=True)
    _add_input(sub.add_parser("lefschetz-extend", help="Extend a model along a restriction."),
               "extension specification JSON or corpus:NAME")
    _add_input(sub.add_parser("complete", help="Complete a partial model of a target ring."),
               "completion specification JSON or corpus:NAME")
    p = sub.add_parser("corpus", help="List or run the built-in examples.")
    corpus_sub = p.add_subparsers(dest="action", required=True)
    corpus_sub.add_parser("list")
    corpus_sub.add_parser("run").add_argument("name")
    return parser


def _options(args: argparse.Namespace) -> dict:
    keys = {
        "cohomology": ("kind", "bidegree"),
        "ddbar-check": ("up_to",),
        "sd-check": ("n",),
        "split": ("s", "verify"),
        "s-strong": ("s",),
        "strong": ("n",),
        "promote": ("n",),
        "relations-check": ("n",),
        "relations-model": ("n",),
    }.get(args.command, ())
    return {k: getattr(args, k) for k in keys}


def _dispatch(args: argparse.Namespace) -> Report:
    if args.command == "corpus":
        return corpus_listing() if args.action == "list" else run_corpus(args.name)
    return run(args.command, args.input, **_options(args))


def _error_report(args: argparse.Namespace, exc: Exception, exit_code: int) -> Report:
    error = error_report(exc)
    verdict = False if exit_code == 1 else None
    return Report(version=__version__, command=args.command, input=getattr(args, "input", None),
                  verdict=verdict, exit_code=exit_code, result=error.model_dump())


def _emit(report: Report, out: Optional[Path]) -> None:
    text = report.model_dump_json(indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8") as f:
        f.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Runs one command and maps its outcome to an exit code.

    0 means the verdict holds or the command succeeded, 1 a false verdict or a
    mathematical obstruction (the witness is in the report) and 2 an input or
    contract error.
    """
    args = build_parser().parse_args(argv)
    if args.threads is not None:
        os.environ["FORMALITY_THREADS"] = str(args.threads)
        get_settings.cache_clear()
    logging.basicConfig(level=get_settings().log_level, stream=sys.stderr,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        report = _dispatch(args)
    except FileNotFoundError as exc:
        logger.error("Input not found: %s", exc)
        report = _error_report(args, exc, 2)
    except ObstructionError as exc:
        logger.info("Obstruction: %s", exc)
        report = _error_report(args, exc, 1)
    except InputError as exc:
        logger.error("Input error: %s", exc)
        report = _error_report(args, exc, 2)
    except Exception as exc:
        logger.error("An unexpected error occurred: %s", exc, exc_info=True)
        report = _error_report(args, exc, 2)
    _emit(report, args.out)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
