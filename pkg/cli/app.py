"""Command-line application.

Every command prints a JSON report on stdout and a one-line summary on
stderr. Commands that produce a document (gen, extend, basis, render) write
it to ``--output`` when given, otherwise the document itself goes to stdout.

Exit codes: 0 when every requested check passes, 1 on a disagreement between
dimension paths or a failed verification, 2 on input errors.
"""
import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from cli.commands import CommandResult
from cli.commands.basis import parse_point, run_basis, run_eval
from cli.commands.dimension import run_dim
from cli.commands.mesh import run_check, run_extend, run_gen, run_render
from tmesh_spline import __version__
from tmesh_spline.errors import TMeshError
from tmesh_spline.mesh.extension import PAIRINGS, SPACINGS

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configure_logging(level: Optional[str] = None) -> None:
    logging.basicConfig(level=(level or os.getenv("LOG_LEVEL", "WARNING")).upper(), format=LOG_FORMAT)


def _point(text: str):
    try:
        return parse_point(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a point 'x,y' with rational coordinates, got {text!r}")


def _add_extension_flags(parser: argparse.ArgumentParser, name: str = "--pairing") -> None:
    parser.add_argument(name, choices=PAIRINGS, default=None, help="boundary copy counts (default: from the mesh file)")
    parser.add_argument("--spacing", choices=SPACINGS, default=None, help="placement of the boundary copies")
    parser.add_argument("--seed", type=int, default=None, help="seed for random copy placement")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tmesh", description="Hierarchical T-mesh spline dimensions and bases")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="overrides LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a hierarchical mesh document from a refinement script")
    gen.add_argument("--spec", help="JSON refinement script (m, n, p, q, script)")
    gen.add_argument("--m", type=int, default=3)
    gen.add_argument("--n", type=int, default=3)
    gen.add_argument("--p", type=int, default=None)
    gen.add_argument("--q", type=int, default=None)
    gen.add_argument("--level", action="append", default=[], help="space-separated addresses of one level, repeatable")
    gen.add_argument("--random", type=int, default=None, metavar="SEED", help="draw a random legal script")
    gen.add_argument("--levels", type=int, default=3, help="most refinement levels for --random")
    gen.add_argument("--pairing", choices=PAIRINGS, default=None)
    gen.add_argument("-o", "--output")
    gen.set_defaults(handler=run_gen)

    ext = sub.add_parser("extend", help="write the extended mesh")
    ext.add_argument("mesh")
    _add_extension_flags(ext)
    ext.add_argument("-o", "--output")
    ext.set_defaults(handler=run_extend)

    dim = sub.add_parser("dim", help="spline space dimension by closed form and exact oracles")
    dim.add_argument("mesh")
    only = dim.add_mutually_exclusive_group()
    only.add_argument("--formula-only", action="store_true")
    only.add_argument("--oracle-only", action="store_true")
    _add_extension_flags(dim, "--extension-pairing")
    dim.add_argument("--ledger", action="store_true", help="include the per-level removal ledger")
    dim.add_argument("--force", action="store_true", help="run the cellwise oracle beyond the configured cell limit")
    dim.set_defaults(handler=run_dim, output=None)

    basis = sub.add_parser("basis", help="construct and verify the B-spline-based basis")
    basis.add_argument("mesh")
    _add_extension_flags(basis, "--extension-pairing")
    basis.add_argument("--tie-break", choices=("least", "greatest"), default=None)
    basis.add_argument("-o", "--output")
    basis.set_defaults(handler=run_basis)

    ev = sub.add_parser("eval", help="evaluate splines of a vectors document at rational points")
    ev.add_argument("vectors")
    ev.add_argument("--point", type=_point, action="append", required=True)
    ev.add_argument("--index", type=int, action="append", default=[])
    ev.add_argument("--no-check", action="store_true", help="skip the conformality check")
    ev.set_defaults(handler=run_eval, output=None)

    check = sub.add_parser("check", help="validate a mesh or vectors document")
    check.add_argument("document")
    check.set_defaults(handler=run_check, output=None)

    render = sub.add_parser("render", help="draw a mesh as SVG")
    render.add_argument("mesh")
    render.add_argument("--extended", action="store_true")
    render.add_argument("--order-labels", action="store_true", help="label l-edges by removal order (extended mesh)")
    render.add_argument("--no-levels", action="store_true", help="single stroke color")
    render.add_argument("--vectors", help="vectors document whose supports are highlighted")
    render.add_argument("--highlight", type=int, action="append", default=[])
    _add_extension_flags(render)
    render.add_argument("-o", "--output")
    render.set_defaults(handler=run_render)
    return parser


def _emit(result: CommandResult, output: Optional[str]) -> None:
    if result.document is not None and output is None:
        sys.stdout.write(result.document)
    else:
        if result.document is not None:
            Path(output).write_text(result.document, encoding="utf-8")
        sys.stdout.write(json.dumps(result.report, indent=2, sort_keys=True) + "\n")
    sys.stderr.write(result.summary + "\n")


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.log_level:
        logging.getLogger().setLevel(args.log_level.upper())
    try:
        result = args.handler(args)
    except TMeshError as e:
        logger.error(f"{args.command} failed: {e.message}")
        sys.stdout.write(json.dumps({"status": "error", **e.to_dict()}, indent=2, sort_keys=True) + "\n")
        sys.stderr.write(f"{args.command}: {type(e).__name__}: {e.message}\n")
        return 2
    except OSError as e:
        logger.error(f"{args.command} failed: {e}")
        sys.stdout.write(json.dumps({"status": "error", "error": type(e).__name__, "message": str(e)}, indent=2) + "\n")
        sys.stderr.write(f"{args.command}: {e}\n")
        return 2
    _emit(result, args.output)
    return result.status


def main() -> None:
    configure_logging()
    sys.exit(run_command())
