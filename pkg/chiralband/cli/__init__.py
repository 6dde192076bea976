import argparse
import json
import logging
import sys

from ..errors import ChiralbandError, ConfigError, NotPrimitive, UsageError
from ..runconfig import RunConfig
from ..storage import ConfigReaderWriter
from ..utils import Timer
from . import asym, bands, iso, lattice, quotient
from .common import (
    EXIT_ERROR,
    EXIT_NEGATIVE,
    EXIT_OK,
    EXIT_USAGE,
    common_options,
    parse_chiral,
    parse_graph_file,
    parse_rationals,
)

__all__ = ["lattice", "bands", "quotient", "asym", "iso", "main", "dispatch"]

logger = logging.getLogger(__name__)


def build_parser():
    common = common_options()
    p = argparse.ArgumentParser(
        prog="chiralband",
        description="Spectra of periodic graphs and their rolled-up subcoverings",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def command(name, func, help):
        s = sub.add_parser(name, parents=[common], help=help)
        s.set_defaults(func=func)
        return s

    s = command(
        "check-primitive", lattice.check_primitive, "Test a chiral set for primitivity"
    )
    s.add_argument("chiral", type=parse_chiral, help="Chiral matrix, e.g. 1,5,-1;4,1,0")

    s = command("complete", lattice.complete, "Complete a chiral set to a basis")
    s.add_argument("chiral", type=parse_chiral)

    s = command("saturate", lattice.saturate, "Saturation basis and index")
    s.add_argument("chiral", type=parse_chiral)

    s = command("bands", bands.bands, "Spectrum as a union of intervals")
    s.add_argument("graph", help="Graph file or shipped name (e.g. hexagonal)")

    s = command("edges", bands.edges, "Band edges over the Brillouin zone")
    s.add_argument("graph")

    s = command("sub-edges", bands.sub_edges, "Band edges of a subcovering")
    s.add_argument("graph")
    s.add_argument("--chiral", type=parse_chiral, required=True)
    s.add_argument("--completion", type=parse_chiral, help="Unimodular completion")

    s = command("quotient", quotient.quotient, "Write the subcovering graph")
    s.add_argument("graph")
    s.add_argument("--chiral", type=parse_chiral, required=True)
    s.add_argument("--out", help="Output graph file")

    s = command("asymptotics", asym.asymptotics, "Predicted subcovering band edge")
    s.add_argument("graph")
    s.add_argument("--chiral", type=parse_chiral, required=True)
    s.add_argument("--band", type=int, required=True, help="Band index, from 1")
    s.add_argument("--side", choices=["lower", "upper"], required=True)
    s.add_argument(
        "--k0",
        type=parse_rationals,
        action="append",
        required=True,
        help="Extremum point in units of pi, e.g. 2/3,-2/3 (repeatable)",
    )
    s.add_argument(
        "--check-unique",
        action="store_true",
        help="Warn when the edge is attained away from +-k0",
    )

    s = command("isospectral", iso.isospectral, "Exact isospectrality verdict")
    s.add_argument("graph")
    s.add_argument("--chiral", type=parse_chiral, required=True)
    s.add_argument("--level-sets", help="Level-set file (default: <graph>_levels)")
    s.add_argument("--numeric", action="store_true", help="Compare edges numerically")
    s.add_argument("--tol", type=float, default=1e-6)

    s = command(
        "export-dispersion", bands.export_dispersion, "Band functions on a grid as CSV"
    )
    s.add_argument("graph")
    s.add_argument("--out", help="CSV file (default: standard output)")

    s = command(
        "check-inclusion",
        iso.check_inclusion,
        "Band-wise inclusion for random chiral sets",
    )
    s.add_argument("graph")
    s.add_argument("--samples", type=int, default=20)
    s.add_argument("--rows", type=int, default=1, help="Rows of the chiral matrix")
    s.add_argument("--bound", type=int, default=5, help="Largest entry")
    s.add_argument("--tol", type=float, default=1e-6)

    return p


def load_config(args):
    config = ConfigReaderWriter().read(args.config) if args.config else RunConfig()
    config = config.with_environment()
    return config.update(
        grid=args.grid,
        refine=args.refine,
        flat_tol=args.flat_tol,
        fd_step=args.fd_step,
        workers=args.workers,
        seed=args.seed,
        output_format=args.format,
    ).validate()


def _report_error(e, args):
    if getattr(args, "format", None) == "json":
        message = json.dumps({"error": type(e).__name__, "message": str(e)})
    else:
        message = f"error: {e}"
    print(message, file=sys.stderr)


def dispatch(argv=None):
    """Run one subcommand and return its exit code"""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if not e.code else EXIT_USAGE

    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger("chiralband").setLevel(level)

    try:
        config = load_config(args)
        with Timer(args.command):
            return args.func(args, config)
    except (UsageError, ConfigError) as e:
        _report_error(e, args)
        return EXIT_USAGE
    except NotPrimitive as e:
        _report_error(e, args)
        return EXIT_NEGATIVE
    except (ChiralbandError, OverflowError, OSError, ValueError, TypeError) as e:
        _report_error(e, args)
        return EXIT_ERROR


def main(argv=None):
    return dispatch(argv)
