import argparse
import csv
import sys

from ..errors import ParseError, UsageError, ValidationError
from ..graph import connectivity_check
from ..iso import RationalQuasimomentum
from ..storage import GraphReaderWriter, resolve
from ..utils import format_float, numpy_to_json

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_ERROR = 3


def parse_chiral(text):
    """'a,b,c;d,e,f' -> [[a, b, c], [d, e, f]]"""
    rows = [row for row in text.split(";") if row.strip()]
    try:
        matrix = [[int(x) for x in row.split(",")] for row in rows]
    except ValueError:
        raise UsageError(
            f"cannot read chiral matrix {text!r}; expected rows like '1,5,-1;4,1,0'"
        )
    if not matrix or len({len(row) for row in matrix}) != 1:
        raise UsageError(f"chiral matrix {text!r} has rows of different lengths")
    return matrix


def parse_rationals(text) -> RationalQuasimomentum:
    """'p/q,p/q,...' in units of pi"""
    try:
        return RationalQuasimomentum.parse(text)
    except (ParseError, ValueError, ZeroDivisionError) as e:
        raise UsageError(f"cannot read quasimomentum {text!r}: {e}")


def parse_grid(text):
    try:
        counts = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot read grid {text!r}; expected '64' or '64,32'")
    return counts[0] if len(counts) == 1 else counts


def parse_graph_file(path):
    """Load a graph file (or shipped asset name) and check that the
    periodic graph it describes is connected"""
    graph = GraphReaderWriter().read(resolve(path))
    check = connectivity_check(graph)
    if not check:
        raise ValidationError(
            f"{path}: {check.reason}",
            witness=check.components
            if len(check.components) > 1
            else check.invariant_factors,
        )
    return graph


def common_options():
    """Options accepted by every subcommand"""
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=["text", "csv", "json"], help="Output format")
    p.add_argument("--grid", type=parse_grid, help="Grid count(s), e.g. 64 or 64,32")
    p.add_argument("--refine", type=float, help="Zoom stopping tolerance")
    p.add_argument("--flat-tol", type=float, help="Width below which a band is flat")
    p.add_argument("--fd-step", type=float, help="Finite difference step")
    p.add_argument("--workers", type=int, help="Worker threads")
    p.add_argument("--seed", type=int, help="Random seed")
    p.add_argument("--config", help="JSON file with run settings")
    p.add_argument(
        "-v", "--verbose", action="count", default=0, help="More logging (-vv)"
    )
    return p


def report(config, lines, data, table=None):
    """Write a result in the configured format.

    `lines` is the text rendering, `data` the JSON one and `table` an
    optional (header, rows) pair for CSV; without a table, CSV output
    falls back to JSON.
    """
    out = sys.stdout
    if config.output_format == "csv" and table is not None:
        header, rows = table
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [format_float(x) if isinstance(x, float) else x for x in row]
            )
    elif config.output_format == "text":
        for line in lines:
            print(line, file=out)
    else:
        print(numpy_to_json(data, indent=2), file=out)


def edge_table(edges):
    header = ["band", "lower", "upper", "residual", "argmin", "argmax"]
    rows = [
        [
            e.band,
            float(e.lower),
            float(e.upper),
            float(e.residual),
            " ".join(",".join(format_float(x) for x in k) for k in e.argmin),
            " ".join(",".join(format_float(x) for x in k) for k in e.argmax),
        ]
        for e in edges
    ]
    return header, rows


def edge_lines(edges):
    lines = []
    for e in edges:
        flags = ""
        if not (e.lower_isolated and e.upper_isolated):
            flags = "  (extremum not isolated)"
        lines.append(
            f"band {e.band}: [{format_float(e.lower)}, {format_float(e.upper)}]{flags}"
        )
    return lines
