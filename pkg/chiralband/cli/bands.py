import csv
import sys
from pathlib import Path

from ..floquet import sample_dispersion
from ..graph import quotient_primitive
from ..spectrum import band_edges, spectrum_set, subcovering_band_edges
from ..utils import format_float
from .common import EXIT_OK, edge_lines, edge_table, parse_graph_file, report


def search_options(config):
    return dict(
        grid=config.grid,
        refine=config.refine,
        max_levels=config.max_levels,
        max_candidates=config.max_candidates,
        tie_radius=config.tie_radius,
        workers=config.workers,
        max_cells=config.max_cells,
    )


def bands(args, config):
    graph = parse_graph_file(args.graph)
    result = band_edges(graph, **search_options(config))
    spectrum = spectrum_set(result, config.flat_tol)

    lines = [
        f"interval [{format_float(lo)}, {format_float(hi)}]"
        for lo, hi in spectrum.intervals
    ] + [f"flat {format_float(v)} (band {j})" for v, j in spectrum.flat_bands]
    rows = [["interval", lo, hi] for lo, hi in spectrum.intervals] + [
        ["flat", v, j] for v, j in spectrum.flat_bands
    ]
    report(config, lines, spectrum.to_dict(), (["kind", "a", "b"], rows))
    return EXIT_OK


def edges(args, config):
    graph = parse_graph_file(args.graph)
    result = band_edges(graph, **search_options(config))
    report(config, edge_lines(result), result, edge_table(result))
    return EXIT_OK


def sub_edges(args, config):
    graph = parse_graph_file(args.graph)
    view = quotient_primitive(graph, args.chiral, args.completion)
    result = subcovering_band_edges(view, **search_options(config))
    report(config, edge_lines(result), result, edge_table(result))
    return EXIT_OK


def export_dispersion(args, config):
    graph = parse_graph_file(args.graph)
    sample = sample_dispersion(graph, config.grid, config.max_cells, config.workers)

    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(sample.header())
        writer.writerows(sample.rows())
    finally:
        if args.out:
            out.close()
    if args.out:
        print(
            f"Exported {len(sample.values)} points to {Path(args.out)}",
            file=sys.stderr,
        )
    return EXIT_OK
