#!/usr/bin/env python3
#
# chiralband_export_all.py
#
# Convenience script that writes band edges and a sampled dispersion for
# every lattice shipped with chiralband (or for the graph files given with
# --graph).
#
# It also serves as an integration test of the library and as a
# demonstration of how it should be used.
#
# Example: chiralband_export_all.py /tmp/out --grid 48
# Example: chiralband_export_all.py /tmp/out --graph my_lattice.json --chiral 2,3

import argparse
import csv
from pathlib import Path

from chiralband import storage
from chiralband.cli.common import edge_table, parse_chiral
from chiralband.floquet import sample_dispersion
from chiralband.graph import quotient_primitive
from chiralband.spectrum import band_edges, subcovering_band_edges


def write_csv(path, header, rows):
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


if __name__ == "__main__":
    p = argparse.ArgumentParser(
        description="Export band edges and dispersion samples as CSV files"
    )
    p.add_argument(
        "output_directory",
        help="Output directory where CSV files will be placed (e.g. /tmp)",
    )
    p.add_argument("--graph", action="append", help="Graph file to export")
    p.add_argument("--grid", type=int, default=32, help="Grid count per axis")
    p.add_argument(
        "--chiral",
        type=parse_chiral,
        help="Also export the subcovering edges for this chiral matrix",
    )

    args = p.parse_args()
    odir = Path(args.output_directory)
    odir.mkdir(parents=True, exist_ok=True)

    names = args.graph if args.graph else storage.builtin_names()
    for name in names:
        graph = storage.GraphReaderWriter().read(storage.resolve(name))
        stem = Path(name).stem

        edges = band_edges(graph, grid=args.grid)
        header, rows = edge_table(edges)
        write_csv(odir / f"{stem}_edges.csv", header, rows)

        sample = sample_dispersion(graph, args.grid)
        write_csv(odir / f"{stem}_dispersion.csv", sample.header(), sample.rows())
        print(f"Exported {stem}: {len(edges)} bands, {len(sample.values)} points")

        if args.chiral and len(args.chiral[0]) == graph.dimension:
            view = quotient_primitive(graph, args.chiral)
            header, rows = edge_table(subcovering_band_edges(view, grid=args.grid))
            write_csv(odir / f"{stem}_sub_edges.csv", header, rows)
