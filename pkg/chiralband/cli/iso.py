from pathlib import Path

import numpy as np

from .. import intlat
from ..graph import quotient_primitive
from ..iso import isospectral_verdict, numeric_coincidence
from ..spectrum import (
    band_edges,
    bandwise_inclusion,
    inclusion_check,
    spectrum_set,
    subcovering_band_edges,
)
from ..storage import LevelSetReaderWriter, resolve
from ..utils import format_float
from .bands import search_options
from .common import EXIT_NEGATIVE, EXIT_OK, parse_graph_file, report


def _level_sets(args):
    name = args.level_sets or f"{Path(args.graph).stem}_levels"
    return LevelSetReaderWriter().read(resolve(name))


def isospectral(args, config):
    graph = parse_graph_file(args.graph)
    verdict = isospectral_verdict(_level_sets(args), args.chiral, graph.num_vertices)

    data = verdict.to_dict()
    lines = ["isospectral" if verdict else "not isospectral"]
    for band, side in verdict.failing:
        lines.append(f"  band {band} {side} edge moves")
    if not verdict.complete:
        lines.append("  (level sets incomplete, negative verdict not conclusive)")

    if args.numeric:
        options = search_options(config)
        full = band_edges(graph, **options)
        sub = subcovering_band_edges(quotient_primitive(graph, args.chiral), **options)
        numeric = numeric_coincidence(full, sub, args.tol)
        data["numeric"] = numeric
        for r in numeric:
            lines.append(
                f"  band {r['band']} {r['side']}: full {format_float(r['full'])}"
                f" sub {format_float(r['sub'])} diff {r['difference']:.3g}"
            )

    report(config, lines, data)
    return EXIT_OK if verdict else EXIT_NEGATIVE


def check_inclusion(args, config):
    """Band-wise inclusion for random primitive chiral matrices"""
    graph = parse_graph_file(args.graph)
    rng = np.random.default_rng(config.seed)
    options = search_options(config)
    full = band_edges(graph, **options)
    full_set = spectrum_set(full, config.flat_tol)

    failures = []
    for _ in range(args.samples):
        T = intlat.random_primitive(rng, args.rows, graph.dimension, args.bound)
        sub = subcovering_band_edges(quotient_primitive(graph, T), **options)
        bands = bandwise_inclusion(sub, full, args.tol)
        sub_set = spectrum_set(sub, config.flat_tol)
        included = inclusion_check(sub_set, full_set, args.tol)
        if bands or not included:
            failures.append(
                {"chiral": T.tolist(), "bands": bands, "witness": included.witness}
            )

    lines = [f"{args.samples - len(failures)}/{args.samples} samples included"]
    lines += [f"  {f['chiral']}: bands {f['bands']}" for f in failures]
    report(config, lines, {"samples": args.samples, "failures": failures})
    return EXIT_NEGATIVE if failures else EXIT_OK
