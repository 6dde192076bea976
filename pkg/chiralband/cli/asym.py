from ..asymptotics import band_edge_asymptotic, best_of
from ..spectrum import band_edges
from ..utils import format_float
from .bands import search_options
from .common import EXIT_OK, parse_graph_file, report


def asymptotics(args, config):
    graph = parse_graph_file(args.graph)
    edge = None
    if args.check_unique:
        edge = band_edges(graph, **search_options(config))[args.band - 1]

    estimates = [
        band_edge_asymptotic(
            graph,
            args.band,
            args.side,
            k_o,
            args.chiral,
            step=config.fd_step,
            gap_tol=config.gap_tol,
            edge=edge,
        )
        for k_o in args.k0
    ]
    best = best_of(estimates)

    lines = []
    for e in estimates:
        lines += [
            f"k_o ({e.rational}) pi" if e.rational else f"k_o {e.k_o.tolist()}",
            f"  edge       {format_float(e.edge)}",
            f"  correction {format_float(e.correction)}",
            f"  predicted  {format_float(e.predicted)}",
            f"  tau        {format_float(e.tau)}",
            f"  remainder  O(tau^-{e.remainder_order})",
        ]
    if len(estimates) > 1:
        lines.append(f"best predicted {format_float(best.predicted)}")

    data = {"estimates": estimates, "best": best.predicted}
    rows = [
        [str(e.rational or e.k_o.tolist()), e.edge, e.correction, e.predicted, e.tau]
        for e in estimates
    ]
    report(
        config,
        lines,
        data,
        (["k_o", "edge", "correction", "predicted", "tau"], rows),
    )
    return EXIT_OK
