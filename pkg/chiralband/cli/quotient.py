from .. import intlat
from ..graph import quotient_general
from ..storage import GraphReaderWriter
from .common import EXIT_OK, parse_graph_file, report


def quotient(args, config):
    graph = parse_graph_file(args.graph)
    sub = quotient_general(graph, args.chiral)
    _, index = intlat.saturation(args.chiral)
    if args.out:
        GraphReaderWriter().write(sub, args.out)

    summary = {
        "dimension": sub.dimension,
        "vertices": sub.num_vertices,
        "edges": len(sub.edges),
        "index": index,
        "output": args.out,
    }
    lines = [
        f"dimension {sub.dimension}, {sub.num_vertices} vertices, "
        f"{len(sub.edges)} edges (index {index})"
    ]
    if args.out:
        lines.append(f"written to {args.out}")
    report(config, lines, summary if args.out else sub.to_dict())
    return EXIT_OK
