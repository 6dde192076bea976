from .. import intlat
from .common import EXIT_NEGATIVE, EXIT_OK, report


def _rows(matrix):
    return [" ".join(f"{int(x):>4d}" for x in row) for row in matrix]


def check_primitive(args, config):
    T = intlat.as_int_matrix(args.chiral)
    primitive = intlat.is_primitive_set(T)
    _, index = intlat.saturation(T)
    lines = [f"primitive: {str(primitive).lower()}"]
    if not primitive:
        lines.append(f"index {index}")
    report(config, lines, {"primitive": primitive, "index": index})
    return EXIT_OK if primitive else EXIT_NEGATIVE


def complete(args, config):
    completion = intlat.complete_to_basis(args.chiral)
    matrix = completion.matrix.tolist()
    report(
        config,
        _rows(matrix),
        {"matrix": matrix, "determinant": intlat.determinant(matrix)},
        ([f"c{i + 1}" for i in range(len(matrix))], matrix),
    )
    return EXIT_OK


def saturate(args, config):
    basis, index = intlat.saturation(args.chiral)
    basis = basis.tolist()
    report(
        config,
        _rows(basis) + [f"index {index}"],
        {"basis": basis, "index": index},
    )
    return EXIT_OK
