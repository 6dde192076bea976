import numpy as np
import pytest

from chiralband import graph
from chiralband.errors import (
    NotPrimitive,
    ParseError,
    ValidationError,
    WrongShape,
)
from chiralband.floquet import band_functions, floquet_matrix
from chiralband.graph import Edge, FundamentalGraph, Vertex

hexagonal_dict = {
    "type": "FundamentalGraph",
    "dimension": 2,
    "vertices": [
        {"label": "v1", "potential": 1.0},
        {"label": "v2", "potential": -1.0},
    ],
    "edges": [
        {"tail": "v1", "head": "v2", "offset": [0, 0]},
        {"tail": "v1", "head": "v2", "offset": [1, 0]},
        {"tail": "v1", "head": "v2", "offset": [0, 1]},
    ],
}


def test_build_hexagonal():
    g = graph.build_hexagonal(1.0)

    assert g.dimension == 2
    assert g.num_vertices == 2
    assert [v.potential for v in g.vertices] == [1.0, -1.0]
    assert [e.offset for e in g.edges] == [(0, 0), (1, 0), (0, 1)]
    assert g.degrees().tolist() == [3, 3]


def test_build_hypercubic():
    g = graph.build_hypercubic(3)

    assert g.num_vertices == 1
    assert all(e.is_loop for e in g.edges)
    assert [e.offset for e in g.edges] == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert g.degrees().tolist() == [6]


def test_graph_is_hashable():
    assert graph.build_hexagonal(1) == graph.build_hexagonal(1.0)
    assert hash(graph.build_hexagonal(1)) == hash(graph.build_hexagonal(1.0))
    assert graph.build_hexagonal(1) != graph.build_hexagonal(2)


def test_FundamentalGraph_to_dict():
    d = graph.build_hexagonal(1.0).to_dict()

    assert d == hexagonal_dict


def test_FundamentalGraph_from_dict():
    g = FundamentalGraph.from_dict(hexagonal_dict)

    assert g == graph.build_hexagonal(1.0)


def test_FundamentalGraph_from_dict_without_type():
    d = dict(hexagonal_dict)
    del d["type"]

    assert FundamentalGraph.from_dict(d) == graph.build_hexagonal(1.0)


def test_FundamentalGraph_from_dict_wrong_type():
    d = dict(hexagonal_dict, type="Project")

    with pytest.raises(ValueError, match="Expecting type FundamentalGraph"):
        FundamentalGraph.from_dict(d)


def test_FundamentalGraph_from_dict_roundtrip():
    g = graph.build_diamond(2.0)

    assert FundamentalGraph.from_dict(g.to_dict()) == g


def test_from_dict_float_offset():
    d = dict(hexagonal_dict)
    d["edges"] = [{"tail": "v1", "head": "v2", "offset": [0.5, 0]}]

    with pytest.raises(ParseError) as e:
        FundamentalGraph.from_dict(d)

    assert e.value.field == "edges[0]"


def test_from_dict_offset_length():
    d = dict(hexagonal_dict)
    d["edges"] = [{"tail": "v1", "head": "v2", "offset": [0, 0, 1]}]

    with pytest.raises(ParseError, match="offset"):
        FundamentalGraph.from_dict(d)


def test_from_dict_unknown_vertex():
    d = dict(hexagonal_dict)
    d["edges"] = [{"tail": "v1", "head": "w", "offset": [0, 0]}]

    with pytest.raises(ParseError):
        FundamentalGraph.from_dict(d)


def test_from_dict_duplicate_label():
    d = dict(hexagonal_dict)
    d["vertices"] = [{"label": "v1"}, {"label": "v1"}]

    with pytest.raises(ParseError, match="duplicate"):
        FundamentalGraph.from_dict(d)


def test_offset_bound():
    with pytest.raises(ValidationError):
        FundamentalGraph(1, (Vertex("v"),), (Edge(0, 0, (10**6 + 1,)),))


@pytest.mark.parametrize(
    "g",
    [
        graph.build_hexagonal(),
        graph.build_diamond(),
        graph.build_hypercubic(2),
        graph.build_triangular(),
    ],
)
def test_connectivity_builtin(g):
    check = graph.connectivity_check(g)

    assert check
    assert check.lattice_index == 1


def test_connectivity_two_components():
    g = FundamentalGraph(1, (Vertex("a"), Vertex("b")), (Edge(0, 0, (1,)),))

    check = graph.connectivity_check(g)

    assert not check
    assert check.components == [[0], [1]]


def test_connectivity_sublattice():
    # loops (2, 0) and (0, 1) reach only every other column
    g = FundamentalGraph(2, (Vertex("v"),), (Edge(0, 0, (2, 0)), Edge(0, 0, (0, 1))))

    check = graph.connectivity_check(g)

    assert not check
    assert check.invariant_factors == [1, 2]
    assert check.lattice_index == 2


def test_connectivity_rank_deficient():
    g = FundamentalGraph(2, (Vertex("v"),), (Edge(0, 0, (1, 0)),))

    check = graph.connectivity_check(g)

    assert not check
    assert check.lattice_index == 0


def test_gauge_transform_keeps_spectrum():
    rng = np.random.default_rng(11)
    g = graph.build_diamond(0.7)
    moved = graph.gauge_transform(g, 1, (2, -1, 3))

    assert moved != g
    for _ in range(20):
        k = rng.uniform(-np.pi, np.pi, size=3)
        assert np.allclose(band_functions(moved, k), band_functions(g, k), atol=1e-12)


def test_gauge_transform_leaves_loops():
    g = graph.build_triangular()

    assert graph.gauge_transform(g, 0, (4, 5)) == g


def test_quotient_primitive_view():
    view = graph.quotient_primitive(graph.build_hexagonal(), [[2, 3]])

    assert view.residual_dimension == 1
    kappa = np.linspace(-np.pi, np.pi, 7)[:, None]
    k = view.quasimomenta(kappa)
    assert np.allclose(k @ np.array([2.0, 3.0]), 0.0, atol=1e-12)
    assert np.allclose(view.residual_coordinates(k)[1:-1], kappa[1:-1], atol=1e-12)


def test_quotient_primitive_not_primitive():
    with pytest.raises(NotPrimitive):
        graph.quotient_primitive(graph.build_hexagonal(), [[2, 0]])


def test_quotient_primitive_wrong_columns():
    with pytest.raises(WrongShape):
        graph.quotient_primitive(graph.build_hexagonal(), [[1, 0, 0]])


def test_quotient_primitive_bad_completion():
    with pytest.raises(ValidationError):
        graph.quotient_primitive(
            graph.build_hexagonal(), [[2, 3]], completion=[[1, 1], [2, 3]]
        )


def test_quotient_general_zigzag():
    sub = graph.quotient_general(graph.build_hexagonal(), [[2, 0]])

    assert sub.dimension == 1
    assert sub.num_vertices == 4
    assert len(sub.edges) == 6
    assert [v.label for v in sub.vertices] == ["v1@0", "v1@1", "v2@0", "v2@1"]
    assert graph.connectivity_check(sub)


@pytest.mark.parametrize("T", [[[2, 0]], [[3, 0]]])
def test_quotient_general_spectrum_is_union(T):
    base = graph.build_hexagonal(0.5)
    sub = graph.quotient_general(base, T)
    n = T[0][0]
    shifts = [2 * np.pi * r / n for r in range(n)]

    assert sub.num_vertices == n * base.num_vertices
    for kappa in np.linspace(-3.0, 3.0, 9):
        expected = np.sort(
            np.concatenate([band_functions(base, [s, kappa]) for s in shifts])
        )
        assert np.allclose(band_functions(sub, [kappa]), expected, atol=1e-10)


def test_quotient_general_matches_primitive_view():
    rng = np.random.default_rng(12)
    base = graph.build_diamond(1.5)
    T = [[1, 2, -1], [0, 3, 1]]

    sub = graph.quotient_general(base, T)
    view = graph.quotient_primitive(base, T)

    assert sub.num_vertices == base.num_vertices
    for _ in range(10):
        kappa = rng.uniform(-np.pi, np.pi, size=1)
        k = view.quasimomenta(kappa)[0]
        assert np.allclose(floquet_matrix(sub, kappa), floquet_matrix(base, k))


def test_build_hypercubic_one_dimension():
    g = graph.build_hypercubic(1)

    assert g.num_vertices == 1
    assert [e.offset for e in g.edges] == [(1,)]


def test_quotient_primitive_identity_rows():
    view = graph.quotient_primitive(graph.build_hypercubic(3), [[1, 0, 0], [0, 1, 0]])

    assert view.residual_dimension == 1
    assert np.allclose(view.quasimomenta(np.array([[0.7]])), [[0.0, 0.0, 0.7]])


def test_quotient_primitive_cubic_residual_dimension():
    view = graph.quotient_primitive(graph.build_hypercubic(3), [[1, 5, -1], [4, 1, 0]])

    assert view.residual_dimension == 1


def test_quotient_general_square_three_cosets():
    base = graph.build_hypercubic(2)
    sub = graph.quotient_general(base, [[3, 0]])

    assert sub.num_vertices == 3
    for kappa in np.linspace(-3.0, 3.0, 7):
        expected = np.sort(
            [band_functions(base, [2 * np.pi * j / 3, kappa])[0] for j in range(3)]
        )
        assert np.allclose(band_functions(sub, [kappa]), expected, atol=1e-10)
