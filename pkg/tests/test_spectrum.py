import math

import numpy as np
import pytest

from chiralband import graph, spectrum
from chiralband.errors import GridTooLarge, WrongShape
from chiralband.floquet import band_functions
from chiralband.graph import FundamentalGraph, Vertex
from chiralband.spectrum import BandEdge, SpectrumSet
import oracles


def hexagonal_range(q):
    r = math.sqrt(9 + q * q)
    return [(3 - r, 3 - q), (3 + q, 3 + r)]


@pytest.mark.parametrize("q", [0.5, 1.0, 2.0])
def test_hexagonal_band_edges(q):
    edges = spectrum.band_edges(graph.build_hexagonal(q), grid=101, refine=1e-10)

    assert [e.band for e in edges] == [1, 2]
    for e, (lo, hi) in zip(edges, hexagonal_range(q)):
        assert math.isclose(e.lower, lo, abs_tol=1e-8)
        assert math.isclose(e.upper, hi, abs_tol=1e-8)


def test_arg_points_reproduce_values():
    g = graph.build_hexagonal(1.0)
    edges = spectrum.band_edges(g, grid=101)

    for e in edges:
        for k in e.argmin:
            assert math.isclose(band_functions(g, k)[e.band - 1], e.lower, abs_tol=1e-8)
        for k in e.argmax:
            assert math.isclose(band_functions(g, k)[e.band - 1], e.upper, abs_tol=1e-8)


def test_hexagonal_level_set_clusters():
    edges = spectrum.band_edges(graph.build_hexagonal(1.0), grid=64)

    # band 1 peaks at both Dirac points
    peaks = sorted(tuple(np.round(k / np.pi * 3).astype(int)) for k in edges[0].argmax)
    assert peaks == [(-2, 2), (2, -2)]
    assert len(edges[0].argmin) == 1
    assert np.allclose(edges[0].argmin[0], 0.0, atol=1e-4)
    assert edges[0].lower_isolated and edges[0].upper_isolated


def test_hypercubic_band_edges():
    edges = spectrum.band_edges(graph.build_hypercubic(3))

    assert len(edges) == 1
    assert math.isclose(edges[0].lower, 0.0, abs_tol=1e-10)
    assert math.isclose(edges[0].upper, 12.0, abs_tol=1e-10)


def test_histories_are_monotone():
    edges = spectrum.band_edges(graph.build_diamond(1.0), grid=16)

    for e in edges:
        assert all(a >= b for a, b in zip(e.lower_history, e.lower_history[1:]))
        assert all(a <= b for a, b in zip(e.upper_history, e.upper_history[1:]))
        assert e.lower <= e.upper


def test_isolated_vertex_is_flat():
    g = FundamentalGraph(1, (Vertex("v", 2.5),), ())

    with pytest.warns(RuntimeWarning, match="not connected"):
        edges = spectrum.band_edges(g, grid=8)

    assert edges[0].lower == edges[0].upper == 2.5
    assert spectrum.spectrum_set(edges).flat_bands == ((2.5, 1),)


def test_grid_too_large():
    with pytest.raises(GridTooLarge):
        spectrum.band_edges(graph.build_diamond(), grid=300)


def test_spectrum_set_merges_overlap():
    s = spectrum.spectrum_set([BandEdge(1, 0.0, 1.0), BandEdge(2, 0.5, 2.0)])

    assert s.intervals == ((0.0, 2.0),)
    assert s.flat_bands == ()


def test_spectrum_set_merges_touching():
    s = spectrum.spectrum_set([BandEdge(1, 0.0, 1.0), BandEdge(2, 1.0, 2.0)])

    assert s.intervals == ((0.0, 2.0),)


def test_spectrum_set_keeps_gap():
    s = spectrum.spectrum_set([BandEdge(2, 1.5, 2.0), BandEdge(1, 0.0, 1.0)])

    assert s.intervals == ((0.0, 1.0), (1.5, 2.0))
    assert s.gaps() == [(1.0, 1.5)]
    assert s.contains(1.75)
    assert not s.contains(1.2)


def test_spectrum_set_to_dict():
    s = SpectrumSet(((0.0, 1.0),), ((3.0, 2),))

    assert s.to_dict() == {
        "type": "SpectrumSet",
        "intervals": [[0.0, 1.0]],
        "flat_bands": [{"value": 3.0, "band": 2}],
    }


def test_inclusion_holds():
    full = SpectrumSet(((0.0, 1.0), (2.0, 3.0)))
    sub = SpectrumSet(((0.2, 0.8), (2.0, 2.5)), ((2.9, 1),))

    assert spectrum.inclusion_check(sub, full)


def test_inclusion_gap_witness():
    full = SpectrumSet(((0.0, 1.0), (1.2, 2.0)))
    sub = SpectrumSet(((0.5, 1.5),))

    result = spectrum.inclusion_check(sub, full)

    assert not result
    assert math.isclose(result.witness, 1.1, abs_tol=1e-6)


def test_inclusion_endpoint_witness():
    full = SpectrumSet(((0.0, 1.0),))

    result = spectrum.inclusion_check(SpectrumSet(((-0.5, 0.5),)), full)
    assert not result
    assert result.witness == -0.5

    result = spectrum.inclusion_check(SpectrumSet((), ((4.0, 1),)), full)
    assert not result
    assert result.witness == 4.0


def test_bandwise_inclusion():
    full = [BandEdge(1, 0.0, 1.0), BandEdge(2, 2.0, 3.0)]

    inside = [BandEdge(1, 0.1, 1.0), BandEdge(2, 2.0, 2.5)]
    outside = [BandEdge(1, 0.0, 1.0), BandEdge(2, 1.5, 2.5)]

    assert spectrum.bandwise_inclusion(inside, full) == []
    assert spectrum.bandwise_inclusion(outside, full) == [2]
    with pytest.raises(WrongShape):
        spectrum.bandwise_inclusion(full[:1], full)


@pytest.mark.parametrize("t", [(5, 2), (1, 1), (4, 1)])
def test_subcovering_isospectral_chiral_vector(t):
    # t_1 - t_2 = 0 mod 3 keeps both Dirac points in the restricted zone
    g = graph.build_hexagonal(1.0)
    full = spectrum.band_edges(g, grid=64)
    sub = spectrum.subcovering_band_edges(graph.quotient_primitive(g, [list(t)]))

    assert len(sub) == len(full) == 2
    for f, s in zip(full, sub):
        assert math.isclose(s.lower, f.lower, abs_tol=1e-8)
        assert math.isclose(s.upper, f.upper, abs_tol=1e-8)


def test_subcovering_opens_gap():
    g = graph.build_hexagonal(1.0)
    sub = spectrum.subcovering_band_edges(graph.quotient_primitive(g, [[2, 3]]))

    assert math.isclose(sub[0].lower, 3 - math.sqrt(10), abs_tol=1e-8)
    assert math.isclose(sub[1].upper, 3 + math.sqrt(10), abs_tol=1e-8)
    assert sub[0].upper < 2.0 - 1e-3
    assert sub[1].lower > 4.0 + 1e-3


def test_subcovering_arg_points_in_zone():
    g = graph.build_hexagonal(1.0)
    T = np.array([2.0, 3.0])
    sub = spectrum.subcovering_band_edges(graph.quotient_primitive(g, [[2, 3]]))

    for e in sub:
        for k in e.argmin + e.argmax:
            x = float(T @ k) / (2 * np.pi)
            assert math.isclose(x, round(x), abs_tol=1e-9)


def test_subcovering_cubic_against_dense_scan():
    view = graph.quotient_primitive(graph.build_hypercubic(3), [[1, 5, -1], [4, 1, 0]])
    M = view.residual_map[:, 0]

    sub = spectrum.subcovering_band_edges(view, grid=512)

    assert sorted(abs(M).tolist()) == [1.0, 4.0, 19.0]
    kappa = np.linspace(-np.pi, np.pi, 200001)
    dense = 6 - 2 * np.cos(np.outer(kappa, M)).sum(axis=1)
    assert math.isclose(sub[0].upper, dense.max(), abs_tol=1e-6)
    assert sub[0].upper >= dense.max() - 1e-9
    assert math.isclose(sub[0].upper, 11.34, abs_tol=0.01)
    assert math.isclose(sub[0].lower, 0.0, abs_tol=1e-10)


def test_subcovering_completion_independent():
    g = graph.build_hexagonal(1.0)
    a = spectrum.subcovering_band_edges(graph.quotient_primitive(g, [[2, 3]]))
    b = spectrum.subcovering_band_edges(
        graph.quotient_primitive(g, [[2, 3]], completion=[[2, 3], [1, 1]])
    )

    for x, y in zip(a, b):
        assert math.isclose(x.lower, y.lower, abs_tol=1e-9)
        assert math.isclose(x.upper, y.upper, abs_tol=1e-9)


def test_random_subcoverings_bandwise_included():
    rng = np.random.default_rng(31)
    cases = [(graph.build_hexagonal(1.0), 1, 20), (graph.build_diamond(2.0), 2, 5)]
    for g, rows, samples in cases:
        full = spectrum.band_edges(g, grid=32)
        for _ in range(samples):
            T = oracles.random_primitive(rng, rows, g.dimension)
            sub = spectrum.subcovering_band_edges(graph.quotient_primitive(g, T))

            assert spectrum.bandwise_inclusion(sub, full, tol=1e-6) == []
            # the lowest point k = 0 survives every rolling
            assert math.isclose(sub[0].lower, full[0].lower, abs_tol=1e-8)


def test_zigzag_spectrum_set():
    sub = graph.quotient_general(graph.build_hexagonal(1.0), [[2, 0]])

    s = spectrum.spectrum_set(spectrum.band_edges(sub, grid=64))

    r2, r10 = math.sqrt(2), math.sqrt(10)
    assert len(s.intervals) == 2
    assert np.allclose(s.intervals, [(3 - r10, 3 - r2), (3 + r2, 3 + r10)], atol=1e-8)
    assert [j for _, j in s.flat_bands] == [2, 3]
    assert np.allclose([v for v, _ in s.flat_bands], [3 - r2, 3 + r2], atol=1e-8)

    full = spectrum.spectrum_set(spectrum.band_edges(graph.build_hexagonal(1.0)))
    assert spectrum.inclusion_check(s, full)


def test_inclusion_outside_full_range():
    full = SpectrumSet(((0.0, 4.0),))

    result = spectrum.inclusion_check(SpectrumSet(((0.0, 5.0),)), full)

    assert not result
    assert result.witness == 5.0


def test_hexagonal_spectrum_gap():
    s = spectrum.spectrum_set(spectrum.band_edges(graph.build_hexagonal(1.0), grid=32))

    assert len(s.intervals) == 2
    (gap,) = s.gaps()
    assert np.allclose(gap, (2.0, 4.0), atol=1e-8)
