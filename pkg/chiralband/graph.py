# Periodic graphs through their fundamental graphs
#
# A Z^d-periodic graph is stored as one record per vertex orbit (label and
# potential) and one record per edge orbit. The directed record
# Edge(u, v, beta) stands for the undirected edge joining u in cell 0 to v
# in cell beta; loops (u == v, beta != 0) and multiple edges are allowed.

import itertools
import logging
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import intlat
from .errors import NotPrimitive, ParseError, ValidationError, WrongShape
from .utils import warn, wrap_to_zone

logger = logging.getLogger(__name__)

MAX_OFFSET = 10**6


@dataclass(frozen=True)
class Vertex:
    label: str
    potential: float = 0.0


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    offset: tuple

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class FundamentalGraph:
    """Finite quotient of a periodic graph. Immutable and hashable."""

    dimension: int
    vertices: tuple
    edges: tuple

    def __post_init__(self):
        vertices = tuple(
            v if isinstance(v, Vertex) else Vertex(*v) for v in self.vertices
        )
        edges = tuple(e if isinstance(e, Edge) else Edge(*e) for e in self.edges)
        edges = tuple(
            Edge(int(e.tail), int(e.head), tuple(int(b) for b in e.offset))
            for e in edges
        )
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)

        if self.dimension < 1:
            raise ValidationError(f"dimension must be >= 1, got {self.dimension}")
        if not vertices:
            raise ValidationError("a fundamental graph needs at least one vertex")
        labels = [v.label for v in vertices]
        if len(set(labels)) != len(labels):
            raise ValidationError(f"duplicate vertex labels in {labels}")
        for v in vertices:
            if not math.isfinite(v.potential):
                raise ValidationError(f"potential of {v.label!r} is not finite")
        for i, e in enumerate(edges):
            if not (0 <= e.tail < len(vertices) and 0 <= e.head < len(vertices)):
                raise ValidationError(f"edge {i} references a missing vertex")
            if len(e.offset) != self.dimension:
                raise ValidationError(
                    f"edge {i} offset has length {len(e.offset)}, "
                    f"expected {self.dimension}"
                )
            if any(abs(b) > MAX_OFFSET for b in e.offset):
                raise ValidationError(f"edge {i} offset exceeds {MAX_OFFSET}")

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def potentials(self) -> np.ndarray:
        return np.array([v.potential for v in self.vertices], dtype=float)

    def index_of(self, label) -> int:
        for i, v in enumerate(self.vertices):
            if v.label == label:
                return i
        raise KeyError(label)

    def degrees(self) -> np.ndarray:
        """Vertex degrees in the periodic graph; a loop counts twice"""
        deg = np.zeros(self.num_vertices, dtype=int)
        for e in self.edges:
            deg[e.tail] += 1
            deg[e.head] += 1
        return deg

    def to_dict(self):
        return {
            "type": "FundamentalGraph",
            "dimension": self.dimension,
            "vertices": [
                {"label": v.label, "potential": v.potential} for v in self.vertices
            ],
            "edges": [
                {
                    "tail": self.vertices[e.tail].label,
                    "head": self.vertices[e.head].label,
                    "offset": list(e.offset),
                }
                for e in self.edges
            ],
        }

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise ParseError("graph description must be a JSON object")
        if d.get("type", "FundamentalGraph") != "FundamentalGraph":
            raise ValueError(f"Expecting type FundamentalGraph, got {d['type']}")

        dimension = d.get("dimension")
        if isinstance(dimension, bool) or not isinstance(dimension, int):
            raise ParseError("dimension must be an integer", field="dimension")

        vertices = []
        for i, v in enumerate(d.get("vertices", [])):
            field = f"vertices[{i}]"
            if "label" not in v:
                raise ParseError("vertex without label", field=field)
            potential = v.get("potential", 0.0)
            if isinstance(potential, bool) or not isinstance(potential, (int, float)):
                raise ParseError("potential must be a number", field=field)
            vertices.append(Vertex(str(v["label"]), float(potential)))

        labels = {v.label: i for i, v in enumerate(vertices)}
        if len(labels) != len(vertices):
            raise ParseError("duplicate vertex labels", field="vertices")

        edges = []
        for i, e in enumerate(d.get("edges", [])):
            field = f"edges[{i}]"
            try:
                tail, head = labels[str(e["tail"])], labels[str(e["head"])]
            except KeyError as ex:
                raise ParseError(f"unknown or missing vertex {ex}", field=field)
            offset = e.get("offset")
            if not isinstance(offset, list) or len(offset) != dimension:
                raise ParseError(
                    f"offset must be a list of {dimension} integers", field=field
                )
            if any(isinstance(b, bool) or not isinstance(b, int) for b in offset):
                raise ParseError("offset entries must be integers", field=field)
            edges.append(Edge(tail, head, tuple(offset)))

        try:
            return cls(dimension, tuple(vertices), tuple(edges))
        except ValidationError as ex:
            raise ParseError(str(ex))

    def __str__(self):
        return (
            f"FundamentalGraph(d={self.dimension}, {self.num_vertices} vertices, "
            f"{len(self.edges)} edges)"
        )


#
# builders
#


def build_hypercubic(d: int) -> FundamentalGraph:
    """Z^d lattice: one vertex with a loop per coordinate direction"""
    edges = [Edge(0, 0, tuple(int(i == s) for i in range(d))) for s in range(d)]
    return FundamentalGraph(d, (Vertex("v"),), tuple(edges))


def build_hexagonal(q: float = 1.0) -> FundamentalGraph:
    """Honeycomb lattice with potentials +q and -q on the two sublattices"""
    vertices = (Vertex("v1", q), Vertex("v2", -q))
    edges = tuple(Edge(0, 1, b) for b in ((0, 0), (1, 0), (0, 1)))
    return FundamentalGraph(2, vertices, edges)


def build_diamond(q: float = 1.0) -> FundamentalGraph:
    vertices = (Vertex("v1", q), Vertex("v2", -q))
    offsets = ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1))
    return FundamentalGraph(3, vertices, tuple(Edge(0, 1, b) for b in offsets))


def build_triangular() -> FundamentalGraph:
    offsets = ((1, 0), (0, 1), (1, 1))
    return FundamentalGraph(2, (Vertex("v"),), tuple(Edge(0, 0, b) for b in offsets))


#
# connectivity
#


class Connectivity:
    """Outcome of connectivity_check; truthy iff the periodic graph is
    connected.

    `components` lists the vertex indices of each component of the
    fundamental graph, `invariant_factors` the Smith factors of the
    lattice spanned by cycle offsets. Both double as the witness when the
    check fails.
    """

    def __init__(self, components, invariant_factors, dimension):
        self.components = components
        self.invariant_factors = invariant_factors
        self.dimension = dimension

    @property
    def connected(self) -> bool:
        return (
            len(self.components) == 1
            and len(self.invariant_factors) == self.dimension
            and all(s == 1 for s in self.invariant_factors)
        )

    def __bool__(self):
        return self.connected

    @property
    def reason(self) -> str:
        if len(self.components) > 1:
            return f"fundamental graph has {len(self.components)} components"
        if len(self.invariant_factors) < self.dimension:
            return (
                f"cycle offsets span rank {len(self.invariant_factors)} "
                f"< {self.dimension}"
            )
        if not self.connected:
            return f"cycle offsets span a sublattice of index {self.lattice_index}"
        return "connected"

    @property
    def lattice_index(self) -> int:
        if len(self.invariant_factors) < self.dimension:
            return 0
        return math.prod(self.invariant_factors)


def connectivity_check(graph: FundamentalGraph) -> Connectivity:
    """Connectivity of the periodic graph.

    The quotient must be connected and the offsets of its cycles, taken
    along a spanning tree, must generate all of Z^d.
    """
    n = graph.num_vertices
    adjacency = [[] for _ in range(n)]
    for i, e in enumerate(graph.edges):
        adjacency[e.tail].append((i, e.head, 1))
        adjacency[e.head].append((i, e.tail, -1))

    position = [None] * n
    tree = set()
    components = []
    for root in range(n):
        if position[root] is not None:
            continue
        position[root] = np.zeros(graph.dimension, dtype=object)
        component = [root]
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for i, w, sign in adjacency[u]:
                if position[w] is None:
                    offset = np.array(graph.edges[i].offset, dtype=object)
                    position[w] = position[u] + sign * offset
                    tree.add(i)
                    component.append(w)
                    queue.append(w)
        components.append(sorted(component))

    factors = []
    if len(components) == 1:
        cycles = [
            position[e.tail] + np.array(e.offset, dtype=object) - position[e.head]
            for i, e in enumerate(graph.edges)
            if i not in tree
        ]
        cycles = [c for c in cycles if any(c)]
        if cycles:
            snf = intlat.smith_normal_form(np.array(cycles, dtype=object))
            factors = [s for s in snf.invariant_factors if s != 0]

    result = Connectivity(components, factors, graph.dimension)
    logger.debug("connectivity of %s: %s", graph, result.reason)
    return result


def gauge_transform(graph: FundamentalGraph, vertex: int, g) -> FundamentalGraph:
    """Move the representative of `vertex` by the lattice vector g.

    Offsets of edges leaving the vertex grow by g, offsets of edges
    entering it shrink by g; loops are unchanged. The periodic graph, and
    so its spectrum, stays the same.
    """
    g = tuple(int(x) for x in g)
    if len(g) != graph.dimension:
        raise WrongShape(f"gauge vector must have length {graph.dimension}")
    edges = []
    for e in graph.edges:
        sign = (e.tail == vertex) - (e.head == vertex)
        offset = tuple(b + sign * x for b, x in zip(e.offset, g))
        edges.append(Edge(e.tail, e.head, offset))
    return FundamentalGraph(graph.dimension, graph.vertices, tuple(edges))


#
# subcoverings
#


class SubcoveringView:
    """The subcovering of `base` cut out by a primitive chiral matrix.

    Its Floquet matrices are those of the base graph at k = M kappa, where
    kappa runs over the residual torus (-pi, pi]^(d - d_o) and M is the
    residual map of the unimodular completion.
    """

    def __init__(self, base, chiral, completion):
        self.base = base
        self.chiral = chiral
        self.completion = completion

    @property
    def residual_dimension(self) -> int:
        return self.base.dimension - self.chiral.shape[0]

    @property
    def residual_map(self) -> np.ndarray:
        return np.array(self.completion.residual_map(), dtype=float)

    def quasimomenta(self, kappa) -> np.ndarray:
        """Full quasimomenta k = M kappa for a stack of residual points"""
        kappa = np.atleast_2d(np.asarray(kappa, dtype=float))
        return kappa @ self.residual_map.T

    def residual_coordinates(self, k) -> np.ndarray:
        """Residual coordinates of points k that satisfy T k = 0 mod 2 pi"""
        k = np.atleast_2d(np.asarray(k, dtype=float))
        matrix = np.array(self.completion.matrix, dtype=float)
        d_o = self.chiral.shape[0]
        return wrap_to_zone((k @ matrix.T)[:, d_o:])


def quotient_primitive(graph, T, completion=None) -> SubcoveringView:
    T = intlat.as_int_matrix(T)
    if T.shape[1] != graph.dimension:
        raise WrongShape(
            f"chiral matrix has {T.shape[1]} columns, graph dimension is "
            f"{graph.dimension}"
        )
    if not intlat.is_primitive_set(T):
        raise NotPrimitive(f"chiral set {T.tolist()} is not primitive")

    if completion is None:
        completion = intlat.complete_to_basis(T)
    elif not isinstance(completion, intlat.UnimodularCompletion):
        completion = intlat.UnimodularCompletion.from_matrix(completion, T.shape[0])
    if not np.array_equal(completion.chiral, T):
        raise ValidationError(
            "completion does not start with the chiral rows",
            witness=completion.matrix.tolist(),
        )
    return SubcoveringView(graph, T, completion)


def _reduce_coset(c, L):
    """Canonical representative of c modulo the rows of the lower
    triangular L: 0 <= c_i < L_ii"""
    c = list(c)
    for i in reversed(range(len(c))):
        q = c[i] // L[i][i]
        if q:
            c = [x - q * L[i][j] for j, x in enumerate(c)]
    return tuple(c)


def quotient_general(graph, T) -> FundamentalGraph:
    """Explicit fundamental graph of the subcovering for any full-rank T.

    Coordinates come from the Hermite form T W = [L | 0]: an integer
    vector beta becomes b = beta W, whose first d_o entries are read modulo
    the rows of L and whose remaining entries are the new offset. Each
    vertex u turns into one vertex per coset representative r, with
    0 <= r_i < L_ii, so the vertex count is index(T) * nu. For primitive T
    (L = I) the result has the vertex set of the base graph.
    """
    T = intlat.as_int_matrix(T)
    d_o, d = T.shape
    if d != graph.dimension:
        raise WrongShape(
            f"chiral matrix has {d} columns, graph dimension is {graph.dimension}"
        )
    if d_o >= d:
        raise WrongShape("a chiral matrix needs fewer rows than columns")

    L, W = intlat.column_hermite(T)
    L = [[int(x) for x in row] for row in L]
    diagonal = [L[i][i] for i in range(d_o)]
    cosets = list(itertools.product(*(range(s) for s in diagonal)))
    position = {r: i for i, r in enumerate(cosets)}
    m = len(cosets)

    vertices = []
    for v in graph.vertices:
        for r in cosets:
            label = v.label if m == 1 else f"{v.label}@{','.join(map(str, r))}"
            vertices.append(Vertex(label, v.potential))

    edges = []
    for e in graph.edges:
        b = [int(x) for x in np.array(e.offset, dtype=object) @ W]
        shift, residual = b[:d_o], tuple(b[d_o:])
        for i, r in enumerate(cosets):
            target = _reduce_coset([x + y for x, y in zip(r, shift)], L)
            edges.append(Edge(e.tail * m + i, e.head * m + position[target], residual))

    result = FundamentalGraph(d - d_o, tuple(vertices), tuple(edges))
    logger.debug("quotient by %s: %d cosets, %s", T.tolist(), m, result)
    check = connectivity_check(result)
    if not check:
        warn(f"subcovering graph is not connected: {check.reason}")
    return result
