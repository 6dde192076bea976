# Floquet matrices and band functions
#
# For quasimomentum k the Floquet matrix of a fundamental graph is
#
#   H(k)[u, u] = deg(u) + Q(u) - sum over loops at u of 2 cos<beta, k>
#   H(k)[u, v] = - sum over edges (u, v, beta) of exp(i <beta, k>)
#
# and band functions are its eigenvalues in non-decreasing order.

import logging
import math

import numpy as np
from cachetools import LRUCache, cached

from .errors import GridTooLarge, NotHermitian, WrongShape
from .utils import chunks, format_float, parallel_map

logger = logging.getLogger(__name__)

HERMITIAN_ATOL = 1e-12
DEFAULT_MAX_CELLS = 10**7
BATCH_SIZE = 4096


@cached(cache=LRUCache(maxsize=64))
def _assembly(graph):
    """Index arrays for vectorized assembly, computed once per graph"""
    nu = graph.num_vertices
    tails = np.array([e.tail for e in graph.edges], dtype=int)
    heads = np.array([e.head for e in graph.edges], dtype=int)
    offsets = np.array(
        [e.offset for e in graph.edges], dtype=float
    ).reshape(-1, graph.dimension)
    diagonal = graph.degrees() + graph.potentials
    forward = tails * nu + heads
    backward = heads * nu + tails
    for a in (diagonal, offsets, forward, backward):
        a.setflags(write=False)
    return diagonal, offsets, forward, backward


def _quasimomenta(graph, ks):
    ks = np.asarray(ks, dtype=float)
    ks = ks.reshape(-1, graph.dimension) if ks.ndim < 2 else ks
    if ks.ndim != 2 or ks.shape[1] != graph.dimension:
        raise WrongShape(
            f"quasimomenta must have {graph.dimension} components, got shape {ks.shape}"
        )
    if not np.all(np.isfinite(ks)):
        raise ValueError("quasimomentum is not finite")
    return ks


def floquet_matrices(graph, ks) -> np.ndarray:
    """Stack of Floquet matrices, shape (N, nu, nu), for N quasimomenta"""
    ks = _quasimomenta(graph, ks)
    diagonal, offsets, forward, backward = _assembly(graph)
    nu = graph.num_vertices
    n = len(ks)

    H = np.zeros((n, nu * nu), dtype=complex)
    H[:, np.arange(nu) * (nu + 1)] = diagonal
    if len(forward):
        phase = np.exp(1j * (ks @ offsets.T))
        np.add.at(H, (slice(None), forward), -phase)
        np.add.at(H, (slice(None), backward), -phase.conj())
    return H.reshape(n, nu, nu)


def floquet_matrix(graph, k) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    if k.shape != (graph.dimension,):
        raise WrongShape(f"k must have {graph.dimension} components, got {k.shape}")
    return floquet_matrices(graph, k[None, :])[0]


def hermitian_eigenvalues(M) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix (or a stack), ascending"""
    M = np.asarray(M)
    if M.ndim < 2 or M.shape[-1] != M.shape[-2]:
        raise WrongShape(f"expected square matrices, got shape {M.shape}")
    scale = max(1.0, float(np.abs(M).max(initial=0.0)))
    defect = float(np.abs(M - np.conj(np.swapaxes(M, -1, -2))).max(initial=0.0))
    if defect > HERMITIAN_ATOL * scale:
        raise NotHermitian(f"matrix is not Hermitian (defect {defect:.3g})")
    return np.linalg.eigvalsh(M)


def band_functions(graph, k) -> np.ndarray:
    """lambda_1(k) <= ... <= lambda_nu(k)"""
    return hermitian_eigenvalues(floquet_matrix(graph, k))


def band_functions_batch(graph, ks, workers=1) -> np.ndarray:
    """Band functions at N quasimomenta, shape (N, nu), in input order"""
    ks = _quasimomenta(graph, ks)
    if len(ks) <= BATCH_SIZE or workers <= 1:
        return hermitian_eigenvalues(floquet_matrices(graph, ks))
    parts = parallel_map(
        lambda part: hermitian_eigenvalues(floquet_matrices(graph, part)),
        chunks(ks, BATCH_SIZE),
        workers,
    )
    return np.concatenate(parts)


def grid_counts(grid, dimension) -> tuple:
    if isinstance(grid, (int, np.integer)):
        counts = (int(grid),) * dimension
    else:
        counts = tuple(int(n) for n in grid)
    if len(counts) != dimension:
        raise WrongShape(f"grid needs {dimension} counts, got {len(counts)}")
    if any(n < 1 for n in counts):
        raise ValueError(f"grid counts must be positive, got {counts}")
    return counts


def zone_grid(counts) -> np.ndarray:
    """Points k_j = -pi + 2 pi j / n, j = 1..n per axis, row-major"""
    axes = [-np.pi + 2 * np.pi * np.arange(1, n + 1) / n for n in counts]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


class DispersionSample:
    """Band function values on a uniform grid of the Brillouin zone"""

    def __init__(self, counts, points, values):
        self.counts = counts
        self.points = points
        self.values = values

    @property
    def num_bands(self) -> int:
        return self.values.shape[1]

    def band(self, j) -> np.ndarray:
        """Values of band j (1-based) shaped as the grid"""
        return self.values[:, j - 1].reshape(self.counts)

    def header(self):
        d = self.points.shape[1]
        return [f"k_{i + 1}" for i in range(d)] + [
            f"lambda_{j + 1}" for j in range(self.num_bands)
        ]

    def rows(self):
        for k, lam in zip(self.points, self.values):
            yield [format_float(x) for x in k] + [format_float(x) for x in lam]


def sample_dispersion(graph, grid, max_cells=DEFAULT_MAX_CELLS, workers=1):
    counts = grid_counts(grid, graph.dimension)
    cells = math.prod(counts)
    if cells > max_cells:
        raise GridTooLarge(f"grid {counts} has {cells} cells, limit is {max_cells}")
    logger.debug("sampling %s on a %s grid", graph, counts)
    points = zone_grid(counts)
    values = band_functions_batch(graph, points, workers)
    return DispersionSample(counts, points, values)
