# Band edges, spectrum sets and inclusion checks
#
# Band edges are found in two stages: a scan of a uniform zone grid picks
# the best local extrema of each band, then all of them are zoomed in
# lockstep on a 5-point-per-axis stencil whose window halves every level.
# The same engine runs over the full zone and over the residual torus of a
# subcovering, where points are mapped to full quasimomenta first.

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .asymptotics import nearest_in_zone
from .errors import GridTooLarge, WrongShape
from .floquet import DEFAULT_MAX_CELLS, band_functions_batch, grid_counts, zone_grid
from .graph import connectivity_check
from .utils import chunks, parallel_map, periodic_distance, warn, wrap_to_zone

logger = logging.getLogger(__name__)

DEFAULT_GRID = 64
DEFAULT_REFINE = 1e-10
DEFAULT_FLAT_TOL = 1e-8
DEFAULT_MAX_LEVELS = 40
DEFAULT_MAX_CANDIDATES = 40
TIE_RADIUS = 1e-3
MAX_CLUSTERS = 32
STENCIL_POINTS = 5
SCAN_BATCH = 8192

# seeding of restricted-zone searches from a coarse full-zone scan
SEED_CELLS = 20000
SEED_GRID = 24
SEED_CANDIDATES = 8


@dataclass(frozen=True, eq=False)
class BandEdge:
    """Range [lower, upper] of band `band` (1-based).

    `argmin` and `argmax` hold one representative quasimomentum per
    cluster of near-optimal points; `residual` bounds the stencil spread
    at the final zoom level.
    """

    band: int
    lower: float
    upper: float
    argmin: tuple = ()
    argmax: tuple = ()
    residual: float = 0.0
    lower_history: tuple = ()
    upper_history: tuple = ()
    lower_isolated: bool = True
    upper_isolated: bool = True

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def to_dict(self):
        return {
            "type": "BandEdge",
            "band": self.band,
            "lower": self.lower,
            "upper": self.upper,
            "argmin": [list(map(float, k)) for k in self.argmin],
            "argmax": [list(map(float, k)) for k in self.argmax],
            "residual": self.residual,
            "lower_isolated": self.lower_isolated,
            "upper_isolated": self.upper_isolated,
        }


class _Side:
    def __init__(self, value, points, history, residual, isolated):
        self.value = value
        self.points = points
        self.history = history
        self.residual = residual
        self.isolated = isolated


def _scan(evaluate, counts, max_cells, workers):
    cells = math.prod(counts)
    if cells > max_cells:
        raise GridTooLarge(f"grid {counts} has {cells} cells, limit is {max_cells}")
    points = zone_grid(counts)
    values = np.concatenate(parallel_map(evaluate, chunks(points, SCAN_BATCH), workers))
    logger.debug("scanned %d grid points", cells)
    return points, values


def _local_minima(values, counts, limit):
    """Flat indices of grid points not above their axis neighbours, best
    first. The grid is periodic."""
    grid = values.reshape(counts)
    mask = np.ones(grid.shape, dtype=bool)
    for axis, n in enumerate(counts):
        if n > 1:
            mask &= grid <= np.roll(grid, 1, axis=axis)
            mask &= grid <= np.roll(grid, -1, axis=axis)
    idx = np.flatnonzero(mask)
    idx = idx[np.argsort(values[idx], kind="stable")]
    return idx[:limit]


def _stencil(dimension):
    axis = np.linspace(-1.0, 1.0, STENCIL_POINTS)
    mesh = np.meshgrid(*([axis] * dimension), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def _zoom(evaluate, column, centers, spacing, refine, max_levels):
    """Minimize `column` of evaluate() starting from each center.

    Returns final centers, their values, the level history of the best
    value and the stencil spread of the best candidate.
    """
    n, m = centers.shape
    stencil = _stencil(m)
    values = evaluate(centers)[:, column]
    history = [float(values.min())]
    window = np.asarray(spacing, dtype=float)
    residual = math.inf
    rows = np.arange(n)

    for level in range(max_levels):
        points = centers[:, None, :] + stencil[None, :, :] * window
        trial = evaluate(points.reshape(-1, m))[:, column].reshape(n, -1)
        pick = trial.argmin(axis=1)
        centers = points[rows, pick]
        values = trial[rows, pick]
        top = int(values.argmin())
        residual = float(trial[top].max() - values[top])
        best = min(history[-1], float(values[top]))
        change = history[-1] - best
        history.append(best)
        logger.debug(
            "zoom level %d: best %.17g change %.3g spread %.3g",
            level,
            best,
            change,
            residual,
        )
        window = window / 2
        if change < refine and residual < refine:
            break
    return centers, values, history, residual


def _cluster(points, radius):
    reps = []
    for p in points:
        if all(periodic_distance(p, r) > radius for r in reps):
            reps.append(p)
    return reps


def _search(
    evaluate,
    to_quasimomentum,
    counts,
    refine,
    max_levels,
    max_candidates,
    tie_radius,
    workers,
    max_cells,
    seeds=None,
):
    points, values = _scan(evaluate, counts, max_cells, workers)
    spacing = 2 * np.pi / np.array(counts, dtype=float)
    tie = max(100 * refine, 1e-9)
    edges = []

    for j in range(values.shape[1]):
        sides = {}
        for sign in (1, -1):
            idx = _local_minima(sign * values[:, j], counts, max_candidates)
            centers = points[idx]
            if seeds and (j, sign) in seeds:
                centers = np.vstack([centers, seeds[(j, sign)]])

            def signed(ks, sign=sign):
                return sign * evaluate(ks)

            centers, best, history, residual = _zoom(
                signed, j, centers, spacing, refine, max_levels
            )
            order = np.argsort(best, kind="stable")
            value = float(best[order[0]])
            tied = [i for i in order if best[i] <= value + tie]
            arg = wrap_to_zone(to_quasimomentum(centers[tied]))
            clusters = _cluster(arg, tie_radius)
            sides[sign] = _Side(
                sign * value,
                tuple(clusters),
                tuple(sign * h for h in history),
                residual,
                len(clusters) <= MAX_CLUSTERS,
            )
        low, high = sides[1], sides[-1]
        edges.append(
            BandEdge(
                band=j + 1,
                lower=low.value,
                upper=max(high.value, low.value),
                argmin=low.points,
                argmax=high.points,
                residual=max(low.residual, high.residual),
                lower_history=low.history,
                upper_history=high.history,
                lower_isolated=low.isolated,
                upper_isolated=high.isolated,
            )
        )
        logger.debug("band %d: [%.17g, %.17g]", j + 1, low.value, high.value)
    return edges


def band_edges(
    graph,
    grid=DEFAULT_GRID,
    refine=DEFAULT_REFINE,
    max_levels=DEFAULT_MAX_LEVELS,
    max_candidates=DEFAULT_MAX_CANDIDATES,
    tie_radius=TIE_RADIUS,
    workers=1,
    max_cells=DEFAULT_MAX_CELLS,
):
    """Global minimum and maximum of every band over the Brillouin zone"""
    check = connectivity_check(graph)
    if not check:
        warn(f"periodic graph is not connected: {check.reason}")
    counts = grid_counts(grid, graph.dimension)
    return _search(
        lambda ks: band_functions_batch(graph, ks),
        lambda ks: ks,
        counts,
        refine,
        max_levels,
        max_candidates,
        tie_radius,
        workers,
        max_cells,
    )


def _restricted_seeds(view, max_cells, workers):
    """Full-zone extrema moved to the nearest points of the restricted zone,
    in residual coordinates, keyed by (band index, sign)"""
    graph = view.base
    d = graph.dimension
    n = max(4, min(SEED_GRID, int(SEED_CELLS ** (1.0 / d))))
    counts = (n,) * d
    points, values = _scan(
        lambda ks: band_functions_batch(graph, ks), counts, max_cells, workers
    )
    T = np.array(view.chiral, dtype=float)
    seeds = {}
    for j in range(values.shape[1]):
        for sign in (1, -1):
            idx = _local_minima(sign * values[:, j], counts, SEED_CANDIDATES)
            k = nearest_in_zone(points[idx], T)
            seeds[(j, sign)] = view.residual_coordinates(k)
    return seeds


def subcovering_band_edges(
    view,
    grid=DEFAULT_GRID,
    refine=DEFAULT_REFINE,
    max_levels=DEFAULT_MAX_LEVELS,
    max_candidates=DEFAULT_MAX_CANDIDATES,
    tie_radius=TIE_RADIUS,
    workers=1,
    max_cells=DEFAULT_MAX_CELLS,
    seeded=True,
):
    """Band edges of a subcovering: the band functions of the base graph
    restricted to the quasimomenta k = M kappa.

    Arg points are reported as full quasimomenta.
    """
    counts = grid_counts(grid, view.residual_dimension)
    seeds = _restricted_seeds(view, max_cells, workers) if seeded else None
    return _search(
        lambda kappa: band_functions_batch(view.base, view.quasimomenta(kappa)),
        view.quasimomenta,
        counts,
        refine,
        max_levels,
        max_candidates,
        tie_radius,
        workers,
        max_cells,
        seeds,
    )


@dataclass(frozen=True)
class SpectrumSet:
    """Union of closed intervals plus flat bands listed as (value, band)"""

    intervals: tuple = ()
    flat_bands: tuple = field(default=())

    def contains(self, x, tol=0.0) -> bool:
        return any(lo - tol <= x <= hi + tol for lo, hi in self.intervals) or any(
            abs(x - v) <= tol for v, _ in self.flat_bands
        )

    def components(self, tol=0.0):
        """Disjoint sorted components of the whole set, widened by tol"""
        pieces = sorted(
            [(lo - tol, hi + tol) for lo, hi in self.intervals]
            + [(v - tol, v + tol) for v, _ in self.flat_bands]
        )
        merged = []
        for lo, hi in pieces:
            if merged and lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        return [tuple(c) for c in merged]

    def gaps(self):
        """Open gaps between consecutive components"""
        c = self.components()
        return [(a[1], b[0]) for a, b in zip(c, c[1:])]

    def to_dict(self):
        return {
            "type": "SpectrumSet",
            "intervals": [list(i) for i in self.intervals],
            "flat_bands": [{"value": v, "band": j} for v, j in self.flat_bands],
        }


def spectrum_set(edges, flat_tol=DEFAULT_FLAT_TOL, touch_tol=None) -> SpectrumSet:
    """Merge band ranges into a spectrum set.

    Bands narrower than flat_tol are listed as flat bands; the others
    become intervals, merged when they overlap or touch within touch_tol
    (flat_tol by default).
    """
    touch = flat_tol if touch_tol is None else touch_tol
    flat = tuple(
        (0.5 * (e.lower + e.upper), e.band) for e in edges if e.width < flat_tol
    )
    merged = []
    for lo, hi in sorted((e.lower, e.upper) for e in edges if e.width >= flat_tol):
        if merged and lo <= merged[-1][1] + touch:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return SpectrumSet(tuple(tuple(i) for i in merged), flat)


class InclusionResult:
    """Truthy when the inclusion holds; `witness` is a point of the first
    set outside the second, or the midpoint of a gap of the second set
    that an interval of the first one crosses."""

    def __init__(self, included, witness=None):
        self.included = included
        self.witness = witness

    def __bool__(self):
        return self.included

    def to_dict(self):
        return {"included": self.included, "witness": self.witness}


def inclusion_check(sub, full, tol=1e-6) -> InclusionResult:
    """Whether the spectrum set `sub` lies in `full` up to tol"""
    components = full.components(tol)

    def locate(x):
        for i, (lo, hi) in enumerate(components):
            if lo <= x <= hi:
                return i
        return None

    for lo, hi in sub.intervals:
        i = locate(lo)
        if i is None:
            return InclusionResult(False, lo)
        if hi > components[i][1]:
            if i + 1 < len(components) and hi >= components[i + 1][0]:
                return InclusionResult(
                    False, 0.5 * (components[i][1] + components[i + 1][0])
                )
            return InclusionResult(False, hi)
    for value, _ in sub.flat_bands:
        if locate(value) is None:
            return InclusionResult(False, value)
    return InclusionResult(True)


def bandwise_inclusion(sub_edges, full_edges, tol=1e-6):
    """Bands j whose range over the subcovering leaves the range of band j
    over the full zone. Empty when every band is included."""
    if len(sub_edges) != len(full_edges):
        raise WrongShape(
            f"{len(sub_edges)} subcovering bands against {len(full_edges)} bands"
        )
    return [
        s.band
        for s, f in zip(sub_edges, full_edges)
        if s.lower < f.lower - tol or s.upper > f.upper + tol
    ]
