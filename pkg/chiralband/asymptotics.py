# Band-edge asymptotics for subcoverings with large chiral vectors
#
# Let band j attain its lower edge at a non-degenerate point k_o with
# Hessian H. For a subcovering with chiral matrix T the restricted zone is
# T k = 0 mod 2 pi; near k_o its nearest point lies at offset x_o =
# T k_o mod 2 pi and the edge of the subcovering moves by
#
#   1/2 |(T H^-1 T^T)^{-1/2} x_o|^2
#
# up to a remainder of order tau^-3, or tau^-4 when every component of k_o
# is 0 or pi. The upper edge is handled with -H and the opposite sign.

import logging
from fractions import Fraction

import numpy as np

from . import intlat
from .errors import (
    BandTouching,
    NotPositiveDefinite,
    NotPrimitive,
    RankDeficient,
    WrongShape,
)
from .floquet import band_functions, band_functions_batch
from .iso import RationalQuasimomentum, reduce_half_open
from .utils import periodic_distance, warn, wrap_to_zone

logger = logging.getLogger(__name__)

DEFAULT_STEP = 1e-3
DEFAULT_GAP_TOL = 1e-6
RATIONAL_DENOMINATOR = 12
SNAP_TOL = 1e-6
PD_TOL = 1e-12
UNIQUENESS_RADIUS = 1e-2


def _second_differences(graph, j, k_o, h):
    d = len(k_o)
    eye = np.eye(d) * h
    points = [k_o]
    for i in range(d):
        points += [k_o + eye[i], k_o - eye[i]]
    for i in range(d):
        for l in range(i + 1, d):
            points += [
                k_o + eye[i] + eye[l],
                k_o + eye[i] - eye[l],
                k_o - eye[i] + eye[l],
                k_o - eye[i] - eye[l],
            ]
    f = iter(band_functions_batch(graph, np.array(points))[:, j])

    center = next(f)
    H = np.zeros((d, d))
    for i in range(d):
        plus, minus = next(f), next(f)
        H[i, i] = (plus - 2 * center + minus) / h**2
    for i in range(d):
        for l in range(i + 1, d):
            pp, pm, mp, mm = next(f), next(f), next(f), next(f)
            H[i, l] = H[l, i] = (pp - pm - mp + mm) / (4 * h**2)
    return H


def hessian_fd(
    graph, band, k_o, step=DEFAULT_STEP, gap_tol=DEFAULT_GAP_TOL, richardson=True
):
    """Hessian of band `band` (1-based) at k_o by central differences.

    With `richardson` the step-h and step-h/2 estimates are combined to
    cancel the h^2 error term.
    """
    k_o = np.asarray(k_o, dtype=float)
    if k_o.shape != (graph.dimension,):
        raise WrongShape(f"k_o must have {graph.dimension} components")
    nu = graph.num_vertices
    if not 1 <= band <= nu:
        raise ValueError(f"band must be in 1..{nu}, got {band}")

    j = band - 1
    values = band_functions(graph, k_o)
    for other in (j - 1, j + 1):
        if 0 <= other < nu and abs(values[j] - values[other]) <= gap_tol:
            raise BandTouching(
                f"band {band} touches band {other + 1} at k_o "
                f"(gap {abs(values[j] - values[other]):.3g})"
            )

    H = _second_differences(graph, j, k_o, step)
    if richardson:
        H = (4 * _second_differences(graph, j, k_o, step / 2) - H) / 3
    return H


def reduce_mod_2pi(v) -> np.ndarray:
    """Reduce into (-pi, pi]. Values that are small rational multiples of
    pi are reduced exactly, so 3 pi maps to pi rather than -pi."""
    v = np.atleast_1d(np.asarray(v, dtype=float))
    out = wrap_to_zone(v)
    for i, x in enumerate(v):
        r = Fraction(x / np.pi).limit_denominator(RATIONAL_DENOMINATOR)
        if abs(float(r) * np.pi - x) < 1e-9 * max(1.0, abs(x)):
            out[i] = float(reduce_half_open(r)) * np.pi
    return out


def sym_inverse_sqrt(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise WrongShape(f"expected a square matrix, got shape {A.shape}")
    w, V = np.linalg.eigh((A + A.T) / 2)
    if w.min() <= PD_TOL * max(1.0, abs(w).max()):
        raise NotPositiveDefinite(
            f"matrix is not positive definite (eigenvalue {w.min():.3g})"
        )
    return (V / np.sqrt(w)) @ V.T


def _float_chiral(T):
    T = intlat.as_int_matrix(T)
    Tf = np.array(T, dtype=float)
    if np.linalg.matrix_rank(Tf) < Tf.shape[0]:
        raise RankDeficient("chiral rows are linearly dependent")
    return Tf


def constrained_nearest(k_o, T) -> np.ndarray:
    """Point k closest to k_o with T k = 0 exactly: k_o - T^+ T k_o"""
    Tf = _float_chiral(T)
    k_o = np.asarray(k_o, dtype=float)
    return k_o - Tf.T @ np.linalg.solve(Tf @ Tf.T, Tf @ k_o)


def nearest_in_zone(k, T) -> np.ndarray:
    """Nearest point to k with T k = 0 mod 2 pi, for one point or a stack"""
    Tf = np.asarray(T, dtype=float)
    k = np.asarray(k, dtype=float)
    x = reduce_mod_2pi((np.atleast_2d(k) @ Tf.T).ravel()).reshape(-1, Tf.shape[0])
    shift = np.linalg.solve(Tf @ Tf.T, x.T).T @ Tf
    out = np.atleast_2d(k) - shift
    return out[0] if k.ndim == 1 else out


def snap_to_rational(k, max_denominator=RATIONAL_DENOMINATOR, tol=SNAP_TOL):
    """The rational quasimomentum within tol of k, if there is one"""
    k = np.asarray(k, dtype=float)
    components = [Fraction(x / np.pi).limit_denominator(max_denominator) for x in k]
    if all(abs(float(r) * np.pi - x) <= tol for r, x in zip(components, k)):
        return RationalQuasimomentum(components)
    return None


class AsymptoticEstimate:
    """Predicted edge of band `band` of a subcovering, from the extremum
    k_o of the periodic graph"""

    def __init__(
        self,
        band,
        side,
        k_o,
        hessian,
        H,
        x_o,
        edge,
        correction,
        tau,
        remainder_order,
        scalar_correction=None,
        rational=None,
    ):
        self.band = band
        self.side = side
        self.k_o = k_o
        self.hessian = hessian
        # the positive definite form in the expansion: Hess at a minimum,
        # -Hess at a maximum
        self.H = H
        self.x_o = x_o
        self.edge = edge
        self.correction = correction
        self.tau = tau
        self.remainder_order = remainder_order
        self.scalar_correction = scalar_correction
        self.rational = rational

    @property
    def predicted(self) -> float:
        if self.side == "lower":
            return self.edge + self.correction
        return self.edge - self.correction

    def to_dict(self):
        return {
            "type": "AsymptoticEstimate",
            "band": self.band,
            "side": self.side,
            "k_o": self.k_o,
            "k_o_rational": None if self.rational is None else self.rational.to_dict(),
            "hessian": self.hessian,
            "H": self.H,
            "x_o": self.x_o,
            "edge": self.edge,
            "correction": self.correction,
            "predicted": self.predicted,
            "tau": self.tau,
            "remainder_order": self.remainder_order,
            "scalar_correction": self.scalar_correction,
        }


def _check_isolated(edge, side, k_o):
    points = edge.argmin if side == "lower" else edge.argmax
    for p in points:
        distance = min(periodic_distance(p, k_o), periodic_distance(p, -k_o))
        if distance > UNIQUENESS_RADIUS:
            warn(
                f"band {edge.band} {side} edge is also attained near "
                f"{np.round(p, 6).tolist()}; the expansion around k_o may not "
                "give the subcovering edge"
            )
            return False
    return True


def band_edge_asymptotic(
    graph,
    band,
    side,
    k_o,
    T,
    step=DEFAULT_STEP,
    gap_tol=DEFAULT_GAP_TOL,
    edge=None,
) -> AsymptoticEstimate:
    """Second-order prediction of a subcovering band edge.

    k_o is a RationalQuasimomentum or a float vector; float input close to
    a rational multiple of pi is snapped to it (with a warning) so that
    x_o comes out exactly. `edge`, when given, is checked for further
    extrema away from +-k_o.
    """
    if side not in ("lower", "upper"):
        raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")
    T = intlat.as_int_matrix(T)
    d_o, d = T.shape
    if d != graph.dimension:
        raise WrongShape(
            f"chiral matrix has {d} columns, graph dimension is {graph.dimension}"
        )
    if not intlat.is_primitive_set(T):
        raise NotPrimitive(f"chiral set {T.tolist()} is not primitive")

    if isinstance(k_o, RationalQuasimomentum):
        rational = k_o
    else:
        rational = snap_to_rational(k_o)
        if rational is not None:
            moved = np.abs(rational.as_array() - np.asarray(k_o, dtype=float)).max()
            if moved > 1e-12:
                warn(f"k_o snapped to ({rational}) pi, moved by {moved:.3g}")
    if rational is not None:
        if len(rational) != d:
            raise WrongShape(f"k_o must have {d} components")
        k = rational.as_array()
        x_o = np.pi * np.array([float(reduce_half_open(v)) for v in rational.apply(T)])
    else:
        k = np.asarray(k_o, dtype=float)
        x_o = reduce_mod_2pi(np.array(T, dtype=float) @ k)

    hessian = hessian_fd(graph, band, k, step=step, gap_tol=gap_tol)
    H = hessian if side == "lower" else -hessian
    w = np.linalg.eigvalsh(H)
    if w.min() <= PD_TOL * max(1.0, abs(w).max()):
        raise NotPositiveDefinite(
            f"band {band} {side} edge at k_o is degenerate (Hessian eigenvalue "
            f"{w.min():.3g})"
        )

    Tf = np.array(T, dtype=float)
    R = sym_inverse_sqrt(Tf @ np.linalg.solve(H, Tf.T))
    correction = 0.5 * float(np.sum((R @ x_o) ** 2))

    scalar = None
    if d_o == 1:
        t = sym_inverse_sqrt(H) @ Tf[0]
        scalar = 0.5 * float(x_o[0] ** 2) / float(t @ t)

    if rational is not None:
        corner = rational.is_corner()
    else:
        folded = np.abs(wrap_to_zone(k)) % np.pi
        corner = bool(np.all(np.isclose(folded, 0, atol=1e-12)))

    if edge is not None:
        _check_isolated(edge, side, k)

    estimate = AsymptoticEstimate(
        band=band,
        side=side,
        k_o=k,
        hessian=hessian,
        H=H,
        x_o=x_o,
        edge=float(band_functions(graph, k)[band - 1]),
        correction=correction,
        tau=float(np.sqrt(np.linalg.eigvalsh(Tf @ Tf.T).min())),
        remainder_order=4 if corner else 3,
        scalar_correction=scalar,
        rational=rational,
    )
    logger.debug(
        "band %d %s: correction %.6g, tau %.6g", band, side, correction, estimate.tau
    )
    return estimate


def best_of(estimates) -> AsymptoticEstimate:
    """Combine estimates from several extremum points of the same edge:
    the smallest prediction for a lower edge, the largest for an upper
    one"""
    estimates = list(estimates)
    if not estimates:
        raise ValueError("no estimates to combine")
    keys = {(e.band, e.side) for e in estimates}
    if len(keys) != 1:
        raise ValueError(f"estimates belong to different edges: {sorted(keys)}")
    if estimates[0].side == "lower":
        return min(estimates, key=lambda e: e.predicted)
    return max(estimates, key=lambda e: e.predicted)


def hypercubic_edge(T) -> float:
    """Closed-form upper edge of the rolled-up Z^d lattice.

    The maximum 4d sits at (pi, ..., pi); with rho the row sums of T mod 2
    the predicted edge is 4d - pi^2 rho^T (T T^T)^-1 rho.
    """
    Tf = _float_chiral(T)
    rho = np.array([int(sum(row)) % 2 for row in intlat.as_int_matrix(T)], dtype=float)
    d = Tf.shape[1]
    return 4 * d - np.pi**2 * float(rho @ np.linalg.solve(Tf @ Tf.T, rho))
