# Isospectrality of a periodic graph and its subcoverings
#
# The j-th band of a subcovering keeps the edge lambda_j^- (lambda_j^+)
# exactly when some point k of the level set where that edge is attained
# satisfies T k = 0 mod 2 pi. Level-set points are rational multiples of
# pi, so the test runs in exact arithmetic.

import itertools
import logging
import math
from fractions import Fraction

import numpy as np

from . import intlat
from .errors import EmptyLevelSet, NotPrimitive, ParseError, WrongShape

logger = logging.getLogger(__name__)

RATIONAL_LIMIT = 2**63
SIDES = ("lower", "upper")


def reduce_half_open(r: Fraction) -> Fraction:
    """r modulo 2, in (-1, 1]"""
    return r - 2 * math.ceil((r - 1) / 2)


def _check_rational(r: Fraction):
    if abs(r.numerator) >= RATIONAL_LIMIT or r.denominator >= RATIONAL_LIMIT:
        raise OverflowError(f"rational {r} exceeds 64-bit range")
    return r


def _to_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (bool, np.bool_)):
        raise TypeError(f"{c!r} is not a rational number")
    if isinstance(c, (int, np.integer)):
        return Fraction(int(c))
    if isinstance(c, str):
        try:
            return Fraction(c.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"cannot read {c!r} as a rational number")
    raise TypeError(f"{c!r} is not a rational number; use a Fraction or 'p/q'")


class RationalQuasimomentum:
    """Quasimomentum k = pi * r with rational r, stored reduced into
    (-1, 1]^d"""

    def __init__(self, components):
        self.components = tuple(
            _check_rational(reduce_half_open(_to_fraction(c))) for c in components
        )
        if not self.components:
            raise WrongShape("a quasimomentum needs at least one component")

    @classmethod
    def parse(cls, text):
        """Read 'p/q,p/q,...' (units of pi)"""
        return cls(part for part in text.split(","))

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __eq__(self, other):
        return (
            isinstance(other, RationalQuasimomentum)
            and self.components == other.components
        )

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return f"RationalQuasimomentum(({', '.join(map(str, self.components))}))"

    def __str__(self):
        return ",".join(map(str, self.components))

    def as_array(self) -> np.ndarray:
        return np.pi * np.array([float(c) for c in self.components])

    def apply(self, T) -> list:
        """Rows of T k in units of pi, exactly and unreduced"""
        T = intlat.as_int_matrix(T)
        if T.shape[1] != len(self):
            raise WrongShape(
                f"chiral matrix has {T.shape[1]} columns, k has {len(self)}"
            )
        return [
            _check_rational(
                sum((int(t) * c for t, c in zip(row, self.components)), Fraction(0))
            )
            for row in T
        ]

    def is_corner(self) -> bool:
        """Every component is 0 or pi"""
        return all(c in (0, 1) for c in self.components)

    def negate(self):
        return RationalQuasimomentum(-c for c in self.components)

    def to_dict(self):
        return [str(c) for c in self.components]

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, (list, tuple)):
            raise ParseError("quasimomentum must be a list of rationals")
        return cls(d)


def edge_coincidence(k_o: RationalQuasimomentum, T) -> bool:
    """Whether k_o lies in the restricted zone: T k_o = 0 mod 2 pi"""
    return all(
        v.denominator == 1 and v.numerator % 2 == 0 for v in k_o.apply(T)
    )


class LevelSet:
    """Points where band `band` attains its lower or upper edge.

    `complete` records whether the list is known to contain every such
    point; a negative verdict is only conclusive when it does.
    """

    def __init__(self, band, side, points, complete=True):
        if side not in SIDES:
            raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")
        self.band = band
        self.side = side
        self.points = list(points)
        self.complete = complete

    def to_dict(self):
        return {
            "band": self.band,
            "side": self.side,
            "points": [p.to_dict() for p in self.points],
            "complete": self.complete,
        }

    @classmethod
    def from_dict(cls, d):
        try:
            band, side = int(d["band"]), d["side"]
        except (KeyError, TypeError, ValueError):
            raise ParseError("level set needs 'band' and 'side'")
        points = [RationalQuasimomentum.from_dict(p) for p in d.get("points", [])]
        return cls(band, side, points, bool(d.get("complete", True)))


class LevelSets:
    """The level sets K_j^- and K_j^+ of a periodic graph"""

    def __init__(self, entries=(), name=""):
        self.name = name
        self.entries = list(entries)

    @property
    def bands(self):
        return sorted({e.band for e in self.entries})

    def get(self, band, side):
        return next(
            (e for e in self.entries if e.band == band and e.side == side), None
        )

    def to_dict(self):
        return {
            "type": "LevelSets",
            "name": self.name,
            "level_sets": [e.to_dict() for e in self.entries],
        }

    @classmethod
    def from_dict(cls, d):
        if d.get("type", "LevelSets") != "LevelSets":
            raise ValueError(f"Expecting type LevelSets, got {d['type']}")
        entries = []
        for i, e in enumerate(d.get("level_sets", [])):
            try:
                entries.append(LevelSet.from_dict(e))
            except ParseError as ex:
                raise ParseError(str(ex), field=f"level_sets[{i}]")
        return cls(entries, d.get("name", ""))


class EdgeVerdict:
    def __init__(self, band, side, coincident, witness=None, complete=True):
        self.band = band
        self.side = side
        self.coincident = coincident
        self.witness = witness
        self.complete = complete

    def to_dict(self):
        return {
            "band": self.band,
            "side": self.side,
            "coincident": self.coincident,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "complete": self.complete,
        }


class IsospectralVerdict:
    """Truthy when every band edge of the subcovering coincides with the
    edge of the periodic graph"""

    def __init__(self, details):
        self.details = details

    @property
    def isospectral(self) -> bool:
        return all(e.coincident for e in self.details)

    @property
    def failing(self):
        return [(e.band, e.side) for e in self.details if not e.coincident]

    @property
    def complete(self) -> bool:
        """False when a failing edge comes from a level set that may be
        missing points"""
        return all(e.complete for e in self.details if not e.coincident)

    def __bool__(self):
        return self.isospectral

    def to_dict(self):
        return {
            "isospectral": self.isospectral,
            "complete": self.complete,
            "failing": [{"band": j, "side": s} for j, s in self.failing],
            "edges": [e.to_dict() for e in self.details],
        }


def isospectral_verdict(level_sets: LevelSets, T, num_bands=None) -> IsospectralVerdict:
    T = intlat.as_int_matrix(T)
    if not intlat.is_primitive_set(T):
        raise NotPrimitive(f"chiral set {T.tolist()} is not primitive")
    bands = range(1, num_bands + 1) if num_bands else level_sets.bands
    if not bands:
        raise EmptyLevelSet("no level sets given")

    details = []
    for band in bands:
        for side in SIDES:
            entry = level_sets.get(band, side)
            if entry is None or not entry.points:
                raise EmptyLevelSet(f"no {side} level set for band {band}")
            witness = next((p for p in entry.points if edge_coincidence(p, T)), None)
            details.append(
                EdgeVerdict(band, side, witness is not None, witness, entry.complete)
            )
    verdict = IsospectralVerdict(details)
    logger.debug("verdict for %s: failing %s", T.tolist(), verdict.failing)
    return verdict


def diamond_parity_rule(T) -> bool:
    """Closed-form isospectrality rule for the diamond lattice.

    A single chiral vector always gives an isospectral subcovering. Two
    vectors do iff some pair of coordinates has even sums in both rows.
    """
    T = intlat.as_int_matrix(T)
    d_o, d = T.shape
    if d != 3 or d_o not in (1, 2):
        raise WrongShape(f"the diamond rule needs a 1x3 or 2x3 matrix, got {d_o}x{d}")
    if d_o == 1:
        return True
    return any(
        all((row[i] + row[j]) % 2 == 0 for row in T)
        for i, j in itertools.combinations(range(3), 2)
    )


def numeric_coincidence(full_edges, sub_edges, tol=1e-6):
    """Per edge differences between a subcovering and the periodic graph"""
    report = []
    for f, s in zip(full_edges, sub_edges):
        for side, a, b in (("lower", f.lower, s.lower), ("upper", f.upper, s.upper)):
            report.append(
                {
                    "band": f.band,
                    "side": side,
                    "full": a,
                    "sub": b,
                    "difference": abs(a - b),
                    "coincident": abs(a - b) <= tol,
                }
            )
    return report
