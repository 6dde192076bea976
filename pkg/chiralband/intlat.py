# Exact integer lattice algebra
#
# Integer matrices are numpy arrays of dtype=object holding Python ints.
# Normal forms come from sympy's DomainMatrix routines over ZZ; results
# are converted back and must stay below ENTRY_LIMIT in absolute value,
# larger values raise OverflowError.

import itertools
import math
from functools import reduce

import numpy as np
from sympy import Matrix
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import (
    hermite_normal_form as _sympy_hermite,
    smith_normal_decomp,
)

from .errors import NotPrimitive, RankDeficient, WrongShape

ENTRY_LIMIT = 2**127

# the minor route enumerates C(d, d_o) minors; beyond these sizes only the
# Smith route is used
MINOR_ROUTE_MAX_ROWS = 4
MINOR_ROUTE_MAX_COLS = 8


def _check_range(*matrices):
    for m in matrices:
        for x in m.flat:
            if abs(x) >= ENTRY_LIMIT:
                raise OverflowError(
                    "integer entry exceeds the exact range (|x| >= 2**127)"
                )


def as_int_matrix(m) -> np.ndarray:
    """Return `m` as a 2-D object array of Python ints.

    A 1-D input is read as a single row. Floats (even integral ones) and
    booleans are rejected, since chiral indices must survive exactly.
    """
    a = np.array(m, dtype=object)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2 or a.size == 0:
        raise WrongShape(f"expected a nonempty integer matrix, got shape {a.shape}")

    out = np.empty(a.shape, dtype=object)
    for idx, x in np.ndenumerate(a):
        if isinstance(x, (bool, np.bool_)) or not isinstance(x, (int, np.integer)):
            raise TypeError(f"entry {x!r} at {idx} is not an integer")
        out[idx] = int(x)
    _check_range(out)
    return out


def identity(n: int) -> np.ndarray:
    return np.array([[int(i == j) for j in range(n)] for i in range(n)], dtype=object)


def _to_domain(A) -> DomainMatrix:
    return DomainMatrix([[ZZ(int(x)) for x in row] for row in A.tolist()], A.shape, ZZ)


def _to_array(rows, shape) -> np.ndarray:
    # accepts DomainMatrix.to_list() (ints or mpz) and Matrix.tolist()
    out = np.empty(shape, dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            out[i, j] = int(x)
    return out


def _exact_inverse(A) -> np.ndarray:
    # caller guarantees det A == +-1
    inv = Matrix(A.tolist()).inv()
    return _to_array(inv.tolist(), inv.shape)


def determinant(m) -> int:
    a = as_int_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise WrongShape("determinant of a non-square matrix")
    d = int(Matrix(a.tolist()).det(method="bareiss"))
    if abs(d) >= ENTRY_LIMIT:
        raise OverflowError("determinant exceeds the exact range")
    return d


class SmithDecomposition:
    """M == U @ S @ V with U, V unimodular and S diagonal.

    The diagonal of S holds the invariant factors s_1 | s_2 | ... in
    non-decreasing order, zeros last.
    """

    def __init__(self, U, S, V):
        self.U = U
        self.S = S
        self.V = V

    @property
    def invariant_factors(self) -> list:
        return [int(self.S[i, i]) for i in range(min(self.S.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for s in self.invariant_factors if s != 0)

    def to_dict(self):
        return {
            "type": "SmithDecomposition",
            "U": self.U.tolist(),
            "S": self.S.tolist(),
            "V": self.V.tolist(),
            "invariant_factors": self.invariant_factors,
        }


def smith_normal_form(M) -> SmithDecomposition:
    """Smith normal form with unimodular transforms, M == U @ S @ V.

    sympy returns s @ M @ t == S; U and V are the exact inverses of s and t.
    """
    M = as_int_matrix(M)
    S, s, t = smith_normal_decomp(_to_domain(M))
    S = _to_array(S.to_list(), S.shape)
    s = _to_array(s.to_list(), s.shape)
    t = _to_array(t.to_list(), t.shape)

    for i in range(min(S.shape)):
        if S[i, i] < 0:
            S[i, i] = -S[i, i]
            s[i] = -s[i]

    U, V = _exact_inverse(s), _exact_inverse(t)
    _check_range(U, S, V)
    return SmithDecomposition(U, S, V)


class HermiteDecomposition:
    """U @ M == H with H in row echelon form, U unimodular.

    Pivots of H are positive and the entries above each pivot are reduced
    into [0, pivot). U_inv is the exact inverse of U.
    """

    def __init__(self, H, U, U_inv, pivots):
        self.H = H
        self.U = U
        self.U_inv = U_inv
        self.pivots = pivots

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _row_hermite(A) -> np.ndarray:
    """Nonzero rows of the row-style Hermite form of A.

    sympy's form is column-style with pivots in the rightmost columns:
    X @ W == [0 | H]. Feeding it A with reversed columns, transposed, and
    reversing both axes of the transposed result gives the row form.
    """
    X = np.ascontiguousarray(A[:, ::-1].T)
    H = _sympy_hermite(_to_domain(X))
    H = _to_array(H.to_list(), H.shape)
    return np.ascontiguousarray(H.T[::-1, ::-1])


def hermite_normal_form(M) -> HermiteDecomposition:
    """Row-style Hermite form with its transform.

    The form of [M | I] has full rank; its left block is the form of M
    and its right block is the transform.
    """
    M = as_int_matrix(M)
    m, n = M.shape
    G = _row_hermite(np.hstack([M, identity(m)]))
    H = np.ascontiguousarray(G[:, :n])
    U = np.ascontiguousarray(G[:, n:])
    U_inv = _exact_inverse(U)
    _check_range(H, U, U_inv)

    pivots = []
    for row in H:
        nonzero = [j for j, x in enumerate(row) if x != 0]
        if not nonzero:
            break
        pivots.append(nonzero[0])
    return HermiteDecomposition(H, U, U_inv, pivots)


def column_hermite(T):
    """Return (L, W) with T @ W == [L | 0], W unimodular, L lower triangular
    with positive diagonal.

    Raises RankDeficient when the rows of T are dependent.
    """
    T = as_int_matrix(T)
    d_o = T.shape[0]
    hnf = hermite_normal_form(T.T)
    if hnf.rank < d_o:
        raise RankDeficient(f"chiral rows have rank {hnf.rank} < {d_o}")
    return hnf.H[:d_o].T.copy(), hnf.U.T.copy()


def unimodular_inverse(M) -> np.ndarray:
    M = as_int_matrix(M)
    n = M.shape[0]
    if M.shape != (n, n):
        raise WrongShape("inverse of a non-square matrix")
    hnf = hermite_normal_form(M)
    if not np.array_equal(hnf.H, identity(n)):
        raise ValueError("matrix is not unimodular")
    return hnf.U


def minor_gcd(T) -> int:
    """gcd of all maximal (d_o x d_o) minors of T"""
    T = as_int_matrix(T)
    d_o, d = T.shape
    return reduce(
        math.gcd,
        (
            determinant(T[:, list(cols)])
            for cols in itertools.combinations(range(d), d_o)
        ),
        0,
    )


def _chiral_shape(T):
    d_o, d = T.shape
    if d_o >= d:
        raise WrongShape(
            f"a chiral matrix needs fewer rows than columns, got {d_o}x{d}"
        )
    return d_o, d


def _smith_gcd(T) -> int:
    factors = smith_normal_form(T).invariant_factors
    return 0 if 0 in factors else math.prod(factors)


def is_primitive_set(T, method: str = "auto") -> bool:
    """True iff the rows of T can be completed to a basis of Z^d.

    `method` selects the gcd-of-minors route ("minors") or the Smith
    invariant factor route ("smith"). "auto" runs both and compares them
    while the minor enumeration is small, and only the Smith route beyond
    that.
    """
    T = as_int_matrix(T)
    d_o, d = _chiral_shape(T)

    if method == "minors":
        g = minor_gcd(T)
    elif method == "smith":
        g = _smith_gcd(T)
    elif method == "auto":
        g = _smith_gcd(T)
        if d_o <= MINOR_ROUTE_MAX_ROWS and d <= MINOR_ROUTE_MAX_COLS:
            g_minors = minor_gcd(T)
            if g_minors != g:
                raise ArithmeticError(
                    f"primitivity routes disagree for {T.tolist()}: "
                    f"minors give {g_minors}, Smith factors give {g}"
                )
    else:
        raise ValueError(f"unknown primitivity method {method!r}")

    if g == 0:
        raise RankDeficient("chiral rows are linearly dependent")
    return g == 1


class UnimodularCompletion:
    """A d x d integer matrix of determinant +-1 whose first d_o rows are
    the chiral matrix. `inverse` is its exact integer inverse."""

    def __init__(self, matrix, inverse, chiral_rows: int):
        self.matrix = matrix
        self.inverse = inverse
        self.chiral_rows = chiral_rows

    @classmethod
    def from_matrix(cls, matrix, chiral_rows: int):
        matrix = as_int_matrix(matrix)
        return cls(matrix, unimodular_inverse(matrix), chiral_rows)

    @property
    def chiral(self):
        return self.matrix[: self.chiral_rows]

    def residual_map(self) -> np.ndarray:
        """Columns of the inverse that carry the residual quasimomentum:
        k = inverse @ (0, kappa)"""
        return self.inverse[:, self.chiral_rows :]

    def to_dict(self):
        return {
            "type": "UnimodularCompletion",
            "matrix": self.matrix.tolist(),
            "chiral_rows": self.chiral_rows,
        }


def complete_to_basis(T) -> UnimodularCompletion:
    """Complete a primitive chiral matrix to a unimodular matrix.

    The completion is not unique; this one comes from the Hermite form of
    T^T: T @ W == [I | 0] and the completion is W^-1.
    """
    T = as_int_matrix(T)
    d_o, d = _chiral_shape(T)
    hnf = hermite_normal_form(T.T)
    if hnf.rank < d_o:
        raise RankDeficient("chiral rows are linearly dependent")
    if any(hnf.H[i, i] != 1 for i in range(d_o)):
        raise NotPrimitive(f"chiral set {T.tolist()} is not primitive")
    return UnimodularCompletion(hnf.U_inv.T.copy(), hnf.U.T.copy(), d_o)


def saturation(T):
    """Return (basis, index): a basis of the lattice Z^d ∩ span(T) in
    Hermite form, and the index of the row lattice of T in it."""
    T = as_int_matrix(T)
    d_o, _ = _chiral_shape(T)
    snf = smith_normal_form(T)
    factors = snf.invariant_factors
    if 0 in factors:
        raise RankDeficient("chiral rows are linearly dependent")
    basis = hermite_normal_form(snf.V[:d_o]).H
    return basis, math.prod(factors)


def random_primitive(rng, rows: int, cols: int, bound: int = 5, attempts: int = 1000):
    """Draw a primitive chiral matrix with entries in [-bound, bound].

    `rng` is a numpy Generator; rejection sampling, so the result is
    uniform over primitive matrices in the box.
    """
    for _ in range(attempts):
        T = rng.integers(-bound, bound + 1, size=(rows, cols))
        try:
            if is_primitive_set(T):
                return as_int_matrix(T)
        except RankDeficient:
            continue
    raise ValueError(f"no primitive {rows}x{cols} matrix found in {attempts} draws")
