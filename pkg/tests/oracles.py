# Independent reference computations used by the tests.
#
# Nothing here calls into chiralband, so the tests compare two separate
# routes to the same answer.

import itertools
import math
from fractions import Fraction

import numpy as np


def fraction_det(m):
    """Exact determinant by Gaussian elimination over the rationals"""
    a = [[Fraction(int(x)) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        pivot = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot is None:
            return 0
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return int(det)


def minors_gcd(m, order):
    """gcd of all order x order minors, by enumeration"""
    rows, cols = len(m), len(m[0])
    g = 0
    for r in itertools.combinations(range(rows), order):
        for c in itertools.combinations(range(cols), order):
            g = math.gcd(g, fraction_det([[m[i][j] for j in c] for i in r]))
    return g


def random_primitive(rng, rows, cols, bound=5):
    while True:
        T = rng.integers(-bound, bound + 1, size=(rows, cols)).tolist()
        if minors_gcd(T, rows) == 1:
            return T


def in_row_lattice(x, T):
    """Whether x is an integer combination of the rows of T (rows
    independent)"""
    d_o, d = len(T), len(T[0])
    # augmented system T^T m = x
    a = [
        [Fraction(int(T[s][j])) for s in range(d_o)] + [Fraction(int(x[j]))]
        for j in range(d)
    ]
    row = 0
    for col in range(d_o):
        p = next((i for i in range(row, d) if a[i][col] != 0), None)
        if p is None:
            continue
        a[row], a[p] = a[p], a[row]
        a[row] = [v / a[row][col] for v in a[row]]
        for i in range(d):
            if i != row and a[i][col] != 0:
                f = a[i][col]
                a[i] = [v - f * w for v, w in zip(a[i], a[row])]
        row += 1
    if any(a[i][-1] != 0 for i in range(row, d)):
        return False
    return all(a[i][-1].denominator == 1 for i in range(row))


def count_below(M, x):
    """Number of eigenvalues of the Hermitian M below x, from the inertia of
    an LDL^H factorization of M - x I"""
    n = M.shape[0]
    A = np.array(M, dtype=complex) - x * np.eye(n)
    count = 0
    for k in range(n):
        # symmetric pivoting on the largest diagonal keeps the inertia
        i = k + int(np.argmax(np.abs(np.diag(A)[k:].real)))
        A[[k, i]] = A[[i, k]]
        A[:, [k, i]] = A[:, [i, k]]
        p = A[k, k].real
        if p == 0.0:
            p = -1e-300
        if p < 0:
            count += 1
        if k + 1 < n:
            A[k + 1 :, k + 1 :] -= np.outer(A[k + 1 :, k], A[k, k + 1 :]) / p
    return count


def bisection_eigenvalues(M, iterations=64):
    M = np.asarray(M)
    radius = float(np.linalg.norm(M)) + 1.0
    values = []
    for j in range(M.shape[0]):
        lo, hi = -radius, radius
        for _ in range(iterations):
            mid = 0.5 * (lo + hi)
            if count_below(M, mid) >= j + 1:
                hi = mid
            else:
                lo = mid
        values.append(0.5 * (lo + hi))
    return np.array(values)


def random_hermitian(rng, n):
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (A + A.conj().T) / 2


def hexagonal_bands(q, k):
    """Closed form 3 -+ sqrt(q^2 + |1 + e^{ik1} + e^{ik2}|^2)"""
    psi = abs(1 + np.exp(1j * k[0]) + np.exp(1j * k[1]))
    r = math.sqrt(q * q + psi * psi)
    return np.array([3 - r, 3 + r])
