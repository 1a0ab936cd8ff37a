"""Lattices given by a generator matrix whose rows form a basis."""

from dataclasses import dataclass, field
from itertools import combinations
from math import gcd

import numpy as np

from .errors import NotLatticeVector, SingularMatrix, SingularSystem
from .matrix_core import DEFAULT_TOL, as_int_matrix, as_real_matrix, int_det, max_norm

_EPS = np.finfo(float).eps


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Lattice:
    """An ``m``-dimensional lattice in ``R^n`` (``m <= n``).

    The Gram matrix and determinant are computed once at construction.
    ``det`` follows the discriminant convention ``det(G G^t)``, i.e. the
    squared covolume.
    """

    generator: np.ndarray
    gram: np.ndarray = field(init=False, repr=False)
    det: float = field(init=False, repr=False)

    def __post_init__(self):
        G = as_real_matrix(self.generator)
        m, n = G.shape
        if m == 0 or m > n:
            raise ValueError(f"generator must be m x n with 1 <= m <= n, got {G.shape}")
        s = np.linalg.svd(G, compute_uv=False)
        if s[-1] <= DEFAULT_TOL.rank * s[0]:
            raise SingularMatrix("generator rows are not linearly independent")
        A = G @ G.T
        A = (A + A.T) / 2
        object.__setattr__(self, "generator", _readonly(G))
        object.__setattr__(self, "gram", _readonly(A))
        object.__setattr__(self, "det", float(np.linalg.det(A)))

    @property
    def dim(self):
        return self.generator.shape[0]

    @property
    def ambient(self):
        return self.generator.shape[1]

    @property
    def covolume(self):
        return float(np.sqrt(self.det))

    def dual(self):
        return dual(self)

    def __repr__(self):
        return f"Lattice(dim={self.dim}, ambient={self.ambient}, det={self.det:.6g})"


def gram_of(L):
    return L.gram


def det_of(L):
    return L.det


def dual(L):
    """Dual lattice, generated by ``(G G^t)^{-1} G``.

    For ``m < n`` this is the dual inside the span of ``G``.
    """
    return Lattice(np.linalg.solve(L.gram, L.generator))


def coordinates(L, x):
    """Real coordinates ``alpha`` with ``alpha @ G`` closest to ``x``."""
    x = as_real_matrix(x, ndim=1)
    if x.shape[0] != L.ambient:
        raise ValueError(f"vector has length {x.shape[0]}, lattice lives in R^{L.ambient}")
    G = L.generator
    s = np.linalg.svd(G, compute_uv=False)
    if s[-1] <= 1e3 * _EPS * s[0]:
        raise SingularSystem("generator rows are numerically dependent")
    return np.linalg.lstsq(G.T, x, rcond=None)[0]


def membership(L, x, tol=DEFAULT_TOL.membership):
    """Integer coordinates of ``x`` in the basis of ``L``, or ``None``.

    The real solution is rounded and accepted only when ``alpha @ G``
    reproduces ``x`` within ``tol * ||x||_inf`` (plus the rounding noise of
    evaluating the product itself).
    """
    x = as_real_matrix(x, ndim=1)
    a = np.rint(coordinates(L, x))
    alpha = np.array([int(v) for v in a], dtype=object)
    G = L.generator
    recon = a @ G
    noise = 16 * _EPS * max_norm(np.abs(a) @ np.abs(G))
    if max_norm(recon - x) <= tol * max_norm(x) + noise:
        return alpha
    return None


def sublattice_equal(L1, L2, tol=DEFAULT_TOL.membership):
    """True iff ``L1`` and ``L2`` are the same lattice (mutual membership)."""
    if L1.dim != L2.dim or L1.ambient != L2.ambient:
        return False
    return (all(membership(L2, g, tol) is not None for g in L1.generator)
            and all(membership(L1, g, tol) is not None for g in L2.generator))


def minor_gcd(A):
    """gcd of all maximal (``k x k``) minors of a ``k x m`` integer matrix.

    Returns 0 when every minor vanishes (rows linearly dependent).
    """
    A = as_int_matrix(A)
    k, m = A.shape
    if k > m:
        return 0
    g = 0
    for cols in combinations(range(m), k):
        g = gcd(g, int_det(A[:, cols]))
        if g == 1:
            break
    return g


@dataclass(frozen=True)
class PrimitiveCertificate:
    coefficient_matrix: np.ndarray
    minor_gcd: int

    @property
    def valid(self):
        return self.minor_gcd == 1


def coefficient_matrix(L, vs, tol=DEFAULT_TOL.membership):
    """Integer coordinates of each row of ``vs``; raises if one is not in ``L``."""
    vs = as_real_matrix(vs)
    rows = []
    for i, v in enumerate(vs):
        a = membership(L, v, tol)
        if a is None:
            raise NotLatticeVector(f"row {i} is not a vector of the lattice")
        rows.append(list(a))
    return as_int_matrix(rows)


def primitive_check(L, vs, tol=DEFAULT_TOL.membership):
    """Certify whether the rows of ``vs`` form a primitive set of ``L``."""
    A = coefficient_matrix(L, vs, tol)
    if A.shape[0] > L.dim:
        raise ValueError("more vectors than the lattice dimension")
    return PrimitiveCertificate(coefficient_matrix=A, minor_gcd=minor_gcd(A))
