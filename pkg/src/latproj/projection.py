"""Orthogonal projections of a lattice along a primitive set of its vectors."""

from dataclasses import dataclass

import numpy as np

from .errors import BadExtension, NotPrimitive
from .lattice import Lattice, dual, minor_gcd, primitive_check, sublattice_equal
from .matrix_core import (
    DEFAULT_TOL,
    as_int_matrix,
    as_real_matrix,
    int_det,
    int_inverse,
    int_matmul,
    inverse_triangular,
    rq_factorize,
    to_float,
)


@dataclass(frozen=True)
class TriangularSplit:
    """Upper triangular form ``[[G1, G2], [0, G3]]`` of a generator.

    ``R @ Q`` reproduces the original generator; ``Q`` maps vectors from the
    triangular frame back to the original coordinates (``x_orig = x @ Q``).
    """

    G1: np.ndarray
    G2: np.ndarray
    G3: np.ndarray
    Q: np.ndarray
    k: int
    n: int

    @property
    def R(self):
        top = np.hstack([self.G1, self.G2])
        bottom = np.hstack([np.zeros((self.n - self.k, self.k)), self.G3])
        return np.vstack([top, bottom])


def _check_k(k, n):
    if not 1 <= k < n:
        raise ValueError(f"k must satisfy 1 <= k < n (got k={k}, n={n})")


def triangular_split(L, k):
    n = L.ambient
    if L.dim != n:
        raise ValueError("triangular_split needs a full-dimensional lattice")
    _check_k(k, n)
    rq = rq_factorize(L.generator)
    R = np.triu(rq.R)
    return TriangularSplit(G1=R[:k, :k], G2=R[:k, k:], G3=R[k:, k:], Q=rq.Q, k=k, n=n)


def projector(V):
    """Orthogonal projector onto the complement of the row space of ``V``."""
    V = as_real_matrix(V)
    n = V.shape[1]
    P = np.eye(n) - V.T @ np.linalg.solve(V @ V.T, V)
    return (P + P.T) / 2


def complete_to_basis(A):
    """Integer rows ``U`` such that ``[A; U]`` is unimodular.

    Column operations reduce ``A`` to ``[H | 0]`` with ``H`` lower triangular;
    the gcd of the maximal minors is ``|det H|``, so ``H`` is unimodular
    exactly when ``A`` is primitive. With ``A C = [H | 0]`` we take ``U`` as
    the last ``m - k`` rows of ``C^{-1}``.
    """
    A = as_int_matrix(A)
    k, m = A.shape
    g = minor_gcd(A)
    if g != 1:
        raise NotPrimitive(g)
    W = A.copy()
    C = np.eye(m, dtype=int).astype(object)

    def colop(dst, src, f):
        W[:, dst] -= f * W[:, src]
        C[:, dst] -= f * C[:, src]

    def swap(i, j):
        W[:, [i, j]] = W[:, [j, i]]
        C[:, [i, j]] = C[:, [j, i]]

    for i in range(k):
        while True:
            nz = [j for j in range(i, m) if W[i, j] != 0]
            if len(nz) <= 1:
                break
            p = min(nz, key=lambda j: abs(W[i, j]))
            for j in nz:
                if j != p:
                    colop(j, p, W[i, j] // W[i, p])
        nz = [j for j in range(i, m) if W[i, j] != 0]
        if nz and nz[0] != i:
            swap(i, nz[0])
    U = int_inverse(C)[k:]
    if abs(int_det(np.vstack([A, U]))) != 1:
        raise BadExtension("completion failed to be unimodular")
    return U


def reduce_completion(U, A, G, V):
    """Subtract integer combinations of ``A`` from ``U`` so that the rows of
    ``U G`` are nearly orthogonal to ``V``; keeps ``[A; U]`` unimodular and
    limits cancellation when projecting."""
    UG = to_float(U) @ G
    X = np.rint(np.linalg.solve(V @ V.T, V @ UG.T).T)
    return U - int_matmul(as_int_matrix(X), A)


@dataclass(frozen=True)
class ProjectionSpec:
    """A primitive set ``V`` of a lattice and the projection along it."""

    V: np.ndarray
    A_coeff: np.ndarray
    U: np.ndarray
    P: np.ndarray
    projected: Lattice


def project(L, vs, U=None, tol=DEFAULT_TOL.membership):
    """Project ``L`` onto the orthogonal complement of the rows of ``vs``.

    ``U`` completes the coefficient matrix of ``vs`` to a unimodular matrix;
    one is computed when not given. The projected lattice is generated by
    ``U G P`` and keeps ambient coordinates.
    """
    V = as_real_matrix(vs)
    cert = primitive_check(L, V, tol)
    if not cert.valid:
        raise NotPrimitive(cert.minor_gcd)
    A = cert.coefficient_matrix
    if U is None:
        U = reduce_completion(complete_to_basis(A), A, L.generator, V)
    else:
        U = as_int_matrix(U)
        if U.shape != (L.dim - A.shape[0], L.dim):
            raise BadExtension(f"extension has shape {U.shape}")
        if abs(int_det(np.vstack([A, U]))) != 1:
            raise BadExtension("[A; U] is not unimodular")
    P = projector(V)
    GV = to_float(U) @ L.generator @ P
    return ProjectionSpec(V=V, A_coeff=A, U=U, P=P, projected=Lattice(GV))


def discriminant_identity(L, spec):
    """Both sides of ``det L_V = det L / det(V V^t)``."""
    V = spec.V
    return spec.projected.det, L.det / float(np.linalg.det(V @ V.T))


def dual_projection_matrix(split, A_hat):
    """Generator ``[-G3^{-t} Vh^t G1^{-t} | G3^{-t}]`` with ``Vh = G2 + A_hat G3``.

    Rows live in the triangular frame of ``split``.
    """
    Ah = to_float(as_int_matrix(A_hat))
    if Ah.shape != (split.k, split.n - split.k):
        raise ValueError(f"A_hat must be {split.k} x {split.n - split.k}, got {Ah.shape}")
    Vh = split.G2 + Ah @ split.G3
    G1it = inverse_triangular(split.G1).T
    G3it = inverse_triangular(split.G3).T
    return np.hstack([-G3it @ Vh.T @ G1it, G3it])


def dual_projection_lattice(split, A_hat):
    return Lattice(dual_projection_matrix(split, A_hat))


def primitive_rows(split, A_hat):
    """``V = [I | A_hat] R`` in the triangular frame of ``split``."""
    A = np.hstack([np.eye(split.k), to_float(as_int_matrix(A_hat))])
    return A @ split.R


@dataclass(frozen=True)
class DualityReport:
    lattices_equal: bool
    det_M: float
    det_expected: float
    det_relerr: float

    @property
    def ok(self):
        return self.lattices_equal and self.det_relerr < 1e-8


def duality_report(L, A_hat, tol=DEFAULT_TOL.membership):
    """Compare the lattice of ``M`` with the dual of the projection.

    Both sides are built in the triangular frame of ``L``: one from the
    closed-form matrix, the other by projecting and dualizing.
    """
    A_hat = as_int_matrix(A_hat)
    split = triangular_split(L, A_hat.shape[0])
    LM = dual_projection_lattice(split, A_hat)
    V = primitive_rows(split, A_hat)
    Lt = Lattice(split.R)
    spec = project(Lt, V, tol=tol)
    equal = sublattice_equal(LM, dual(spec.projected), tol)
    expected = float(np.linalg.det(V @ V.T)) / L.det
    relerr = abs(LM.det - expected) / expected
    return DualityReport(equal, LM.det, expected, relerr)


def duality_crosscheck(L, A_hat, tol=DEFAULT_TOL.membership):
    return duality_report(L, A_hat, tol).ok
