"""Dense real and exact-integer matrix kernels.

Real matrices are plain ``float64`` numpy arrays. Integer matrices are numpy
arrays of ``dtype=object`` holding Python ints, so products, determinants and
inverses stay exact no matter how large the entries get.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import solve_triangular

from .errors import SingularMatrix


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used across the package.

    ``rank`` is relative to the matrix scale and decides singularity,
    ``equality`` is the default for identity checks, and ``membership`` is
    the looser bound used after rounding recovered integer coordinates.
    """

    rank: float = 1e-12
    equality: float = 1e-9
    membership: float = 1e-7


DEFAULT_TOL = Tolerances()


def as_real_matrix(M, ndim=2):
    """Return ``M`` as a finite float64 array; reject NaN and Inf."""
    A = np.array(M, dtype=float)
    if ndim == 2 and A.ndim == 1:
        A = A.reshape(1, -1)
    if A.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    return A


def as_int_matrix(M):
    """Return ``M`` as a 2-d object array of Python ints.

    Float input is accepted only when every entry is integral.
    """
    A = np.array(M, dtype=object)
    if A.ndim == 1:
        A = A.reshape(1, -1)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {A.shape}")
    out = np.empty(A.shape, dtype=object)
    for idx, x in np.ndenumerate(A):
        if isinstance(x, (float, np.floating)):
            if not float(x).is_integer():
                raise ValueError(f"non-integral entry {x!r}")
        elif isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"non-integral entry {x!r}")
        out[idx] = int(x)
    return out


def max_norm(M):
    """Largest absolute entry; 0 for an empty or zero matrix."""
    A = np.asarray(M)
    if A.size == 0:
        return 0.0
    return float(np.max(np.abs(A.astype(float))))


@dataclass(frozen=True)
class RQResult:
    R: np.ndarray
    Q: np.ndarray


def _gram_schmidt_rows(G, order, tol):
    """Orthonormalize the rows of ``G`` in the given order.

    Returns ``(coef, Q)`` with ``G[i] = sum_j coef[i, j] Q[j]`` where ``coef``
    is triangular with respect to ``order``. Classical Gram-Schmidt with one
    reorthogonalization pass.
    """
    m, n = G.shape
    scale = max(max_norm(G), np.finfo(float).tiny)
    Q = np.zeros((m, n))
    coef = np.zeros((m, m))
    done = []
    for i in order:
        r = G[i].copy()
        for _ in range(2):
            if done:
                B = Q[done]
                c = B @ r
                r -= c @ B
                coef[i, done] += c
        nrm = np.linalg.norm(r)
        if nrm <= tol * scale:
            raise SingularMatrix(f"Gram-Schmidt pivot {nrm:.3e} below tolerance at row {i}")
        coef[i, i] = nrm
        Q[i] = r / nrm
        done.append(i)
    return coef, Q


def rq_factorize(G, tol=DEFAULT_TOL.rank):
    """Factor a square nonsingular ``G`` as ``R @ Q``.

    ``R`` is upper triangular with positive diagonal and ``Q`` orthogonal.
    Rows are orthogonalized starting from the last one, so the lattice
    generated by ``R`` is an isometric copy of the one generated by ``G``.
    """
    G = as_real_matrix(G)
    n, n2 = G.shape
    if n != n2:
        raise ValueError(f"rq_factorize needs a square matrix, got {G.shape}")
    R, Q = _gram_schmidt_rows(G, range(n - 1, -1, -1), tol)
    return RQResult(R=R, Q=Q)


def lq_factorize(G, tol=DEFAULT_TOL.rank):
    """Factor an ``m x n`` full-row-rank ``G`` (``m <= n``) as ``L @ Q``.

    ``L`` is ``m x m`` lower triangular with positive diagonal; ``Q`` has
    orthonormal rows. ``L @ L.T`` equals the Gram matrix of ``G``.
    """
    G = as_real_matrix(G)
    m, n = G.shape
    if m > n:
        raise ValueError(f"lq_factorize needs rows <= cols, got {G.shape}")
    L, Q = _gram_schmidt_rows(G, range(m), tol)
    return L, Q


def floor_entrywise(M):
    """Entrywise floor of a finite real matrix, as exact Python ints."""
    A = as_real_matrix(M)
    out = np.empty(A.shape, dtype=object)
    for idx, x in np.ndenumerate(np.floor(A)):
        out[idx] = int(x)
    return out


def inverse_triangular(T, tol=DEFAULT_TOL.rank):
    """Invert a square triangular matrix by substitution.

    The orientation (upper or lower) is detected from ``T``; the result has
    the same orientation.
    """
    T = as_real_matrix(T)
    n, n2 = T.shape
    if n != n2:
        raise ValueError(f"inverse_triangular needs a square matrix, got {T.shape}")
    d = np.abs(np.diag(T))
    if n and np.min(d) <= tol:
        raise SingularMatrix("zero diagonal entry in triangular matrix")
    lower = not np.any(np.triu(T, 1))
    upper = not np.any(np.tril(T, -1))
    if not (lower or upper):
        raise ValueError("matrix is not triangular")
    Tinv = solve_triangular(T, np.eye(n), lower=lower and not upper)
    return np.tril(Tinv) if lower and not upper else np.triu(Tinv)


def block_det_gram(V, W, tol=DEFAULT_TOL.rank):
    """Determinant of the Gram matrix of ``[V; W]`` evaluated by blocks.

    Uses ``det(V V^t) * det(W W^t - W V^t (V V^t)^{-1} V W^t)``; it is meant
    as a second route next to the direct determinant.
    """
    V = as_real_matrix(V)
    W = as_real_matrix(W)
    VV = V @ V.T
    dV = np.linalg.det(VV)
    if abs(dV) <= tol * max(max_norm(VV), 1.0) ** V.shape[0]:
        raise SingularMatrix("det(V V^t) below tolerance")
    WV = W @ V.T
    schur = W @ W.T - WV @ np.linalg.solve(VV, WV.T)
    return float(dV * np.linalg.det(schur))


# --- exact integer kernels -------------------------------------------------

def int_det(M):
    """Exact determinant of a square integer matrix (Bareiss elimination)."""
    A = [[int(x) for x in row] for row in np.asarray(M, dtype=object).tolist()]
    n = len(A)
    if n == 0:
        return 1
    if any(len(row) != n for row in A):
        raise ValueError("int_det needs a square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * akk - A[i][k] * A[k][j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def int_matmul(A, B):
    """Exact product of integer (object) matrices."""
    return np.asarray(A, dtype=object) @ np.asarray(B, dtype=object)


def int_inverse(M):
    """Exact inverse of a unimodular integer matrix.

    Raises ``SingularMatrix`` if the inverse is not integral.
    """
    A = np.asarray(M, dtype=object)
    n = A.shape[0]
    aug = [[Fraction(int(x)) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(A.tolist())]
    for c in range(n):
        p = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if p is None:
            raise SingularMatrix("singular integer matrix")
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            x = aug[i][n + j]
            if x.denominator != 1:
                raise SingularMatrix("inverse is not integral; matrix is not unimodular")
            out[i, j] = int(x)
    return out


def unit_lower_inverse(H):
    """Exact inverse of a lower triangular integer matrix with unit diagonal."""
    H = np.asarray(H, dtype=object)
    n = H.shape[0]
    for i in range(n):
        if H[i, i] != 1 or any(H[i, j] != 0 for j in range(i + 1, n)):
            raise ValueError("matrix is not unit lower triangular")
    X = np.zeros((n, n), dtype=object)
    for j in range(n):
        X[j, j] = 1
        for i in range(j + 1, n):
            X[i, j] = -sum(H[i, l] * X[l, j] for l in range(j, i))
    return X


def to_float(M):
    """Convert an exact integer (object) matrix to float64."""
    return np.asarray(M, dtype=object).astype(float)
