"""Shortest vectors by enumeration and packing center density.

Desk-scale tools: enumeration is exponential in the dimension, so it is
capped (8 by default, at most 10 through ``LATPROJ_MAX_SVP_DIM``).
"""

import math
import os
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DimensionTooLarge

DEFAULT_MAX_DIM = 8
HARD_MAX_DIM = 10


def max_svp_dim():
    raw = os.environ.get("LATPROJ_MAX_SVP_DIM")
    if not raw:
        return DEFAULT_MAX_DIM
    cap = int(raw)
    if cap > HARD_MAX_DIM:
        warnings.warn(f"LATPROJ_MAX_SVP_DIM={cap} clamped to {HARD_MAX_DIM}", RuntimeWarning)
        cap = HARD_MAX_DIM
    elif cap > DEFAULT_MAX_DIM:
        warnings.warn(f"enumeration cap raised to {cap}; runs may be slow", RuntimeWarning)
    return cap


@dataclass(frozen=True)
class SvpResult:
    shortest_vector: np.ndarray
    norm_sq: float
    coords: np.ndarray
    node_count: int
    minimal_count: int = None


def lagrange_reduce(B):
    """Lagrange (Gauss) reduction of a 2-row basis; returns ``(B', T)`` with
    ``B' = T B`` and ``|b1'| <= |b2'|``."""
    B = np.array(B, dtype=float)
    T = np.eye(2, dtype=np.int64)
    if B[0] @ B[0] > B[1] @ B[1]:
        B, T = B[::-1].copy(), T[::-1].copy()
    while True:
        mu = round((B[0] @ B[1]) / (B[0] @ B[0]))
        B[1] -= mu * B[0]
        T[1] -= mu * T[0]
        if B[1] @ B[1] >= B[0] @ B[0]:
            return B, T
        B, T = B[::-1].copy(), T[::-1].copy()


def size_reduce(B):
    """Size-reduce the rows of ``B``; returns ``(B', T)`` with ``B' = T B``."""
    B = np.array(B, dtype=float)
    m = B.shape[0]
    T = np.eye(m, dtype=np.int64)
    # Gram-Schmidt vectors are unchanged by size reduction
    Qm, Rm = np.linalg.qr(B.T)
    Bstar = (Qm * np.diag(Rm)).T
    for i in range(1, m):
        for j in range(i - 1, -1, -1):
            mu = round((B[i] @ Bstar[j]) / (Bstar[j] @ Bstar[j]))
            if mu:
                B[i] -= mu * B[j]
                T[i] -= mu * T[j]
    return B, T


def _enumerate(A, bound, count_minimal=False):
    """Fincke-Pohst enumeration on the Gram matrix ``A``.

    Returns ``(best_x, best_norm, nodes, n_minimal)``; ``bound`` must be the
    squared norm of some nonzero lattice vector.
    """
    m = A.shape[0]
    R = np.linalg.cholesky(A).T
    q = np.diag(R) ** 2
    mu = R / np.diag(R)[:, None]
    x = np.zeros(m, dtype=np.int64)
    state = {"bound": bound, "best": None, "nodes": 0, "count": 0}
    slack = 1e-9

    def rec(i, partial):
        c = -float(mu[i, i + 1:] @ x[i + 1:])
        rem = state["bound"] * (1 + slack) - partial
        if rem < 0:
            return
        r = math.sqrt(rem / q[i])
        for xi in range(math.ceil(c - r), math.floor(c + r) + 1):
            d = partial + q[i] * (xi - c) ** 2
            if d > state["bound"] * (1 + slack):
                continue
            state["nodes"] += 1
            x[i] = xi
            if i == 0:
                if not x.any():
                    continue
                if count_minimal:
                    state["count"] += 1
                    if state["best"] is None or d < state["best"][1]:
                        state["best"] = (x.copy(), d)
                elif d < state["bound"] or state["best"] is None:
                    state["best"] = (x.copy(), d)
                    state["bound"] = d
            else:
                rec(i - 1, d)
        x[i] = 0

    rec(m - 1, 0.0)
    best_x, best_d = state["best"]
    return best_x, best_d, state["nodes"], state["count"]


def shortest_vector(L, count_minimal=False):
    """A shortest nonzero vector of ``L`` by radius-pruned enumeration.

    The search radius starts at the shortest basis row. With
    ``count_minimal`` a second pass counts all vectors of minimal norm.
    """
    m = L.dim
    cap = max_svp_dim()
    if m > cap:
        raise DimensionTooLarge(f"dimension {m} exceeds enumeration cap {cap}")
    if m == 2:
        B, T = lagrange_reduce(L.generator)
    else:
        B, T = size_reduce(L.generator)
    A = B @ B.T
    A = (A + A.T) / 2
    x, _, nodes, _ = _enumerate(A, float(np.min(np.diag(A))))
    coords = x @ T
    v = coords @ L.generator
    norm_sq = float(v @ v)
    n_min = None
    if count_minimal:
        _, _, more, n_min = _enumerate(A, norm_sq, count_minimal=True)
        nodes += more
    return SvpResult(shortest_vector=v, norm_sq=norm_sq,
                     coords=coords.astype(object), node_count=nodes,
                     minimal_count=n_min)


def center_density(L):
    """``(packing radius)^m / covolume`` for an ``m``-dimensional lattice."""
    rho = math.sqrt(shortest_vector(L).norm_sq) / 2
    return rho ** L.dim / L.covolume


def density_gap(L_proj, L_target):
    if L_proj.dim != L_target.dim:
        raise ValueError("lattices must have the same dimension")
    return abs(center_density(L_proj) - center_density(L_target))
