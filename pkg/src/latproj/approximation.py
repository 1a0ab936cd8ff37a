"""Approximating a target lattice by projections of a source lattice.

Given an ``n``-dimensional source and an ``(n-k)``-dimensional target, the
construction picks ``k`` primitive source vectors ``V`` (depending on an
integer refinement parameter ``w``) such that the dual of the projection of
the source onto ``V^perp`` has a generator ``L_w*`` with
``L_w* / w -> [L* | 0]``, where ``L*`` is a lower triangular generator of the
target's dual. Gram matrices therefore converge up to the scale ``1/w^2``.
"""

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import MembershipFailure
from .lattice import Lattice, dual
from .matrix_core import (
    as_int_matrix,
    floor_entrywise,
    int_matmul,
    inverse_triangular,
    lq_factorize,
    max_norm,
    to_float,
    unit_lower_inverse,
)
from .projection import TriangularSplit, _check_k, triangular_split

COND_WARN = 1e8


@dataclass(frozen=True)
class TargetSpec:
    """Lower triangular dual generator ``L*`` padded to ``[L* | 0]`` and split
    after column ``k``."""

    L_star: np.ndarray
    L_bar_1: np.ndarray
    L_bar_2: np.ndarray
    k: int
    n: int

    @property
    def L_bar(self):
        return np.hstack([self.L_bar_1, self.L_bar_2])

    @property
    def dual_gram(self):
        return self.L_star @ self.L_star.T


def target_from_lstar(L_star, k, n):
    L_star = np.array(L_star, dtype=float)
    m = L_star.shape[0]
    if L_star.shape != (m, m) or m != n - k:
        raise ValueError(f"target must be {n - k}-dimensional, got {m}")
    _check_k(k, n)
    if np.any(np.triu(L_star, 1)):
        raise ValueError("L* must be lower triangular")
    cond = np.linalg.cond(L_star)
    if cond > COND_WARN:
        warnings.warn(f"target dual generator is ill-conditioned (cond={cond:.3g})",
                      RuntimeWarning, stacklevel=3)
    L_bar = np.hstack([L_star, np.zeros((m, k))])
    return TargetSpec(L_star=L_star, L_bar_1=L_bar[:, :k], L_bar_2=L_bar[:, k:], k=k, n=n)


def make_target(L2, k, n):
    """Canonical target data for the lattice ``L2``: its dual, lower
    triangularized with positive diagonal."""
    if L2.dim != n - k:
        raise ValueError(f"target must be {n - k}-dimensional, got {L2.dim}")
    L_star, _ = lq_factorize(dual(L2).generator)
    return target_from_lstar(np.tril(L_star), k, n)


def make_target_from_dual(L2_dual, k, n):
    """Like :func:`make_target`, but ``L2_dual`` already generates the
    target's dual lattice."""
    if L2_dual.dim != n - k:
        raise ValueError(f"target must be {n - k}-dimensional, got {L2_dual.dim}")
    L_star, _ = lq_factorize(L2_dual.generator)
    return target_from_lstar(np.tril(L_star), k, n)


def _check_w(w):
    if int(w) != w or w < 1:
        raise ValueError(f"w must be a positive integer, got {w!r}")
    return int(w)


def build_Hw(target, split, w):
    """``floor(w L_bar_2 G3^t) + I``, exact and unit lower triangular."""
    w = _check_w(w)
    H = floor_entrywise(w * (target.L_bar_2 @ split.G3.T))
    m = H.shape[0]
    for i in range(m):
        H[i, i] += 1
    if any(H[i, j] != 0 for i in range(m) for j in range(i + 1, m)) or \
            any(H[i, i] != 1 for i in range(m)):
        raise ArithmeticError("H_w is not unit lower triangular")
    return H


def build_Lw(target, split, w, H=None):
    """Generator ``L_w*`` (triangular frame) and the exact integer ``A_hat``.

    ``A_hat^t = -H_w^{-1} F`` with ``F = floor(w L_bar_1 G1^t + H_w G3^{-t} G2^t)``
    is the only place a float feeds an exact quantity.
    """
    w = _check_w(w)
    if H is None:
        H = build_Hw(target, split, w)
    Hf = to_float(H)
    G1it = inverse_triangular(split.G1).T
    G3it = inverse_triangular(split.G3).T
    Y = Hf @ G3it @ split.G2.T
    F = floor_entrywise(w * (target.L_bar_1 @ split.G1.T) + Y)
    Lw1 = (to_float(F) - Y) @ G1it
    Lw2 = Hf @ G3it
    A_hat = -int_matmul(unit_lower_inverse(H), F).T
    return np.hstack([Lw1, Lw2]), A_hat


def recover_V(split, A_hat, generator=None, tol=1e-7):
    """Primitive source vectors ``[G1 | G2 + A_hat G3] Q`` in original coordinates.

    With ``generator`` given, the rows are recomputed as ``[I | A_hat] G``,
    which is exact for integer generators, after checking it agrees with
    the rotated form.
    """
    Ah = to_float(A_hat)
    Vbar = np.hstack([split.G1, split.G2 + Ah @ split.G3])
    V = Vbar @ split.Q
    if generator is None:
        return V
    A = np.hstack([np.eye(split.k), Ah])
    V2 = A @ np.asarray(generator, dtype=float)
    if max_norm(V2 - V) > tol * max(max_norm(V2), 1.0):
        raise MembershipFailure("recovered V disagrees with [I | A_hat] G")
    return V2


@dataclass(frozen=True)
class ApproximationResult:
    w: int
    H_w: np.ndarray
    L_w_star: np.ndarray
    A_hat: np.ndarray
    V: np.ndarray
    c: float
    gram_error: float
    primal_error: float
    V_norm: float
    target: TargetSpec
    split: TriangularSplit = None

    @property
    def A_coeff(self):
        k = self.target.k
        eye = np.eye(k, dtype=int).astype(object)
        return np.hstack([eye, as_int_matrix(self.A_hat)])

    @property
    def projection_dual_gram(self):
        return self.L_w_star @ self.L_w_star.T

    @property
    def projection_gram(self):
        return np.linalg.inv(self.projection_dual_gram)

    def projected_dual_lattice(self):
        """Dual of the projection, generated by ``L_w*`` in source coordinates."""
        return Lattice(self.L_w_star @ self.split.Q)

    def projected_lattice(self):
        """The projection of the source onto ``V^perp`` with a short basis."""
        return dual(self.projected_dual_lattice())


def gram_errors(target, L_w_star, w):
    """Dual and primal Gram errors at scales ``1/w^2`` and ``w^2``."""
    A_star = target.dual_gram
    A_V_star = L_w_star @ L_w_star.T
    dual_err = max_norm(A_star - A_V_star / w**2)
    primal_err = max_norm(np.linalg.inv(A_star) - w**2 * np.linalg.inv(A_V_star))
    return dual_err, primal_err


def approximate_target(L1, target, w, split=None):
    """Run the construction for a prepared :class:`TargetSpec`."""
    w = _check_w(w)
    if L1.dim != L1.ambient or L1.dim != target.n:
        raise ValueError(f"source must be {target.n}-dimensional and full rank")
    if split is None:
        split = triangular_split(L1, target.k)
    H = build_Hw(target, split, w)
    Lw, A_hat = build_Lw(target, split, w, H)
    V = recover_V(split, A_hat, L1.generator)
    dual_err, primal_err = gram_errors(target, Lw, w)
    return ApproximationResult(
        w=w, H_w=H, L_w_star=Lw, A_hat=A_hat, V=V, c=1.0 / w**2,
        gram_error=dual_err, primal_error=primal_err, V_norm=max_norm(V),
        target=target, split=split,
    )


def approximate(L1, L2, k, w, dual_given=False):
    """Choose ``k`` source vectors whose projection approximates ``L2``.

    ``dual_given=True`` means ``L2`` generates the dual of the target.
    """
    n = L1.ambient
    _check_k(k, n)
    if L1.dim != n:
        raise ValueError("source lattice must be full-dimensional")
    target = (make_target_from_dual if dual_given else make_target)(L2, k, n)
    return approximate_target(L1, target, w)


def expected_slope(n, k):
    """Exponent of ``||V||_inf`` in the Gram error bound."""
    return -1.0 if 2 * k >= n else -1.0 / (n - 2 * k + 1)


def fit_slope(results):
    """Least-squares slope of ``log gram_error`` against ``log ||V||_inf``.

    Runs with zero error are skipped; ``nan`` if fewer than two remain.
    """
    pts = [(r.V_norm, r.gram_error) for r in results if r.gram_error > 0 and r.V_norm > 0]
    if len(pts) < 2:
        return float("nan")
    x, y = np.log(np.array(pts)).T
    if np.ptp(x) == 0:
        return float("nan")
    return float(np.polyfit(x, y, 1)[0])


@dataclass(frozen=True)
class SweepResult:
    results: list
    slope: float
    expected_slope: float


def convergence_sweep(L1, L2, k, w_list, dual_given=False, workers=None):
    """Run the construction for each ``w`` and fit the convergence exponent.

    ``workers`` > 1 evaluates the ``w`` values on a thread pool; results are
    always ordered as ``w_list``.
    """
    w_list = [_check_w(w) for w in w_list]
    if len(w_list) < 3:
        raise ValueError("w_list needs at least 3 values")
    if any(b <= a for a, b in zip(w_list, w_list[1:])):
        raise ValueError("w_list must be strictly increasing")
    n = L1.ambient
    _check_k(k, n)
    target = (make_target_from_dual if dual_given else make_target)(L2, k, n)
    split = triangular_split(L1, k)
    run = lambda w: approximate_target(L1, target, w, split)  # noqa: E731
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, w_list))
    else:
        results = [run(w) for w in w_list]
    return SweepResult(results=results, slope=fit_slope(results),
                       expected_slope=expected_slope(n, k))


def zn_fast_path(target, w):
    """Primitive vectors for a ``Z^n`` source when ``k < n/2``, exact ints.

    ``V = [I | -floor(w L_bar_1)^t (floor(w L_bar_2) + I)^{-t}]``.
    """
    w = _check_w(w)
    k, n = target.k, target.n
    if 2 * k >= n:
        raise ValueError("the Z^n fast path needs k < n/2")
    F = floor_entrywise(w * target.L_bar_1)
    H = floor_entrywise(w * target.L_bar_2)
    for i in range(n - k):
        H[i, i] += 1
    Hinv = unit_lower_inverse(H)
    A_hat = -int_matmul(F.T, Hinv.T)
    return np.hstack([np.eye(k, dtype=int).astype(object), A_hat])


def rect_fast_path(target, c, w):
    """``L_w*`` for the rectangular source ``diag(c)`` in closed form:
    entry ``(i, j)`` is ``(floor(w l_ij c_j) + [j == i + k]) / c_j``."""
    w = _check_w(w)
    c = np.asarray(c, dtype=float)
    if c.shape != (target.n,) or np.any(c <= 0):
        raise ValueError("c must hold n positive scales")
    L_bar = target.L_bar
    m, n = L_bar.shape
    out = np.empty((m, n))
    for i in range(m):
        for j in range(n):
            f = int(np.floor(w * (L_bar[i, j] * c[j])))
            out[i, j] = (f + (j == i + target.k)) / c[j]
    return out
