"""Seeded random lattices, primitive sets and targets for property checks."""

import numpy as np

from .lattice import Lattice, minor_gcd
from .matrix_core import as_int_matrix


def random_lattice(rng, n, m=None):
    """Gaussian ``m x n`` generator, redrawn until reasonably conditioned."""
    m = n if m is None else m
    while True:
        G = rng.normal(size=(m, n))
        if np.linalg.cond(G) < 1e3:
            return Lattice(G)


def random_primitive_coeffs(rng, k, m, bound=3):
    """Random ``k x m`` integer matrix with minor gcd 1."""
    while True:
        A = as_int_matrix(rng.integers(-bound, bound + 1, size=(k, m)))
        if minor_gcd(A) == 1:
            return A


def random_A_hat(rng, k, n, bound=3):
    return as_int_matrix(rng.integers(-bound, bound + 1, size=(k, n - k)))


def random_target(rng, m):
    """An ``m``-dimensional full-rank target lattice in ``R^m``."""
    return random_lattice(rng, m)
