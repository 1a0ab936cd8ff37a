import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from latproj.errors import NotLatticeVector, SingularMatrix
from latproj.lattice import (
    Lattice,
    det_of,
    dual,
    gram_of,
    membership,
    minor_gcd,
    primitive_check,
    sublattice_equal,
)
from latproj.instances import random_lattice

HEX = np.array([[1.0, 0.0], [0.5, math.sqrt(3) / 2]])


def random_unimodular(rng, n, steps=12):
    U = np.eye(n, dtype=np.int64)
    for _ in range(steps):
        i, j = rng.choice(n, size=2, replace=False)
        U[i] += rng.integers(-2, 3) * U[j]
    return U


class TestConstruction:
    def test_gram_and_det_cubic(self):
        L = Lattice(np.eye(4))
        np.testing.assert_array_equal(gram_of(L), np.eye(4))
        assert det_of(L) == 1.0

    def test_hexagonal(self):
        L = Lattice(HEX)
        np.testing.assert_allclose(L.gram, [[1, 0.5], [0.5, 1]], atol=1e-15)
        assert L.det == pytest.approx(0.75)

    def test_rectangular(self):
        c = np.array([1.5, 2.0, 0.3])
        L = Lattice(np.diag(c))
        np.testing.assert_allclose(L.gram, np.diag(c**2))
        assert L.det == pytest.approx(np.prod(c**2))

    def test_rejects_dependent_rows(self):
        with pytest.raises(SingularMatrix):
            Lattice([[1, 2, 3], [2, 4, 6]])

    def test_rejects_more_rows_than_cols(self):
        with pytest.raises(ValueError):
            Lattice(np.ones((3, 2)))

    def test_immutable(self):
        L = Lattice(np.eye(2))
        with pytest.raises(ValueError):
            L.generator[0, 0] = 5.0


class TestDual:
    def test_cubic_self_dual(self):
        np.testing.assert_allclose(dual(Lattice(np.eye(2))).generator, np.eye(2))

    def test_one_dimensional(self):
        D = dual(Lattice([[2.0]]))
        np.testing.assert_allclose(D.generator, [[0.5]])
        assert D.det == pytest.approx(0.25)

    def test_hexagonal(self):
        assert dual(Lattice(HEX)).det == pytest.approx(1 / 0.75, rel=1e-12)

    @given(st.integers(1, 8), st.integers(0, 2**32 - 1))
    def test_det_product_is_one(self, n, seed):
        L = random_lattice(np.random.default_rng(seed), n)
        assert dual(L).det * L.det == pytest.approx(1.0, rel=1e-9)

    @given(st.integers(1, 6), st.integers(0, 2**32 - 1))
    def test_double_dual(self, n, seed):
        L = random_lattice(np.random.default_rng(seed), n)
        assert sublattice_equal(dual(dual(L)), L)

    def test_dual_in_span_for_lower_rank(self, rng):
        L = random_lattice(rng, 5, m=3)
        D = dual(L)
        # integral pairing and same span
        P = D.generator @ L.generator.T
        np.testing.assert_allclose(P, np.eye(3), atol=1e-10)
        assert np.linalg.matrix_rank(np.vstack([L.generator, D.generator])) == 3


class TestMembership:
    def test_cubic(self):
        assert membership(Lattice(np.eye(3)), [2, -1, 5]).tolist() == [2, -1, 5]

    def test_non_member(self):
        assert membership(Lattice(np.eye(2)), [0.5, 0]) is None

    def test_hexagonal(self):
        a = membership(Lattice(HEX), [1.5, math.sqrt(3) / 2])
        assert a.tolist() == [1, 1]

    def test_off_span(self):
        L = Lattice([[1.0, 0.0, 0.0]])
        assert membership(L, [1.0, 0.1, 0.0]) is None

    @given(st.integers(1, 6), st.integers(0, 2**32 - 1))
    def test_round_trip(self, n, seed):
        rng = np.random.default_rng(seed)
        L = random_lattice(rng, n)
        alpha = rng.integers(-100, 101, size=n)
        got = membership(L, alpha @ L.generator)
        assert got is not None and got.tolist() == alpha.tolist()


class TestSublatticeEqual:
    def test_reflexive(self):
        assert sublattice_equal(Lattice(np.eye(3)), Lattice(np.eye(3)))

    def test_proper_sublattice(self):
        assert not sublattice_equal(Lattice(np.eye(2)), Lattice(2 * np.eye(2)))

    def test_unimodular_change(self):
        assert sublattice_equal(Lattice(np.eye(2)), Lattice([[1, 0], [3, 1]]))

    @given(st.integers(2, 6), st.integers(0, 2**32 - 1))
    def test_invariant_under_basis_change(self, n, seed):
        rng = np.random.default_rng(seed)
        L = random_lattice(rng, n)
        U = random_unimodular(rng, n)
        assert sublattice_equal(L, Lattice(U @ L.generator))
        M = np.eye(n, dtype=np.int64)
        M[0, 0] = 2
        assert not sublattice_equal(L, Lattice(M @ U @ L.generator))


class TestPrimitive:
    def test_ones_in_z3(self):
        cert = primitive_check(Lattice(np.eye(3)), [[1, 1, 1]])
        assert cert.minor_gcd == 1 and cert.valid

    def test_common_factor(self):
        cert = primitive_check(Lattice(np.eye(2)), [[2, 4]])
        assert cert.minor_gcd == 2 and not cert.valid

    def test_canonical_subset(self):
        cert = primitive_check(Lattice(np.eye(4)), [[1, 0, 0, 0], [0, 1, 0, 0]])
        assert cert.valid

    def test_not_lattice_vector(self):
        with pytest.raises(NotLatticeVector):
            primitive_check(Lattice(np.eye(2)), [[0.5, 1]])

    def test_minor_gcd_pair(self):
        # minors of [[2, 0, 1], [0, 2, 1]]: 4, 2, -2
        assert minor_gcd([[2, 0, 1], [0, 2, 1]]) == 2
        assert minor_gcd([[1, 2], [2, 4]]) == 0

    @given(st.integers(2, 6), st.data())
    def test_basis_subsets_are_primitive(self, n, data):
        seed = data.draw(st.integers(0, 2**32 - 1))
        rng = np.random.default_rng(seed)
        L = random_lattice(rng, n)
        G = random_unimodular(rng, n) @ L.generator
        k = data.draw(st.integers(1, n))
        rows = sorted(data.draw(st.permutations(range(n)))[:k])
        assert primitive_check(L, G[rows]).minor_gcd == 1
