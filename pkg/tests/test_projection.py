import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from latproj.errors import BadExtension, NotPrimitive
from latproj.instances import random_A_hat, random_lattice, random_primitive_coeffs
from latproj.lattice import Lattice, dual, sublattice_equal
from latproj.matrix_core import as_int_matrix, block_det_gram, int_det, max_norm, to_float
from latproj.projection import (
    complete_to_basis,
    discriminant_identity,
    dual_projection_lattice,
    dual_projection_matrix,
    duality_crosscheck,
    duality_report,
    primitive_rows,
    project,
    projector,
    triangular_split,
)


class TestTriangularSplit:
    def test_cubic(self):
        s = triangular_split(Lattice(np.eye(3)), 1)
        np.testing.assert_array_equal(s.G1, [[1]])
        np.testing.assert_array_equal(s.G2, [[0, 0]])
        np.testing.assert_array_equal(s.G3, np.eye(2))
        np.testing.assert_array_equal(s.Q, np.eye(3))

    def test_rectangular(self):
        s = triangular_split(Lattice(np.diag([2.0, 3.0, 0.5])), 1)
        np.testing.assert_allclose(s.G1, [[2.0]])
        np.testing.assert_allclose(s.G2, [[0, 0]])
        np.testing.assert_allclose(s.G3, np.diag([3.0, 0.5]))

    @pytest.mark.parametrize("k", [0, 3])
    def test_degenerate_k(self, k):
        with pytest.raises(ValueError):
            triangular_split(Lattice(np.eye(3)), k)

    @given(st.integers(2, 7), st.data())
    def test_reassembly(self, n, data):
        rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
        k = data.draw(st.integers(1, n - 1))
        L = random_lattice(rng, n)
        s = triangular_split(L, k)
        assert max_norm(s.R @ s.Q - L.generator) <= 1e-9 * max_norm(L.generator)
        assert np.all(np.diag(s.G1) > 0) and np.all(np.diag(s.G3) > 0)
        assert not np.any(np.tril(s.G1, -1)) and not np.any(np.tril(s.G3, -1))


class TestCompleteToBasis:
    def test_ones(self):
        A = as_int_matrix([[1, 1, 1]])
        U = complete_to_basis(A)
        assert abs(int_det(np.vstack([A, U]))) == 1

    def test_canonical(self):
        assert complete_to_basis([[1, 0]]).tolist() == [[0, 1]]

    def test_two_three(self):
        A = as_int_matrix([[2, 3]])
        assert abs(int_det(np.vstack([A, complete_to_basis(A)]))) == 1

    def test_rejects_non_primitive(self):
        with pytest.raises(NotPrimitive) as exc:
            complete_to_basis([[2, 4]])
        assert exc.value.gcd == 2

    @given(st.integers(2, 7), st.data())
    def test_random_primitive(self, m, data):
        rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
        k = data.draw(st.integers(1, m - 1))
        A = random_primitive_coeffs(rng, k, m, bound=9)
        U = complete_to_basis(A)
        assert U.shape == (m - k, m)
        assert abs(int_det(np.vstack([A, U]))) == 1


class TestProject:
    def test_ones_in_z3(self):
        spec = project(Lattice(np.eye(3)), [[1, 1, 1]], U=[[0, 1, 0], [0, 0, 1]])
        np.testing.assert_allclose(spec.projected.gram, [[2 / 3, -1 / 3], [-1 / 3, 2 / 3]],
                                   atol=1e-12)
        assert spec.projected.det == pytest.approx(1 / 3, rel=1e-12)

    def test_axis(self):
        spec = project(Lattice(np.eye(2)), [[1, 0]], U=[[0, 1]])
        np.testing.assert_allclose(spec.projected.gram, [[1.0]])
        np.testing.assert_allclose(spec.projected.generator, [[0, 1]])

    @pytest.mark.parametrize("n", range(2, 8))
    def test_ones_determinant(self, n):
        spec = project(Lattice(np.eye(n)), np.ones((1, n)))
        assert spec.projected.det == pytest.approx(1 / n, rel=1e-10)
        assert spec.projected.dim == n - 1

    def test_not_primitive(self):
        with pytest.raises(NotPrimitive):
            project(Lattice(np.eye(2)), [[2, 4]])

    def test_bad_extension(self):
        with pytest.raises(BadExtension):
            project(Lattice(np.eye(3)), [[1, 1, 1]], U=[[0, 2, 0], [0, 0, 1]])

    def test_independent_of_completion(self):
        L = Lattice(np.eye(3))
        a = project(L, [[1, 1, 1]], U=[[0, 1, 0], [0, 0, 1]]).projected
        b = project(L, [[1, 1, 1]], U=[[1, 0, 0], [3, 1, 0]]).projected
        assert sublattice_equal(a, b)

    @given(st.integers(2, 6), st.data())
    def test_spec_invariants(self, n, data):
        rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
        k = data.draw(st.integers(1, n - 1))
        L = random_lattice(rng, n)
        V = to_float(random_primitive_coeffs(rng, k, n)) @ L.generator
        spec = project(L, V)
        P = spec.P
        assert max_norm(P @ P - P) <= 1e-9
        assert max_norm(P - P.T) <= 1e-9
        assert np.linalg.matrix_rank(P, tol=1e-9) == n - k
        assert max_norm(V @ P) <= 1e-9 * max_norm(V)
        assert spec.projected.dim == n - k

    def test_projector_formula(self):
        P = projector([[1.0, 1.0, 1.0]])
        np.testing.assert_allclose(P, np.eye(3) - np.ones((3, 3)) / 3, atol=1e-15)


class TestDiscriminant:
    def test_ones(self):
        L = Lattice(np.eye(3))
        lhs, rhs = discriminant_identity(L, project(L, [[1, 1, 1]]))
        assert lhs == pytest.approx(1 / 3) and rhs == pytest.approx(1 / 3)

    def test_axis(self):
        L = Lattice(np.eye(2))
        lhs, rhs = discriminant_identity(L, project(L, [[1, 0]]))
        assert lhs == pytest.approx(1.0) and rhs == pytest.approx(1.0)

    @given(st.integers(2, 8), st.data())
    def test_random(self, n, data):
        rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
        k = data.draw(st.integers(1, n - 1))
        L = random_lattice(rng, n)
        V = to_float(random_primitive_coeffs(rng, k, n)) @ L.generator
        lhs, rhs = discriminant_identity(L, project(L, V))
        assert abs(lhs - rhs) / rhs < 1e-8

    def test_block_route(self, rng):
        # det L = det(V V^t) det L_V, with the block determinant as second route
        L = random_lattice(rng, 5)
        A = random_primitive_coeffs(rng, 2, 5)
        spec = project(L, to_float(A) @ L.generator)
        UG = to_float(spec.U) @ L.generator
        assert block_det_gram(spec.V, UG) == pytest.approx(L.det, rel=1e-9)


class TestDualProjection:
    def test_ones_in_z3(self):
        s = triangular_split(Lattice(np.eye(3)), 1)
        M = dual_projection_matrix(s, [[1, 1]])
        np.testing.assert_allclose(M, [[-1, 1, 0], [-1, 0, 1]])
        assert np.linalg.det(M @ M.T) == pytest.approx(3.0)

    def test_decoupled_blocks(self, rng):
        G = np.zeros((4, 4))
        G[:2, :2] = np.triu(rng.uniform(0.5, 2, size=(2, 2)))
        G[2:, 2:] = np.triu(rng.uniform(0.5, 2, size=(2, 2)))
        s = triangular_split(Lattice(G), 2)
        np.testing.assert_allclose(s.G2, 0, atol=1e-14)
        M = dual_projection_matrix(s, np.zeros((2, 2), dtype=int))
        np.testing.assert_allclose(M[:, :2], 0, atol=1e-14)
        G3_block = Lattice(np.hstack([np.zeros((2, 2)), s.G3]))
        assert sublattice_equal(Lattice(M), dual(G3_block))

    def test_crosscheck_examples(self):
        assert duality_crosscheck(Lattice(np.eye(3)), [[1, 1]])
        assert duality_crosscheck(Lattice(np.eye(4)), np.zeros((2, 2), dtype=int))

    @pytest.mark.parametrize("seed", range(20))
    def test_crosscheck_random(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 6))
        k = int(rng.integers(1, 3))
        L = random_lattice(rng, n)
        rep = duality_report(L, random_A_hat(rng, k, n))
        assert rep.lattices_equal
        assert rep.det_relerr < 1e-8

    @given(st.integers(3, 6), st.data())
    def test_inclusions(self, n, data):
        rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
        k = data.draw(st.integers(1, n - 1))
        L = random_lattice(rng, n)
        s = triangular_split(L, k)
        A_hat = random_A_hat(rng, k, n)
        M = dual_projection_lattice(s, A_hat).generator
        V = primitive_rows(s, A_hat)
        u = rng.integers(-5, 6, size=n - k)
        x = u @ M
        # orthogonal to V
        assert max_norm(x @ V.T) <= 1e-9 * np.linalg.norm(x) * max_norm(V) * n
        # integral against the (triangular-frame) source generators
        ip = s.R @ x
        assert max_norm(ip - np.rint(ip)) <= 1e-7

    def test_M_det_matches_determinant_identity(self, rng):
        L = random_lattice(rng, 6)
        s = triangular_split(L, 2)
        A_hat = random_A_hat(rng, 2, 6)
        V = primitive_rows(s, A_hat)
        LM = dual_projection_lattice(s, A_hat)
        assert LM.det * L.det == pytest.approx(np.linalg.det(V @ V.T), rel=1e-8)
