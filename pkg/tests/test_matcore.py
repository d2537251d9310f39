import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rmtlab import ensembles, matcore
from rmtlab.errors import InvalidSpec, NonHermitian, ShapeMismatch

from conftest import random_hermitian


class TestHermitianEigenvalues:
    def test_identity(self):
        assert np.allclose(matcore.hermitian_eigenvalues(np.eye(3)), [1, 1, 1])

    def test_diagonal_is_sorted(self):
        assert np.array_equal(matcore.hermitian_eigenvalues(np.diag([3.0, -1.0, 2.0])), [-1, 2, 3])

    def test_pauli_x(self):
        assert np.allclose(matcore.hermitian_eigenvalues([[0.0, 1.0], [1.0, 0.0]]), [-1, 1])

    def test_rejects_non_hermitian(self):
        with pytest.raises(NonHermitian):
            matcore.hermitian_eigenvalues([[0.0, 1.0], [0.0, 0.0]])

    def test_rejects_nan(self):
        with pytest.raises(InvalidSpec):
            matcore.hermitian_eigenvalues([[np.nan, 0.0], [0.0, 1.0]])

    def test_rejects_rectangular(self):
        with pytest.raises(ShapeMismatch):
            matcore.hermitian_eigenvalues(np.zeros((2, 3)))

    @given(st.integers(1, 40), st.integers(0, 2**32 - 1))
    def test_trace_hs_and_residual(self, n, seed):
        H = random_hermitian(np.random.default_rng(seed), n)
        lam = matcore.hermitian_eigenvalues(H)
        op = float(np.max(np.abs(lam)))
        assert np.all(np.diff(lam) >= 0)
        assert abs(lam.sum() - np.trace(H).real) <= 1e-9 * n * op
        assert abs(np.sum(lam ** 2) - matcore.hs_norm(H) ** 2) <= 1e-9 * n * op * max(op, 1)
        res, bound = matcore.hermitian_residual(H)
        assert res <= bound


class TestGeneralEigenvalues:
    def test_rotation(self):
        ev = matcore.general_eigenvalues([[0.0, 1.0], [-1.0, 0.0]])
        assert np.allclose(np.sort_complex(ev), [-1j, 1j])

    def test_cyclic_permutation(self):
        C = np.roll(np.eye(4), 1, axis=1)
        ev = np.sort_complex(matcore.general_eigenvalues(C))
        assert np.allclose(ev, np.sort_complex(np.array([1, 1j, -1, -1j])), atol=1e-12)

    def test_triangular(self):
        T = np.array([[1, 5, 2], [0, 2 + 1j, 7], [0, 0, -3]], dtype=complex)
        ev = np.sort_complex(matcore.general_eigenvalues(T))
        assert np.allclose(ev, np.sort_complex(np.array([1, 2 + 1j, -3])))

    @given(st.integers(1, 30), st.integers(0, 2**32 - 1))
    def test_sum_is_trace(self, n, seed):
        g = np.random.default_rng(seed)
        A = g.standard_normal((n, n)) + 1j * g.standard_normal((n, n))
        ev = matcore.general_eigenvalues(A)
        assert abs(ev.sum() - np.trace(A)) <= 1e-8 * n * matcore.op_norm(A)

    def test_unitary_moduli(self):
        U = ensembles.sample_haar("U", 50, 3)
        assert np.max(np.abs(np.abs(matcore.general_eigenvalues(U)) - 1)) <= 1e-8


class TestSingularValues:
    def test_diagonal(self):
        assert np.allclose(matcore.singular_values(np.diag([3.0, -4.0])), [3, 4])

    def test_zero(self):
        assert np.array_equal(matcore.singular_values(np.zeros((2, 3))), [0, 0])

    def test_column(self):
        assert np.allclose(matcore.singular_values(np.array([[1.0], [1.0]])), [math.sqrt(2)])

    @given(st.integers(1, 12), st.integers(0, 12), st.integers(0, 2**32 - 1))
    def test_squares_match_gram_eigenvalues(self, n, extra, seed):
        g = np.random.default_rng(seed)
        X = g.standard_normal((n + extra, n)) + 1j * g.standard_normal((n + extra, n))
        sv = matcore.singular_values(X)
        lam = matcore.hermitian_eigenvalues(X.conj().T @ X)
        assert np.max(np.abs(sv ** 2 - lam)) <= 1e-8 * lam[-1]

    def test_augmented_spectrum(self):
        X = np.array([[1.0, 2.0], [0.0, 1.0], [1.0, 0.0]])
        lam = matcore.hermitian_eigenvalues(matcore.augmented(X))
        sv = np.linalg.svd(X, compute_uv=False)
        assert np.allclose(lam, np.sort(np.concatenate([sv, -sv, [0.0]])))


class TestNorms:
    def test_identity(self):
        assert np.allclose(matcore.matrix_norms(np.eye(4)), (2.0, 1.0))

    def test_rank_one(self):
        assert np.allclose(matcore.matrix_norms([[0.0, 2.0], [0.0, 0.0]]), (2.0, 2.0))

    def test_ones(self):
        assert np.allclose(matcore.matrix_norms(np.ones((2, 2))), (2.0, 2.0))

    @given(st.integers(1, 10), st.integers(1, 10), st.integers(0, 2**32 - 1))
    def test_op_at_most_hs(self, m, n, seed):
        A = np.random.default_rng(seed).standard_normal((m, n))
        hs, op = matcore.matrix_norms(A)
        assert op <= hs * (1 + 1e-12)

    def test_hs_distance(self):
        assert matcore.hs_distance(np.eye(2), np.eye(2)) == 0
        assert math.isclose(matcore.hs_distance(np.eye(2), np.zeros((2, 2))), math.sqrt(2))
        assert math.isclose(matcore.hs_distance(np.diag([1.0, 0]), np.diag([0, 1.0])), math.sqrt(2))
        with pytest.raises(ShapeMismatch):
            matcore.hs_distance(np.eye(2), np.eye(3))
