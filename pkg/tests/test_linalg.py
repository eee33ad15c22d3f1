import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from disjoint_spca.baselines import appendix_example
from disjoint_spca.components import ComponentSet
from disjoint_spca.errors import InvalidInput, ZeroMatrixError
from disjoint_spca.linalg import (
    JACOBI_MAX_DIM,
    check_psd,
    column_variances,
    explained_variance,
    fix_signs,
    gram_from_data,
    principal_submatrix_lambda_max,
    sym_eig,
    sym_eig_truncated,
)

from conftest import random_psd


class TestGram:
    def test_identity(self):
        np.testing.assert_array_equal(gram_from_data(np.eye(2)), [[0.5, 0], [0, 0.5]])

    def test_centering_constant_columns(self):
        np.testing.assert_array_equal(gram_from_data(np.ones((2, 2)), center=True), np.zeros((2, 2)))

    def test_triple_loop(self, rng):
        S = rng.standard_normal((5, 3))
        G = gram_from_data(S)
        ref = np.zeros((3, 3))
        for i in range(3):
            for j in range(3):
                ref[i, j] = sum(S[t, i] * S[t, j] for t in range(5)) / 5
        np.testing.assert_allclose(G, ref, atol=1e-12)

    def test_unnormalized(self, rng):
        S = rng.standard_normal((4, 3))
        np.testing.assert_allclose(gram_from_data(S, normalize=False), S.T @ S, atol=1e-12)

    def test_exactly_symmetric(self, rng):
        G = gram_from_data(rng.standard_normal((7, 5)), center=True)
        assert np.array_equal(G, G.T)

    @pytest.mark.parametrize("bad", [np.zeros((0, 3)), np.array([1.0, 2.0]), np.array([[np.nan, 1.0]])])
    def test_rejects(self, bad):
        with pytest.raises(InvalidInput):
            gram_from_data(bad)


class TestEig:
    def test_diagonal(self):
        F = sym_eig_truncated(np.diag([3.0, 2.0, 0.0]))
        assert F.rank == 2
        np.testing.assert_allclose(F.eigvals, [3, 2])
        np.testing.assert_allclose(F.eigvecs, [[1, 0], [0, 1], [0, 0]], atol=1e-15)

    def test_appendix_spectrum(self):
        F = sym_eig_truncated(appendix_example(0.1, 0.1))
        np.testing.assert_allclose(F.eigvals, [1.1, 0.9, 0.1, 0.1], atol=1e-12)

    def test_exact_rank_reconstruct(self, rng):
        A = random_psd(rng, 6, 3)
        F = sym_eig_truncated(A)
        assert F.rank == 3
        assert np.max(np.abs(F.reconstruct() - A)) <= 1e-8

    def test_rank_cap(self, rng):
        F = sym_eig_truncated(random_psd(rng, 6, 5), rank_cap=2)
        assert F.rank == 2

    def test_zero_matrix(self):
        with pytest.raises(ZeroMatrixError):
            sym_eig_truncated(np.zeros((3, 3)))

    def test_non_square(self):
        with pytest.raises(InvalidInput):
            sym_eig_truncated(np.zeros((3, 2)))

    @pytest.mark.parametrize("d", [5, 12, JACOBI_MAX_DIM, JACOBI_MAX_DIM + 6])
    def test_matches_lapack(self, rng, d):
        A = random_psd(rng, d, d)
        w, U = sym_eig(A)
        np.testing.assert_allclose(w, np.linalg.eigvalsh(A)[::-1], rtol=1e-10, atol=1e-10 * w[0])
        assert np.max(np.abs(U.T @ U - np.eye(d))) <= 1e-9
        assert np.max(np.abs((U * w) @ U.T - A)) <= 1e-8 * w[0]

    def test_sign_convention(self, rng):
        _, U = sym_eig(random_psd(rng, 6, 6))
        for col in U.T:
            i = np.argmax(np.abs(col))
            assert col[i] > 0

    def test_sign_tie_lowest_index(self):
        x = fix_signs(np.array([-0.5, 0.5, 0.0]))
        np.testing.assert_array_equal(x, [0.5, -0.5, 0.0])

    def test_trace_conservation(self, rng):
        A = random_psd(rng, 7, 4)
        F = sym_eig_truncated(A)
        assert abs(F.eigvals.sum() - np.trace(A)) <= 1e-9 * np.trace(A)
        assert F.source_trace == pytest.approx(np.trace(A))

    def test_scale_equivariance(self, rng):
        A = random_psd(rng, 5, 5)
        F1, F2 = sym_eig_truncated(A), sym_eig_truncated(3.5 * A)
        np.testing.assert_allclose(F2.eigvals, 3.5 * F1.eigvals, rtol=1e-12)
        np.testing.assert_allclose(F2.eigvecs, F1.eigvecs, atol=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 9), st.integers(1, 9), st.integers(0, 2**32 - 1))
    def test_residual_property(self, d, rank, seed):
        A = random_psd(np.random.default_rng(seed), d, min(rank, d))
        F = sym_eig_truncated(A)
        lam1 = F.eigvals[0]
        assert np.max(np.abs(F.reconstruct() - A)) <= 1e-8 * lam1 + 1e-12 * lam1 * d
        assert np.max(np.abs(F.eigvecs.T @ F.eigvecs - np.eye(F.rank))) <= 1e-9
        assert np.all(np.diff(F.eigvals) <= 0) and np.all(F.eigvals > 0)


class TestObjective:
    def test_identity_gives_k(self):
        X = ComponentSet(5, ((0, 3), (1, 4)), np.array([[0.6, 0.8], [1.0, 0.0]]))
        assert explained_variance(np.eye(5), X) == pytest.approx(2.0, abs=1e-15)

    def test_appendix_deflation_value(self):
        A = appendix_example(0.1, 0.1)
        sups, vals = [], []
        for I in [(0, 3), (1, 2)]:
            _, x = principal_submatrix_lambda_max(A, I)
            sups.append(I)
            vals.append(x[list(I)])
        X = ComponentSet(4, tuple(sups), np.array(vals))
        assert explained_variance(A, X) == pytest.approx(1.2, abs=1e-12)

    def test_naive_loops(self, rng):
        A = random_psd(rng, 6, 6)
        vals = rng.standard_normal((2, 3))
        X = ComponentSet(6, ((0, 2, 5), (1, 3, 4)), vals / np.linalg.norm(vals, axis=1, keepdims=True))
        D = X.to_dense()
        ref = [sum(D[i, j] * A[i, l] * D[l, j] for i in range(6) for l in range(6)) for j in range(2)]
        np.testing.assert_allclose(column_variances(A, X), ref, atol=1e-12)

    def test_dimension_mismatch(self):
        X = ComponentSet(3, ((0,),), np.ones((1, 1)))
        with pytest.raises(InvalidInput):
            explained_variance(np.eye(4), X)

    def test_scale(self, rng):
        A = random_psd(rng, 4, 4)
        X = ComponentSet(4, ((0, 1),), np.array([[0.6, 0.8]]))
        assert explained_variance(2.5 * A, X) == pytest.approx(2.5 * explained_variance(A, X), rel=1e-12)


class TestSubmatrix:
    def test_appendix_blocks(self):
        A = appendix_example(0.1, 0.1)
        assert principal_submatrix_lambda_max(A, [0, 3])[0] == pytest.approx(1.1, abs=1e-12)
        assert principal_submatrix_lambda_max(A, [1, 2])[0] == pytest.approx(0.1, abs=1e-12)

    def test_singleton(self, rng):
        A = random_psd(rng, 5, 5)
        lam, x = principal_submatrix_lambda_max(A, [3])
        assert lam == pytest.approx(A[3, 3], rel=1e-14)
        np.testing.assert_array_equal(x, np.eye(5)[3])

    def test_embedding(self, rng):
        A = random_psd(rng, 6, 6)
        lam, x = principal_submatrix_lambda_max(A, [4, 1, 2])
        assert np.count_nonzero(x[[0, 3, 5]]) == 0
        assert x @ A @ x == pytest.approx(lam, rel=1e-12)

    @pytest.mark.parametrize("bad", [[], [0, 7], [-1], [1, 1]])
    def test_rejects(self, rng, bad):
        with pytest.raises(InvalidInput):
            principal_submatrix_lambda_max(np.eye(4), bad)


def test_check_psd_rejects_indefinite():
    with pytest.raises(InvalidInput):
        check_psd(np.diag([1.0, -1.0]))
