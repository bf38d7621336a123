"""Tests for the dense linear-algebra kernel."""

from __future__ import annotations

import numpy as np
import pytest

import qbc
from qbc.errors import (
    BadRank,
    DimMismatch,
    NotHermitian,
    NotNormalized,
    NotPositiveSemidefinite,
)
from qbc.linalg import (
    BipartiteState,
    DensityOperator,
    PureState,
    basis_state,
    bipartite,
    hermitian_eig,
    matrix_abs,
    partial_trace,
    projector,
    random_density,
    random_pure_state,
    random_unitary,
    sqrt_psd,
    svd,
    tensor_product,
)


def random_matrix(rows, cols, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_hermitian(dim, seed):
    m = random_matrix(dim, dim, seed)
    return (m + m.conj().T) / 2


class TestTensorProduct:
    def test_identity(self):
        assert np.array_equal(tensor_product(np.eye(2), np.eye(2)), np.eye(4))

    def test_diagonal(self):
        out = tensor_product(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
        assert np.allclose(out, np.diag([0.0, 1.0, 0.0, 0.0]))

    def test_index_formula(self):
        a = random_matrix(2, 2, 1)
        b = random_matrix(3, 3, 2)
        out = tensor_product(a, b)
        for i in range(2):
            for j in range(2):
                for k in range(3):
                    for l in range(3):
                        assert out[i * 3 + k, j * 3 + l] == pytest.approx(a[i, j] * b[k, l])


class TestPartialTrace:
    def test_product_state(self):
        state = bipartite(2, 2, np.kron(basis_state(2, 0).amplitudes, basis_state(2, 1).amplitudes))
        reduced = partial_trace(state, keep="token")
        assert np.allclose(reduced.matrix, np.diag([0.0, 1.0]))

    def test_maximally_entangled(self):
        state = bipartite(2, 2, np.array([1, 0, 0, 1]) / np.sqrt(2))
        reduced = partial_trace(state, keep="token")
        assert np.allclose(reduced.matrix, np.eye(2) / 2, atol=1e-12)

    def test_commuting_family_reduction(self):
        p = qbc.family_protocol(qbc.Commuting3D(0.3))
        reduced = partial_trace(p.chi0, keep="token")
        assert np.allclose(reduced.matrix, np.diag([0.3, 0.7, 0.0]), atol=1e-12)

    def test_trace_preserved(self):
        for seed in range(20):
            state = BipartiteState(3, 4, random_pure_state(12, seed))
            for keep in ("proof", "token"):
                assert np.trace(partial_trace(state, keep).matrix).real == pytest.approx(1.0, abs=1e-9)

    def test_tensor_then_reduce_recovers_factor(self):
        for seed in range(10):
            psi = random_pure_state(3, seed)
            phi = random_pure_state(2, 100 + seed)
            state = bipartite(3, 2, np.kron(psi.amplitudes, phi.amplitudes))
            assert np.max(np.abs(partial_trace(state, "proof").matrix - projector(psi))) <= 1e-9
            assert np.max(np.abs(partial_trace(state, "token").matrix - projector(phi))) <= 1e-9


class TestHermitianEig:
    def test_diagonal(self):
        dec = hermitian_eig(np.diag([0.7, 0.3]))
        assert np.allclose(dec.eigenvalues, [0.7, 0.3])

    def test_pauli_x_spectrum(self):
        dec = hermitian_eig(np.array([[0, 1], [1, 0]], dtype=complex))
        assert np.allclose(dec.eigenvalues, [1.0, -1.0])

    @pytest.mark.parametrize("dim", [2, 3, 5, 8])
    def test_reconstruction(self, dim):
        h = random_hermitian(dim, dim)
        dec = hermitian_eig(h)
        rebuilt = (dec.eigenvectors * dec.eigenvalues) @ dec.eigenvectors.conj().T
        assert np.max(np.abs(rebuilt - h)) <= 1e-8
        assert np.all(np.diff(dec.eigenvalues) <= 1e-12)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            hermitian_eig(np.array([[0, 1], [0, 0]], dtype=complex))


class TestSvd:
    def test_sign_stripping(self):
        dec = svd(np.diag([-2.0, 1.0]))
        assert np.allclose(dec.singular_values, [2.0, 1.0])

    def test_unitary_input(self):
        dec = svd(random_unitary(4, 0))
        assert np.allclose(dec.singular_values, np.ones(4), atol=1e-12)

    @pytest.mark.parametrize("shape", [(3, 3), (4, 2), (2, 5)])
    def test_against_eigendecomposition(self, shape):
        m = random_matrix(*shape, seed=7)
        dec = svd(m)
        gram_eigs = hermitian_eig(m.conj().T @ m).eigenvalues
        expected = np.sqrt(np.clip(gram_eigs, 0.0, None))[: len(dec.singular_values)]
        assert np.allclose(np.sort(dec.singular_values), np.sort(expected), atol=1e-8)

    def test_reconstruction_and_unitarity(self):
        m = random_matrix(4, 4, 11)
        w, s, v = svd(m)
        assert np.max(np.abs(w @ np.diag(s) @ v.conj().T - m)) <= 1e-8
        assert np.max(np.abs(w.conj().T @ w - np.eye(4))) <= 1e-8
        assert np.max(np.abs(v.conj().T @ v - np.eye(4))) <= 1e-8

    @pytest.mark.parametrize("shape", [(4, 2), (2, 5)])
    def test_rectangular_reconstruction(self, shape):
        m = random_matrix(*shape, seed=13)
        w, s, v = svd(m)
        k = len(s)
        rebuilt = w[:, :k] @ np.diag(s) @ v.conj().T[:k, :]
        assert np.max(np.abs(rebuilt - m)) <= 1e-8
        assert np.max(np.abs(w.conj().T @ w - np.eye(shape[0]))) <= 1e-8
        assert np.max(np.abs(v.conj().T @ v - np.eye(shape[1]))) <= 1e-8


class TestMatrixAbs:
    def test_diagonal(self):
        assert np.allclose(matrix_abs(np.diag([-0.3, 0.4])), np.diag([0.3, 0.4]))

    def test_unitary(self):
        assert np.allclose(matrix_abs(random_unitary(3, 5)), np.eye(3), atol=1e-10)

    def test_square_recovers_gram(self):
        a = random_matrix(4, 4, 3)
        out = matrix_abs(a)
        assert np.max(np.abs(out @ out - a.conj().T @ a)) <= 1e-8

    def test_trace_equals_singular_value_sum(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            dim = int(rng.integers(2, 9))
            a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            trace = np.trace(matrix_abs(a)).real
            assert trace == pytest.approx(np.linalg.svd(a, compute_uv=False).sum(), abs=1e-8)


class TestSqrtPsd:
    def test_diagonal(self):
        rho = DensityOperator(np.diag([0.25, 0.75]))
        assert np.allclose(sqrt_psd(rho), np.diag([0.5, np.sqrt(0.75)]))

    def test_projector_fixed_point(self):
        rho = qbc.density_from_pure(random_pure_state(3, 2))
        assert np.max(np.abs(sqrt_psd(rho) - rho.matrix)) <= 1e-10

    @pytest.mark.parametrize("seed", range(5))
    def test_square_reconstructs(self, seed):
        rho = random_density(4, 3, seed)
        root = sqrt_psd(rho)
        assert np.max(np.abs(root @ root - rho.matrix)) <= 1e-8


class TestRandomStates:
    def test_pure_state_determinism(self):
        a = random_pure_state(4, 42)
        b = random_pure_state(4, 42)
        assert np.array_equal(a.amplitudes, b.amplitudes)

    def test_density_determinism(self):
        a = random_density(3, 2, 42)
        b = random_density(3, 2, 42)
        assert np.array_equal(a.matrix, b.matrix)

    def test_rank_one_is_pure(self):
        rho = random_density(3, 1, 9)
        eigenvalues = np.linalg.eigvalsh(rho.matrix)
        assert eigenvalues[-1] == pytest.approx(1.0, abs=1e-9)

    def test_bad_rank(self):
        with pytest.raises(BadRank):
            random_density(3, 4, 0)
        with pytest.raises(BadRank):
            random_density(3, 0, 0)

    def test_full_rank_mean_is_maximally_mixed(self):
        # Monte Carlo oracle: the ensemble average of random qubit states
        # is I/2 up to sampling error.
        rng = np.random.default_rng(123)
        total = np.zeros((2, 2), dtype=complex)
        n = 10_000
        for _ in range(n):
            total += random_density(2, 2, rng).matrix
        assert np.max(np.abs(total / n - np.eye(2) / 2)) <= 0.02


class TestValidation:
    def test_pure_state_norm(self):
        with pytest.raises(NotNormalized):
            PureState(np.array([1.0, 1.0]))

    def test_density_hermitian(self):
        with pytest.raises(NotHermitian):
            DensityOperator(np.array([[0.5, 0.5], [0.0, 0.5]]))

    def test_density_positive(self):
        with pytest.raises(NotPositiveSemidefinite):
            DensityOperator(np.array([[1.5, 0.0], [0.0, -0.5]]))

    def test_density_trace(self):
        with pytest.raises(NotNormalized):
            DensityOperator(np.eye(2))

    def test_bipartite_dims(self):
        with pytest.raises(DimMismatch):
            BipartiteState(2, 3, random_pure_state(5, 0))

    def test_arrays_frozen(self):
        rho = random_density(2, 2, 0)
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 1.0
