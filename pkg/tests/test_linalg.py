"""Linear-algebra layer: eigensolver contract, partial maps, Haar sampling."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import absred as ar
from absred.linalg import hermitian_part, is_unitary, reduction_map


def random_hermitian(rng, d):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return hermitian_part(z)


def cofactor_det(M) -> complex:
    """Determinant by recursive cofactor expansion; the independent oracle."""
    M = np.asarray(M)
    d = M.shape[0]
    if d == 1:
        return M[0, 0]
    total = 0.0 + 0.0j
    for j in range(d):
        minor = np.delete(np.delete(M, 0, axis=0), j, axis=1)
        total += (-1) ** j * M[0, j] * cofactor_det(minor)
    return total


class TestEigHermitian:
    def test_identity(self):
        w, v = ar.eig_hermitian(np.eye(4))
        assert np.allclose(w, 1.0)
        assert np.allclose(v @ v.conj().T, np.eye(4), atol=1e-10)

    def test_diagonal(self):
        w, _ = ar.eig_hermitian(np.diag([3.0, 1.0, 2.0]))
        assert np.allclose(w, [1.0, 2.0, 3.0])

    def test_charpoly_against_cofactor_expansion(self, rng):
        H = random_hermitian(rng, 6)
        w, v = ar.eig_hermitian(H)
        # eigenpair residuals and orthonormality
        norm = np.linalg.norm(H, 2)
        assert np.linalg.norm(H @ v - v * w) <= 1e-9 * max(norm, 1.0)
        assert np.abs(v.conj().T @ v - np.eye(6)).max() <= 1e-10
        # characteristic polynomial sampled at a few points
        for x in (0.0, 0.37, -0.81):
            oracle = cofactor_det(H - x * np.eye(6))
            assert abs(oracle.imag) < 1e-8
            assert np.prod(w - x) == pytest.approx(oracle.real, rel=1e-8)
        assert w.sum() == pytest.approx(float(np.trace(H).real), abs=1e-10)

    def test_rejects_non_hermitian_naming_entries(self):
        X = np.zeros((3, 3), dtype=complex)
        X[0, 2] = 1.0
        with pytest.raises(ValueError, match=r"X\[\d,\d\]"):
            ar.eig_hermitian(X)


class TestPartialMaps:
    def test_partial_trace_product(self, rng):
        dims = ar.BipartiteDims(3, 2)
        A = random_hermitian(rng, 3)
        B = random_hermitian(rng, 2)
        got = ar.partial_trace_B(np.kron(A, B), dims)
        assert np.allclose(got, A * np.trace(B), atol=1e-12)
        got_a = ar.partial_trace_A(np.kron(A, B), dims)
        assert np.allclose(got_a, B * np.trace(A), atol=1e-12)

    def test_partial_trace_bell(self):
        dims = ar.BipartiteDims(2, 2)
        psi = ar.build_pure_state([0.5, 0.5], dims)
        got = ar.partial_trace_B(np.outer(psi, psi.conj()), dims)
        assert np.allclose(got, np.eye(2) / 2, atol=1e-12)

    def test_partial_trace_rho32_by_direct_summation(self, rho32_matrix):
        dims = ar.BipartiteDims(3, 2)
        got = ar.partial_trace_B(rho32_matrix, dims)
        oracle = np.zeros((3, 3), dtype=complex)
        for i in range(3):
            for j in range(3):
                for b in range(2):
                    oracle[i, j] += rho32_matrix[i * 2 + b, j * 2 + b]
        assert np.allclose(got, oracle, atol=1e-15)
        assert np.trace(got).real == pytest.approx(1.0, abs=1e-12)

    def test_reduction_product_pure_state(self):
        dims = ar.BipartiteDims(2, 3)
        psi = ar.build_pure_state([1.0], dims)
        red = ar.reduction_B(np.outer(psi, psi.conj()), dims)
        w = np.linalg.eigvalsh(red)
        assert np.allclose(np.sort(w)[::-1], [1, 1, 0, 0, 0, 0], atol=1e-12)

    def test_reduction_bell_matches_hat(self):
        dims = ar.BipartiteDims(2, 2)
        psi = ar.build_pure_state([0.5, 0.5], dims)
        w = np.linalg.eigvalsh(ar.reduction_B(np.outer(psi, psi.conj()), dims))
        assert np.allclose(w, [-0.5, 0.5, 0.5, 0.5], atol=1e-12)
        assert np.allclose(w, np.sort(ar.hat([0.5, 0.5], dims)), atol=1e-12)

    @pytest.mark.parametrize("n,k", [(2, 2), (3, 2), (2, 3), (3, 3)])
    def test_reduction_trace_scaling(self, rng, n, k):
        dims = ar.BipartiteDims(n, k)
        X = random_hermitian(rng, dims.d)
        tr = np.trace(X).real
        assert np.trace(ar.reduction_B(X, dims)).real == pytest.approx((k - 1) * tr, abs=1e-10)
        assert np.trace(ar.reduction_A(X, dims)).real == pytest.approx((n - 1) * tr, abs=1e-10)

    def test_rho32_reduction_sides(self, rho32):
        wa = np.linalg.eigvalsh(ar.reduction_A(rho32.matrix, rho32.dims))
        wb = np.linalg.eigvalsh(ar.reduction_B(rho32.matrix, rho32.dims))
        assert wa[0] >= 1 / 20 - 1e-9
        assert wb[0] < -1 / 20 + 1e-9

    def test_partial_transpose_diagonal_fixed(self):
        dims = ar.BipartiteDims(2, 2)
        X = np.diag([0.4, 0.3, 0.2, 0.1]).astype(complex)
        assert np.allclose(ar.partial_transpose(X, dims), X)

    def test_partial_transpose_bell(self):
        dims = ar.BipartiteDims(2, 2)
        psi = ar.build_pure_state([0.5, 0.5], dims)
        w = np.linalg.eigvalsh(ar.partial_transpose(np.outer(psi, psi.conj()), dims))
        assert np.allclose(w, [-0.5, 0.5, 0.5, 0.5], atol=1e-12)

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_partial_transpose_maxent_eigenvalues(self, k):
        dims = ar.BipartiteDims(k, k)
        psi = ar.build_pure_state([1.0 / k] * k, dims)
        w = np.linalg.eigvalsh(ar.partial_transpose(np.outer(psi, psi.conj()), dims))
        expected = np.sort(
            np.concatenate([np.full(k * (k - 1) // 2, -1.0 / k), np.full(k * (k + 1) // 2, 1.0 / k)])
        )
        assert np.allclose(w, expected, atol=1e-12)

    def test_partial_transpose_involution_and_swap_spectrum(self, rng):
        dims = ar.BipartiteDims(3, 2)
        X = random_hermitian(rng, 6)
        pt = ar.partial_transpose(X, dims)
        assert np.allclose(ar.partial_transpose(pt, dims), X, atol=1e-14)
        other = (
            X.reshape(3, 2, 3, 2).transpose(2, 1, 0, 3).reshape(6, 6)
        )  # transpose the first factor instead
        assert np.allclose(
            np.linalg.eigvalsh(pt), np.linalg.eigvalsh(other), atol=1e-10
        )

    def test_duality_of_both_maps(self, rng):
        dims = ar.BipartiteDims(3, 2)
        for _ in range(5):
            X = random_hermitian(rng, 6)
            Y = random_hermitian(rng, 6)
            bound = 1e-10 * np.linalg.norm(X) * np.linalg.norm(Y)
            for phi in (ar.partial_transpose, ar.reduction_B):
                lhs = np.trace(phi(X, dims) @ Y)
                rhs = np.trace(X @ phi(Y, dims))
                assert abs(lhs - rhs) <= bound

    def test_reduction_map_is_positive(self, rng):
        for _ in range(5):
            z = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            P = z @ z.conj().T
            assert np.linalg.eigvalsh(reduction_map(P))[0] >= -1e-10

    def test_dimension_mismatch_errors(self):
        dims = ar.BipartiteDims(2, 2)
        with pytest.raises(ValueError):
            ar.partial_trace_B(np.eye(5), dims)
        with pytest.raises(ValueError):
            ar.reduction_B(np.eye(6), dims)
        with pytest.raises(ValueError):
            ar.partial_transpose(np.eye(3), dims)


class TestHaar:
    def test_unitarity_and_determinism(self):
        for dim in (1, 3, 5):
            U = ar.haar_unitary(dim, 42)
            assert is_unitary(U)
        assert np.allclose(ar.haar_unitary(4, 7), ar.haar_unitary(4, 7))
        assert not np.allclose(ar.haar_unitary(4, 7), ar.haar_unitary(4, 8))

    def test_dim_one_is_a_phase(self):
        U = ar.haar_unitary(1, 0)
        assert U.shape == (1, 1)
        assert abs(abs(U[0, 0]) - 1) < 1e-12

    def test_first_moment(self):
        # |U_11|^2 is Beta(1, d-1) under the invariant measure: mean 1/d
        rng = np.random.default_rng(5)
        d, n_samples = 4, 100_000
        total = 0.0
        for _ in range(n_samples):
            U = ar.haar_unitary(d, rng)
            total += abs(U[0, 0]) ** 2
        mean = total / n_samples
        var = (d - 1) / (d * d * (d + 1))
        se = np.sqrt(var / n_samples)
        assert abs(mean - 1 / d) <= 3 * se


class TestMajorizes:
    def test_uniform_is_minimal(self, rng):
        dims = ar.BipartiteDims(2, 2)
        uni = ar.Spectrum.uniform(dims)
        for _ in range(10):
            s = ar.Spectrum(dims, np.sort(rng.dirichlet(np.ones(4)))[::-1])
            assert ar.majorizes(s, uni)

    def test_pure_is_maximal(self):
        dims = ar.BipartiteDims(2, 2)
        pure = ar.Spectrum(dims, [1.0, 0.0, 0.0, 0.0])
        other = ar.Spectrum(dims, [0.5, 0.5, 0.0, 0.0])
        assert ar.majorizes(pure, other)
        assert not ar.majorizes(other, pure)

    def test_prefix_sum_example(self):
        dims = ar.BipartiteDims(2, 2)
        rho = ar.Spectrum(dims, [0.5, 0.3, 0.2, 0.0])
        sigma = ar.Spectrum(dims, [0.4, 0.4, 0.1, 0.1])
        assert ar.majorizes(rho, sigma)

    def test_length_mismatch(self):
        a = ar.Spectrum(ar.BipartiteDims(2, 2), [0.25] * 4)
        b = ar.Spectrum(ar.BipartiteDims(3, 2), [1 / 6] * 6)
        with pytest.raises(ValueError):
            ar.majorizes(a, b)

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(0.01, 1.0), min_size=4, max_size=4))
    def test_reflexive_and_mix_invariance(self, raw):
        vals = np.asarray(raw) / np.sum(raw)
        dims = ar.BipartiteDims(2, 2)
        s = ar.Spectrum(dims, vals)
        assert ar.majorizes(s, s)
        mixed = ar.Spectrum(dims, (s.values + s.values[::-1]) / 2)
        assert ar.majorizes(s, mixed)


class TestTypesAndJson:
    def test_matrix_json_round_trip(self, rng):
        X = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert np.allclose(ar.matrix_from_json(ar.matrix_to_json(X)), X)

    def test_spectrum_json_round_trip(self):
        s = ar.Spectrum(ar.BipartiteDims(3, 2), [0.3, 0.25, 0.2, 0.15, 0.1, 0.0])
        t = ar.Spectrum.from_json(s.to_json())
        assert t.dims == s.dims
        assert np.allclose(t.values, s.values)

    def test_spectrum_sorts_and_validates(self):
        s = ar.Spectrum(ar.BipartiteDims(2, 2), [0.1, 0.4, 0.3, 0.2])
        assert np.all(np.diff(s.values) <= 0)
        with pytest.raises(ValueError):
            ar.Spectrum(ar.BipartiteDims(2, 2), [0.5, 0.4, 0.2, 0.1])  # sums to 1.2
        with pytest.raises(ValueError):
            ar.Spectrum(ar.BipartiteDims(2, 2), [1.2, -0.2, 0.0, 0.0])

    def test_density_matrix_validation(self):
        dims = ar.BipartiteDims(2, 2)
        with pytest.raises(ValueError):
            ar.DensityMatrix(dims, np.eye(4))  # trace 4
        with pytest.raises(ValueError):
            ar.DensityMatrix(dims, np.diag([1.5, -0.5, 0.0, 0.0]).astype(complex))
        rho = ar.DensityMatrix(dims, np.diag([0.4, 0.3, 0.2, 0.1]).astype(complex))
        assert np.allclose(rho.spectrum().values, [0.4, 0.3, 0.2, 0.1])

    def test_bipartite_dims(self):
        dims = ar.BipartiteDims.parse("3,2")
        assert (dims.n, dims.k, dims.d, dims.r) == (3, 2, 6, 2)
        assert dims.swapped() == ar.BipartiteDims(2, 3)
        with pytest.raises(ValueError):
            ar.BipartiteDims(1, 2)
        with pytest.raises(ValueError):
            ar.BipartiteDims.parse("4")
