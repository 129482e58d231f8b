import numpy as np
import pytest
from hypothesis import given

from sharpbias.effect_core import (DimensionMismatch, Effect, EffectError, HermitianOperator,
                                   NotHermitian, SpectrumOutOfRange, State, complement, dispersion,
                                   eig_decompose, is_effect, luders_sequential_prob,
                                   min_distance_to_trivial, numeric_min_distance_to_trivial,
                                   product_operator, spectral_summary, unitary_conjugate,
                                   validate_effect)
from sharpbias.oracle import haar_unitary
from sharpbias.qubit import QubitEffect

from conftest import diag, effects

SX = np.array([[0, 1], [1, 0]], dtype=complex)


class TestHermitianOperator:
    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            HermitianOperator(np.array([[0, 1], [0, 0]], dtype=complex))

    def test_rejects_non_square(self):
        with pytest.raises(EffectError):
            HermitianOperator(np.zeros((2, 3)))

    def test_rejects_oversized(self):
        with pytest.raises(EffectError):
            HermitianOperator(np.eye(17))

    def test_entries_are_read_only(self):
        H = HermitianOperator(np.eye(2))
        with pytest.raises(ValueError):
            H.entries[0, 0] = 3.0


class TestEigDecompose:
    def test_diagonal(self):
        vals, vecs = eig_decompose(HermitianOperator(np.diag([0.2, 0.8])))
        np.testing.assert_allclose(vals, [0.2, 0.8])
        np.testing.assert_allclose(np.abs(vecs), np.eye(2))

    def test_half_identity_plus_sigma_x(self):
        vals, vecs = eig_decompose(HermitianOperator(0.5 * (np.eye(2) + SX)))
        np.testing.assert_allclose(vals, [0.0, 1.0], atol=1e-15)
        np.testing.assert_allclose(np.abs(vecs), np.full((2, 2), 1 / np.sqrt(2)))

    def test_scalar(self):
        vals, _ = eig_decompose(HermitianOperator(0.3 * np.eye(3)))
        np.testing.assert_allclose(vals, [0.3] * 3)

    @given(effects(dims=(2, 3, 4, 8)))
    def test_reconstruction(self, A):
        V, lam = A.eigenvectors, A.eigenvalues
        np.testing.assert_allclose(V @ np.diag(lam) @ V.conj().T, A.matrix, atol=1e-9)
        np.testing.assert_allclose(V.conj().T @ V, np.eye(A.dim), atol=1e-10)
        assert np.all(np.diff(lam) >= 0)


class TestValidateEffect:
    def test_accepts_designed_spectrum(self):
        A = diag(0.0, 0.5, 1.0)
        np.testing.assert_array_equal(A.eigenvalues, [0.0, 0.5, 1.0])

    def test_negative_eigenvalue(self):
        with pytest.raises(SpectrumOutOfRange):
            validate_effect(HermitianOperator(np.diag([-0.2, 0.5])))

    def test_above_one(self):
        with pytest.raises(SpectrumOutOfRange):
            validate_effect(HermitianOperator(np.diag([1.2, 0.5])))

    def test_rounding_excess_is_clamped(self):
        A = validate_effect(HermitianOperator(np.diag([1.0 + 5e-11, 0.3])), tol=1e-9)
        assert A.eigenvalues[-1] == 1.0
        assert A.eigenvalues[0] == pytest.approx(0.3, abs=1e-15)

    def test_tolerance_is_respected(self):
        with pytest.raises(SpectrumOutOfRange):
            validate_effect(HermitianOperator(np.diag([1.0 + 5e-11, 0.3])), tol=1e-12)

    def test_is_effect(self):
        assert is_effect(np.eye(2))
        assert not is_effect(2 * np.eye(2))
        assert not is_effect(np.array([[0, 1], [0, 0]]))


class TestComplement:
    def test_diagonal(self):
        Ac = complement(diag(0.3, 0.7))
        np.testing.assert_allclose(Ac.matrix, np.diag([0.7, 0.3]), atol=1e-15)
        np.testing.assert_allclose(Ac.eigenvalues, [0.3, 0.7], atol=1e-15)

    def test_identity_to_zero(self):
        Ac = complement(Effect.from_matrix(np.eye(3)))
        np.testing.assert_array_equal(Ac.matrix, np.zeros((3, 3)))

    def test_qubit_norm(self):
        A = Effect.from_matrix(QubitEffect(0.6, (0.2, 0.0, 0.0)).matrix)
        assert complement(A).norm == pytest.approx(0.6, abs=1e-12)

    @given(effects(dims=(2, 3, 4, 8)))
    def test_involution(self, A):
        assert complement(complement(A)) is A

    @given(effects(dims=(2, 3, 4, 8)))
    def test_spectrum_reflected(self, A):
        Ac = complement(A)
        np.testing.assert_allclose(Ac.eigenvalues, 1.0 - A.eigenvalues[::-1], atol=1e-15)
        assert Ac.summary.width == pytest.approx(A.summary.width, abs=1e-15)


class TestSpectralSummary:
    def test_projection(self):
        s = spectral_summary(diag(1.0, 0.0))
        assert (s.m, s.M, s.width, s.midpoint) == (0.0, 1.0, 1.0, 0.5)

    def test_trivial(self):
        s = spectral_summary(Effect.from_matrix(0.3 * np.eye(2)))
        assert s.width == pytest.approx(0.0, abs=1e-15)
        assert s.midpoint == pytest.approx(0.3)

    def test_qubit(self):
        s = spectral_summary(Effect.from_matrix(QubitEffect(0.5, (0, 0.25, 0)).matrix))
        np.testing.assert_allclose([s.m, s.M, s.width, s.midpoint], [0.25, 0.75, 0.5, 0.5], atol=1e-15)


class TestDispersion:
    @pytest.mark.parametrize("values, expected", [
        ((1.0, 0.0), 0.0),
        ((0.25, 0.75), 0.0),
        ((0.0, 0.5, 1.0), 0.25),
        ((1.0, 1.0, 0.0, 0.0), 0.0),
    ])
    def test_values(self, values, expected):
        assert dispersion(diag(*values)) == pytest.approx(expected, abs=1e-15)

    @given(effects(dims=(2, 3, 4, 8)))
    def test_range_and_product(self, A):
        D = dispersion(A)
        assert -1e-15 <= D <= 0.25 + 1e-15
        q = np.linalg.eigvalsh(product_operator(A))
        assert D == pytest.approx(q[-1] - q[0], abs=1e-9)


class TestLuders:
    def test_projection_gives_zero(self):
        rng = np.random.default_rng(1)
        for _ in range(5):
            U = haar_unitary(3, rng)
            P = unitary_conjugate(diag(1.0, 0.0, 0.0), U)
            assert luders_sequential_prob(State.maximally_mixed(3), P) == pytest.approx(0.0, abs=1e-15)

    def test_mixed_state(self):
        p = luders_sequential_prob(State.maximally_mixed(2), diag(0.25, 0.75))
        assert p == pytest.approx(0.1875, abs=1e-15)

    def test_trivial_is_state_independent(self):
        rho = np.array([[0.7, 0.2 + 0.1j], [0.2 - 0.1j, 0.3]])
        p = luders_sequential_prob(State(HermitianOperator(rho)), Effect.from_matrix(0.3 * np.eye(2)))
        assert p == pytest.approx(0.21, abs=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            luders_sequential_prob(State.maximally_mixed(3), diag(0.2, 0.4))

    def test_bad_state(self):
        with pytest.raises(EffectError):
            State(HermitianOperator(np.eye(2)))
        with pytest.raises(EffectError):
            State(HermitianOperator(np.diag([1.5, -0.5])))


class TestMinDistance:
    @pytest.mark.parametrize("values, kappa, dist", [
        ((1.0, 0.0), 0.5, 0.5),
        ((0.3, 0.3), 0.3, 0.0),
        ((0.2, 0.9), 0.55, 0.35),
    ])
    def test_closed_form(self, values, kappa, dist):
        k, d = min_distance_to_trivial(diag(*values))
        assert k == pytest.approx(kappa, abs=1e-15)
        assert d == pytest.approx(dist, abs=1e-15)

    @given(effects(dims=(2, 3, 4)))
    def test_numeric_minimiser_agrees(self, A):
        _, d = min_distance_to_trivial(A)
        _, dn = numeric_min_distance_to_trivial(A)
        assert dn == pytest.approx(d, abs=1e-8)


class TestUnitaryConjugate:
    @given(effects(dims=(2, 3, 4)))
    def test_spectrum_preserved(self, A):
        U = haar_unitary(A.dim, np.random.default_rng(0))
        B = unitary_conjugate(A, U)
        np.testing.assert_allclose(B.eigenvalues, A.eigenvalues, atol=1e-12)
