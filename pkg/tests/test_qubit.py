import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sharpbias.effect_core import DimensionMismatch, Effect
from sharpbias.oracle import constraint_margins
from sharpbias.qubit import (BlochConstraintError, CoexistencePair, QubitEffect, Status,
                             are_coexistent, b2, bloch_from_matrix, coexistence_lhs, commute, f2,
                             matrix_from_bloch, unbiased_reduction)

from conftest import qubit, qubit_effects

R_BOUNDARY = 1.0 / (2.0 * math.sqrt(2.0))


def orthogonal_pair(r, a0=0.5, b0=0.5):
    return QubitEffect(a0, (r, 0.0, 0.0)), QubitEffect(b0, (0.0, r, 0.0))


class TestBloch:
    def test_projection(self):
        q = bloch_from_matrix(Effect.from_matrix(np.diag([1.0, 0.0])))
        assert q.a0 == 0.5
        assert q.a == (0.0, 0.0, 0.5)

    def test_trivial(self):
        A = matrix_from_bloch(QubitEffect(0.3, (0.0, 0.0, 0.0)))
        np.testing.assert_allclose(A.matrix, 0.3 * np.eye(2), atol=1e-15)

    def test_sigma_x(self):
        M = 0.5 * (np.eye(2) + 0.5 * np.array([[0, 1], [1, 0]]))
        q = bloch_from_matrix(M)
        assert q.a0 == pytest.approx(0.5)
        np.testing.assert_allclose(q.a, (0.25, 0.0, 0.0), atol=1e-15)

    def test_rejects_non_qubit(self):
        with pytest.raises(DimensionMismatch):
            bloch_from_matrix(np.eye(3))

    def test_constraint(self):
        with pytest.raises(BlochConstraintError):
            QubitEffect(0.3, (0.0, 0.4, 0.0))
        with pytest.raises(BlochConstraintError):
            QubitEffect(0.5, (0.0, 0.0))

    @given(qubit_effects())
    def test_round_trip(self, q):
        A = matrix_from_bloch(q)
        back = bloch_from_matrix(A)
        assert back.a0 == pytest.approx(q.a0, abs=1e-12)
        np.testing.assert_allclose(back.a, q.a, atol=1e-12)
        np.testing.assert_allclose(back.matrix, A.matrix, atol=1e-12)
        np.testing.assert_allclose(A.eigenvalues, q.eigenvalues, atol=1e-12)

    def test_dict_round_trip(self):
        q = QubitEffect(0.6, (0.1, -0.05, 0.02))
        assert QubitEffect.from_dict(q.to_dict()) == q


class TestF2B2:
    def test_projection(self):
        assert f2(qubit(0.5, 0.5)) == 0.0

    def test_unbiased(self):
        q = qubit(0.5, 0.25)
        assert f2(q) == pytest.approx(2 * math.sqrt(0.1875), abs=1e-15)
        assert f2(q) == pytest.approx(0.8660254, abs=1e-7)
        assert b2(q) == pytest.approx(0.0, abs=1e-15)

    def test_biased(self):
        q = qubit(0.6, 0.2)
        assert f2(q) == pytest.approx(0.9120956, abs=1e-7)
        # the hand value 0.2192758 quoted for this case is off in the 7th digit
        assert b2(q) == pytest.approx(0.21927526, abs=1e-8)
        assert f2(q) * b2(q) == pytest.approx(0.2, abs=1e-12)

    @given(qubit_effects())
    def test_product_identity(self, q):
        assert 0.0 <= f2(q) <= 1.0 + 1e-12
        assert -1.0 - 1e-12 <= b2(q) <= 1.0 + 1e-12
        assert f2(q) * b2(q) == pytest.approx(2 * q.a0 - 1, abs=1e-10)


class TestCriterion:
    @pytest.mark.parametrize("r, lhs, status", [
        (0.25, 1.5, Status.COEXISTENT),
        (0.36, 0.9632, Status.NOT_COEXISTENT),
        (R_BOUNDARY, 1.0, Status.MARGINAL),
    ])
    def test_unbiased_orthogonal(self, r, lhs, status):
        A, B = orthogonal_pair(r)
        v = are_coexistent(A, B)
        assert v.lhs == pytest.approx(lhs, abs=1e-12)
        assert v.status is status

    @given(st.floats(0.0, 0.5))
    def test_orthogonal_reduction(self, r):
        assert coexistence_lhs(*orthogonal_pair(r)) == pytest.approx(2 - 8 * r * r, abs=1e-12)

    def test_pair_abbreviations(self):
        A, B = QubitEffect(0.6, (0.1, 0.0, 0.0)), QubitEffect(0.3, (0.0, 0.2, 0.0))
        p = CoexistencePair.of(A, B)
        assert p.x == pytest.approx(0.2)
        assert p.y == pytest.approx(-0.4)
        assert p.F == pytest.approx(f2(A) ** 2 + f2(B) ** 2)
        assert p.Bq == pytest.approx(b2(A) ** 2 + b2(B) ** 2)
        assert p.lhs == coexistence_lhs(A, B)

    @given(qubit_effects(), qubit_effects())
    def test_symmetric(self, A, B):
        assert coexistence_lhs(A, B) == coexistence_lhs(B, A)

    @given(qubit_effects(), qubit_effects(), st.integers(0, 2 ** 32 - 1))
    def test_rotation_invariant(self, A, B, seed):
        Rq, _ = np.linalg.qr(np.random.default_rng(seed).standard_normal((3, 3)))
        RA, RB = QubitEffect(A.a0, tuple(Rq @ A.vec)), QubitEffect(B.a0, tuple(Rq @ B.vec))
        assert coexistence_lhs(RA, RB) == pytest.approx(coexistence_lhs(A, B), abs=1e-12)

    @given(qubit_effects(), qubit_effects())
    def test_trivial_always_coexists(self, B, C):
        A = QubitEffect(C.a0, (0.0, 0.0, 0.0))
        assert coexistence_lhs(A, B) >= 1.0 - 1e-12
        v = are_coexistent(A, B)
        assert v.status is Status.COEXISTENT
        assert constraint_margins(A, B, v.witness.a0, v.witness.a).min() >= -1e-7

    @given(qubit_effects())
    def test_identical_pair(self, A):
        assert coexistence_lhs(A, A) >= 1.0 - 1e-12

    @given(qubit_effects(), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
    def test_commuting_never_rejected(self, A, b0, frac):
        u = A.vec / A.r if A.r > 0 else np.array([0.0, 0.0, 1.0])
        B = QubitEffect(b0, tuple(frac * min(b0, 1 - b0) * u))
        assert commute(A, B, eps=1e-9)
        v = are_coexistent(A, B)
        assert v.status is not Status.NOT_COEXISTENT
        if v.witness is not None:
            assert constraint_margins(A, B, v.witness.a0, v.witness.a).min() >= -1e-7

    @given(qubit_effects(), st.integers(0, 2 ** 32 - 1))
    def test_sharp_noncommuting_rejected(self, B, seed):
        u = np.random.default_rng(seed).standard_normal(3)
        P = QubitEffect(0.5, tuple(0.5 * u / np.linalg.norm(u)))
        if B.r < 1e-6 or commute(P, B, eps=1e-6):
            return
        assert are_coexistent(P, B).status is Status.NOT_COEXISTENT
        assert are_coexistent(B, P).status is Status.NOT_COEXISTENT

    @given(st.floats(0.0, 0.5), st.floats(0.0, 0.5), st.floats(0.0, math.pi), st.integers(0, 2 ** 32 - 1))
    def test_unbiased_reduction_sign(self, ra, rb, theta, seed):
        A = QubitEffect(0.5, (ra, 0.0, 0.0))
        B = QubitEffect(0.5, (rb * math.cos(theta), rb * math.sin(theta), 0.0))
        val, ref = coexistence_lhs(A, B) - 1.0, unbiased_reduction(A, B)
        if abs(val) > 1e-9 and abs(ref) > 1e-9:
            assert np.sign(val) == np.sign(ref)

    def test_band(self):
        A, B = orthogonal_pair(R_BOUNDARY - 1e-8)
        assert are_coexistent(A, B).status is Status.MARGINAL
        assert are_coexistent(A, B, band=0.0).status is Status.COEXISTENT

    def test_verdict_dict(self):
        d = are_coexistent(*orthogonal_pair(0.36)).to_dict()
        assert d["status"] == "NotCoexistent"
        assert d["witness"] is None
        assert d["lhs"] == pytest.approx(0.9632)
