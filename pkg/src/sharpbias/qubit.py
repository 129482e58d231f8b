"""Bloch parametrisation of qubit effects and the pairwise coexistence test.

A qubit operator is written ``a0 * 1 + a . sigma``; it is an effect exactly
when ``|a| <= min(a0, 1 - a0)``.  Two qubit effects ``A`` and ``B`` are jointly
measurable iff

    1/2 [F (2 - Bq) + Bq (2 - F)] + (x y - 4 a.b)^2 >= 1

with ``F = f2(A)^2 + f2(B)^2``, ``Bq = b2(A)^2 + b2(B)^2``, ``x = 2 a0 - 1`` and
``y = 2 b0 - 1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .effect_core import (EPS_EIG, DimensionMismatch, Effect, EffectError, HermitianOperator, _snap,
                          validate_effect)

PAULI = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)

MARGINAL_BAND = 1e-6
# degenerate (trivial / projection) detection in Bloch coordinates
EPS_DEGENERATE = 1e-12


class BlochConstraintError(EffectError):
    pass


@dataclass(frozen=True)
class QubitEffect:
    """``a0 * 1 + a . sigma`` with ``0 <= |a| <= min(a0, 1 - a0)``."""

    a0: float
    a: tuple[float, float, float]
    tol: float = field(default=EPS_EIG, repr=False, compare=False)

    def __post_init__(self):
        a = tuple(float(v) for v in self.a)
        if len(a) != 3:
            raise BlochConstraintError("Bloch vector must have three components")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "a0", float(self.a0))
        if self.r > min(self.a0, 1.0 - self.a0) + self.tol:
            raise BlochConstraintError(
                f"|a| = {self.r:.6g} exceeds min(a0, 1 - a0) for a0 = {self.a0:.6g}")

    @property
    def vec(self) -> np.ndarray:
        return np.array(self.a)

    @property
    def r(self) -> float:
        return math.sqrt(sum(v * v for v in self.a))

    @property
    def eigenvalues(self) -> tuple[float, float]:
        return self.a0 - self.r, self.a0 + self.r

    @property
    def matrix(self) -> np.ndarray:
        return self.a0 * np.eye(2, dtype=complex) + np.einsum("i,ijk->jk", self.vec, PAULI)

    def is_trivial(self, eps: float = EPS_DEGENERATE) -> bool:
        return self.r <= eps

    def is_projection(self, eps: float = EPS_DEGENERATE) -> bool:
        return abs(self.a0 - 0.5) <= eps and abs(self.r - 0.5) <= eps

    def complement(self) -> "QubitEffect":
        return QubitEffect(1.0 - self.a0, tuple(-v for v in self.a), tol=self.tol)

    def to_dict(self) -> dict:
        return {"a0": self.a0, "a": list(self.a)}

    @classmethod
    def from_dict(cls, d: dict) -> "QubitEffect":
        try:
            return cls(float(d["a0"]), tuple(float(v) for v in d["a"]))
        except (KeyError, TypeError) as exc:
            raise BlochConstraintError(f"malformed Bloch record {d!r}") from exc


def bloch_from_matrix(A) -> QubitEffect:
    """Expand a 2x2 effect in the Pauli basis ``{1, sigma_1, sigma_2, sigma_3}``."""
    mat = A.matrix if isinstance(A, Effect) else np.asarray(A, dtype=complex)
    if mat.shape != (2, 2):
        raise DimensionMismatch(f"expected a 2x2 operator, got shape {mat.shape}")
    a0 = 0.5 * np.trace(mat).real
    a = tuple(0.5 * np.trace(mat @ s).real for s in PAULI)
    return QubitEffect(a0, a)


def matrix_from_bloch(q: QubitEffect) -> Effect:
    return validate_effect(HermitianOperator(q.matrix))


def _radicands(q: QubitEffect) -> tuple[float, float]:
    # a0^2 - |a|^2 = lo * hi and (1 - a0)^2 - |a|^2 = (1 - hi)(1 - lo) in terms
    # of the eigenvalues a0 -+ |a|; the factored form avoids cancellation
    lo, hi = q.eigenvalues
    if lo < -EPS_EIG or hi > 1.0 + EPS_EIG:
        raise BlochConstraintError(f"negative radicand for {q!r}")
    lo, hi = _snap(np.array([lo, hi]))
    return float(lo * hi), float((1.0 - hi) * (1.0 - lo))


def f2(q: QubitEffect) -> float:
    """Qubit unsharpness ``sqrt(a0^2 - |a|^2) + sqrt((1 - a0)^2 - |a|^2)``."""
    lo, hi = _radicands(q)
    return math.sqrt(lo) + math.sqrt(hi)


def b2(q: QubitEffect) -> float:
    """Qubit bias ``sqrt(a0^2 - |a|^2) - sqrt((1 - a0)^2 - |a|^2)``."""
    lo, hi = _radicands(q)
    return math.sqrt(lo) - math.sqrt(hi)


@dataclass(frozen=True)
class CoexistencePair:
    """A pair of qubit effects with the criterion's intermediate quantities."""

    A: QubitEffect
    B: QubitEffect
    F: float
    Bq: float
    x: float
    y: float
    lhs: float

    @classmethod
    def of(cls, A: QubitEffect, B: QubitEffect) -> "CoexistencePair":
        fa, fb = f2(A), f2(B)
        ba, bb = b2(A), b2(B)
        F = fa * fa + fb * fb
        Bq = ba * ba + bb * bb
        x, y = 2.0 * A.a0 - 1.0, 2.0 * B.a0 - 1.0
        dot = sum(u * v for u, v in zip(A.a, B.a))
        lhs = 0.5 * (F * (2.0 - Bq) + Bq * (2.0 - F)) + (x * y - 4.0 * dot) ** 2
        return cls(A, B, F, Bq, x, y, lhs)


def coexistence_lhs(A: QubitEffect, B: QubitEffect) -> float:
    return CoexistencePair.of(A, B).lhs


class Status(str, enum.Enum):
    COEXISTENT = "Coexistent"
    NOT_COEXISTENT = "NotCoexistent"
    MARGINAL = "Marginal"


@dataclass(frozen=True)
class CoexistenceVerdict:
    status: Status
    lhs: float
    witness: QubitEffect | None = None
    reason: str = "criterion"

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "lhs": self.lhs,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "reason": self.reason,
        }


def commute(A: QubitEffect, B: QubitEffect, eps: float = EPS_DEGENERATE) -> bool:
    return float(np.linalg.norm(np.cross(A.vec, B.vec))) <= eps


def product_witness(A: QubitEffect, B: QubitEffect) -> QubitEffect:
    """``G = AB`` for commuting ``A, B``; it is an explicit joint-observable witness."""
    G = 0.5 * (A.matrix @ B.matrix + B.matrix @ A.matrix)
    g0 = 0.5 * np.trace(G).real
    g = tuple(0.5 * np.trace(G @ s).real for s in PAULI)
    return QubitEffect(g0, g, tol=1e-7)


def are_coexistent(A: QubitEffect, B: QubitEffect, band: float = MARGINAL_BAND) -> CoexistenceVerdict:
    """Three-valued coexistence verdict for a pair of qubit effects.

    Trivial effects and projections are settled before the inequality is
    consulted: a trivial effect coexists with everything, a projection only
    with effects it commutes with.
    """
    lhs = coexistence_lhs(A, B)
    for P, Q in ((A, B), (B, A)):
        if P.is_trivial():
            g = QubitEffect(P.a0 * Q.a0, tuple(P.a0 * v for v in Q.a), tol=1e-7)
            return CoexistenceVerdict(Status.COEXISTENT, lhs, g, reason="trivial")
    if A.is_projection() or B.is_projection():
        if commute(A, B):
            return CoexistenceVerdict(Status.COEXISTENT, lhs, product_witness(A, B), reason="commuting-projection")
        return CoexistenceVerdict(Status.NOT_COEXISTENT, lhs, reason="noncommuting-projection")
    witness = product_witness(A, B) if commute(A, B) else None
    if lhs >= 1.0 + band:
        status = Status.COEXISTENT
    elif lhs <= 1.0 - band:
        status = Status.NOT_COEXISTENT
    else:
        status = Status.MARGINAL
    return CoexistenceVerdict(status, lhs, witness)


def unbiased_reduction(A: QubitEffect, B: QubitEffect) -> float:
    """``1 - |a + b| - |a - b|``; its sign decides coexistence when ``a0 = b0 = 1/2``."""
    return 1.0 - float(np.linalg.norm(A.vec + B.vec)) - float(np.linalg.norm(A.vec - B.vec))
