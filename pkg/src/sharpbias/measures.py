"""Sharpness, unsharpness and bias functionals of effects.

Every measure is a function of a handful of spectral quantities: the extreme
eigenvalues ``M`` and ``m``, the midpoint ``a0 = (M + m)/2`` and the extremes
of ``lambda(1 - lambda)`` over the spectrum (the spectrum of ``AA'``).  The
operator norms that appear in the closed forms reduce to these:
``||A|| = M``, ``||A'|| = 1 - m``, ``||AA'|| = max lambda(1-lambda)`` and
``||1 - AA'|| = 1 - min lambda(1-lambda)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .effect_core import EPS_EIG, Effect
from .qubit import QubitEffect, b2, bloch_from_matrix, f2


class MeasureError(ValueError):
    pass


class UnknownMeasure(MeasureError):
    pass


class NegativeDiscriminant(MeasureError):
    pass


class InconsistencyError(MeasureError):
    """A quantity proven nonnegative came out below ``-EPS_EIG``."""


def _root(value: float, what: str) -> float:
    if value < -EPS_EIG:
        raise InconsistencyError(f"{what} radicand is {value!r}")
    return math.sqrt(max(value, 0.0))


def _norms(A: Effect) -> tuple[float, float]:
    return A.norm, A.complement_norm


# -- measures valid in every dimension ------------------------------------

def sharpness_a(A: Effect) -> float:
    """Spectral width ``||A|| + ||A'|| - 1``."""
    return A.summary.width


def sharpness_b(A: Effect) -> float:
    na, nc = _norms(A)
    return (1.0 - abs(na - nc)) * (na + nc - 1.0)


# The remaining measures are written in terms of quantities that are exact
# images of each other under A -> A':
#   P = M m and Q = (1-M)(1-m) swap;
#   W (symmetric width) and the per-eigenvalue distances to the ends swap;
#   G, the interior excess of lambda(1 - lambda), and the endpoint gap are invariant.

def _pq(A: Effect) -> tuple[float, float]:
    lam, co = A.eigenvalues, A.co_eigenvalues
    return float(lam[0] * lam[-1]), float(co[-1] * co[0])


def interior_excess(A: Effect) -> float:
    """``G = max over the spectrum of q(lambda)`` minus ``max(q(m), q(M))``, with ``q(t) = t(1 - t)``.

    ``q`` is concave, so its minimum over the spectrum is an endpoint value
    and ``||AA'|| = max(q(m), q(M)) + G``, ``D = W |1 - M - m| + G``.  Each
    difference is factored, ``q(l) - q(m) = (l - m)(1 - l - m)`` and
    ``q(l) - q(M) = (M - l)(l + M - 1)``, so small values of ``G`` keep their
    relative accuracy.
    """
    lower, upper = A.endpoint_distances
    lam, co = A.eigenvalues, A.co_eigenvalues
    t1 = lower * (co - lam[0])
    t2 = upper * (lam - co[-1])
    return max(float(np.max(np.minimum(t1, t2))), 0.0)


def endpoint_gap(A: Effect) -> float:
    """``(W/2)^2 - min over the spectrum of (lambda - a0)^2``, ``a0`` the midpoint.

    Equals ``max over the spectrum of (lambda - m)(M - lambda)``; zero for
    two-point spectra.
    """
    lower, upper = A.endpoint_distances
    return float(np.max(lower * upper))


def sharpness_0(A: Effect) -> float:
    """``||A|| ||A'|| - ||AA'||``, evaluated as ``W min(M, 1 - m) - G``.

    ``M(1-m) - M(1-M) = M W`` and ``M(1-m) - m(1-m) = (1-m) W``, so the
    difference of the two products never has to be formed.
    """
    return A.symmetric_width * min(A.norm, A.complement_norm) - interior_excess(A)


def sharpness_1(A: Effect) -> float:
    """Spectral width minus dispersion, evaluated as ``W (1 - |M + m - 1|) - G``."""
    return A.symmetric_width * (1.0 - abs(A.norm - A.complement_norm)) - interior_excess(A)


def s2_terms(A: Effect) -> tuple[float, float]:
    """The pair ``(X, Y)`` with ``X = 2||A|| ||A'|| - W`` and ``Y = 2 S0 - S1``.

    Computed as ``X = M(1-m) + m(1-M)`` and ``Y = W^2 - G``.
    """
    lam, co = A.eigenvalues, A.co_eigenvalues
    X = float(lam[-1] * co[0] + lam[0] * co[-1])
    W = A.symmetric_width
    return X, W * W - interior_excess(A)


def s2_discriminant(A: Effect) -> float:
    """``X^2 - Y = 4 M m (1-M)(1-m) + G``, both terms nonnegative."""
    P, Q = _pq(A)
    return 4.0 * (P * Q) + interior_excess(A)


def sharpness_2(A: Effect) -> float:
    """``X - sqrt(X^2 - Y)``.

    Raises NegativeDiscriminant if the directly computed ``X^2 - Y`` is below
    ``-EPS_EIG``; that would contradict ``0 <= Y <= X^2``, which holds for
    every effect.
    """
    X, Y = s2_terms(A)
    if not (-EPS_EIG <= X <= 1.0 + EPS_EIG) or Y < -EPS_EIG:
        raise InconsistencyError(f"X = {X!r}, Y = {Y!r} outside their proven ranges")
    if X * X - Y < -EPS_EIG:
        raise NegativeDiscriminant(f"X^2 - Y = {X * X - Y!r}")
    if X <= 0.0:
        return 0.0
    # X - root rewritten to avoid cancellation when Y << X^2
    return max(Y, 0.0) / (X + math.sqrt(s2_discriminant(A)))


def failed_b2_discriminant(A: Effect) -> float:
    """``1 - 2X + Y``, the would-be square of the failed bias candidate.

    It is negative for unbiased effects with an eigenvalue strictly inside
    ``(m, M)``, which is why that candidate is not a bias measure.
    """
    X, Y = s2_terms(A)
    return 1.0 - 2.0 * X + Y


def _f3_parts(A: Effect) -> tuple[float, float]:
    P, Q = _pq(A)
    return _root(P, "Mm"), _root(Q, "(1-M)(1-m)")


def _f4_radicands(A: Effect) -> tuple[float, float]:
    # a0^2 - min (lambda - a0)^2 = M m + gap and (1 - a0)^2 - min (...)^2 = (1-M)(1-m) + gap
    P, Q = _pq(A)
    gap = endpoint_gap(A)
    return P + gap, Q + gap


def _f4_parts(A: Effect) -> tuple[float, float]:
    lo, hi = _f4_radicands(A)
    return _root(lo, "F4 lower"), _root(hi, "F4 upper")


def _f5_parts(A: Effect) -> tuple[float, float]:
    P, Q = _pq(A)
    half_gap = 0.5 * endpoint_gap(A)
    return _root(P + half_gap, "F5 lower"), _root(Q + half_gap, "F5 upper")


def unsharpness_f3(A: Effect) -> float:
    p, q = _f3_parts(A)
    return p + q


def unsharpness_f4(A: Effect) -> float:
    p, q = _f4_parts(A)
    return p + q


def unsharpness_f5(A: Effect) -> float:
    p, q = _f5_parts(A)
    return p + q


def bias_0(A: Effect) -> float:
    """``||A|| - ||A'||``, i.e. twice the spectral midpoint minus one."""
    na, nc = _norms(A)
    return na - nc


def bias_3(A: Effect) -> float:
    p, q = _f3_parts(A)
    return p - q


def bias_4(A: Effect) -> float:
    p, q = _f4_parts(A)
    return p - q


def bias_5(A: Effect) -> float:
    p, q = _f5_parts(A)
    return p - q


# -- qubit-only measures ---------------------------------------------------

def _as_qubit(A) -> QubitEffect:
    if isinstance(A, QubitEffect):
        return A
    if A.dim != 2:
        raise MeasureError(f"qubit measure requires dim 2, got dim {A.dim}")
    return bloch_from_matrix(A)


def sharpness_a2(A) -> float:
    return 2.0 * _as_qubit(A).r


def sharpness_b2(A) -> float:
    q = _as_qubit(A)
    return 4.0 * min(q.a0, 1.0 - q.a0) * q.r


def sharpness_c2(A) -> float:
    """``1 - f2(A)^2``."""
    return 1.0 - f2(_as_qubit(A)) ** 2


def bias_a2(A) -> float:
    return 2.0 * _as_qubit(A).a0 - 1.0


def bias_2d(A) -> float:
    return b2(_as_qubit(A))


# -- registry ----------------------------------------------------------------

@dataclass(frozen=True)
class MeasureSpec:
    name: str
    func: Callable
    kind: str  # "sharpness", "unsharpness", "bias" or "diagnostic"
    qubit_only: bool = False
    axiomatic: bool = True


CATALOGUE: dict[str, MeasureSpec] = {m.name: m for m in [
    MeasureSpec("Sa", sharpness_a, "sharpness", axiomatic=False),
    MeasureSpec("Sb", sharpness_b, "sharpness", axiomatic=False),
    MeasureSpec("S0", sharpness_0, "sharpness"),
    MeasureSpec("S1", sharpness_1, "sharpness"),
    MeasureSpec("S2", sharpness_2, "sharpness"),
    MeasureSpec("Sa2", sharpness_a2, "sharpness", qubit_only=True),
    MeasureSpec("Sb2", sharpness_b2, "sharpness", qubit_only=True),
    MeasureSpec("Sc2", sharpness_c2, "sharpness", qubit_only=True),
    MeasureSpec("F3", unsharpness_f3, "unsharpness", axiomatic=False),
    MeasureSpec("F4", unsharpness_f4, "unsharpness", axiomatic=False),
    MeasureSpec("F5", unsharpness_f5, "unsharpness"),
    MeasureSpec("B0", bias_0, "bias"),
    MeasureSpec("Ba2", bias_a2, "bias", qubit_only=True),
    MeasureSpec("B2d", bias_2d, "bias", qubit_only=True),
    MeasureSpec("B3", bias_3, "bias"),
    MeasureSpec("B4", bias_4, "bias"),
    MeasureSpec("B5", bias_5, "bias"),
    MeasureSpec("B2fail", failed_b2_discriminant, "diagnostic", axiomatic=False),
]}


def get_measure(name: str) -> MeasureSpec:
    try:
        return CATALOGUE[name]
    except KeyError:
        raise UnknownMeasure(f"unknown measure {name!r}; known: {', '.join(CATALOGUE)}") from None


@dataclass(frozen=True)
class MeasureReport:
    name: str
    value: float
    dim: int


def evaluate(name: str, A: Effect) -> MeasureReport:
    spec = get_measure(name)
    if spec.qubit_only and A.dim != 2:
        raise MeasureError(f"measure {name} is defined for qubits only (dim 2), got dim {A.dim}")
    return MeasureReport(name, float(spec.func(A)), A.dim)
