"""Hermitian operators, effects and their spectral data.

An effect is a selfadjoint operator with spectrum inside [0, 1].  Everything
the measure catalogue needs is a function of the (finite) spectrum, so each
:class:`Effect` carries a cached eigendecomposition computed once at
construction time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.optimize import minimize_scalar

EPS_HERM = 1e-10
EPS_EIG = 1e-9
EPS_RECON = 1e-9
EPS_ORTHO = 1e-10
EPS_TRACE = 1e-10
EPS_MEMBER = 1e-8
# eigenvalues this close to 0 or 1 are snapped onto the endpoint; square-root
# measures are not Lipschitz there and would amplify solver noise to ~1e-8
EPS_SNAP = 1e-13
MAX_DIM = 16


class EffectError(ValueError):
    """Base class for invalid operator input."""


class NotHermitian(EffectError):
    pass


class SpectrumOutOfRange(EffectError):
    pass


class DimensionMismatch(EffectError):
    pass


class EigenDecompositionError(EffectError):
    pass


def _frozen(arr):
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """A validated ``dim x dim`` complex Hermitian matrix."""

    entries: np.ndarray
    max_dim: int = field(default=MAX_DIM, repr=False)

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise EffectError(f"operator must be a non-empty square matrix, got shape {arr.shape}")
        if arr.shape[0] > self.max_dim:
            raise EffectError(f"dimension {arr.shape[0]} exceeds the maximum {self.max_dim}")
        asym = np.max(np.abs(arr - arr.conj().T))
        if asym > EPS_HERM:
            raise NotHermitian(f"operator is not Hermitian (max |H - H^dagger| = {asym:.3g})")
        object.__setattr__(self, "entries", _frozen(arr))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "HermitianOperator":
        return cls(np.eye(dim))


def eig_decompose(H: HermitianOperator) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvector columns of ``H``."""
    if not isinstance(H, HermitianOperator):
        H = HermitianOperator(H)
    try:
        vals, vecs = np.linalg.eigh(H.entries)
    except np.linalg.LinAlgError as exc:
        raise EigenDecompositionError(str(exc)) from exc
    return vals, vecs


def _snap(vals: np.ndarray) -> np.ndarray:
    vals = np.clip(vals, 0.0, 1.0)
    vals[vals <= EPS_SNAP] = 0.0
    vals[vals >= 1.0 - EPS_SNAP] = 1.0
    return vals


@dataclass(frozen=True)
class SpectralSummary:
    """Minimum, maximum, width and midpoint of a spectrum."""

    m: float
    M: float
    width: float
    midpoint: float

    @classmethod
    def from_values(cls, values) -> "SpectralSummary":
        lo, hi = float(np.min(values)), float(np.max(values))
        return cls(m=lo, M=hi, width=hi - lo, midpoint=0.5 * (hi + lo))


@dataclass(frozen=True, eq=False)
class Effect:
    """An operator ``0 <= A <= 1`` with cached spectral data.

    Use :func:`validate_effect` (or :meth:`from_matrix`) to build one; the
    stored eigenvalues are ascending, clamped into [0, 1] and snapped onto the
    endpoints when within ``EPS_SNAP`` of them.
    """

    op: HermitianOperator
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    _complement_of: "Effect | None" = field(default=None, repr=False)

    @classmethod
    def from_matrix(cls, arr, tol: float = EPS_EIG) -> "Effect":
        return validate_effect(HermitianOperator(arr), tol)

    @classmethod
    def _trusted(cls, op_entries, vals, vecs) -> "Effect":
        # caller guarantees Hermitian entries and in-range eigenvalues
        op = object.__new__(HermitianOperator)
        object.__setattr__(op, "entries", _frozen(op_entries))
        object.__setattr__(op, "max_dim", MAX_DIM)
        return cls(op, _frozen(_snap(np.array(vals, dtype=float))), _frozen(vecs))

    @property
    def dim(self) -> int:
        return self.op.dim

    @property
    def matrix(self) -> np.ndarray:
        return self.op.entries

    @cached_property
    def summary(self) -> SpectralSummary:
        return SpectralSummary.from_values(self.eigenvalues)

    @property
    def norm(self) -> float:
        """``||A||``, the largest eigenvalue."""
        return self.summary.M

    @cached_property
    def co_eigenvalues(self) -> np.ndarray:
        """``1 - lambda`` for each stored eigenvalue (so descending).

        A complement stores its source's eigenvalues here, so that every
        formula written in terms of ``lambda`` and ``1 - lambda`` sees the
        same floating-point numbers for ``A`` and ``A'``.
        """
        if self._complement_of is not None:
            return self._complement_of.eigenvalues[::-1]
        # no re-snapping: 1 - lambda must stay the exact image of lambda
        return _frozen(1.0 - self.eigenvalues)

    @property
    def complement_norm(self) -> float:
        """``||1 - A|| = 1 - m``."""
        return float(self.co_eigenvalues[0])

    @property
    def complement_min(self) -> float:
        """``1 - M``, the smallest eigenvalue of ``1 - A``."""
        return float(self.co_eigenvalues[-1])

    @cached_property
    def product_spectrum(self) -> np.ndarray:
        """Spectrum of ``A(1 - A)``, i.e. ``lambda(1 - lambda)`` per eigenvalue."""
        return _frozen(self.eigenvalues * self.co_eigenvalues)

    @cached_property
    def product_extrema(self) -> tuple[float, float]:
        q = self.product_spectrum
        return float(q.min()), float(q.max())

    @cached_property
    def endpoint_distances(self) -> tuple[np.ndarray, np.ndarray]:
        """``(lambda - m, M - lambda)`` per eigenvalue, the second taken from ``1 - lambda``.

        Distances below ``EPS_SNAP`` are set to zero so that a degenerate
        extreme eigenvalue, which the solver returns as a cluster a few ulps
        wide, counts as the endpoint itself.  For ``A'`` the two arrays swap
        roles exactly, which keeps complement symmetry bitwise.
        """
        lam, co = self.eigenvalues, self.co_eigenvalues
        lower = lam - lam[0]
        upper = co - co[-1]
        lower[lower <= EPS_SNAP] = 0.0
        upper[upper <= EPS_SNAP] = 0.0
        return _frozen(lower), _frozen(upper)

    @cached_property
    def symmetric_width(self) -> float:
        """``M - m`` averaged over its two floating-point evaluations, from ``lambda`` and ``1 - lambda``."""
        lam, co = self.eigenvalues, self.co_eigenvalues
        return 0.5 * (float(lam[-1] - lam[0]) + float(co[0] - co[-1]))

    def min_sq_distance(self, kappa: float) -> float:
        """``min over spectrum of (lambda - kappa)^2``."""
        return float(np.min((self.eigenvalues - kappa) ** 2))


def validate_effect(H: HermitianOperator, tol: float = EPS_EIG) -> Effect:
    """Certify that ``H`` is an effect and cache its eigendecomposition.

    Raises :class:`SpectrumOutOfRange` when an eigenvalue lies outside
    ``[-tol, 1 + tol]``.  The norm form of the same condition,
    ``0 <= ||A|| + ||1-A|| - 1 <= 1 - | ||A|| - ||1-A|| |``, is re-checked
    on the raw spectrum as a consistency guard.
    """
    if not isinstance(H, HermitianOperator):
        H = HermitianOperator(H)
    vals, vecs = eig_decompose(H)
    lo, hi = vals[0], vals[-1]
    if lo < -tol or hi > 1.0 + tol:
        raise SpectrumOutOfRange(f"spectrum [{lo:.6g}, {hi:.6g}] is not inside [0, 1]")
    # norms of H and 1 - H for a Hermitian operator: max |eigenvalue|
    n_a = max(abs(lo), abs(hi))
    n_c = max(abs(1.0 - lo), abs(1.0 - hi))
    width = n_a + n_c - 1.0
    if not (-tol <= width <= 1.0 - abs(n_a - n_c) + 2 * tol):
        raise SpectrumOutOfRange("norm characterisation of effects violated")
    summary = SpectralSummary.from_values(np.clip(vals, 0.0, 1.0))
    if summary.width + abs(2 * summary.midpoint - 1.0) > 1.0 + 2 * tol:
        raise SpectrumOutOfRange("width/bias trade-off violated")
    return Effect(H, _frozen(_snap(vals.copy())), _frozen(vecs))


def is_effect(H, tol: float = EPS_EIG) -> bool:
    try:
        validate_effect(H, tol)
    except EffectError:
        return False
    return True


def complement(A: Effect) -> Effect:
    """``A' = 1 - A``; applying it twice returns the original object."""
    if A._complement_of is not None:
        return A._complement_of
    entries = np.eye(A.dim) - A.matrix
    op = object.__new__(HermitianOperator)
    object.__setattr__(op, "entries", _frozen(entries))
    object.__setattr__(op, "max_dim", A.op.max_dim)
    vals = A.co_eigenvalues[::-1]
    return Effect(op, _frozen(vals), _frozen(A.eigenvectors[:, ::-1]), _complement_of=A)


def spectral_summary(A: Effect) -> SpectralSummary:
    return A.summary


def dispersion(A: Effect) -> float:
    """Spectral width of ``AA'``; lies in [0, 1/4]."""
    lo, hi = A.product_extrema
    return hi - lo


def product_operator(A: Effect) -> np.ndarray:
    """The matrix ``A(1 - A)`` formed by direct multiplication."""
    return A.matrix @ (np.eye(A.dim) - A.matrix)


@dataclass(frozen=True, eq=False)
class State:
    """A density operator: positive semidefinite with unit trace."""

    op: HermitianOperator

    def __post_init__(self):
        if not isinstance(self.op, HermitianOperator):
            object.__setattr__(self, "op", HermitianOperator(self.op))
        tr = np.trace(self.op.entries).real
        if abs(tr - 1.0) > EPS_TRACE:
            raise EffectError(f"state trace is {tr!r}, expected 1")
        lo = np.linalg.eigvalsh(self.op.entries)[0]
        if lo < -EPS_EIG:
            raise EffectError(f"state is not positive (min eigenvalue {lo:.3g})")

    @property
    def dim(self) -> int:
        return self.op.dim

    @classmethod
    def maximally_mixed(cls, dim: int) -> "State":
        return cls(HermitianOperator(np.eye(dim) / dim))


def luders_sequential_prob(T: State, A: Effect) -> float:
    """Probability that two successive Lüders measurements give ``A`` then ``A'``.

    Equals ``tr[T A A']``.
    """
    if T.dim != A.dim:
        raise DimensionMismatch(f"state has dim {T.dim}, effect has dim {A.dim}")
    return float(np.trace(T.op.entries @ product_operator(A)).real)


def min_distance_to_trivial(A: Effect) -> tuple[float, float]:
    """Closest trivial effect ``kappa * 1`` in operator norm.

    Returns ``(kappa_star, distance)`` with ``kappa_star`` the spectral midpoint
    and ``distance`` half the spectral width.
    """
    s = A.summary
    return s.midpoint, 0.5 * s.width


def numeric_min_distance_to_trivial(A: Effect, xatol: float = 1e-11) -> tuple[float, float]:
    """Minimise ``kappa -> ||A - kappa 1||`` over [0, 1] numerically.

    The objective is evaluated from a fresh eigensolve of ``A - kappa 1``, not
    from the cached spectrum.  The bounded search stops at a relative
    tolerance of about ``sqrt(eps) * |kappa|`` whatever ``xatol`` is, so a
    second pass searches the offset from the first estimate.
    """
    eye = np.eye(A.dim)

    def objective(kappa):
        return float(np.max(np.abs(np.linalg.eigvalsh(A.matrix - kappa * eye))))

    opts = {"xatol": xatol, "maxiter": 500}
    k1 = float(minimize_scalar(objective, bounds=(0.0, 1.0), method="bounded", options=opts).x)
    h = 1e-6
    res = minimize_scalar(lambda t: objective(k1 + t), bounds=(max(-h, -k1), min(h, 1.0 - k1)),
                          method="bounded", options=opts)
    return k1 + float(res.x), float(res.fun)


def unitary_conjugate(A: Effect, U: np.ndarray) -> Effect:
    """``U A U^dagger``, re-validated from scratch."""
    M = U @ A.matrix @ U.conj().T
    return validate_effect(HermitianOperator(0.5 * (M + M.conj().T)))


def effects_from_stack(mats: np.ndarray, tol: float = EPS_EIG) -> list[Effect]:
    """Validate a stack of matrices as effects with one batched eigensolve."""
    mats = np.asarray(mats, dtype=complex)
    if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
        raise EffectError(f"expected a (n, d, d) stack, got shape {mats.shape}")
    if mats.shape[1] > MAX_DIM:
        raise EffectError(f"dimension {mats.shape[1]} exceeds the maximum {MAX_DIM}")
    asym = np.max(np.abs(mats - np.conj(np.swapaxes(mats, 1, 2))), initial=0.0)
    if asym > EPS_HERM:
        raise NotHermitian(f"stack is not Hermitian (max asymmetry {asym:.3g})")
    try:
        vals, vecs = np.linalg.eigh(mats)
    except np.linalg.LinAlgError as exc:
        raise EigenDecompositionError(str(exc)) from exc
    if vals.size and (vals.min() < -tol or vals.max() > 1.0 + tol):
        raise SpectrumOutOfRange("stack contains an operator with spectrum outside [0, 1]")
    return [Effect._trusted(m, v, u) for m, v, u in zip(mats, vals, vecs)]
