"""Randomised checking of the sharpness axioms S1-S6 and bias axioms B1-B6.

Sharpness ``S``:
    S1  0 <= S(A) <= 1
    S2  S(A) = 0 iff A is trivial
    S3  S(A) = 1 iff A is a nontrivial projection
    S4  S(A') = S(A)
    S5  S(U A U^dagger) = S(A)
    S6  A -> S(A) continuous

Bias ``B``:
    B1  -1 <= B(A) <= 1
    B2  B(A) = 0 iff the spectral midpoint is 1/2
    B3  B(A) = +1 iff A = 1, B(A) = -1 iff A = 0
    B4  B(A') = -B(A)
    B5, B6 as S5, S6

Unsharpness measures ``F`` are checked as the sharpness measure ``1 - F``.
Set conditions are decided by spectral distance: an effect is a member
when within ``EPS_EXACT`` of the set, a non-member when at least
``EPS_MEMBER`` away, and is skipped in between (a measure may legitimately
take values of order ``sqrt(EPS_MEMBER)`` there).  Members must hit the
target within ``EPS_EIG``; non-members must miss it strictly.  Invariance under arbitrary
invertible ``C`` is only checked for unitary ``C`` since ``C A C^-1`` need not
be selfadjoint.  Continuity is checked along ``A + s (E - A)`` for a random
effect ``E`` and ``s`` in ``LADDER``, against the bound ``HOLDER * sqrt(s)``:
the square-root measures are continuous but not Lipschitz at projections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .effect_core import EPS_EIG, EPS_MEMBER, Effect, complement, effects_from_stack
from .measures import MeasureError, get_measure
from .oracle import haar_unitary

SHARPNESS_AXIOMS = ("S1", "S2", "S3", "S4", "S5", "S6")
BIAS_AXIOMS = ("B1", "B2", "B3", "B4", "B5", "B6")
LADDER = (1e-2, 1e-4, 1e-6)
HOLDER = 10.0
EPS_SYMMETRY = 1e-12


EPS_EXACT = 1e-12


def _classify(distance: float) -> bool | None:
    if distance <= EPS_EXACT:
        return True
    if distance >= EPS_MEMBER:
        return False
    return None


def is_trivial(A: Effect) -> bool | None:
    return _classify(A.summary.width)


def is_nontrivial_projection(A: Effect) -> bool | None:
    if A.summary.width <= 0.5:
        return False
    lam = A.eigenvalues
    return _classify(float(np.max(np.minimum(np.abs(lam), np.abs(lam - 1.0)))))


def is_unbiased(A: Effect) -> bool | None:
    return _classify(abs(A.summary.midpoint - 0.5))


def is_identity(A: Effect) -> bool | None:
    return _classify(float(np.max(np.abs(A.eigenvalues - 1.0))))


def is_zero(A: Effect) -> bool | None:
    return _classify(float(np.max(np.abs(A.eigenvalues))))


# -- per-instance checks -------------------------------------------------------
# Each check takes the measure values of its effects (and the effects) and
# returns a short description of the violated direction, or None.

def _s1(v, effs):
    (x,) = v
    if not -EPS_EIG <= x <= 1.0 + EPS_EIG:
        return "value outside [0, 1]"


def _s2(v, effs):
    (x,), (A,) = v, effs
    member = is_trivial(A)
    if member and abs(x) > EPS_EIG:
        return "trivial effect with nonzero value"
    if member is False and x <= 0.0:
        return "nontrivial effect with value 0"


def _s3(v, effs):
    (x,), (A,) = v, effs
    member = is_nontrivial_projection(A)
    if member and abs(x - 1.0) > EPS_EIG:
        return "nontrivial projection with value != 1"
    if member is False and x >= 1.0:
        return "value 1 for an effect that is not a nontrivial projection"


def _b1(v, effs):
    (x,) = v
    if not -1.0 - EPS_EIG <= x <= 1.0 + EPS_EIG:
        return "value outside [-1, 1]"


def _b2(v, effs):
    (x,), (A,) = v, effs
    member = is_unbiased(A)
    if member and abs(x) > EPS_EIG:
        return "unbiased effect with nonzero value"
    if member is False and x == 0.0:
        return "biased effect with value 0"


def _b3(v, effs):
    (x,), (A,) = v, effs
    one, zero = is_identity(A), is_zero(A)
    if one and abs(x - 1.0) > EPS_EIG:
        return "identity with value != 1"
    if zero and abs(x + 1.0) > EPS_EIG:
        return "zero operator with value != -1"
    if one is False and x >= 1.0:
        return "value 1 for an effect other than the identity"
    if zero is False and x <= -1.0:
        return "value -1 for an effect other than 0"


def _symmetric(v, effs):
    if abs(v[0] - v[1]) > EPS_SYMMETRY:
        return "value changes under complement"


def _antisymmetric(v, effs):
    if abs(v[0] + v[1]) > EPS_SYMMETRY:
        return "value not negated under complement"


def _invariant(v, effs):
    if abs(v[0] - v[1]) > EPS_EIG:
        return "value changes under unitary conjugation"


def _continuity(v, effs):
    # v = (value at A, value at each ladder rung); the jump must stay under a
    # Hoelder envelope that shrinks with the perturbation.  A per-sample
    # monotone decrease is not required: a smooth measure can cross its
    # starting value along the path at one rung and not at the next.
    for s, x in zip(LADDER, v[1:]):
        if abs(x - v[0]) > HOLDER * math.sqrt(s):
            return f"jump {abs(x - v[0]):.3g} at perturbation size {s:g}"


CHECKS: dict[str, Callable] = {
    "S1": _s1, "S2": _s2, "S3": _s3, "S4": _symmetric, "S5": _invariant, "S6": _continuity,
    "B1": _b1, "B2": _b2, "B3": _b3, "B4": _antisymmetric, "B5": _invariant, "B6": _continuity,
}


@dataclass(frozen=True, eq=False)
class AxiomVerdict:
    axiom: str
    measure: str
    holds: bool
    checked: int
    counterexample: tuple[Effect, ...] | None = None
    values: tuple[float, ...] | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        from .io import operator_to_dict

        out = {"axiom": self.axiom, "measure": self.measure, "holds": self.holds,
               "checked": self.checked, "detail": self.detail, "counterexample": None}
        if self.counterexample is not None:
            out["counterexample"] = {
                "operators": [operator_to_dict(A.matrix) for A in self.counterexample],
                "values": list(self.values),
            }
        return out


def _value_function(name: str) -> Callable[[Effect], float]:
    spec = get_measure(name)
    if spec.kind == "unsharpness":
        return lambda A: 1.0 - spec.func(A)
    if spec.kind in ("sharpness", "bias"):
        return spec.func
    raise MeasureError(f"{name} is a diagnostic quantity, not a candidate measure")


def replay(verdict: AxiomVerdict) -> str | None:
    """Re-evaluate a counterexample; returns the violation description (None if it no longer fails)."""
    if verdict.counterexample is None:
        return None
    f = _value_function(verdict.measure)
    effs = verdict.counterexample
    return CHECKS[verdict.axiom](tuple(f(A) for A in effs), effs)


# -- sample bank ---------------------------------------------------------------

def _padded(base, dim):
    return [base[i % len(base)] for i in range(dim)]


def targeted_spectra(dim: int, rng: np.random.Generator) -> list[list[float]]:
    """Trivial effects, projections and spectra built to probe the biconditionals."""
    out = [[lam] * dim for lam in (0.0, 0.3, 0.5, 0.7, 1.0)]
    out += [[1.0] * k + [0.0] * (dim - k) for k in range(1, dim)]
    if dim >= 3:
        out += [[0.0, 0.5, 1.0] + [0.5] * (dim - 3),
                [0.2, 0.5, 0.8] + [0.5] * (dim - 3),
                [0.0, 0.25, 1.0] + [0.25] * (dim - 3),
                [0.0, 0.75, 1.0] + [0.75] * (dim - 3)]
    if dim >= 2:
        out += [_padded([0.25, 0.75], dim), _padded([0.1, 0.9], dim),
                _padded([1e-3, 1.0 - 1e-3], dim), _padded([0.1, 0.2], dim),
                _padded([0.4, 0.4 + 1e-3], dim), _padded([0.0, 0.6], dim),
                _padded([0.4, 1.0], dim)]
        for _ in range(5):
            M = rng.uniform(0.5, 1.0)
            inner = list(rng.uniform(1.0 - M, M, size=max(dim - 2, 0)))
            out.append([1.0 - M, M] + inner)
    return out


@dataclass(frozen=True, eq=False)
class SampleBank:
    dim: int
    base: tuple[Effect, ...]
    conjugated: tuple[Effect, ...]
    perturbed: tuple[tuple[Effect, ...], ...]  # one tuple per ladder rung

    @property
    def pool(self) -> list[Effect]:
        out = list(self.base) + list(self.conjugated)
        for rung in self.perturbed:
            out += rung
        return out


def _haar_stack(n, dim, rng):
    z = (rng.standard_normal((n, dim, dim)) + 1j * rng.standard_normal((n, dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    return q * (d / np.abs(d))[:, None, :]


def _conjugate(U, D):
    M = U @ D @ np.conj(np.swapaxes(U, 1, 2))
    return 0.5 * (M + np.conj(np.swapaxes(M, 1, 2)))


@lru_cache(maxsize=16)
def sample_bank(dim: int, samples: int, seed: int) -> SampleBank:
    """Deterministic bank of effects for one dimension; cached and shared across measures."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(dim,)))
    spectra = targeted_spectra(dim, rng)
    targeted = [np.diag(np.asarray(s, dtype=complex)) for s in spectra]
    # rotated copies of the non-scalar targeted operators
    rotated = [haar_unitary(dim, rng) for _ in spectra]
    targeted += [U @ D @ U.conj().T for U, D in zip(rotated, targeted) if np.ptp(np.diag(D).real) > 0]
    targeted = [0.5 * (M + M.conj().T) for M in targeted]
    vals = rng.uniform(0.0, 1.0, size=(samples, dim))
    D = np.zeros((samples, dim, dim), dtype=complex)
    idx = np.arange(dim)
    D[:, idx, idx] = vals
    rand = _conjugate(_haar_stack(samples, dim, rng), D)
    base_mats = np.concatenate([np.array(targeted).reshape(-1, dim, dim), rand])
    base = effects_from_stack(base_mats, tol=1e-12)
    n = len(base)
    conj = effects_from_stack(_conjugate(_haar_stack(n, dim, rng), base_mats), tol=1e-12)
    evals = rng.uniform(0.0, 1.0, size=(n, dim))
    ED = np.zeros((n, dim, dim), dtype=complex)
    ED[:, idx, idx] = evals
    E = _conjugate(_haar_stack(n, dim, rng), ED)
    perturbed = tuple(tuple(effects_from_stack((1.0 - s) * base_mats + s * E, tol=1e-12)) for s in LADDER)
    return SampleBank(dim, tuple(base), tuple(conj), perturbed)


def verify_axioms(measure: str, samples: int = 10_000, seed: int = 0,
                  dims=(2, 3, 4, 8)) -> list[AxiomVerdict]:
    """Check the six axioms of ``measure`` on random and targeted effects.

    Returns one verdict per axiom, each with the first counterexample found
    (targeted families are scanned before random samples).
    """
    spec = get_measure(measure)
    f = _value_function(measure)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    dims = tuple(dims)
    if spec.qubit_only and any(d != 2 for d in dims):
        raise MeasureError(f"{measure} is a qubit measure; dims must be [2]")
    axioms = BIAS_AXIOMS if spec.kind == "bias" else SHARPNESS_AXIOMS
    found: dict[str, tuple] = {}
    counts = dict.fromkeys(axioms, 0)

    def record(ax, effs, vals):
        counts[ax] += 1
        if ax not in found:
            msg = CHECKS[ax](vals, effs)
            if msg is not None:
                found[ax] = (effs, vals, msg)

    for dim in dims:
        bank = sample_bank(dim, samples, seed)
        memo: dict[int, float] = {}

        def value(A):
            key = id(A)
            if key not in memo:
                memo[key] = float(f(A))
            return memo[key]

        for A in bank.pool:
            x = value(A)
            for ax in axioms[:3]:
                record(ax, (A,), (x,))
        for A in bank.base:
            Ac = complement(A)
            record(axioms[3], (A, Ac), (value(A), float(f(Ac))))
        for A, B in zip(bank.base, bank.conjugated):
            record(axioms[4], (A, B), (value(A), value(B)))
        for i, A in enumerate(bank.base):
            effs = (A,) + tuple(rung[i] for rung in bank.perturbed)
            record(axioms[5], effs, tuple(value(X) for X in effs))

    verdicts = []
    for ax in axioms:
        if ax in found:
            effs, vals, msg = found[ax]
            verdicts.append(AxiomVerdict(ax, measure, False, counts[ax], effs, tuple(vals), msg))
        else:
            verdicts.append(AxiomVerdict(ax, measure, True, counts[ax]))
    return verdicts
