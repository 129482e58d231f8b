"""Independent ground truth for the qubit coexistence criterion.

``joint_feasible_bruteforce`` never looks at the closed-form inequality.  It
searches directly for ``G = g0 * 1 + g . sigma`` with

    G >= 0,   A - G >= 0,   B - G >= 0,   1 - A - B + G >= 0,

using that a qubit operator ``c0 * 1 + c . sigma`` is positive iff
``c0 - |c| >= 0``.  The minimum of the four margins is concave in ``G``, so a
grid search followed by local refinement finds its maximum up to the final
grid step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np
from scipy.optimize import minimize

from .effect_core import Effect, HermitianOperator, validate_effect
from .qubit import QubitEffect

EPS_FEAS = 1e-7
DEFAULT_RESOLUTION = 21
DEFAULT_ROUNDS = 4
SHRINK = 5.0
MAX_EXTRA_ROUNDS = 20
MAX_MOVES = 200
# each margin c0 - |c| is sqrt(2)-Lipschitz in (g0, g); a grid point lies within
# one step (Euclidean, 4 dims) of any point of its box
LIPSCHITZ = np.sqrt(2.0)


@numba.njit(cache=True)
def _margin(g0, g1, g2, g3, a0, ax, ay, az, b0, bx, by, bz):
    m = g0 - np.sqrt(g1 * g1 + g2 * g2 + g3 * g3)
    x, y, z = ax - g1, ay - g2, az - g3
    t = a0 - g0 - np.sqrt(x * x + y * y + z * z)
    if t < m:
        m = t
    x, y, z = bx - g1, by - g2, bz - g3
    t = b0 - g0 - np.sqrt(x * x + y * y + z * z)
    if t < m:
        m = t
    x, y, z = g1 - ax - bx, g2 - ay - by, g3 - az - bz
    t = 1.0 - a0 - b0 + g0 - np.sqrt(x * x + y * y + z * z)
    if t < m:
        m = t
    return m


@numba.njit(cache=True)
def _grid_best(lo, hi, res, a0, ax, ay, az, b0, bx, by, bz):
    step = (hi - lo) / (res - 1)
    best = -np.inf
    arg = lo.copy()
    for i in range(res):
        g0 = lo[0] + i * step[0]
        for j in range(res):
            g1 = lo[1] + j * step[1]
            for k in range(res):
                g2 = lo[2] + k * step[2]
                for l in range(res):
                    g3 = lo[3] + l * step[3]
                    m = _margin(g0, g1, g2, g3, a0, ax, ay, az, b0, bx, by, bz)
                    if m > best:
                        best = m
                        arg[0] = g0
                        arg[1] = g1
                        arg[2] = g2
                        arg[3] = g3
    return best, arg


def _polish(params, start, margin0):
    """Local maximisation of the margin from ``start`` in epigraph form.

    maximise t  s.t.  c0_k(G) - t >= 0  and  (c0_k(G) - t)^2 >= |c_k(G)|^2.
    The margin is concave, so a converged local maximum is the global one.
    """
    a0, ax, ay, az, b0, bx, by, bz = params
    a = np.array([ax, ay, az])
    b = np.array([bx, by, bz])

    def parts(z):
        g0, g = z[0], z[1:4]
        return (np.array([g0, a0 - g0, b0 - g0, 1.0 - a0 - b0 + g0]),
                np.array([g, a - g, b - g, g - a - b]))

    def cons(z):
        c0, c = parts(z)
        lin = c0 - z[4]
        return np.concatenate([lin, lin * lin - np.sum(c * c, axis=1)])

    res = minimize(lambda z: -z[4], np.append(start, margin0), method="SLSQP",
                   constraints=[{"type": "ineq", "fun": cons}],
                   options={"maxiter": 200, "ftol": 1e-15})
    return res.x[:4]


def constraint_margins(A: QubitEffect, B: QubitEffect, g0: float, g) -> np.ndarray:
    """Minimum eigenvalues of ``G, A - G, B - G, 1 - A - B + G`` via 2x2 eigensolves."""
    eye = np.eye(2)
    G = QubitEffect(g0, tuple(g), tol=np.inf).matrix
    Am, Bm = A.matrix, B.matrix
    ops = [G, Am - G, Bm - G, eye - Am - Bm + G]
    return np.array([np.linalg.eigvalsh(M)[0] for M in ops])


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of the grid search; infeasibility is grid evidence, not a proof."""

    feasible: bool
    margin: float
    best: QubitEffect
    witness: QubitEffect | None
    rounds_used: int = 0

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "margin": self.margin,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "rounds": self.rounds_used,
            "evidence": "grid-search",
        }


def joint_feasible_bruteforce(A: QubitEffect, B: QubitEffect,
                              resolution: int = DEFAULT_RESOLUTION,
                              rounds: int = DEFAULT_ROUNDS,
                              eps_feas: float = EPS_FEAS,
                              adaptive: bool = True) -> FeasibilityResult:
    """Search for a joint-observable element ``G11`` of the pair ``(A, B)``.

    The initial box is ``g0 in [0, 1]``, ``g_i in [-1/2, 1/2]``; every round
    re-centres a box ``SHRINK`` times smaller on the best point so far.  After
    ``rounds`` refinements, if ``adaptive`` is set and the best margin is
    below ``-eps_feas`` but within the grid's error bound of it, refinement
    continues (at most ``MAX_EXTRA_ROUNDS`` more times) until the evidence is
    conclusive.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    params = (A.a0, *A.a, B.a0, *B.a)
    lo = np.array([0.0, -0.5, -0.5, -0.5])
    hi = np.array([1.0, 0.5, 0.5, 0.5])
    best, arg = _grid_best(lo, hi, resolution, *params)
    half = 0.5 * (hi - lo)
    used = moves = 0
    while True:
        step = float(np.max(2.0 * half / (resolution - 1)))
        inconclusive = -eps_feas > best >= -eps_feas - LIPSCHITZ * step
        if used >= rounds and not (adaptive and inconclusive and used < rounds + MAX_EXTRA_ROUNDS):
            break
        half = half / SHRINK
        used += 1
        while True:
            centre = arg
            m, a = _grid_best(centre - half, centre + half, resolution, *params)
            if m <= best:
                break
            best, arg = m, a
            # an improvement on the box edge means the optimum may lie outside:
            # slide the box before shrinking again
            if not np.any(np.abs(a - centre) >= half * (1.0 - 1e-9)) or moves >= MAX_MOVES:
                break
            moves += 1
    if best < -eps_feas:
        # grid evidence says infeasible; a margin found by the polish only
        # counts after exact re-evaluation
        z = _polish(params, arg, best)
        m = _margin(*z, *params)
        if m > best:
            best, arg = m, z
    g0, g = float(arg[0]), tuple(float(v) for v in arg[1:])
    point = QubitEffect(g0, g, tol=np.inf)
    feasible = bool(best >= -eps_feas)
    witness = QubitEffect(g0, g, tol=max(eps_feas, 1e-9) * 10) if feasible else None
    return FeasibilityResult(feasible, float(best), point, witness, used)


# -- random and designed effects ----------------------------------------------

def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_effect(dim: int, rng: np.random.Generator) -> Effect:
    """Effect with i.i.d. uniform eigenvalues in a Haar-random eigenbasis."""
    vals = rng.uniform(0.0, 1.0, size=dim)
    U = haar_unitary(dim, rng)
    M = (U * vals) @ U.conj().T
    return validate_effect(HermitianOperator(0.5 * (M + M.conj().T)), tol=1e-12)


def random_qubit_effect(rng: np.random.Generator) -> QubitEffect:
    """``a0`` uniform on [0, 1], ``a`` uniform in the ball of radius ``min(a0, 1 - a0)``."""
    a0 = rng.uniform(0.0, 1.0)
    radius = min(a0, 1.0 - a0)
    direction = rng.standard_normal(3)
    direction /= np.linalg.norm(direction)
    r = radius * rng.uniform(0.0, 1.0) ** (1.0 / 3.0)
    return QubitEffect(a0, tuple(r * direction))


def random_state(dim: int, rng: np.random.Generator):
    from .effect_core import State

    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = z @ z.conj().T
    rho = 0.5 * (rho + rho.conj().T) / np.trace(rho).real
    return State(HermitianOperator(rho))


def effect_with_spectrum(values, rng: np.random.Generator | None = None) -> Effect:
    """Diagonal effect with the given eigenvalues, Haar-rotated if ``rng`` is given."""
    vals = np.asarray(values, dtype=float)
    if vals.ndim != 1 or vals.size == 0:
        raise ValueError("spectrum must be a non-empty list")
    if np.any(vals < 0.0) or np.any(vals > 1.0):
        raise ValueError(f"spectrum values must lie in [0, 1], got {values!r}")
    M = np.diag(vals).astype(complex)
    if rng is not None:
        U = haar_unitary(vals.size, rng)
        M = U @ M @ U.conj().T
        M = 0.5 * (M + M.conj().T)
    return validate_effect(HermitianOperator(M))
