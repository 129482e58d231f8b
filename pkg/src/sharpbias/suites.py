"""Verification suites run by ``sharpbias verify``.

Each suite returns a list of :class:`CheckResult`; a suite passes when all of
its checks pass.  The reference side of every identity is computed from the
operator matrices (direct products, SVD norms, fresh eigensolves), not from
the cached spectra the measures use.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import measures as ms
from .axioms import sample_bank, verify_axioms
from .effect_core import (dispersion, effects_from_stack,
                          numeric_min_distance_to_trivial)
from .oracle import (constraint_margins, effect_with_spectrum, joint_feasible_bruteforce,
                     random_qubit_effect)
from .qubit import (QubitEffect, Status, are_coexistent, coexistence_lhs, commute, f2, b2,
                    unbiased_reduction)
from .scan import locate_flips, scan

DEFAULT_DIMS = (2, 3, 4, 8)
AXIOM_MEASURES = ("S0", "S1", "S2", "F5", "B0", "B3", "B4", "B5")
AGREEMENT_BAND = 5e-3
EPS_FEAS = 1e-7


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def _worst(name, errors, tol, what="max error"):
    errors = np.asarray(errors, dtype=float)
    worst = float(np.max(errors)) if errors.size else 0.0
    return CheckResult(name, bool(worst <= tol), f"{what} {worst:.3e} (tol {tol:g}, n={errors.size})")


def _opnorm(M):
    return float(np.linalg.norm(M, 2))


# -- identities ----------------------------------------------------------------

def identities(samples: int = 10_000, seed: int = 0, dims=DEFAULT_DIMS,
               minimizer_samples: int | None = None) -> list[CheckResult]:
    """Spectral identities and inequalities on random plus targeted effects."""
    errs = {k: [] for k in ("AA'", "W", "D", "lemma_a", "lemma_b", "lemma_d", "kappa",
                            "Y", "Y>=0", "Y<=X^2", "disc", "F3<=F5", "F5<=F4", "W+|B0|", "D_range")}
    for dim in dims:
        effects = sample_bank(dim, samples, seed).base
        n_min = len(effects) if minimizer_samples is None else minimizer_samples
        eye = np.eye(dim)
        for i, A in enumerate(effects):
            Am = A.matrix
            prod = Am @ (eye - Am)
            errs["AA'"].append(np.max(np.abs(prod - (0.25 * eye - (Am - 0.5 * eye) @ (Am - 0.5 * eye)))))
            na, nc = _opnorm(Am), _opnorm(eye - Am)
            W = A.summary.width
            errs["W"].append(abs(W - (na + nc - 1.0)))
            prod_h = 0.5 * (prod + prod.conj().T)
            q = np.linalg.eigvalsh(prod_h)
            n_prod, n_one = _opnorm(prod_h), _opnorm(eye - prod_h)
            big = max((na - 0.5) ** 2, (nc - 0.5) ** 2)
            D = dispersion(A)
            errs["D"].append(abs(D - (big - (0.25 - n_prod))))
            errs["D_range"].append(max(-D, D - 0.25, 0.0))
            errs["lemma_a"].append(max(-q[0], q[-1] - 0.25, 0.0))
            errs["lemma_b"].append(max(0.25 - big - n_prod, n_prod - 0.25, 0.0))
            errs["lemma_d"].append(abs(n_one - (0.75 + big)))
            if i < n_min:
                _, dist = numeric_min_distance_to_trivial(A)
                errs["kappa"].append(abs(W - 2.0 * dist))
            X, Y = ms.s2_terms(A)
            errs["Y"].append(abs(Y - (X - (q[0] + q[-1]))))
            errs["Y>=0"].append(max(-Y, 0.0))
            errs["Y<=X^2"].append(max(Y - X * X, 0.0))
            errs["disc"].append(abs(ms.s2_discriminant(A) - (X * X - Y)))
            f3, f4, f5 = ms.unsharpness_f3(A), ms.unsharpness_f4(A), ms.unsharpness_f5(A)
            errs["F3<=F5"].append(max(f3 - f5, 0.0))
            errs["F5<=F4"].append(max(f5 - f4, 0.0))
            errs["W+|B0|"].append(max(W + abs(ms.bias_0(A)) - 1.0, 0.0))
    return [
        _worst("AA' = 1/4 - (A - 1/2)^2 (per entry)", errs["AA'"], 1e-12),
        _worst("W = ||A|| + ||A'|| - 1", errs["W"], 1e-9),
        _worst("D = max{(||A||-1/2)^2, (||A'||-1/2)^2} - (1/4 - ||AA'||)", errs["D"], 1e-9),
        _worst("0 <= D <= 1/4", errs["D_range"], 1e-9, "max violation"),
        _worst("0 <= AA' <= 1/4", errs["lemma_a"], 1e-9, "max violation"),
        _worst("1/4 - max{...} <= ||AA'|| <= 1/4", errs["lemma_b"], 1e-9, "max violation"),
        _worst("||1 - AA'|| = 3/4 + max{...}", errs["lemma_d"], 1e-9),
        _worst("W = 2 min_k ||A - k 1|| (numeric minimiser)", errs["kappa"], 1e-8),
        _worst("Y = X - 2 mu(spectrum of AA')", errs["Y"], 1e-9),
        _worst("Y >= 0", errs["Y>=0"], 1e-9, "max violation"),
        _worst("Y <= X^2", errs["Y<=X^2"], 1e-9, "max violation"),
        _worst("stable X^2 - Y matches direct", errs["disc"], 1e-9),
        _worst("F3 <= F5", errs["F3<=F5"], 1e-9, "max violation"),
        _worst("F5 <= F4", errs["F5<=F4"], 1e-9, "max violation"),
        _worst("W + |B0| <= 1", errs["W+|B0|"], 1e-9, "max violation"),
    ]


# -- qubit equalities ------------------------------------------------------------

def qubit_identities(samples: int = 10_000, seed: int = 0) -> list[CheckResult]:
    """Agreement of the general-dimension measures with their qubit closed forms."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(2, 2)))
    qs = [random_qubit_effect(rng) for _ in range(samples)]
    effects = effects_from_stack(np.array([q.matrix for q in qs]), tol=1e-12)
    errs = {k: [] for k in ("Sa", "Sb", "S1", "S2", "B3", "B0", "fb", "nAA", "n1AA")}
    eye = np.eye(2)
    for q, A in zip(qs, effects):
        errs["Sa"].append(abs(ms.sharpness_a(A) - ms.sharpness_a2(q)))
        errs["Sb"].append(abs(ms.sharpness_b(A) - ms.sharpness_b2(q)))
        errs["S1"].append(abs(ms.sharpness_1(A) - ms.sharpness_b2(q)))
        errs["S2"].append(abs(ms.sharpness_2(A) - ms.sharpness_c2(q)))
        errs["B3"].append(abs(ms.bias_3(A) - ms.bias_2d(q)))
        errs["B0"].append(abs(ms.bias_0(A) - (2.0 * q.a0 - 1.0)))
        errs["fb"].append(abs(f2(q) * b2(q) - (2.0 * q.a0 - 1.0)))
        prod = A.matrix @ (eye - A.matrix)
        na, nc = _opnorm(A.matrix), _opnorm(eye - A.matrix)
        e1, e2 = (na - 0.5) ** 2, (nc - 0.5) ** 2
        errs["nAA"].append(abs(_opnorm(prod) - (0.25 - min(e1, e2))))
        errs["n1AA"].append(abs(_opnorm(eye - prod) - (0.75 + max(e1, e2))))
    return [
        _worst("qubit: Sa = 2|a|", errs["Sa"], 1e-9),
        _worst("qubit: Sb = 4 min(a0, 1-a0)|a|", errs["Sb"], 1e-9),
        _worst("qubit: S1 = Sb2", errs["S1"], 1e-9),
        _worst("qubit: S2 = Sc2", errs["S2"], 1e-9),
        _worst("qubit: B3 = b2", errs["B3"], 1e-9),
        _worst("qubit: B0 = 2 a0 - 1", errs["B0"], 1e-9),
        _worst("qubit: f2 * b2 = 2 a0 - 1", errs["fb"], 1e-9),
        _worst("qubit: ||AA'|| = 1/4 - min{...}", errs["nAA"], 1e-9),
        _worst("qubit: ||1 - AA'|| = 3/4 + max{...}", errs["n1AA"], 1e-9),
    ]


# -- counterexamples ---------------------------------------------------------------

def counterexamples() -> list[CheckResult]:
    """The candidate measures that fail, on the operators that make them fail."""
    A = effect_with_spectrum([0.0, 0.5, 1.0])
    C = effect_with_spectrum([0.2, 0.5, 0.8])
    out = []

    def check(name, value, target, tol=1e-12):
        out.append(CheckResult(name, abs(value - target) <= tol, f"value {value!r}, expected {target!r}"))

    out.append(CheckResult("diag(0, 1/2, 1) is neither a projection nor trivial",
                           not np.allclose(A.matrix @ A.matrix, A.matrix) and A.summary.width > 0,
                           "A^2 != A and W > 0"))
    check("Sa = 1 on diag(0, 1/2, 1)", ms.sharpness_a(A), 1.0)
    check("Sb = 1 on diag(0, 1/2, 1)", ms.sharpness_b(A), 1.0)
    check("F3 = 0 on diag(0, 1/2, 1)", ms.unsharpness_f3(A), 0.0)
    check("F4 = 1 on diag(0, 1/2, 1)", ms.unsharpness_f4(A), 1.0)
    check("B2 discriminant 1 - 2X + Y = -0.09 on diag(0.2, 0.5, 0.8)",
          ms.failed_b2_discriminant(C), -0.09, tol=1e-9)
    # the axiom harness finds the same operator on its own
    for measure, axiom in (("Sa", "S3"), ("Sb", "S3"), ("F3", "S3"), ("F4", "S2")):
        v = {x.axiom: x for x in verify_axioms(measure, samples=200, seed=0, dims=(3,))}[axiom]
        hit = (not v.holds and v.counterexample is not None
               and np.allclose(v.counterexample[0].matrix, A.matrix, atol=0))
        out.append(CheckResult(f"harness: {measure} violates {axiom} at diag(0, 1/2, 1)", hit,
                               v.detail or "no violation found"))
    return out


# -- axioms ----------------------------------------------------------------------

def axioms(samples: int = 10_000, seed: int = 0, dims=DEFAULT_DIMS,
           measures=AXIOM_MEASURES) -> list[CheckResult]:
    out = []
    for m in measures:
        verdicts = verify_axioms(m, samples=samples, seed=seed, dims=dims)
        for v in verdicts:
            out.append(CheckResult(f"{m} {v.axiom}", v.holds,
                                   f"{v.checked} checks" + ("" if v.holds else f"; {v.detail}"),
                                   data={"verdict": v}))
    return out


# -- oracle agreement -------------------------------------------------------------

def oracle(samples: int = 10_000, seed: int = 0, band: float = AGREEMENT_BAND,
           resolution: int = 21, rounds: int = 4) -> list[CheckResult]:
    """Closed-form criterion against the brute-force feasibility search."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(7,)))
    t0 = time.perf_counter()
    disagreements, in_band, worst_witness, feasible = [], 0, np.inf, 0
    for _ in range(samples):
        A, B = random_qubit_effect(rng), random_qubit_effect(rng)
        lhs = coexistence_lhs(A, B)
        res = joint_feasible_bruteforce(A, B, resolution, rounds)
        if res.feasible:
            feasible += 1
            g = res.witness
            worst_witness = min(worst_witness, float(constraint_margins(A, B, g.a0, g.a).min()))
        if abs(lhs - 1.0) <= band:
            in_band += 1
        elif (lhs >= 1.0) != res.feasible:
            disagreements.append((A, B, lhs, res.margin))
    elapsed = time.perf_counter() - t0
    detail = (f"{len(disagreements)} disagreements outside band {band:g}; "
              f"{in_band} pairs inside the band not compared; {feasible}/{samples} feasible")
    # elapsed time lives in ``data`` only, so printed reports stay reproducible
    return [
        CheckResult("criterion agrees with brute-force oracle", not disagreements, detail,
                    data={"disagreements": disagreements, "elapsed": elapsed}),
        CheckResult("oracle witnesses satisfy all four constraints", worst_witness >= -EPS_FEAS,
                    f"smallest re-evaluated margin {worst_witness:.3e} (tol {-EPS_FEAS:g})"),
    ]


# -- coexistence structure ----------------------------------------------------------

def coexistence(samples: int = 1000, seed: int = 0) -> list[CheckResult]:
    """Boundary location, sharp-pair rejection and symmetries of the criterion."""
    out = []
    rows = scan((0.5,), (0.5,), tuple(i * 1e-4 for i in range(5001)), (None,), (90.0,), tie_radii=True)
    flips = locate_flips(rows)
    target = 1.0 / (2.0 * np.sqrt(2.0))
    ok = len(flips) == 1 and abs(flips[0].params["ra"] - target) <= 1e-4 and abs(flips[0].lhs - 1.0) <= 1e-6
    detail = "; ".join(f"flip at r = {f.params['ra']:.8f}, lhs = {f.lhs:.9f}" for f in flips) or "no flip"
    out.append(CheckResult("unbiased orthogonal boundary at r = 1/(2 sqrt 2)", ok, detail))

    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(11,)))
    rejected = 0
    n_sharp = 100
    for _ in range(n_sharp):
        u = rng.standard_normal(3)
        P = QubitEffect(0.5, tuple(0.5 * u / np.linalg.norm(u)))
        while True:
            B = random_qubit_effect(rng)
            if B.r > 1e-6 and not commute(P, B, eps=1e-6):
                break
        A, B = (P, B) if rng.uniform() < 0.5 else (B, P)
        rejected += are_coexistent(A, B).status is Status.NOT_COEXISTENT
    out.append(CheckResult("noncommuting pairs with a projection are not coexistent",
                           rejected == n_sharp, f"{rejected}/{n_sharp} NotCoexistent"))

    sym, rot, comm_bad, red_bad = 0.0, 0.0, 0, 0
    for _ in range(samples):
        A, B = random_qubit_effect(rng), random_qubit_effect(rng)
        lhs = coexistence_lhs(A, B)
        sym = max(sym, abs(lhs - coexistence_lhs(B, A)))
        q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        RA, RB = QubitEffect(A.a0, tuple(q @ A.vec)), QubitEffect(B.a0, tuple(q @ B.vec))
        rot = max(rot, abs(lhs - coexistence_lhs(RA, RB)))
        # parallel partner: same direction as A
        Bp = QubitEffect(B.a0, tuple(A.vec / max(A.r, 1e-300) * min(B.r, min(B.a0, 1 - B.a0))))
        if are_coexistent(A, Bp).status is Status.NOT_COEXISTENT:
            comm_bad += 1
        # unbiased reduction
        UA = QubitEffect(0.5, tuple(A.vec / max(A.r, 1e-300) * rng.uniform(0, 0.5)))
        UB = QubitEffect(0.5, tuple(B.vec / max(B.r, 1e-300) * rng.uniform(0, 0.5)))
        ref = unbiased_reduction(UA, UB)
        val = coexistence_lhs(UA, UB) - 1.0
        if abs(ref) > 1e-9 and abs(val) > 1e-9 and np.sign(ref) != np.sign(val):
            red_bad += 1
    out.append(CheckResult("lhs(A, B) = lhs(B, A)", sym == 0.0, f"max difference {sym:.3e}"))
    out.append(CheckResult("lhs invariant under joint rotation", rot <= 1e-12, f"max difference {rot:.3e}"))
    out.append(CheckResult("commuting pairs are never NotCoexistent", comm_bad == 0, f"{comm_bad} failures"))
    out.append(CheckResult("unbiased pairs: sign(lhs - 1) = sign(1 - |a+b| - |a-b|)", red_bad == 0,
                           f"{red_bad} sign mismatches"))
    return out


SUITES = {
    "identities": lambda samples, seed, dims: identities(samples, seed, dims) + qubit_identities(samples, seed),
    "counterexamples": lambda samples, seed, dims: counterexamples(),
    "axioms": lambda samples, seed, dims: axioms(samples, seed, dims),
    "oracle": lambda samples, seed, dims: oracle(samples, seed),
    "coexistence": lambda samples, seed, dims: coexistence(min(samples, 10_000), seed),
}


def run_suite(name: str, samples: int = 10_000, seed: int = 0, dims=DEFAULT_DIMS) -> list[CheckResult]:
    if name == "all":
        return [r for n in SUITES for r in run_suite(n, samples, seed, dims)]
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; known: {', '.join(SUITES)}, all") from None
    return fn(samples, seed, dims)
