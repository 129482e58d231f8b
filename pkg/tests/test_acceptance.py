"""Acceptance criteria, each at its stated tolerance and scale.

Every test prints one ``criterion N: PASS|FAIL`` line; the lines are repeated
in the terminal summary.  These are the slow tests (several minutes in total).
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from sharpbias.oracle import random_qubit_effect
from sharpbias.qubit import QubitEffect, Status, are_coexistent, commute
from sharpbias.scan import locate_flips, scan
from sharpbias.suites import AXIOM_MEASURES, axioms, counterexamples, identities, oracle, qubit_identities

pytestmark = pytest.mark.slow

SAMPLES = 10_000
DIMS = (2, 3, 4, 8)


def _summary(checks):
    failed = [c for c in checks if not c.passed]
    return not failed, "; ".join(c.line() for c in failed) or f"{len(checks)} checks pass"


def test_criterion_1_axiom_suites(acceptance_report):
    t0 = time.perf_counter()
    checks = axioms(SAMPLES, seed=0, dims=DIMS, measures=AXIOM_MEASURES)
    elapsed = time.perf_counter() - t0
    ok, detail = _summary(checks)
    ok = ok and len(checks) == 6 * len(AXIOM_MEASURES) and elapsed <= 120.0
    assert acceptance_report(1, ok, f"{detail}; {elapsed:.1f} s (limit 120 s)")


def test_criterion_2_documented_failures(acceptance_report):
    ok, detail = _summary(counterexamples())
    assert acceptance_report(2, ok, detail)


def test_criterion_3_identities(acceptance_report):
    ok, detail = _summary(identities(SAMPLES, seed=0, dims=DIMS))
    assert acceptance_report(3, ok, detail)


def test_criterion_4_qubit_equalities(acceptance_report):
    ok, detail = _summary(qubit_identities(SAMPLES, seed=0))
    assert acceptance_report(4, ok, detail)


def test_criterion_5_coexistence_boundary(acceptance_report):
    target = 1.0 / (2.0 * math.sqrt(2.0))
    radii = tuple(i * 1e-4 for i in range(5001))
    flips = locate_flips(scan((0.5,), (0.5,), radii, (None,), (90.0,), tie_radii=True))
    ok = (len(flips) == 1 and abs(flips[0].params["ra"] - target) <= 1e-4
          and abs(flips[0].lhs - 1.0) <= 1e-6)
    detail = "; ".join(f"flip at r = {f.params['ra']:.8f} (target {target:.8f}), lhs = {f.lhs:.10f}"
                       for f in flips) or "no flip found"
    assert acceptance_report(5, ok, detail)


def test_criterion_6_oracle_agreement(acceptance_report):
    checks = oracle(SAMPLES, seed=0)
    elapsed = checks[0].data["elapsed"]
    ok, detail = _summary(checks)
    ok = ok and elapsed <= 300.0
    assert acceptance_report(6, ok, f"{checks[0].detail}; {checks[1].detail}; {elapsed:.1f} s (limit 300 s)")


def test_criterion_7_sharp_pair_rejection(acceptance_report):
    rng = np.random.default_rng(2024)
    rejected = 0
    for _ in range(100):
        u = rng.standard_normal(3)
        P = QubitEffect(0.5, tuple(0.5 * u / np.linalg.norm(u)))
        while True:
            B = random_qubit_effect(rng)
            if B.r > 1e-6 and not commute(P, B, eps=1e-6):
                break
        pair = (P, B) if rng.uniform() < 0.5 else (B, P)
        rejected += are_coexistent(*pair).status is Status.NOT_COEXISTENT
    assert acceptance_report(7, rejected == 100, f"{rejected}/100 NotCoexistent")


def _cli(*args):
    proc = subprocess.run([sys.executable, "-m", "sharpbias", *args], capture_output=True)
    return proc.returncode, proc.stdout


def test_criterion_8_determinism(acceptance_report):
    runs = {
        "verify all": ("verify", "all", "--samples", "300", "--seed", "7", "--dims", "2,3"),
        "verify axioms json": ("verify", "axioms", "--samples", "300", "--seed", "7", "--format", "json"),
        "scan csv": ("scan", "--a0", "0.3:0.7:0.1", "--ra", "0:0.3:0.05", "--rb", "0:0.3:0.05",
                     "--angle", "0:180:30"),
        "scan json": ("scan", "--format", "json", "--ra", "0:0.5:0.001"),
    }
    bad = []
    for name, args in runs.items():
        first, second = _cli(*args), _cli(*args)
        if first != second or first[0] != 0 or not first[1]:
            bad.append(name)
    detail = f"{len(runs) - len(bad)}/{len(runs)} commands byte-identical across runs"
    if bad:
        detail += f"; differing: {', '.join(bad)}"
    assert acceptance_report(8, not bad, detail)
