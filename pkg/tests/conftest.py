import numpy as np
import pytest
from hypothesis import settings, strategies as st

from sharpbias.effect_core import Effect
from sharpbias.oracle import effect_with_spectrum
from sharpbias.qubit import QubitEffect

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

_ACCEPTANCE_LINES = []


def diag(*values) -> Effect:
    return Effect.from_matrix(np.diag(values).astype(complex))


def qubit(a0, r, axis=2) -> QubitEffect:
    a = [0.0, 0.0, 0.0]
    a[axis] = r
    return QubitEffect(a0, tuple(a))


unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


@st.composite
def effects(draw, dims=(2, 3, 4)):
    dim = draw(st.sampled_from(dims))
    values = draw(st.lists(unit, min_size=dim, max_size=dim))
    seed = draw(st.integers(min_value=0, max_value=2 ** 32 - 1))
    return effect_with_spectrum(values, np.random.default_rng(seed))


@st.composite
def qubit_effects(draw):
    a0 = draw(unit)
    rmax = min(a0, 1.0 - a0)
    frac = draw(unit)
    v = np.array(draw(st.tuples(*[st.floats(-1.0, 1.0)] * 3)))
    n = np.linalg.norm(v)
    if n < 1e-6:
        v, n = np.array([0.0, 0.0, 1.0]), 1.0
    return QubitEffect(a0, tuple(frac * rmax * v / n))


@pytest.fixture
def acceptance_report():
    """Record one PASS/FAIL line per acceptance criterion."""
    def report(number, passed, detail):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
