import numpy as np
import pytest

from phjordan.generators import from_jordan_spec, random_ensemble
from phjordan.jordan import jordan_decompose
from phjordan.numfield import DEFAULT_TOL
from phjordan.pseudoherm import classify_spectrum

ENSEMBLE_SEED = 20240611


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def ensemble():
    """240 operators with known Jordan structure, decomposed once per session."""
    out = []
    for inst in random_ensemble(np.random.default_rng(ENSEMBLE_SEED), count=240):
        jd = jordan_decompose(inst.H, DEFAULT_TOL)
        out.append((inst, jd, classify_spectrum(jd, DEFAULT_TOL)))
    return out


@pytest.fixture(scope="session")
def mixed6():
    """J2(1) + J1(i) + J1(-i) + J2(3) under a fixed random similarity."""
    spec = ((1.0, 2), (1j, 1), (-1j, 1), (3.0, 2))
    H, _, _ = from_jordan_spec(spec, np.random.default_rng(6), cond=20.0)
    jd = jordan_decompose(H)
    return H, jd, classify_spectrum(jd)


def J2(E):
    return np.array([[E, 1], [0, E]], dtype=complex)


ACCEPTANCE_LINES = {}


@pytest.fixture
def verdict(request):
    """Record one pass/fail line for an acceptance criterion."""

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES[number] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
