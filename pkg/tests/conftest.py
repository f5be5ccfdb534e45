"""Shared strategies and independent reference implementations for the tests.

The references here deliberately avoid the package's own formulas: fidelity
and trace norm come from explicit 2x2 matrices, and the simplex optimum from
scipy's SLSQP over the raw weights.
"""

import math

import numpy as np
import pytest
from hypothesis import strategies as st
from scipy.optimize import minimize

from fidapprox.bloch import density_matrix

B3_POINTS = np.array([
    (0, 0, 1), (0, 0, -1), (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0),
], dtype=float)


def _psd_sqrt(m):
    w, u = np.linalg.eigh(m)
    return (u * np.sqrt(np.clip(w, 0.0, None))) @ u.conj().T


def uhlmann_fidelity(r, s):
    """(tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 from density matrices."""
    a = _psd_sqrt(density_matrix(r))
    inner = a @ density_matrix(s) @ a
    return float(np.real(np.trace(_psd_sqrt((inner + inner.conj().T) / 2)))) ** 2


def trace_norm(r, s):
    return float(np.sum(np.abs(np.linalg.eigvalsh(density_matrix(r) - density_matrix(s)))))


def slsqp_optimum(r, points=B3_POINTS, starts=6, seed=0):
    """1 - max F over mixtures of ``points`` by multistart SLSQP on the weights."""
    r = np.asarray(r, dtype=float)
    # treat rounded unit vectors as pure, or sqrt(2e-16) noise leaks in
    g = 1.0 - r @ r
    sr = math.sqrt(g) if g > 2e-12 else 0.0

    def neg_f(p):
        v = p @ points
        return -0.5 * (1.0 + r @ v + sr * math.sqrt(max(1.0 - v @ v, 0.0)))

    rng = np.random.default_rng(seed)
    best = None
    for _ in range(starts):
        res = minimize(
            neg_f, rng.dirichlet(np.ones(len(points))), method="SLSQP",
            bounds=[(0.0, 1.0)] * len(points),
            constraints=[{"type": "eq", "fun": lambda p: p.sum() - 1.0}],
            options={"ftol": 1e-15, "maxiter": 1000},
        )
        if best is None or res.fun < best.fun:
            best = res
    return 1.0 + best.fun, best.x


@st.composite
def bloch_vectors(draw, max_norm=1.0):
    d = draw(st.tuples(*[st.floats(-1, 1, allow_nan=False)] * 3).filter(
        lambda t: sum(c * c for c in t) > 1e-6))
    rad = draw(st.floats(0.0, max_norm))
    n = math.sqrt(sum(c * c for c in d))
    return tuple(c / n * rad for c in d)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def uniform_ball(rng, n):
    d = rng.standard_normal((n, 3))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    return d * rng.random(n)[:, None] ** (1.0 / 3.0)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[0][1:])):
            terminalreporter.write_line(line)
