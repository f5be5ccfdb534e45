"""Bloch-vector representation of qubit states.

A qubit state is written rho = (I + r . sigma) / 2 with |r| <= 1. Everything
downstream works with the real 3-vector r; density matrices only show up in
the test oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidState, LengthExceedsOne

NORM_TOL = 1e-12
# |r| within NORM_TOL of 1 means 1 - |r|^2 within 2 NORM_TOL of 0
PURE_TOL = 2.0 * NORM_TOL


def mixedness(nsq):
    """1 - |r|^2 from |r|^2, snapped to 0 for states within tolerance of pure.

    Without the snap, a pure state typed as (1/sqrt 2, 0, 1/sqrt 2) keeps a
    residual 1 - |r|^2 of about 2e-16, and the square root in the fidelity
    turns that into an error of order 1e-8. Accepts scalars or arrays.
    """
    g = 1.0 - nsq
    if np.ndim(g):
        return np.where(g <= PURE_TOL, 0.0, g)
    return 0.0 if g <= PURE_TOL else float(g)


@dataclass(frozen=True)
class BlochVector:
    rx: float
    ry: float
    rz: float

    def __post_init__(self):
        if self.norm > 1.0 + NORM_TOL:
            raise LengthExceedsOne(
                f"|r| = {self.norm:.17g} exceeds 1 (|r|^2 = {self.norm_sq:.17g})"
            )

    @property
    def norm_sq(self) -> float:
        return self.rx * self.rx + self.ry * self.ry + self.rz * self.rz

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm_sq)

    def as_array(self) -> np.ndarray:
        return np.array([self.rx, self.ry, self.rz], dtype=float)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.rx, self.ry, self.rz)

    def __iter__(self):
        return iter((self.rx, self.ry, self.rz))

    @classmethod
    def from_array(cls, a) -> "BlochVector":
        x, y, z = (float(c) for c in a)
        return validate(x, y, z)


@dataclass(frozen=True)
class EigenPair:
    lambda_plus: float
    lambda_minus: float


def validate(rx: float, ry: float, rz: float) -> BlochVector:
    """Build a BlochVector, rejecting |r| > 1 + NORM_TOL.

    Vectors whose length lies in (1, 1 + NORM_TOL] are rescaled onto the unit
    sphere so that pure states typed with rounded components are accepted.
    """
    comps = (float(rx), float(ry), float(rz))
    if not all(math.isfinite(c) for c in comps):
        raise InvalidState(f"non-finite Bloch component in {comps}")
    n = math.sqrt(sum(c * c for c in comps))
    if n > 1.0 + NORM_TOL:
        raise LengthExceedsOne(
            f"|r| = {n:.17g} exceeds 1 (|r|^2 = {n * n:.17g})"
        )
    if n > 1.0:
        comps = tuple(c / n for c in comps)
    return BlochVector(*comps)


def as_bloch(r) -> BlochVector:
    if isinstance(r, BlochVector):
        return r
    return BlochVector.from_array(r)


def _radicand(r: BlochVector, s: BlochVector) -> float:
    return mixedness(r.norm_sq) * mixedness(s.norm_sq)


def fidelity(r: BlochVector, s: BlochVector) -> float:
    """Uhlmann fidelity of two qubit states given by Bloch vectors.

    F = (1 + r.s + sqrt((1 - |r|^2)(1 - |s|^2))) / 2.
    """
    r, s = as_bloch(r), as_bloch(s)
    dot = r.rx * s.rx + r.ry * s.ry + r.rz * s.rz
    f = 0.5 * (1.0 + dot + math.sqrt(_radicand(r, s)))
    return min(1.0, max(0.0, f))


def trace_distance(r: BlochVector, s: BlochVector) -> float:
    """Trace norm ||rho - sigma||_1, which for qubits is |r - s|."""
    r, s = as_bloch(r), as_bloch(s)
    return math.sqrt(
        (r.rx - s.rx) ** 2 + (r.ry - s.ry) ** 2 + (r.rz - s.rz) ** 2
    )


def eigenvalues(r: BlochVector) -> EigenPair:
    n = as_bloch(r).norm
    return EigenPair(0.5 + 0.5 * n, 0.5 - 0.5 * n)


# matrix-level helpers, used by tests and the selftest as independent oracles

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def density_matrix(r) -> np.ndarray:
    x, y, z = as_bloch(r)
    return 0.5 * (np.eye(2, dtype=complex) + x * PAULI[0] + y * PAULI[1] + z * PAULI[2])
