"""Catalog of available pure-state sets and their convex mixtures."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bloch import BlochVector, validate
from .errors import CardinalityMismatch

WEIGHT_TOL = 1e-12

# cos(alpha0/2) = sqrt((2 + sqrt 2)/4) = cos(pi/8)
ALPHA0 = 2.0 * math.acos(math.sqrt((2.0 + math.sqrt(2.0)) / 4.0))

_B3_POINTS = (
    (0.0, 0.0, 1.0),   # |0>
    (0.0, 0.0, -1.0),  # |1>
    (1.0, 0.0, 0.0),   # |2>
    (-1.0, 0.0, 0.0),  # |3>
    (0.0, 1.0, 0.0),   # |4>
    (0.0, -1.0, 0.0),  # |5>
)


@dataclass(frozen=True)
class AvailableSet:
    """An ordered list of pure states, stored as unit Bloch points.

    ``kind`` is one of ``"b3"``, ``"b3-alpha0"`` or ``"b-alpha"``; ``alpha``
    is only set for the last one.
    """

    kind: str
    states: tuple[BlochVector, ...]
    alpha: float | None = None

    @property
    def set_id(self) -> str:
        if self.kind == "b-alpha":
            return f"b-alpha:{self.alpha!r}"
        return self.kind

    @property
    def points(self) -> np.ndarray:
        return np.array([s.as_tuple() for s in self.states], dtype=float)

    def __len__(self):
        return len(self.states)


@dataclass(frozen=True)
class WeightVector:
    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if any(v < -WEIGHT_TOL for v in vals):
            raise ValueError(f"negative weight in {vals}")
        if abs(math.fsum(vals) - 1.0) > WEIGHT_TOL:
            raise ValueError(f"weights sum to {math.fsum(vals)!r}, not 1")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __iter__(self):
        return iter(self.values)

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)


def make_weights(values: Sequence[float]) -> WeightVector:
    """Clamp tiny negatives (> -WEIGHT_TOL) to zero and renormalize."""
    vals = [float(v) for v in values]
    if any(v < -WEIGHT_TOL for v in vals):
        raise ValueError(f"weight below -{WEIGHT_TOL}: {vals}")
    vals = [max(v, 0.0) for v in vals]
    total = math.fsum(vals)
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"weights sum to {total!r}, not 1")
    if total != 1.0:
        vals = [v / total for v in vals]
    return WeightVector(tuple(vals))


def eigenvectors_of_real_gate(alpha: float) -> tuple[BlochVector, BlochVector]:
    """Bloch points of the eigenvectors of U_alpha = [[cos a, sin a], [sin a, -cos a]].

    cos(a/2)|0> + sin(a/2)|1>  ->  (sin a, 0, cos a)
    sin(a/2)|0> - cos(a/2)|1>  ->  (-sin a, 0, -cos a)
    """
    s, c = math.sin(alpha), math.cos(alpha)
    return validate(s, 0.0, c), validate(-s, 0.0, -c)


def b3() -> AvailableSet:
    return AvailableSet("b3", tuple(BlochVector(*p) for p in _B3_POINTS))


def b3_alpha0() -> AvailableSet:
    phi1, phi2 = eigenvectors_of_real_gate(ALPHA0)
    base = b3().states
    return AvailableSet("b3-alpha0", base + (phi1, phi2), alpha=None)


def b_alpha(alpha: float) -> AvailableSet:
    alpha = float(alpha) % (2.0 * math.pi)
    phi, _ = eigenvectors_of_real_gate(alpha)
    states = (BlochVector(0.0, 1.0, 0.0), BlochVector(0.0, -1.0, 0.0), phi)
    return AvailableSet("b-alpha", states, alpha=alpha)


def parse_set_id(text: str) -> AvailableSet:
    """Parse ``b3``, ``b3-alpha0`` or ``b-alpha:<radians>``."""
    t = text.strip().lower()
    if t == "b3":
        return b3()
    if t == "b3-alpha0":
        return b3_alpha0()
    if t.startswith("b-alpha:"):
        return b_alpha(float(t.split(":", 1)[1]))
    raise ValueError(f"unknown available set {text!r}")


def mixture_bloch(aset: AvailableSet, w) -> BlochVector:
    """Bloch vector of sum_i p_i rho_i."""
    vals = w.values if isinstance(w, WeightVector) else tuple(float(v) for v in w)
    if len(vals) != len(aset):
        raise CardinalityMismatch(
            f"{len(vals)} weights for a set of {len(aset)} states"
        )
    if aset.kind == "b3":
        p = vals
        return validate(p[2] - p[3], p[4] - p[5], p[0] - p[1])
    v = np.asarray(vals) @ aset.points
    return validate(*v)
