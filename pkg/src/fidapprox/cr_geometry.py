"""Completely representable (CR) regions and their relative volumes.

A target is CR for a set when some mixture of the set reproduces it exactly,
i.e. it lies in the convex hull of the set's Bloch points. Membership is
tested on octant-normalized coordinates x, y, z >= 0 where each region has a
simple description:

* B3: x + y + z <= 1.
* B3-alpha0: the hull of 0, e_x, e_y, e_z and Q0 = (s, 0, s), s = sqrt(2)/2.
  Besides the coordinate planes its facets are
      s x + s y + (1 - s) z <= s      (through e_x, e_y, Q0)
      (1 - s) x + s y + s z <= s      (through e_y, e_z, Q0)
  These apply when rx and rz share a sign. The extra states sit at +-Q0, so
  a point with rx rz < 0 only gains the plain octahedron.
* B-alpha family (union over alpha): (1 - y)^2 >= x^2 + z^2.

Relative volumes are taken against the octant ball, volume pi/6.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bloch import as_bloch
from .errors import NotInRegion
from .sampling import octant_ball
from .sets import AvailableSet, WeightVector, b_alpha, make_weights

S = math.sqrt(2.0) / 2.0
MEMBER_TOL = 1e-12

# (normal, offset) rows of a . r <= b for the B3-alpha0 octant hull
B3_ALPHA0_FACETS = (
    ((-1.0, 0.0, 0.0), 0.0),
    ((0.0, -1.0, 0.0), 0.0),
    ((0.0, 0.0, -1.0), 0.0),
    ((S, S, 1.0 - S), S),
    ((1.0 - S, S, S), S),
)
B3_ALPHA0_VERTICES = ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (S, 0, S))

EXACT_VOLUME = {
    "b3": 1.0 / math.pi,
    "b3-alpha0": math.sqrt(2.0) / math.pi,
    "b-alpha": 0.5,
}


@dataclass(frozen=True)
class CrRegion:
    set_id: str
    membership_test: str     # "L1Ball", "HullFacets" or "Paraboloid"
    exact_relative_volume: float


REGIONS = {
    "b3": CrRegion("b3", "L1Ball", EXACT_VOLUME["b3"]),
    "b3-alpha0": CrRegion("b3-alpha0", "HullFacets", EXACT_VOLUME["b3-alpha0"]),
    "b-alpha": CrRegion("b-alpha", "Paraboloid", EXACT_VOLUME["b-alpha"]),
}


def _family(set_id) -> str:
    if isinstance(set_id, AvailableSet):
        set_id = set_id.set_id
    key = str(set_id).strip().lower()
    if key.startswith("b-alpha"):
        return "b-alpha"
    if key in ("b3", "b3-alpha0"):
        return key
    raise ValueError(f"unknown available set {set_id!r}")


# vectorized predicates; raw (signed) coordinates

def member_b3(x, y, z, tol=MEMBER_TOL):
    return np.abs(x) + np.abs(y) + np.abs(z) <= 1.0 + tol


def member_b3_alpha0(x, y, z, tol=MEMBER_TOL):
    ax, ay, az = np.abs(x), np.abs(y), np.abs(z)
    facets = (S * ax + S * ay + (1 - S) * az <= S + tol) & (
        (1 - S) * ax + S * ay + S * az <= S + tol
    )
    same_sign = np.sign(x) * np.sign(z) >= 0
    return np.where(same_sign, facets, False) | member_b3(x, y, z, tol)


def member_b_alpha(x, y, z, tol=MEMBER_TOL):
    return (1.0 - np.abs(y)) ** 2 >= x * x + z * z - tol


_PREDICATES = {
    "b3": member_b3,
    "b3-alpha0": member_b3_alpha0,
    "b-alpha": member_b_alpha,
}


def membership_predicate(set_id):
    """Vectorized predicate f(x, y, z) of the set's CR region (family level)."""
    return _PREDICATES[_family(set_id)]


def cr_member(set_id, r) -> bool:
    """True when ``r`` is completely representable by the set.

    ``b-alpha`` (any angle) tests the union over alpha. A concrete
    ``b-alpha:<angle>`` set or AvailableSet additionally requires r to lie in
    that set's plane, since a single B-alpha spans only a triangle.
    """
    r = as_bloch(r)
    fam = _family(set_id)
    ok = bool(_PREDICATES[fam](r.rx, r.ry, r.rz))
    alpha = _fixed_alpha(set_id)
    if ok and alpha is not None:
        # in-plane and on the phi side of the y axis
        s, c = math.sin(alpha), math.cos(alpha)
        ok = abs(r.rx * c - r.rz * s) <= 1e-9 and r.rx * s + r.rz * c >= -1e-12
    return ok


def _fixed_alpha(set_id):
    if isinstance(set_id, AvailableSet):
        return set_id.alpha if set_id.kind == "b-alpha" else None
    key = str(set_id).strip().lower()
    if key.startswith("b-alpha:"):
        return float(key.split(":", 1)[1]) % (2.0 * math.pi)
    return None


@dataclass(frozen=True)
class Decomposition:
    alpha: float
    p4: float
    p5: float
    p6: float

    @property
    def weights(self) -> WeightVector:
        return make_weights((self.p4, self.p5, self.p6))

    def available_set(self) -> AvailableSet:
        return b_alpha(self.alpha)

    def reconstruct(self) -> tuple[float, float, float]:
        return (math.sin(self.alpha) * self.p6, self.p4 - self.p5,
                math.cos(self.alpha) * self.p6)


def decompose_b_alpha(r) -> Decomposition:
    """Angle and weights (|4>, |5>, |phi_alpha>) reproducing ``r`` exactly.

    On the y axis (rx = rz = 0) the third weight is zero and alpha is set to 0.
    """
    r = as_bloch(r)
    if not member_b_alpha(r.rx, r.ry, r.rz):
        raise NotInRegion(
            f"(1 - |ry|)^2 = {(1 - abs(r.ry)) ** 2:.17g} < rx^2 + rz^2 = "
            f"{r.rx ** 2 + r.rz ** 2:.17g}"
        )
    rho = math.hypot(r.rx, r.rz)
    alpha = 0.0 if rho == 0.0 else math.atan2(r.rx, r.rz) % (2.0 * math.pi)
    p4 = max(0.5 * (1.0 + r.ry - rho), 0.0)
    p5 = max(0.5 * (1.0 - r.ry - rho), 0.0)
    return Decomposition(alpha, p4, p5, rho)


def relative_volume(set_id, method: str = "exact", samples: int = 1_000_000,
                    seed: int = 0, chunk: int = 250_000) -> tuple[float, float]:
    """(value, standard error) of the CR volume over the octant ball volume.

    ``exact`` returns the tabulated constant with zero error. ``montecarlo``
    draws uniform octant-ball points and reports the hit fraction with its
    binomial standard error.
    """
    fam = _family(set_id)
    m = method.strip().lower().replace("_", "").replace("-", "")
    if m == "exact":
        return EXACT_VOLUME[fam], 0.0
    if m != "montecarlo":
        raise ValueError(f"unknown method {method!r}")
    if samples < 1000:
        raise ValueError("montecarlo needs samples >= 1000")
    rng = np.random.default_rng(seed)
    pred = _PREDICATES[fam]
    hits, left = 0, samples
    while left:
        n = min(chunk, left)
        pts = octant_ball(rng, n)
        hits += int(np.count_nonzero(pred(pts[:, 0], pts[:, 1], pts[:, 2])))
        left -= n
    p = hits / samples
    return p, math.sqrt(p * (1.0 - p) / samples)
