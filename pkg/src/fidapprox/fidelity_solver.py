"""Closed-form optimal convex approximation of a qubit state over B3, by fidelity.

All closed forms work in the nonnegative octant. A target is reflected into
the octant, solved there, and the weights are reflected back by swapping the
antipodal pairs (|0>,|1>), (|2>,|3>), (|4>,|5>).

Regions (octant coordinates x, y, z >= 0):

* S1: x + y + z <= 1. Exact representation, distance 0.
* S2: outside S1 with all three weights of the p0/p2/p4 solution nonnegative.
* S3, S4, S5: two-weight solutions on the edges (p0, p2), (p0, p4), (p2, p4).
  More than one may apply; the smallest distance wins.

The predicate helpers accept scalars or numpy arrays so the comparison
module can sample regions with the same code that classifies them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bloch import BlochVector, as_bloch, fidelity, mixedness
from .errors import PureStateUnsupported
from .results import ApproximationResult, Predicate, Provenance, Region
from .sets import WEIGHT_TOL, b3, make_weights, mixture_bloch

SQRT2 = math.sqrt(2.0)
KKT_PURE_MARGIN = 1e-9

# Weight index of the positive pole of each axis; the negative pole is index + 1.
_POS_INDEX = {"x": 2, "y": 4, "z": 0}

# edge label -> (first axis, second axis, remaining axis)
EDGES = {
    "S3": ("z", "x", "y"),
    "S4": ("z", "y", "x"),
    "S5": ("x", "y", "z"),
}


# ---------------------------------------------------------------- predicates

def in_s1(x, y, z):
    return x + y + z <= 1.0


def _s2_pair(a, b, c):
    """a + b < sqrt(1 - 2c^2) + c  or  a + b < 2c; false radical branch if 1 - 2c^2 < 0."""
    rad = 1.0 - 2.0 * c * c
    first = np.where(rad >= 0.0, a + b < np.sqrt(np.maximum(rad, 0.0)) + c, False)
    return np.logical_or(first, a + b < 2.0 * c)


def in_s2_strict(x, y, z):
    """The strict S2 inequalities, outside S1."""
    out = (
        _s2_pair(x, y, z) & _s2_pair(y, z, x) & _s2_pair(x, z, y) & ~in_s1(x, y, z)
    )
    return out if np.ndim(out) else bool(out)


def _s2_radicand(x, y, z):
    # 3 - (x+y+z)^2 written so that it stays >= 0 for |r| <= 1
    nsq = x * x + y * y + z * z
    q = 3.0 * mixedness(nsq) + (x - y) ** 2 + (y - z) ** 2 + (z - x) ** 2
    return np.maximum(q, 0.0)


def s2_weights(x, y, z):
    """(p0, p2, p4) of the three-weight solution."""
    q = _s2_radicand(x, y, z)
    sq = np.sqrt(q)
    safe = np.where(sq > 0.0, sq, 1.0)

    def term(num):
        return np.where(sq > 0.0, SQRT2 * num / (3.0 * safe), 0.0)

    p0 = 1.0 / 3.0 - term(x + y - 2.0 * z)
    p2 = 1.0 / 3.0 - term(-2.0 * x + y + z)
    p4 = 1.0 / 3.0 - term(x - 2.0 * y + z)
    return p0, p2, p4


def s2_distance(x, y, z):
    r = x + y + z
    return 0.5 - r / 6.0 - np.sqrt(2.0 * _s2_radicand(x, y, z)) / 6.0


def in_s2(x, y, z):
    """S2 membership used by the solver: S2 weights nonnegative, outside S1.

    Equivalent to the strict S2 inequalities with their boundary included.
    """
    p0, p2, p4 = s2_weights(x, y, z)
    out = (
        (p0 >= -WEIGHT_TOL) & (p2 >= -WEIGHT_TOL) & (p4 >= -WEIGHT_TOL)
        & ~in_s1(x, y, z)
    )
    return out if np.ndim(out) else bool(out)


def edge_inequality(label, x, y, z):
    """(lhs, rhs) of the defining inequality lhs > rhs of S3, S4 or S5."""
    coords = {"x": x, "y": y, "z": z}
    a, b, c = (coords[k] for k in EDGES[label])
    return a + b, np.sqrt(np.maximum(1.0 - c * c, 0.0))


def edge_solution(label, x, y, z):
    """Weights (first, second) and distance of a two-weight edge solution.

    The radicand 2 - (a+b)^2 - 2c^2 is evaluated as (a-b)^2 + 2(1 - |r|^2),
    which is the same quantity but never negative inside the ball. It also
    shows the weights always lie in [0, 1].
    """
    coords = {"x": x, "y": y, "z": z}
    a, b, _ = (coords[k] for k in EDGES[label])
    nsq = x * x + y * y + z * z
    rad = np.maximum((a - b) ** 2 + 2.0 * mixedness(nsq), 0.0)
    sq = np.sqrt(rad)
    ratio = np.where(sq > 0.0, (b - a) / np.where(sq > 0.0, sq, 1.0), 0.0)
    pa = 0.5 - 0.5 * ratio
    pb = 0.5 + 0.5 * ratio
    dist = 0.5 - (sq + a + b) / 4.0
    return pa, pb, dist


# ---------------------------------------------------------------- operations

def octant_normalize(r) -> tuple[BlochVector, tuple[int, int, int]]:
    r = as_bloch(r)
    signs = tuple(-1 if c < 0 else 1 for c in r)
    return BlochVector(abs(r.rx), abs(r.ry), abs(r.rz)), signs


def unmap_weights(weights, signs) -> list[float]:
    """Undo octant reflection on a B3 weight list (index order |0>..|5>)."""
    p = list(weights)
    for axis, s in zip("xyz", signs):
        if s < 0:
            i = _POS_INDEX[axis]
            p[i], p[i + 1] = p[i + 1], p[i]
    return p


@dataclass(frozen=True)
class _Candidate:
    label: str
    weights: tuple[float, ...]
    distance: float


def _edge_candidate(label, x, y, z) -> tuple[_Candidate | None, list[Predicate]]:
    lhs, rhs = edge_inequality(label, x, y, z)
    lhs, rhs = float(lhs), float(rhs)
    preds = [Predicate(f"{label}: sum > sqrt(1 - c^2)", lhs, rhs, lhs > rhs)]
    pa, pb, dist = (float(v) for v in edge_solution(label, x, y, z))
    ok = pa >= -WEIGHT_TOL and pb >= -WEIGHT_TOL
    preds.append(Predicate(f"{label}: weights >= 0", min(pa, pb), -WEIGHT_TOL, ok))
    if not (lhs > rhs and ok):
        return None, preds
    p = [0.0] * 6
    first, second, _ = EDGES[label]
    p[_POS_INDEX[first]] = pa
    p[_POS_INDEX[second]] = pb
    return _Candidate(label, tuple(p), dist), preds


def _evaluate(x: float, y: float, z: float):
    """Classify an octant point and return (label, candidate, predicates)."""
    preds = []
    s = x + y + z
    preds.append(Predicate("S1: rx+ry+rz <= 1", s, 1.0, s <= 1.0))
    if s <= 1.0:
        w = (0.5 - x / 2 - y / 2 + z / 2, 0.5 - x / 2 - y / 2 - z / 2, x, 0.0, y, 0.0)
        return "S1", _Candidate("S1", w, 0.0), preds

    for name, (a, b, c) in (
        ("x+y|z", (x, y, z)), ("y+z|x", (y, z, x)), ("x+z|y", (x, z, y)),
    ):
        rad = 1.0 - 2.0 * c * c
        rhs1 = math.sqrt(rad) + c if rad >= 0.0 else float("nan")
        preds.append(Predicate(f"S2: {name} < sqrt(1-2c^2)+c", a + b, rhs1,
                               rad >= 0.0 and a + b < rhs1))
        preds.append(Predicate(f"S2: {name} < 2c", a + b, 2.0 * c, a + b < 2.0 * c))
    p0, p2, p4 = (float(v) for v in s2_weights(x, y, z))
    low = min(p0, p2, p4)
    preds.append(Predicate("S2: weights >= 0", low, -WEIGHT_TOL, low >= -WEIGHT_TOL))
    if low >= -WEIGHT_TOL:
        w = (p0, 0.0, p2, 0.0, p4, 0.0)
        return "S2", _Candidate("S2", w, float(s2_distance(x, y, z))), preds

    best = None
    for label in ("S3", "S4", "S5"):
        cand, cpreds = _edge_candidate(label, x, y, z)
        preds.extend(cpreds)
        # strict comparison keeps the earlier label on ties
        if cand is not None and (best is None or cand.distance < best.distance):
            best = cand
    return (None if best is None else best.label), best, preds


def classify(r) -> Region:
    """Region of a point, evaluated on its octant-normalized coordinates."""
    rn, _ = octant_normalize(r)
    label, _, preds = _evaluate(*rn)
    return Region(label, tuple(preds))


def solve(r) -> ApproximationResult:
    """Fidelity-optimal mixture of B3 approximating ``r``."""
    r = as_bloch(r)
    rn, signs = octant_normalize(r)
    label, cand, preds = _evaluate(*rn)
    region = Region(label, tuple(preds))
    aset = b3()

    if cand is None:
        from .oracle import oracle_solve

        res = oracle_solve(r, aset, "fidelity")
        return ApproximationResult(
            distance=res.distance, weights=res.weights,
            optimal_bloch=res.optimal_bloch, region=region,
            provenance=Provenance.ORACLE, converged=res.converged,
            notes=("no closed form qualified; oracle fallback",),
        )

    weights = make_weights(unmap_weights(cand.weights, signs))
    v = r if label == "S1" else mixture_bloch(aset, weights)
    free = bound = None
    if label == "S1":
        free, bound = (0.0, 0.0), max(0.0, (1.0 - sum(rn)) / 2.0)
    return ApproximationResult(
        distance=max(0.0, cand.distance), weights=weights, optimal_bloch=v,
        region=region, provenance=Provenance.CLOSED_FORM,
        free_params=free, free_param_bound=bound,
    )


def s1_weights(r, t1: float = 0.0, t2: float = 0.0) -> list[float]:
    """Exact S1 representation for a free-parameter choice (t1, t2 >= 0).

    Raises ValueError if the choice makes a weight negative.
    """
    rn, signs = octant_normalize(r)
    x, y, z = rn
    if x + y + z > 1.0:
        raise ValueError("target outside S1")
    if t1 < 0 or t2 < 0 or t1 + t2 > (1.0 - x - y - z) / 2.0 + WEIGHT_TOL:
        raise ValueError(f"free parameters ({t1}, {t2}) out of range")
    w = [
        0.5 - x / 2 - y / 2 + z / 2 - t1 - t2,
        0.5 - x / 2 - y / 2 - z / 2 - t1 - t2,
        x + t2, t2, y + t1, t1,
    ]
    return unmap_weights(w, signs)


# ---------------------------------------------------------------- KKT check

@dataclass(frozen=True)
class KktReport:
    multiplier: float                     # lambda, for sum p = 1
    multipliers: tuple[float, ...]        # lambda_0 .. lambda_5, for p_i >= 0
    stationarity_residual: float
    complementarity_residual: float
    feasibility_residual: float

    @property
    def max_residual(self) -> float:
        return max(self.stationarity_residual, self.complementarity_residual,
                   self.feasibility_residual)


def kkt_gradient(r, weights) -> np.ndarray:
    """dG/dp_i without the multiplier terms, i.e. the gradient of -F."""
    r = as_bloch(r)
    p = np.asarray(list(weights), dtype=float)
    v = np.array([p[2] - p[3], p[4] - p[5], p[0] - p[1]])
    rem = 1.0 - float(v @ v)
    if rem <= 0.0:
        return np.full(6, np.inf)
    c = math.sqrt(mixedness(r.norm_sq)) / (2.0 * math.sqrt(rem))
    gz = c * v[2] - r.rz / 2.0
    gx = c * v[0] - r.rx / 2.0
    gy = c * v[1] - r.ry / 2.0
    return np.array([gz, -gz, gx, -gx, gy, -gy])


def kkt_residual(r, result, support_tol: float = 1e-12) -> KktReport:
    """Rebuild the multipliers of the B3 KKT system and report residuals.

    lambda is fitted on the support (where lambda_i = 0); off the support
    lambda_i = max(grad_i - lambda, 0), so a negative multiplier shows up as a
    stationarity residual.
    """
    r = as_bloch(r)
    if r.norm >= 1.0 - KKT_PURE_MARGIN:
        raise PureStateUnsupported(
            f"|r| = {r.norm:.17g}; KKT certificate needs a mixed target"
        )
    weights = getattr(result, "weights", result)
    p = np.asarray(list(weights), dtype=float)
    grad = kkt_gradient(r, p)
    support = p > support_tol
    lam = float(np.mean(grad[support])) if support.any() else float(np.min(grad))
    lam_i = np.where(support, 0.0, np.maximum(grad - lam, 0.0))
    stat = float(np.max(np.abs(grad - lam_i - lam)))
    comp = float(np.max(np.abs(lam_i * p)))
    feas = max(abs(float(p.sum()) - 1.0), float(np.max(np.maximum(-p, 0.0))))
    return KktReport(lam, tuple(float(v) for v in lam_i), stat, comp, feas)


def check_distance(r, result) -> float:
    """|distance - (1 - F(target, mixture))|, for invariant checks."""
    v = mixture_bloch(b3(), result.weights)
    return abs(result.distance - (1.0 - fidelity(as_bloch(r), v)))


__all__ = [
    "classify", "solve", "octant_normalize", "unmap_weights", "kkt_residual",
    "KktReport", "s1_weights", "in_s1", "in_s2", "in_s2_strict", "s2_weights",
    "s2_distance", "edge_solution", "edge_inequality", "EDGES",
]
