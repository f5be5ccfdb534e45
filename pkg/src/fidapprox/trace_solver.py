"""Trace-norm baseline over B3.

Closed-form weights are used on S2' (three weights) and S3', S4', S5' (two
weights). Reachable B3 mixtures fill the unit octahedron and the qubit trace
norm is the Euclidean Bloch distance, so the trace-optimal state is the
Euclidean projection onto the octahedron; ``project_octahedron`` computes it
directly and serves any point the closed forms do not cover.
"""

from __future__ import annotations

import numpy as np

from .bloch import as_bloch, trace_distance, validate
from .fidelity_solver import octant_normalize, unmap_weights
from .results import ApproximationResult, Predicate, Provenance, Region
from .sets import b3, make_weights, mixture_bloch

TRACE_LABELS = ("S1", "S2p", "S3p", "S4p", "S5p", "Other")


# predicates; scalar or array arguments, octant coordinates

def in_s2p(x, y, z):
    out = (
        (x + y <= 1 + 2 * z) & (y + z <= 1 + 2 * x) & (x + z <= 1 + 2 * y)
        & (x + y + z > 1)
    )
    return out if np.ndim(out) else bool(out)


def in_s3p(x, y, z):
    out = (
        (1 - z < x + y) & (x + y <= 1 + 2 * z) & (y + z <= 1 + 2 * x)
        & (x + z > 1 + 2 * y)
    )
    return out if np.ndim(out) else bool(out)


def in_s4p(x, y, z):
    out = (
        (1 - z < x + y) & (x + y <= 1 + 2 * z) & (y + z > 1 + 2 * x)
        & (x + z <= 1 + 2 * y)
    )
    return out if np.ndim(out) else bool(out)


def in_s5p(x, y, z):
    out = x + y > 1 + 2 * z
    return out if np.ndim(out) else bool(out)


def classify_trace(r) -> Region:
    rn, _ = octant_normalize(r)
    x, y, z = rn
    preds = [
        Predicate("S1: rx+ry+rz <= 1", x + y + z, 1.0, x + y + z <= 1.0),
        Predicate("rx+ry <= 1+2rz", x + y, 1 + 2 * z, x + y <= 1 + 2 * z),
        Predicate("ry+rz <= 1+2rx", y + z, 1 + 2 * x, y + z <= 1 + 2 * x),
        Predicate("rx+rz <= 1+2ry", x + z, 1 + 2 * y, x + z <= 1 + 2 * y),
        Predicate("1-rz < rx+ry", 1 - z, x + y, 1 - z < x + y),
    ]
    if x + y + z <= 1.0:
        label = "S1"
    elif in_s2p(x, y, z):
        label = "S2p"
    elif in_s3p(x, y, z):
        label = "S3p"
    elif in_s4p(x, y, z):
        label = "S4p"
    elif in_s5p(x, y, z):
        label = "S5p"
    else:
        label = "Other"
    return Region(label, tuple(preds))


def project_octahedron(r):
    """Euclidean projection onto {v : |vx| + |vy| + |vz| <= 1}.

    Sort-based soft thresholding: find theta with sum(max(|r_i| - theta, 0)) = 1.
    """
    return validate(*proj_l1_ball(as_bloch(r).as_array()))


def proj_l1_ball(a: np.ndarray, radius: float = 1.0) -> np.ndarray:
    """Array version of the projection onto the l1 ball of given radius."""
    u = np.abs(a)
    if u.sum() <= radius:
        return np.array(a, dtype=float)
    s = np.sort(u)[::-1]
    css = np.cumsum(s)
    k = np.arange(1, len(s) + 1)
    rho = np.nonzero(s - (css - radius) / k > 0)[0][-1]
    theta = (css[rho] - radius) / (rho + 1)
    return np.sign(a) * np.maximum(u - theta, 0.0)


def trace_weights(label: str, x: float, y: float, z: float) -> list[float] | None:
    """Closed-form B3 weights (octant frame) for S1, S2' .. S5'."""
    if label == "S1":
        return [0.5 - x / 2 - y / 2 + z / 2, 0.5 - x / 2 - y / 2 - z / 2, x, 0.0, y, 0.0]
    if label == "S2p":
        return [
            1 / 3 + (2 * z - x - y) / 3, 0.0,
            1 / 3 + (2 * x - z - y) / 3, 0.0,
            1 / 3 + (2 * y - z - x) / 3, 0.0,
        ]
    if label == "S3p":
        d = (x - z) / 2
        return [0.5 - d, 0.0, 0.5 + d, 0.0, 0.0, 0.0]
    # S4' and S5' are the S3' formula under the axis permutation
    if label == "S4p":
        d = (y - z) / 2
        return [0.5 - d, 0.0, 0.0, 0.0, 0.5 + d, 0.0]
    if label == "S5p":
        d = (y - x) / 2
        return [0.0, 0.0, 0.5 - d, 0.0, 0.5 + d, 0.0]
    return None


def witness_weights(v) -> list[float]:
    """Minimal-support B3 weights realizing a point of the octahedron."""
    vx, vy, vz = v
    p = [max(vz, 0.0), max(-vz, 0.0), max(vx, 0.0), max(-vx, 0.0),
         max(vy, 0.0), max(-vy, 0.0)]
    deficit = 1.0 - sum(p)
    p[0] += deficit / 2
    p[1] += deficit / 2
    return p


def solve_trace(r) -> ApproximationResult:
    """Trace-norm optimal mixture of B3 approximating ``r``."""
    r = as_bloch(r)
    rn, signs = octant_normalize(r)
    region = classify_trace(r)
    w = trace_weights(region.label, *rn)
    aset = b3()
    if w is None:
        v = project_octahedron(r)
        weights = make_weights(witness_weights(v))
        prov = Provenance.ORACLE
    else:
        weights = make_weights(unmap_weights(w, signs))
        prov = Provenance.CLOSED_FORM
    v = r if region.label == "S1" else mixture_bloch(aset, weights)
    free = bound = None
    if region.label == "S1":
        free, bound = (0.0, 0.0), max(0.0, (1.0 - sum(rn)) / 2.0)
    return ApproximationResult(
        distance=trace_distance(r, v), weights=weights, optimal_bloch=v,
        region=region, provenance=prov, metric="trace",
        free_params=free, free_param_bound=bound,
    )
