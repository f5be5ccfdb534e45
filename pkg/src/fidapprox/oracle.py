"""Brute-force reference solver used to check every closed form.

The objective depends on the weights only through the mixture Bloch vector
v, so the search runs over v in the convex hull of the set's Bloch points:
a lattice enumeration picks the best node, then projected gradient ascent
polishes it. For B3 the hull is the unit octahedron and the projection is
the exact l1-ball projection. Other sets polish in weight space with the
exact simplex projection.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bloch import as_bloch, fidelity, mixedness, trace_distance
from .errors import NonConvergenceWarning
from .results import ApproximationResult, Provenance
from .sets import AvailableSet, b3, make_weights, mixture_bloch
from .trace_solver import proj_l1_ball, witness_weights

# Above this many lattice nodes the grid is streamed slab by slab instead of cached.
_CACHE_LIMIT = 3_000_000


@dataclass(frozen=True)
class OracleConfig:
    grid_step: float = 0.005
    polish_iters: int = 2000
    polish_tol: float = 1e-10

    def __post_init__(self):
        if not 0.0 < self.grid_step <= 0.1:
            raise ValueError(f"grid_step must lie in (0, 0.1], got {self.grid_step}")
        if self.polish_iters <= 0 or self.polish_tol <= 0:
            raise ValueError("polish parameters must be positive")

    @property
    def divisions(self) -> int:
        # round so that 1/step is an integer and the hull vertices are lattice nodes
        return int(math.ceil(1.0 / self.grid_step - 1e-9))


# ----------------------------------------------------------------- objectives

class _Fidelity:
    def __init__(self, r: np.ndarray):
        self.r = r
        self.sr = math.sqrt(mixedness(float(r @ r)))

    def grid_scores(self, pts, sq, nsq):
        return pts @ self.r + self.sr * sq

    def value(self, v):
        return 0.5 * (1.0 + float(self.r @ v)
                      + self.sr * math.sqrt(mixedness(float(v @ v))))

    def grad(self, v):
        rem = max(1.0 - float(v @ v), 1e-30)
        return 0.5 * (self.r - self.sr * v / math.sqrt(rem))


class _Trace:
    """-|r - v|^2 / 2, maximized."""

    def __init__(self, r: np.ndarray):
        self.r = r

    def grid_scores(self, pts, sq, nsq):
        return 2.0 * (pts @ self.r) - nsq

    def value(self, v):
        d = self.r - v
        return -0.5 * float(d @ d)

    def grad(self, v):
        return self.r - v


def fidelity_gradient(r, v) -> np.ndarray:
    """Analytic gradient of F(r, v) with respect to v."""
    return _Fidelity(as_bloch(r).as_array()).grad(np.asarray(v, dtype=float))


def gradient_check(r, v, h: float = 1e-6) -> float:
    """Max |analytic - central difference| of dF/dv at v (|v| < 1)."""
    r = as_bloch(r).as_array()
    v = np.asarray(as_bloch(v).as_array(), dtype=float)
    obj = _Fidelity(r)
    g = obj.grad(v)
    fd = np.empty(3)
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        fd[k] = (obj.value(v + e) - obj.value(v - e)) / (2 * h)
    return float(np.max(np.abs(g - fd)))


# --------------------------------------------------------------------- grids

def _diamond(m: int) -> np.ndarray:
    j = np.arange(-m, m + 1)
    jj, kk = np.meshgrid(j, j, indexing="ij")
    mask = np.abs(jj) + np.abs(kk) <= m
    return np.stack([jj[mask], kk[mask]], axis=1)


def _octahedron_slabs(n: int):
    h = 1.0 / n
    for i in range(-n, n + 1):
        jk = _diamond(n - abs(i))
        pts = np.empty((len(jk), 3))
        pts[:, 0] = i * h
        pts[:, 1:] = jk * h
        yield pts


def _with_aux(pts):
    nsq = np.einsum("ij,ij->i", pts, pts)
    return pts, np.sqrt(mixedness(nsq)), nsq


@lru_cache(maxsize=4)
def _octahedron_cached(n: int):
    return _with_aux(np.concatenate(list(_octahedron_slabs(n))))


def _octahedron_count(n: int) -> int:
    return sum(2 * m * (m + 1) + 1 for m in (n - abs(i) for i in range(-n, n + 1)))


def _hull_slabs(points: np.ndarray, n: int):
    from scipy.spatial import ConvexHull

    eqs = ConvexHull(points).equations
    h = 1.0 / n
    ax = np.arange(-n, n + 1) * h
    yy, zz = np.meshgrid(ax, ax, indexing="ij")
    yz = np.stack([yy.ravel(), zz.ravel()], axis=1)
    for x in ax:
        pts = np.empty((len(yz), 3))
        pts[:, 0] = x
        pts[:, 1:] = yz
        keep = np.all(pts @ eqs[:, :3].T + eqs[:, 3] <= 1e-12, axis=1)
        if keep.any():
            yield pts[keep]


@lru_cache(maxsize=4)
def _hull_cached(key: tuple, n: int):
    pts = np.array(key, dtype=float).reshape(-1, 3)
    return _with_aux(np.concatenate(list(_hull_slabs(pts, n))))


@lru_cache(maxsize=16)
def _compositions(k: int, n: int) -> np.ndarray:
    """All nonnegative integer k-vectors summing to n."""
    if k == 1:
        return np.array([[n]])
    return np.vstack([
        np.hstack([np.full((len(sub), 1), i), sub])
        for i in range(n + 1)
        for sub in (_compositions(k - 1, n - i),)
    ])


def _simplex_lattice(k: int, n: int) -> np.ndarray:
    return _compositions(k, n) / n


def _best_on_grid(obj, chunks):
    best_v, best_s = None, -np.inf
    for pts, sq, nsq in chunks:
        s = obj.grid_scores(pts, sq, nsq)
        i = int(np.argmax(s))
        if s[i] > best_s:
            best_s, best_v = s[i], pts[i].copy()
    return best_v


# ------------------------------------------------------------------- polish

def project_simplex(p: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort based)."""
    u = np.sort(p)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, len(p) + 1)
    rho = np.nonzero(u - css / k > 0)[0][-1]
    theta = css[rho] / (rho + 1)
    return np.maximum(p - theta, 0.0)


def _projected_ascent(x0, value, grad, proj, iters, tol):
    """Projected gradient ascent; returns (x, converged).

    Converged means the gradient-mapping norm |P(x + s g) - x| / s fell
    below ``tol``.

    The step is backtracked until the local curvature along the step is at
    most 1/step, measured with gradients rather than function values: near
    the optimum F is flat to machine precision long before x has settled.
    """
    x = proj(x0)
    g = grad(x)
    fx = value(x)
    step = 1.0
    for _ in range(iters):
        while True:
            xn = proj(x + step * g)
            d = xn - x
            dd = float(d @ d)
            if dd == 0.0:
                return x, True
            gn = grad(xn)
            curv = -float((gn - g) @ d)
            fn = value(xn)
            if curv <= dd / step and fn >= fx - 1e-13:
                break
            step *= 0.5
            if step < 1e-18:
                return x, False
        x, g, fx = xn, gn, fn
        # gradient-mapping norm; |d| alone is small whenever the step is
        if math.sqrt(dd) / step < tol:
            return x, True
        step = min(step * 2.0, 1e6)
    return x, False


def _min_norm_weights(points, v, iters=5000):
    """Weights p on the simplex minimizing |points^T p - v| (grid witness)."""
    lip = max(np.linalg.norm(points, 2) ** 2, 1e-12)
    p = np.full(len(points), 1.0 / len(points))
    for _ in range(iters):
        pn = project_simplex(p - (points @ (points.T @ p - v)) / lip)
        if np.max(np.abs(pn - p)) < 1e-15:
            p = pn
            break
        p = pn
    return p


# -------------------------------------------------------------------- solve

def _objective(name, r):
    key = str(name).lower()
    if key in ("fidelity", "f"):
        return _Fidelity(r), "fidelity"
    if key in ("trace", "tracenorm", "trace_norm", "t"):
        return _Trace(r), "trace"
    raise ValueError(f"unknown objective {name!r}")


def _solve_b3(obj, n, cfg):
    if _octahedron_count(n) <= _CACHE_LIMIT:
        v0 = _best_on_grid(obj, [_octahedron_cached(n)])
    else:
        v0 = _best_on_grid(obj, map(_with_aux, _octahedron_slabs(n)))
    if float(v0 @ v0) >= 1.0 - 1e-12:
        # the fidelity gradient is unbounded on the sphere; start just inside
        v0 = v0 * (1.0 - 0.5 / n)
    v, ok = _projected_ascent(v0, obj.value, obj.grad, proj_l1_ball,
                              cfg.polish_iters, cfg.polish_tol)
    return witness_weights(v), ok


def _solve_generic(obj, aset, n, cfg):
    pts = aset.points
    rank = np.linalg.matrix_rank(pts[1:] - pts[0], tol=1e-9)
    if rank == 3:
        key = tuple(pts.ravel().round(15))
        count_est = (2 * n + 1) ** 3
        if count_est <= 8 * _CACHE_LIMIT:
            chunks = [_hull_cached(key, n)]
        else:
            chunks = map(_with_aux, _hull_slabs(pts, n))
        v0 = _best_on_grid(obj, chunks)
        p0 = _min_norm_weights(pts, v0)
    else:
        if len(pts) > 4:
            raise ValueError("degenerate hull with more than 4 states is not supported")
        lattice = _simplex_lattice(len(pts), n)
        vs = lattice @ pts
        p0 = lattice[int(np.argmax(obj.grid_scores(*_with_aux(vs))))]
    v0 = pts.T @ p0
    if float(v0 @ v0) >= 1.0 - 1e-12:
        p0 = (1.0 - 0.5 / n) * p0 + (0.5 / n) / len(pts)

    def value(p):
        return obj.value(pts.T @ p)

    def grad(p):
        return pts @ obj.grad(pts.T @ p)

    p, ok = _projected_ascent(p0, value, grad, project_simplex,
                              cfg.polish_iters, cfg.polish_tol)
    return list(p), ok


def oracle_solve(r, aset: AvailableSet | None = None, objective="fidelity",
                 cfg: OracleConfig | None = None) -> ApproximationResult:
    """Reference optimum of fidelity (or trace distance) over mixtures of ``aset``."""
    r = as_bloch(r)
    aset = aset or b3()
    cfg = cfg or OracleConfig()
    obj, metric = _objective(objective, r.as_array())
    n = cfg.divisions
    if aset.kind == "b3":
        raw, ok = _solve_b3(obj, n, cfg)
    else:
        raw, ok = _solve_generic(obj, aset, n, cfg)
    weights = make_weights(raw)
    v = mixture_bloch(aset, weights)
    if not ok:
        warnings.warn(
            f"oracle polish did not reach step {cfg.polish_tol:g} "
            f"within {cfg.polish_iters} iterations",
            NonConvergenceWarning, stacklevel=2,
        )
    if metric == "fidelity":
        dist = max(0.0, 1.0 - fidelity(r, v))
    else:
        dist = trace_distance(r, v)
    return ApproximationResult(
        distance=dist, weights=weights, optimal_bloch=v, region=None,
        provenance=Provenance.ORACLE, set_id=aset.set_id, metric=metric,
        converged=ok,
    )
