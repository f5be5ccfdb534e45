"""Seeded end-to-end checks: every closed form against an independent reference.

The report is plain text with no timings, so two runs with the same seed and
sample count are byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bloch import validate
from .comparison import SuiteResult, appendix_inequality_suite
from .cr_geometry import cr_member, decompose_b_alpha, member_b_alpha
from .fidelity_solver import kkt_residual, solve
from .oracle import OracleConfig, oracle_solve
from .sampling import ball, rejection
from .sets import b3, mixture_bloch
from .trace_solver import in_s2p, in_s3p, in_s4p, in_s5p, project_octahedron, solve_trace


@dataclass(frozen=True)
class SelftestConfig:
    samples: int = 200
    seed: int = 0
    oracle_grid_step: float = 0.01
    oracle_tol: float = 5e-5
    kkt_tol: float = 1e-9
    exact_tol: float = 1e-12


def _ball_points(rng, n):
    # keep points off the sphere by a hair so every one is a valid state
    return [validate(*p) for p in ball(rng, n) * (1.0 - 1e-15)]


def oracle_suite(cfg, rng) -> SuiteResult:
    ocfg = OracleConfig(grid_step=cfg.oracle_grid_step)
    worst = 0.0
    for r in _ball_points(rng, cfg.samples):
        worst = max(worst, abs(solve(r).distance - oracle_solve(r, cfg=ocfg).distance))
    bad = int(worst > cfg.oracle_tol)
    return SuiteResult("oracle_equivalence", cfg.samples, bad, -worst)


def s1_suite(cfg, rng) -> SuiteResult:
    pts = rejection(rng, cfg.samples, lambda x, y, z: x + y + z <= 1.0)
    signs = rng.choice([-1.0, 1.0], size=pts.shape)
    worst, bad = 0.0, 0
    for p in pts * signs:
        res = solve(p)
        v = mixture_bloch(b3(), res.weights).as_array()
        err = max(res.distance, float(np.max(np.abs(v - p))))
        worst = max(worst, err)
        bad += err > cfg.exact_tol or res.label != "S1"
    return SuiteResult("s1_exactness", len(pts), bad, -worst)


def kkt_suite(cfg, rng) -> SuiteResult:
    worst, n = 0.0, 0
    for r in _ball_points(rng, cfg.samples):
        if r.norm >= 1.0 - 1e-9:
            continue
        worst = max(worst, kkt_residual(r, solve(r)).max_residual)
        n += 1
    return SuiteResult("kkt_certificate", n, int(worst > cfg.kkt_tol), -worst)


def _trace_regions(x, y, z):
    return in_s2p(x, y, z) | in_s3p(x, y, z) | in_s4p(x, y, z) | in_s5p(x, y, z)


def trace_suite(cfg, rng) -> SuiteResult:
    pts = rejection(rng, cfg.samples, _trace_regions)
    worst = 0.0
    for p in pts:
        res = solve_trace(p)
        proj = project_octahedron(p).as_array()
        worst = max(worst, float(np.max(np.abs(res.optimal_bloch.as_array() - proj))))
    return SuiteResult("trace_projection", len(pts), int(worst > 1e-9), -worst)


def cr_suite(cfg, rng) -> SuiteResult:
    bad = 0
    for r in _ball_points(rng, cfg.samples):
        bad += cr_member("b3", r) != (solve(r).distance <= 1e-10)
    return SuiteResult("cr_consistency_b3", cfg.samples, bad, float(-bad))


def decomposition_suite(cfg, rng) -> SuiteResult:
    pts = ball(rng, 4 * cfg.samples)
    pts = pts[member_b_alpha(pts[:, 0], pts[:, 1], pts[:, 2])][: cfg.samples]
    worst = 0.0
    for p in pts:
        d = decompose_b_alpha(p)
        v = mixture_bloch(d.available_set(), d.weights).as_array()
        worst = max(worst, float(np.max(np.abs(v - p))))
    return SuiteResult("b_alpha_decomposition", len(pts), int(worst > cfg.exact_tol), -worst)


def run_selftest(samples: int = 200, seed: int = 0) -> tuple[list[SuiteResult], str]:
    """Run all suites; returns (results, report text)."""
    cfg = SelftestConfig(samples=max(1, int(samples)), seed=seed)
    # one child stream per suite so adding a suite leaves the others unchanged
    streams = iter(np.random.default_rng(seed).spawn(8))
    results = [
        oracle_suite(cfg, next(streams)),
        s1_suite(cfg, next(streams)),
        kkt_suite(cfg, next(streams)),
        trace_suite(cfg, next(streams)),
        cr_suite(cfg, next(streams)),
        decomposition_suite(cfg, next(streams)),
    ]
    sub_seed = int(next(streams).integers(2**31))
    results.extend(appendix_inequality_suite(cfg.samples, seed=sub_seed))
    return results, format_report(results, cfg)


def _fmt(x: float) -> str:
    return "nan" if math.isnan(x) else f"{x:.17g}"


def format_report(results, cfg) -> str:
    lines = [f"selftest samples={cfg.samples} seed={cfg.seed}"]
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        line = (f"{r.name:<{width}}  {status}  n={r.samples}  "
                f"violations={r.violations}  worst_margin={_fmt(r.worst_margin)}")
        extra = "  ".join(f"{k}={_fmt(v)}" for k, v in r.details)
        lines.append(line + ("  " + extra if extra else ""))
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} suites passed")
    return "\n".join(lines) + "\n"
