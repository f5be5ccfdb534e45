"""Eigenvalue-gap comparison of the fidelity- and trace-optimal B3 mixtures.

For qubits the spectrum of a state with Bloch vector v is 1/2 +- |v|/2, so
the gap function g(target, approx) = |h+ - l+| + |h- - l-| collapses to
| |approx| - |target| |. ``compare`` evaluates g for both optimal states and
sorts the target into one of the proven regimes:

* BothZero_S1: both metrics represent the target exactly.
* Prop1_S2: fidelity region S2; the fidelity state is never worse.
* Prop2_S3p / S4p / S5p: trace regions S3', S4', S5'; same claim.
* AppD_*: trace region S2' with a fidelity edge region. Two sign tests on
  r^2 = (x+y+z)^2 and a pair term P decide the order when they agree:

      FidelityWins  if r^2 >= P and 1 - 3|r|^2 + r^2 <= 0
      TraceWins     if r^2 <= P and 1 - 3|r|^2 + r^2 >= 0
      Inconclusive  otherwise.

  P is (x+z)^2 + 2y^2 for S3, (y+z)^2 + 2x^2 for S4 and (x+y)^2 + 2z^2 for
  S5: the squared l1 length of the edge solution's two axes plus twice the
  square of the third.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bloch import BlochVector, as_bloch
from .fidelity_solver import in_s2, octant_normalize, solve
from .sampling import rejection
from .trace_solver import in_s2p, in_s3p, in_s4p, in_s5p, solve_trace

REGIMES = (
    "BothZero_S1", "Prop1_S2", "Prop2_S3p", "Prop2_S4p", "Prop2_S5p",
    "AppD_FidelityWins", "AppD_TraceWins", "AppD_Inconclusive",
)

_PAIR_AXES = {"S3": (0, 2, 1), "S4": (1, 2, 0), "S5": (0, 1, 2)}


def _spectrum(n: float) -> tuple[float, float]:
    return 0.5 + 0.5 * n, 0.5 - 0.5 * n


def difference_g(target, approx) -> float:
    """Sum of absolute eigenvalue gaps between ``approx`` and ``target``."""
    hp, hm = _spectrum(as_bloch(approx).norm)
    lp, lm = _spectrum(as_bloch(target).norm)
    return abs(hp - lp) + abs(hm - lm)


def pair_term(label: str, x: float, y: float, z: float) -> float:
    c = (x, y, z)
    i, j, k = _PAIR_AXES[label]
    return (c[i] + c[j]) ** 2 + 2.0 * c[k] ** 2


@dataclass(frozen=True)
class Witness:
    """Intermediate quantities behind a ComparisonReport."""

    h_fidelity: tuple[float, float]   # (h+, h-) of the fidelity-optimal state
    h_trace: tuple[float, float]      # (h+, h-) of the trace-optimal state
    lam: tuple[float, float]          # (l+, l-) of the target
    r_sum: float                      # x + y + z on octant coordinates
    norm_sq: float
    fidelity_label: str | None
    trace_label: str | None
    fidelity_bloch: BlochVector
    trace_bloch: BlochVector
    pair_term: float | None = None
    appd_quantity: float | None = None   # 1 - 3|r|^2 + r^2


@dataclass(frozen=True)
class ComparisonReport:
    g_fidelity: float
    g_trace: float
    regime: str
    witness: Witness
    # proven ordering for the regime: True/False, None when no claim is made
    claim_holds: bool | None = None
    notes: tuple[str, ...] = field(default=())

    def recomputed(self) -> tuple[float, float]:
        """g values rebuilt from the stored spectra."""
        w = self.witness
        gf = abs(w.h_fidelity[0] - w.lam[0]) + abs(w.h_fidelity[1] - w.lam[1])
        gt = abs(w.h_trace[0] - w.lam[0]) + abs(w.h_trace[1] - w.lam[1])
        return gf, gt


def _regime(flabel, tlabel, x, y, z, nsq):
    if flabel == "S1":
        return "BothZero_S1", None, None
    if flabel == "S2":
        return "Prop1_S2", None, None
    if tlabel in ("S3p", "S4p", "S5p"):
        return f"Prop2_{tlabel}", None, None
    if tlabel == "S2p" and flabel in _PAIR_AXES:
        P = pair_term(flabel, x, y, z)
        rr = (x + y + z) ** 2
        q = 1.0 - 3.0 * nsq + rr
        if rr >= P and q <= 0.0:
            return "AppD_FidelityWins", P, q
        if rr <= P and q >= 0.0:
            return "AppD_TraceWins", P, q
        return "AppD_Inconclusive", P, q
    return "AppD_Inconclusive", None, None


def compare(r, tol: float = 1e-12) -> ComparisonReport:
    """Compare the two optimal states of ``r`` by their eigenvalue gaps."""
    r = as_bloch(r)
    rn, _ = octant_normalize(r)
    x, y, z = rn
    fres, tres = solve(r), solve_trace(r)
    vf, vt = fres.optimal_bloch, tres.optimal_bloch
    lam = _spectrum(r.norm)
    hf, ht = _spectrum(vf.norm), _spectrum(vt.norm)
    gf = abs(hf[0] - lam[0]) + abs(hf[1] - lam[1])
    gt = abs(ht[0] - lam[0]) + abs(ht[1] - lam[1])

    regime, P, q = _regime(fres.label, tres.label, x, y, z, rn.norm_sq)
    if regime == "BothZero_S1":
        claim = gf <= tol and gt <= tol
    elif regime.startswith("Prop") or regime == "AppD_FidelityWins":
        claim = gt - gf >= -tol
    elif regime == "AppD_TraceWins":
        claim = gf - gt >= -tol
    else:
        claim = None
    notes = () if claim is not False else ("claimed ordering violated",)
    wit = Witness(
        h_fidelity=hf, h_trace=ht, lam=lam, r_sum=x + y + z, norm_sq=rn.norm_sq,
        fidelity_label=fres.label, trace_label=tres.label,
        fidelity_bloch=vf, trace_bloch=vt, pair_term=P, appd_quantity=q,
    )
    return ComparisonReport(gf, gt, regime, wit, claim, notes)


# ------------------------------------------------------------ sampled suites

@dataclass(frozen=True)
class SuiteResult:
    name: str
    samples: int
    violations: int
    worst_margin: float
    details: tuple[tuple[str, float], ...] = ()

    @property
    def passed(self) -> bool:
        return self.violations == 0


def appendix_b_margin(x, y, z):
    """(1 + 2|r|^2 - r^2)/(3 - r^2) - (1 + 3|r|^2 - r^2)/3, vectorized.

    3 - r^2 is formed as 3(1 - |r|^2) + sum of squared coordinate gaps.
    """
    nsq = x * x + y * y + z * z
    rr = (x + y + z) ** 2
    den = 3.0 * (1.0 - nsq) + (x - y) ** 2 + (y - z) ** 2 + (z - x) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        lhs = (1.0 + 2.0 * nsq - rr) / den
    return lhs - (1.0 + 3.0 * nsq - rr) / 3.0


def appendix_c_margin(x, y, z):
    """(x-z)^2 [(x+z)^2 + 2y^2 - 1] / (2 [2 - (x+z)^2 - 2y^2]), vectorized.

    2 - (x+z)^2 - 2y^2 = (x-z)^2 + 2(1 - |r|^2) keeps the denominator exact.
    """
    nsq = x * x + y * y + z * z
    den = 2.0 * ((x - z) ** 2 + 2.0 * (1.0 - nsq))
    num = (x - z) ** 2 * ((x + z) ** 2 + 2.0 * y * y - 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(den > 0.0, num / np.where(den > 0.0, den, 1.0), 0.0)


def _ordering_suite(name, pts, tol):
    worst, bad, flips_f, flips_t = math.inf, 0, 0, 0
    for p in pts:
        rep = compare(p, tol)
        margin = rep.g_trace - rep.g_fidelity
        worst = min(worst, margin)
        bad += margin < -tol
        # h+ - l+ changes sign when the approximation is purer than the target
        flips_f += rep.witness.h_fidelity[0] > rep.witness.lam[0] + tol
        flips_t += rep.witness.h_trace[0] > rep.witness.lam[0] + tol
    return SuiteResult(name, len(pts), bad, worst, (
        ("branch_flips_fidelity", float(flips_f)),
        ("branch_flips_trace", float(flips_t)),
    ))


def _margin_suite(name, margins, tol):
    m = np.asarray(margins, dtype=float)
    return SuiteResult(name, len(m), int(np.sum(m < -tol)), float(np.min(m)))


def _appd_suite(pts, tol):
    counts = dict.fromkeys(("AppD_FidelityWins", "AppD_TraceWins", "AppD_Inconclusive"), 0)
    order = {"fidelity_better": 0, "trace_better": 0}
    worst, bad = math.inf, 0
    for p in pts:
        rep = compare(p, tol)
        if rep.regime not in counts:
            continue
        counts[rep.regime] += 1
        if rep.claim_holds is None:
            d = rep.g_trace - rep.g_fidelity
            order["fidelity_better" if d >= 0 else "trace_better"] += 1
            continue
        if rep.regime == "AppD_FidelityWins":
            margin = rep.g_trace - rep.g_fidelity
        else:
            margin = rep.g_fidelity - rep.g_trace
        worst = min(worst, margin)
        bad += not rep.claim_holds
    n = sum(counts.values())
    details = tuple((k, float(v)) for k, v in counts.items()) + tuple(
        (f"inconclusive_{k}", float(v)) for k, v in order.items()
    )
    return SuiteResult("appendix_d", n, bad, worst, details)


def _ray_suite(ray, tol):
    # equality case: the S2 margin and the g gap both vanish
    inner = ray[:-1]     # the last point is pure and the margin is 0/0 there
    bm = np.abs(appendix_b_margin(*inner.T)) if len(inner) else np.zeros(0)
    gaps = np.array([abs(compare(p, tol).g_trace - compare(p, tol).g_fidelity) for p in ray])
    bad = int(np.sum(bm > tol) + np.sum(gaps > tol))
    worst = -max(float(bm.max(initial=0.0)), float(gaps.max(initial=0.0)))
    return SuiteResult("symmetric_ray", len(ray), bad, worst, (
        ("max_abs_b_margin", float(bm.max(initial=0.0))),
        ("max_abs_g_gap", float(gaps.max(initial=0.0))),
    ))


def _appd_region(x, y, z):
    # trace S2' but not fidelity S1/S2; the fidelity label is then an edge
    return in_s2p(x, y, z) & ~in_s2(x, y, z)


def appendix_inequality_suite(samples: int, seed: int = 0, tol: float = 1e-12):
    """Sampled checks of the g orderings and their supporting inequalities.

    Returns a tuple of SuiteResult: prop1 (S2), prop2 (S3'/S4'/S5'),
    appendix_b (S2), appendix_c (S3'), symmetric_ray and appendix_d.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    s2 = rejection(rng, samples, in_s2)
    edge = rejection(rng, samples, lambda x, y, z: in_s3p(x, y, z) | in_s4p(x, y, z) | in_s5p(x, y, z))
    s3p = rejection(rng, samples, in_s3p)
    appd = rejection(rng, samples, _appd_region)

    # symmetric ray t(1,1,1) from the S1 boundary to the sphere
    t = np.linspace(1.0 / 3.0, 1.0 / math.sqrt(3.0), max(samples, 2))[1:]
    ray = np.stack([t, t, t], axis=1)

    return (
        _ordering_suite("prop1_s2", s2, tol),
        _ordering_suite("prop2_edges", edge, tol),
        _margin_suite("appendix_b", appendix_b_margin(*s2.T), tol),
        _margin_suite("appendix_c", appendix_c_margin(*s3p.T), tol),
        _ray_suite(ray, tol),
        _appd_suite(appd, tol),
    )
