"""Optimal convex approximation of qubit states by mixtures of available pure states."""

from .bloch import BlochVector, fidelity, trace_distance, validate
from .comparison import ComparisonReport, compare, difference_g
from .cr_geometry import cr_member, decompose_b_alpha, relative_volume
from .fidelity_solver import classify, kkt_residual, solve
from .oracle import OracleConfig, oracle_solve
from .results import ApproximationResult, Provenance, Region
from .sets import AvailableSet, WeightVector, b3, b3_alpha0, b_alpha, mixture_bloch
from .trace_solver import classify_trace, solve_trace

__all__ = [
    "BlochVector", "fidelity", "trace_distance", "validate",
    "ComparisonReport", "compare", "difference_g",
    "cr_member", "decompose_b_alpha", "relative_volume",
    "classify", "kkt_residual", "solve", "OracleConfig", "oracle_solve",
    "ApproximationResult", "Provenance", "Region",
    "AvailableSet", "WeightVector", "b3", "b3_alpha0", "b_alpha", "mixture_bloch",
    "classify_trace", "solve_trace",
]
