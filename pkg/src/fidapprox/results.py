"""Result records shared by the solvers."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .bloch import BlochVector
from .sets import WeightVector


class Provenance(str, Enum):
    CLOSED_FORM = "closed_form"
    ORACLE = "oracle"


@dataclass(frozen=True)
class Predicate:
    """One evaluated inequality: ``lhs <op> rhs`` and whether it held."""

    name: str
    lhs: float
    rhs: float
    holds: bool


@dataclass(frozen=True)
class Region:
    label: str | None
    fired_inequalities: tuple[Predicate, ...] = ()

    def predicate(self, name: str) -> Predicate:
        for p in self.fired_inequalities:
            if p.name == name:
                return p
        raise KeyError(name)


@dataclass(frozen=True)
class ApproximationResult:
    distance: float
    weights: WeightVector
    optimal_bloch: BlochVector
    region: Region | None
    provenance: Provenance
    set_id: str = "b3"
    metric: str = "fidelity"
    # (t1, t2) of the S1 family and the bound t1 + t2 <= free_param_bound
    free_params: tuple[float, float] | None = None
    free_param_bound: float | None = None
    converged: bool = True
    notes: tuple[str, ...] = field(default=())

    @property
    def label(self) -> str | None:
        return None if self.region is None else self.region.label
