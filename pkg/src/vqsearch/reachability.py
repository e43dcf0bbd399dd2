"""Reachability of the Ry-layer ansatz.

Two normalizations are offered. ``EQ18`` compares the signed minimum of the
objective with the Hilbert-space minimum ``-1/sqrt(N)``; ``EQ19`` compares
absolute values with the maximum ``1/sqrt(N)`` and is the default because it
does not penalize the sign of the amplified amplitude.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from .circuits import ProblemInstance, constructed_angles, prepare_psi1
from .optimizer import RunRecord, final_objective, objective

DOMAIN_SLACK = 1e-12


class Definition(enum.Enum):
    EQ18 = "eq18"
    EQ19 = "eq19"


@dataclass(frozen=True)
class ReachabilityReport:
    n: int
    definition_used: Definition
    ansatz_extremal_value: float
    hilbert_extremal_value: float
    reachability: float
    is_upper_bound: bool = False

    def csv_header(self) -> str:
        return "n,definition,ansatz_extremal_value,hilbert_extremal_value,reachability,bound"

    def csv_row(self) -> str:
        bound = "upper_bound" if self.is_upper_bound else "exact"
        return (
            f"{self.n},{self.definition_used.name},{self.ansatz_extremal_value:.17g},"
            f"{self.hilbert_extremal_value:.17g},{self.reachability:.17g},{bound}"
        )


def hilbert_extremal(n: int, definition: Definition | str = Definition.EQ19) -> float:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    v = 1.0 / math.sqrt(2.0**n)
    return -v if Definition(definition) is Definition.EQ18 else v


def reachability_from_extremal(
    ansatz_value: float, n: int, definition: Definition | str = Definition.EQ19
) -> float:
    definition = Definition(definition)
    scale = math.sqrt(2.0**n)
    if abs(ansatz_value) > 1.0 / scale + DOMAIN_SLACK:
        raise ValueError(f"|{ansatz_value}| exceeds the attainable 1/sqrt(2^{n})")
    h = hilbert_extremal(n, definition)
    if definition is Definition.EQ18:
        return (ansatz_value - h) / -h
    return (abs(ansatz_value) - h) / -h


def constructed_reachability(inst: ProblemInstance) -> ReachabilityReport:
    """Reachability witnessed by the Algorithm 2 angles; equals 1/2**n."""
    f = objective(prepare_psi1(inst), constructed_angles(inst))
    return ReachabilityReport(
        n=inst.n,
        definition_used=Definition.EQ19,
        ansatz_extremal_value=abs(f),
        hilbert_extremal_value=hilbert_extremal(inst.n),
        reachability=reachability_from_extremal(f, inst.n),
    )


def empirical_reachability(records: Sequence[RunRecord], n: int) -> ReachabilityReport:
    """Upper bound on reachability from the best final objective among ``records``."""
    if not records:
        raise ValueError("empirical_reachability needs at least one record")
    best = max(abs(final_objective(r)) for r in records)
    return ReachabilityReport(
        n=n,
        definition_used=Definition.EQ19,
        ansatz_extremal_value=best,
        hilbert_extremal_value=hilbert_extremal(n),
        reachability=reachability_from_extremal(best, n),
        is_upper_bound=True,
    )
