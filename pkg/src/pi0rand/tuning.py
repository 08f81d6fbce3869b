"""Data-driven choice of the randomization threshold from realized p-values.

Given an observed LFC p-value vector, the conditional expectation of the
estimator over the randomization noise is

    E[pi0_hat(lambda, c) | x] = (1 - g(lambda, c) / m) / (1 - lambda),

where ``g(lambda, c) = sum_j (lambda * 1{p_j >= c} + 1{p_j <= lambda*c})``.
Minimizing the conditional expectation is therefore the same as maximizing
g. Since g only changes value at the points {p_j} and {p_j / lambda}, it
suffices to evaluate it on that finite candidate set (clipped to [0, 1] and
extended by the endpoints); on the open interval between two adjacent
candidates g never exceeds the value at the left one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .pvalues import PValueVector

__all__ = [
    "CandidateSet",
    "SelectionResult",
    "g_value",
    "g_values",
    "candidate_set",
    "select_c0",
    "conditional_expectation",
]

CANDIDATE_SOURCES = ("p", "p/lambda", "grid")


def _check_lambda(lam: float) -> float:
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lambda must lie in (0, 1), got {lam!r}")
    return float(lam)


@dataclass(frozen=True)
class CandidateSet:
    """Sorted, deduplicated threshold candidates with per-point source tags."""

    points: np.ndarray
    sources: tuple

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size == 0:
            raise ValueError("candidate set must be non-empty")
        if np.any(np.diff(pts) <= 0.0):
            raise ValueError("candidate points must be strictly increasing")
        if not (np.all(pts >= 0.0) and np.all(pts <= 1.0)):
            raise ValueError("candidate points must lie in [0, 1]")
        if len(self.sources) != pts.size:
            raise ValueError("one source tag per point required")
        if any(s not in CANDIDATE_SOURCES for s in self.sources):
            raise ValueError(f"source tags must be among {CANDIDATE_SOURCES}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "sources", tuple(self.sources))

    def __len__(self) -> int:
        return self.points.size


def g_value(p_lfc: PValueVector, lam: float, c: float) -> float:
    """Indicator sum ``lambda * #{p_j >= c} + #{p_j <= lambda*c}``."""
    lam = _check_lambda(lam)
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"c must lie in [0, 1], got {c!r}")
    values = p_lfc.values
    n_ge = int(np.count_nonzero(values >= c))
    n_le = int(np.count_nonzero(values <= lam * c))
    return lam * n_ge + n_le


def g_values(p_lfc: PValueVector, lam: float, cs) -> np.ndarray:
    """Vectorized g over many thresholds via binary search on sorted p."""
    lam = _check_lambda(lam)
    cs = np.asarray(cs, dtype=float)
    if not (np.all(cs >= 0.0) and np.all(cs <= 1.0)):
        raise ValueError("thresholds must lie in [0, 1]")
    ps = np.sort(p_lfc.values)
    m = ps.size
    n_ge = m - np.searchsorted(ps, cs, side="left")
    n_le = np.searchsorted(ps, lam * cs, side="right")
    return lam * n_ge + n_le


def candidate_set(p_lfc: PValueVector, lam: float) -> CandidateSet:
    """Build {p_j} and {p_j / lambda} clipped to [0, 1], plus the endpoints."""
    lam = _check_lambda(lam)
    tagged = {0.0: "grid", 1.0: "grid"}
    for v in p_lfc.values / lam:
        if v <= 1.0:
            tagged[float(v)] = "p/lambda"
    for v in p_lfc.values:
        tagged[float(v)] = "p"
    points = np.array(sorted(tagged), dtype=float)
    sources = tuple(tagged[p] for p in points)
    return CandidateSet(points, sources)


class SelectionResult(NamedTuple):
    c0: float
    g_max: float
    conditional_expectation: float


def select_c0(p_lfc: PValueVector, lam: float = 0.5) -> SelectionResult:
    """Pick the smallest maximizer of g over the candidate set.

    Pure function of ``(p_lfc, lambda)``; the returned conditional
    expectation is the plain-variant value at the selected threshold.
    """
    cands = candidate_set(p_lfc, lam)
    g = g_values(p_lfc, lam, cands.points)
    i = int(np.argmax(g))
    c0 = float(cands.points[i])
    g_max = float(g[i])
    cond = (1.0 - g_max / p_lfc.m) / (1.0 - lam)
    return SelectionResult(c0, g_max, cond)


def conditional_expectation(p_lfc: PValueVector, lam: float, c: float, variant: str = "plain") -> float:
    """Conditional expectation of the estimator given the observed p-values."""
    g = g_value(p_lfc, lam, c)
    value = (1.0 - g / p_lfc.m) / (1.0 - lam)
    if variant == "storey_plus":
        value += 1.0 / (p_lfc.m * (1.0 - lam))
    elif variant != "plain":
        raise ValueError(f"unknown estimator variant {variant!r}")
    return value
