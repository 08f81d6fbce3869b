"""Schweder-Spjotvoll estimation of the proportion of true nulls.

The plain estimator is ``(1 - Fhat(lambda)) / (1 - lambda)`` with ``Fhat``
the ecdf of the marginal p-values; the Storey-plus variant adds the
conservative correction ``1 / (m * (1 - lambda))``. Estimates may exceed
one and are deliberately not clipped, since that behavior is informative.

For a population of hypotheses with known marginal laws of the LFC
p-values, the expected ecdf of the randomized p-values at threshold c is

    E[Fhat(lambda)] = (1/m) * sum_j [ lambda * (1 - F_j(c)) + F_j(lambda*c) ],

from which the exact expectation curve ``h(lambda, c)`` of the estimator
and its minimizing threshold ``c_star`` follow. ``h`` depends on the
marginals only, never on the dependence structure.
"""

from __future__ import annotations

import hashlib
import io
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .pvalues import PValueVector

__all__ = [
    "EstimatorConfig",
    "PopulationSpec",
    "CurveTable",
    "CStarResult",
    "ecdf",
    "schweder_spjotvoll",
    "expected_ecdf",
    "h_value",
    "h_curve",
    "cstar_search",
]

ESTIMATOR_VARIANTS = ("plain", "storey_plus")


@dataclass(frozen=True)
class EstimatorConfig:
    """Tuning parameter lambda in (0, 1) and estimator variant."""

    lam: float = 0.5
    variant: str = "plain"

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise ValueError(f"lambda must lie in (0, 1), got {self.lam!r}")
        if self.variant not in ESTIMATOR_VARIANTS:
            raise ValueError(f"variant must be one of {ESTIMATOR_VARIANTS}")


@dataclass(frozen=True)
class PopulationSpec:
    """Groups of hypotheses sharing a marginal law, ``(count, law)`` each."""

    groups: tuple

    def __post_init__(self):
        groups = tuple((int(count), law) for count, law in self.groups)
        if not groups:
            raise ValueError("population needs at least one group")
        if any(count < 1 for count, _ in groups):
            raise ValueError("group counts must be >= 1")
        if sum(count for count, _ in groups) < 2:
            raise ValueError("population needs m >= 2 hypotheses")
        object.__setattr__(self, "groups", groups)

    @property
    def m(self) -> int:
        return sum(count for count, _ in self.groups)

    @property
    def pi0(self) -> float:
        null = sum(count for count, law in self.groups if law.is_null)
        return null / self.m

    def digest(self) -> str:
        return hashlib.sha1(repr(self.groups).encode()).hexdigest()[:12]


@dataclass
class CurveTable:
    """Tabulated curve(s) over a strictly increasing abscissa.

    Plain quantity tables (h, variance, mse) carry a single ``value``
    column and serialize with header ``c,value``; cdf tables use abscissa
    ``t`` with one column per randomization constant. Metadata goes into
    leading ``#`` comment lines.
    """

    x: np.ndarray
    values: dict
    metadata: dict = field(default_factory=dict)
    x_name: str = "c"

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        if x.ndim != 1 or x.size == 0:
            raise ValueError("abscissa must be a non-empty 1-d array")
        if np.any(np.diff(x) <= 0.0):
            raise ValueError("abscissa must be strictly increasing")
        if not np.all(np.isfinite(x)):
            raise ValueError("abscissa must be finite")
        values = {}
        for name, col in self.values.items():
            col = np.asarray(col, dtype=float)
            if col.shape != x.shape:
                raise ValueError(f"column {name!r} does not match the abscissa")
            if not np.all(np.isfinite(col)):
                raise ValueError(f"column {name!r} must be finite")
            values[name] = col
        self.x = x
        self.values = values

    def column(self, name: str = "value") -> np.ndarray:
        return self.values[name]

    def to_csv_string(self) -> str:
        buf = io.StringIO()
        for key, val in self.metadata.items():
            buf.write(f"# {key}={val}\n")
        buf.write(",".join([self.x_name, *self.values.keys()]) + "\n")
        cols = [self.x, *self.values.values()]
        for row in zip(*cols):
            buf.write(",".join(repr(float(v)) for v in row) + "\n")
        return buf.getvalue()

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv_string())


def _pvalue_array(p) -> np.ndarray:
    if isinstance(p, PValueVector):
        return p.values
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("expected a non-empty 1-d p-value array")
    return arr


def ecdf(p, t) -> float:
    """Right-continuous empirical cdf of the p-values, ``#{p_j <= t} / m``."""
    values = _pvalue_array(p)
    return float(np.count_nonzero(values <= float(t)) / values.size)


def schweder_spjotvoll(p, cfg: EstimatorConfig) -> float:
    """Estimate the proportion of true nulls from marginal p-values."""
    values = _pvalue_array(p)
    if values.size < 2:
        raise ValueError("the estimator needs m >= 2 p-values")
    est = (1.0 - ecdf(values, cfg.lam)) / (1.0 - cfg.lam)
    if cfg.variant == "storey_plus":
        est += 1.0 / (values.size * (1.0 - cfg.lam))
    return est


def _check_lambda_c(lam, c):
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lambda must lie in (0, 1), got {lam!r}")
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"c must lie in [0, 1], got {c!r}")


def expected_ecdf(spec: PopulationSpec, lam: float, c: float) -> float:
    """Exact expectation of the randomized-p-value ecdf at lambda."""
    _check_lambda_c(lam, c)
    acc = 0.0
    for count, law in spec.groups:
        acc += count * (lam * (1.0 - float(law.cdf(c))) + float(law.cdf(lam * c)))
    return acc / spec.m


def h_value(spec: PopulationSpec, lam: float, c: float) -> float:
    """Exact expectation of the estimator at threshold c."""
    return (1.0 - expected_ecdf(spec, lam, c)) / (1.0 - lam)


def h_curve(spec: PopulationSpec, lam: float, c_grid) -> CurveTable:
    """Tabulate ``c -> h(lambda, c)`` over a strictly increasing grid."""
    grid = np.asarray(c_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("c_grid must be a non-empty 1-d grid")
    if np.any(np.diff(grid) <= 0.0):
        raise ValueError("c_grid must be strictly increasing")
    if not (np.all(grid >= 0.0) and np.all(grid <= 1.0)):
        raise ValueError("c_grid must lie in [0, 1]")
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lambda must lie in (0, 1), got {lam!r}")
    ef = np.zeros_like(grid)
    for count, law in spec.groups:
        ef += count * (lam * (1.0 - law.cdf(grid)) + law.cdf(lam * grid))
    ef /= spec.m
    h = (1.0 - ef) / (1.0 - lam)
    meta = {"quantity": "h", "lambda": repr(float(lam)), "spec": spec.digest()}
    return CurveTable(grid, {"value": h}, metadata=meta)


class CStarResult(NamedTuple):
    c_star: float
    h_min: float


_INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


def _golden_section(f, lo: float, hi: float, xtol: float = 1e-9):
    """Golden-section minimum of f on [lo, hi]; ties drift left."""
    a, b = lo, hi
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > xtol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def cstar_search(spec: PopulationSpec, lam: float, resolution: float = 1e-3) -> CStarResult:
    """Minimize ``h(lambda, .)`` over [0, 1].

    Grid search at the given resolution (required <= 1e-3) brackets the
    minimum; golden-section refinement then narrows it down. Ties resolve
    to the smallest minimizer, so flat stretches return their left end.
    """
    if not 0.0 < resolution <= 1e-3:
        raise ValueError("resolution must lie in (0, 1e-3]")
    n = int(np.ceil(1.0 / resolution))
    grid = np.linspace(0.0, 1.0, n + 1)
    h = h_curve(spec, lam, grid).column()
    i = int(np.argmin(h))
    best_c, best_h = float(grid[i]), float(h[i])
    lo = float(grid[max(i - 1, 0)])
    hi = float(grid[min(i + 1, n)])
    x, fx = _golden_section(lambda c: h_value(spec, lam, c), lo, hi)
    if fx < best_h or (fx == best_h and x < best_c):
        best_c, best_h = float(x), float(fx)
    return CStarResult(best_c, best_h)
