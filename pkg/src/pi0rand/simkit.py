"""Data generation and the Monte Carlo harness.

Two generating models are supported: one-sided Z-tests (per-hypothesis mean
of n unit-variance normals) and the pooled two-sample t-test. The LFC
p-values can be made dependent through a Gumbel-Hougaard copula, imposed at
the p-value level: copula uniforms are pushed through the exact marginal
quantiles, which preserves the marginals while installing the copula.

``run_mc`` replays the estimator across a grid of randomization thresholds
with a fixed replicate budget. Each replicate owns the derived stream
``(seed, r * 2**16)`` for data generation and ``(seed, r * 2**16 + 1 + k)``
for the randomization at grid point k, so results are bitwise identical for
any worker count.
"""

from __future__ import annotations

import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .pi0 import CurveTable, EstimatorConfig, PopulationSpec, schweder_spjotvoll
from .pvalues import (
    MarginalLaw,
    PValueVector,
    RandomizationRule,
    TwoSampleTLaw,
    ZTestLaw,
    randomize_vector,
    randomized_cdf,
)
from .statdist import RngStream, positive_stable_sample, std_normal_cdf, student_t_cdf

__all__ = [
    "ModelSpec",
    "SimulationPlan",
    "McSummary",
    "gen_lfc_pvalues",
    "gumbel_uniforms",
    "run_mc",
    "cdf_curves",
]

MODELS = ("z", "two_sample")
DEPENDENCE = ("independent", "gumbel")

# Sub-stream slots per replicate: slot 0 generates data, slot 1+k randomizes
# at c_grid[k].
_STREAM_STRIDE = 2**16


@dataclass(frozen=True)
class ModelSpec:
    """Generating model, effect groups, and dependence structure.

    ``groups`` lists ``(count, theta)`` pairs; hypotheses with theta <= 0
    are true nulls. For the Z model ``n`` is the per-hypothesis sample
    size; for the two-sample model ``n1``/``n2``/``sigma`` parameterize the
    two normal samples. ``nu = 1`` makes the Gumbel copula the product
    copula.
    """

    model: str
    groups: tuple
    n: int = 50
    n1: int = 0
    n2: int = 0
    sigma: float = 1.0
    dependence: str = "independent"
    nu: float = 1.0

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}, got {self.model!r}")
        groups = tuple((int(count), float(theta)) for count, theta in self.groups)
        if not groups or any(count < 1 for count, _ in groups):
            raise ValueError("groups must be non-empty with counts >= 1")
        if any(not np.isfinite(theta) for _, theta in groups):
            raise ValueError("group effects must be finite")
        if sum(count for count, _ in groups) < 2:
            raise ValueError("need m >= 2 hypotheses")
        object.__setattr__(self, "groups", groups)
        if self.model == "z":
            if int(self.n) != self.n or self.n < 1:
                raise ValueError("n must be a positive integer")
            object.__setattr__(self, "n", int(self.n))
        else:
            if int(self.n1) != self.n1 or int(self.n2) != self.n2:
                raise ValueError("n1 and n2 must be integers")
            if self.n1 < 1 or self.n2 < 1 or self.n1 + self.n2 < 3:
                raise ValueError("need n1, n2 >= 1 with n1 + n2 - 2 >= 1")
            object.__setattr__(self, "n1", int(self.n1))
            object.__setattr__(self, "n2", int(self.n2))
            if not self.sigma > 0.0:
                raise ValueError("sigma must be positive")
        if self.dependence not in DEPENDENCE:
            raise ValueError(f"dependence must be one of {DEPENDENCE}")
        if not self.nu >= 1.0:
            raise ValueError("nu must be >= 1")

    @property
    def m(self) -> int:
        return sum(count for count, _ in self.groups)

    @property
    def pi0(self) -> float:
        return sum(count for count, theta in self.groups if theta <= 0.0) / self.m

    def thetas(self) -> np.ndarray:
        return np.concatenate([np.full(count, theta) for count, theta in self.groups])

    def marginal_law(self, theta: float) -> MarginalLaw:
        if self.model == "z":
            return ZTestLaw(theta * np.sqrt(self.n))
        ncp = np.sqrt(self.n1 * self.n2 / (self.n1 + self.n2)) * theta / self.sigma
        return TwoSampleTLaw(ncp, self.n1 + self.n2 - 2)

    def population(self) -> PopulationSpec:
        return PopulationSpec(tuple((count, self.marginal_law(theta)) for count, theta in self.groups))


@dataclass(frozen=True)
class SimulationPlan:
    """Everything a Monte Carlo run needs, including its seed."""

    spec: ModelSpec
    lam: float = 0.5
    c_grid: tuple = tuple(np.linspace(0.0, 1.0, 21))
    replicates: int = 10_000
    seed: int = 0
    estimator_variant: str = "plain"

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise ValueError("lambda must lie in (0, 1)")
        grid = tuple(float(c) for c in self.c_grid)
        if not grid:
            raise ValueError("c_grid must be non-empty")
        if any(not 0.0 <= c <= 1.0 for c in grid):
            raise ValueError("c_grid must lie in [0, 1]")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("c_grid must be strictly increasing")
        if len(grid) >= _STREAM_STRIDE:
            raise ValueError(f"c_grid is limited to {_STREAM_STRIDE - 1} points")
        object.__setattr__(self, "c_grid", grid)
        if int(self.replicates) != self.replicates or self.replicates < 1:
            raise ValueError("replicates must be a positive integer")
        object.__setattr__(self, "replicates", int(self.replicates))
        if self.replicates * _STREAM_STRIDE >= 2**64:
            raise ValueError("replicate budget exceeds the stream id space")
        EstimatorConfig(self.lam, self.estimator_variant)  # reuse its validation


@dataclass
class McSummary:
    """Per-threshold moments of the estimator across replicates."""

    c_grid: np.ndarray
    mean: np.ndarray
    variance: np.ndarray
    mse: np.ndarray
    bias: np.ndarray
    se_mean: np.ndarray
    se_variance: np.ndarray
    pi0_true: float
    metadata: dict = field(default_factory=dict)

    def to_csv_string(self) -> str:
        buf = io.StringIO()
        for key, val in self.metadata.items():
            buf.write(f"# {key}={val}\n")
        buf.write("c,mean,variance,mse,bias,se_mean\n")
        cols = [self.c_grid, self.mean, self.variance, self.mse, self.bias, self.se_mean]
        for row in zip(*cols):
            buf.write(",".join(repr(float(v)) for v in row) + "\n")
        return buf.getvalue()

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv_string())


def gumbel_uniforms(m: int, nu: float, rng: RngStream) -> np.ndarray:
    """Uniform marginals coupled by the Gumbel-Hougaard copula.

    Frailty construction: with S positive stable of index 1/nu and E_j iid
    standard exponential, ``V_j = exp(-(E_j / S)**(1/nu))``.
    """
    if int(m) != m or m < 1:
        raise ValueError("m must be a positive integer")
    if not nu >= 1.0:
        raise ValueError("nu must be >= 1")
    if nu == 1.0:
        # Stable index 1 is the point mass at one, so V_j = exp(-E_j).
        e = rng.generator.standard_exponential(int(m))
        return np.exp(-e)
    s = positive_stable_sample(1.0 / nu, rng)
    e = rng.generator.standard_exponential(int(m))
    return np.exp(-((e / s) ** (1.0 / nu)))


def gen_lfc_pvalues(spec: ModelSpec, rng: RngStream) -> PValueVector:
    """Generate one LFC p-value vector from the model."""
    gen = rng.generator
    thetas = spec.thetas()
    m = thetas.size
    if spec.dependence == "independent":
        if spec.model == "z":
            t = thetas + gen.standard_normal(m) / np.sqrt(spec.n)
            p = std_normal_cdf(-np.sqrt(spec.n) * t)
        else:
            x = thetas[:, None] + spec.sigma * gen.standard_normal((m, spec.n1))
            y = spec.sigma * gen.standard_normal((m, spec.n2))
            xbar = x.mean(axis=1)
            ybar = y.mean(axis=1)
            df = spec.n1 + spec.n2 - 2
            pooled = (((x - xbar[:, None]) ** 2).sum(axis=1) + ((y - ybar[:, None]) ** 2).sum(axis=1)) / df
            tstat = np.sqrt(spec.n1 * spec.n2 / (spec.n1 + spec.n2)) * (xbar - ybar) / np.sqrt(pooled)
            p = student_t_cdf(-tstat, df)
    else:
        v = gumbel_uniforms(m, spec.nu, rng)
        p = np.empty(m)
        offset = 0
        for count, theta in spec.groups:
            law = spec.marginal_law(theta)
            p[offset : offset + count] = law.quantile(v[offset : offset + count])
            offset += count
    return PValueVector(p, kind="lfc")


def _replicate_block(plan: SimulationPlan, start: int, stop: int) -> np.ndarray:
    cfg = EstimatorConfig(plan.lam, plan.estimator_variant)
    out = np.empty((stop - start, len(plan.c_grid)))
    for r in range(start, stop):
        data_rng = RngStream(plan.seed, r * _STREAM_STRIDE)
        p = gen_lfc_pvalues(plan.spec, data_rng)
        for k, c in enumerate(plan.c_grid):
            u_rng = RngStream(plan.seed, r * _STREAM_STRIDE + 1 + k)
            prand = randomize_vector(p, RandomizationRule.constant(c), u_rng)
            out[r - start, k] = schweder_spjotvoll(prand, cfg)
    return out


def run_mc(plan: SimulationPlan, workers: int = 1) -> McSummary:
    """Replay the estimator across the threshold grid.

    Every replicate generates one LFC p-value vector and re-randomizes it
    with a fresh uniform sub-stream per grid point. The per-replicate
    estimates land in a preallocated matrix indexed by (replicate, grid
    point), so the aggregation (and hence the summary) does not depend on
    how replicates were scheduled across workers.
    """
    reps = plan.replicates
    if workers <= 1:
        mat = _replicate_block(plan, 0, reps)
    else:
        workers = min(workers, reps)
        bounds = np.linspace(0, reps, workers + 1).astype(int)
        mat = np.empty((reps, len(plan.c_grid)))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(_replicate_block, plan, int(a), int(b)): (int(a), int(b))
                for a, b in zip(bounds[:-1], bounds[1:])
                if b > a
            }
            for fut, (a, b) in futures.items():
                mat[a:b] = fut.result()
    pi0 = plan.spec.pi0
    mean = mat.mean(axis=0)
    variance = mat.var(axis=0)
    bias = mean - pi0
    mse = np.mean((mat - pi0) ** 2, axis=0)
    se_mean = np.sqrt(variance / reps)
    m4 = np.mean((mat - mean) ** 4, axis=0)
    se_variance = np.sqrt(np.maximum(m4 - variance**2, 0.0) / reps)
    meta = {
        "seed": plan.seed,
        "spec": plan.spec.population().digest(),
        "replicates": reps,
        "lambda": repr(float(plan.lam)),
        "variant": plan.estimator_variant,
        "pi0": repr(float(pi0)),
    }
    return McSummary(
        c_grid=np.asarray(plan.c_grid),
        mean=mean,
        variance=variance,
        mse=mse,
        bias=bias,
        se_mean=se_mean,
        se_variance=se_variance,
        pi0_true=pi0,
        metadata=meta,
    )


def cdf_curves(law: MarginalLaw, c_list, t_grid) -> CurveTable:
    """Exact cdfs of the randomized p-value, one column per threshold."""
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size == 0 or np.any(np.diff(t) <= 0.0):
        raise ValueError("t_grid must be a strictly increasing 1-d grid")
    if not (np.all(t >= 0.0) and np.all(t <= 1.0)):
        raise ValueError("t_grid must lie in [0, 1]")
    cs = [float(c) for c in c_list]
    if not cs or any(not 0.0 <= c <= 1.0 for c in cs):
        raise ValueError("c_list must be non-empty with values in [0, 1]")
    values = {f"c={c:g}": randomized_cdf(t, c, law) for c in cs}
    meta = {"quantity": "cdf", "law": repr(law)}
    return CurveTable(t, values, metadata=meta, x_name="t")
