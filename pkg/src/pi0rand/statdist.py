"""Special functions and deterministic random streams.

Numerical plumbing shared by the rest of the package: standard normal
cdf/quantile, central and non-central Student-t cdfs, a positive-stable
sampler for Archimedean frailties, and reproducible random streams keyed by
``(seed, stream_id)``.

Probabilities are plain floats in [0, 1]; inputs outside their stated
domains raise ``ValueError``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as _special
from scipy import stats as _stats

__all__ = [
    "RngStream",
    "std_normal_cdf",
    "std_normal_quantile",
    "student_t_cdf",
    "student_t_quantile",
    "noncentral_t_cdf",
    "noncentral_t_quantile",
    "positive_stable_sample",
    "uniform_sample",
    "exponential_sample",
]

_UINT64_BOUND = 2**64


def _checked_uint64(value, name):
    iv = int(value)
    if iv != value or not 0 <= iv < _UINT64_BOUND:
        raise ValueError(f"{name} must be an unsigned 64-bit integer, got {value!r}")
    return iv


@dataclass
class RngStream:
    """Single-owner random stream with a counter-based generator.

    Equal ``(seed, stream_id)`` pairs reproduce the exact same draw sequence
    on every platform and under any parallel schedule; distinct pairs key
    independent Philox streams. Parallel code must derive fresh stream ids
    rather than share one stream, since drawing advances the state.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        self.seed = _checked_uint64(self.seed, "seed")
        self.stream_id = _checked_uint64(self.stream_id, "stream_id")
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        self._generator = np.random.Generator(np.random.Philox(key=key))

    @property
    def generator(self) -> np.random.Generator:
        return self._generator


def _finite_array(x, name):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr


def _match_input(out, x):
    return float(out) if np.ndim(x) == 0 else out


def _checked_df(df):
    idf = int(df)
    if idf != df or idf < 1:
        raise ValueError(f"df must be a positive integer, got {df!r}")
    return idf


def std_normal_cdf(x):
    """Standard normal cdf, accurate to well below 1e-12."""
    arr = _finite_array(x, "x")
    return _match_input(_special.ndtr(arr), x)


def std_normal_quantile(p):
    """Inverse of :func:`std_normal_cdf` on the open interval (0, 1)."""
    arr = np.asarray(p, dtype=float)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise ValueError("p must lie strictly inside (0, 1)")
    return _match_input(_special.ndtri(arr), p)


def student_t_cdf(x, df):
    """Cdf of the central Student-t distribution with ``df`` degrees of freedom."""
    idf = _checked_df(df)
    arr = _finite_array(x, "x")
    return _match_input(_special.stdtr(idf, arr), x)


def student_t_quantile(p, df):
    """Quantile of the central Student-t distribution."""
    idf = _checked_df(df)
    arr = np.asarray(p, dtype=float)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise ValueError("p must lie strictly inside (0, 1)")
    return _match_input(_special.stdtrit(idf, arr), p)


def noncentral_t_cdf(x, df, ncp):
    """Cdf of the non-central t distribution.

    ``ncp = 0`` is routed through :func:`student_t_cdf` so the central case
    agrees with it to machine precision.
    """
    idf = _checked_df(df)
    if not np.isfinite(ncp):
        raise ValueError("ncp must be finite")
    if ncp == 0.0:
        return student_t_cdf(x, idf)
    arr = _finite_array(x, "x")
    return _match_input(_special.nctdtr(idf, ncp, arr), x)


def noncentral_t_quantile(p, df, ncp):
    """Quantile of the non-central t distribution on (0, 1)."""
    idf = _checked_df(df)
    if not np.isfinite(ncp):
        raise ValueError("ncp must be finite")
    arr = np.asarray(p, dtype=float)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise ValueError("p must lie strictly inside (0, 1)")
    if ncp == 0.0:
        return student_t_quantile(p, idf)
    return _match_input(_stats.nct.ppf(arr, idf, ncp), p)


def positive_stable_sample(alpha, rng: RngStream, size=None):
    """Draw from the positive stable law with Laplace transform exp(-s**alpha).

    Uses the Kanter construction: with U uniform on (0, 1) and W standard
    exponential,

        a(U) = sin(alpha*pi*U)**(alpha/(1-alpha)) * sin((1-alpha)*pi*U)
               / sin(pi*U)**(1/(1-alpha)),
        S    = (a(U) / W)**((1-alpha)/alpha).

    ``alpha = 1`` is the degenerate boundary case, a point mass at 1.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha!r}")
    gen = rng.generator
    if alpha == 1.0:
        return 1.0 if size is None else np.ones(size)
    u = np.asarray(gen.random(size))
    w = np.asarray(gen.standard_exponential(size))
    # Guard the measure-zero draws where the formula degenerates in floats.
    tiny = np.finfo(float).tiny
    u = np.where(u == 0.0, tiny, u)
    w = np.where(w == 0.0, tiny, w)
    pu = np.pi * u
    a = (
        np.sin(alpha * pu) ** (alpha / (1.0 - alpha))
        * np.sin((1.0 - alpha) * pu)
        / np.sin(pu) ** (1.0 / (1.0 - alpha))
    )
    s = (a / w) ** ((1.0 - alpha) / alpha)
    return float(s) if size is None else s


def uniform_sample(rng: RngStream, size=None):
    """Iid Uni[0,1] draws from the stream."""
    return rng.generator.random(size)


def exponential_sample(rng: RngStream, size=None):
    """Iid standard exponential draws from the stream."""
    return rng.generator.standard_exponential(size)
