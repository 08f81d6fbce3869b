"""Independent numerical oracles used to derive frozen expected values.

Everything here deliberately avoids the library's own code paths: the
normal cdf comes from the erf power series, the t cdf from a Lentz
continued fraction for the regularized incomplete beta, quantiles from
bisection on those cdfs, and g from direct indicator counting.
"""

import math

import numpy as np


def erf_series(x: float, terms: int = 60) -> float:
    """Maclaurin series of erf; 60 terms is plenty for |x| <= 4."""
    acc = 0.0
    for n in range(terms):
        acc += (-1) ** n * x ** (2 * n + 1) / (math.factorial(n) * (2 * n + 1))
    return 2.0 / math.sqrt(math.pi) * acc


def normal_cdf(x: float) -> float:
    return 0.5 * (1.0 + erf_series(x / math.sqrt(2.0)))


def normal_quantile(p: float, tol: float = 1e-13) -> float:
    """Bisection on the series cdf; independent of any library quantile."""
    lo, hi = -10.0, 10.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if normal_cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _betacf(a: float, b: float, x: float) -> float:
    """Lentz continued fraction for the incomplete beta."""
    max_iter, eps, fpmin = 300, 3e-16, 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            break
    return h


def betainc_reg(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) via the continued fraction."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_cdf(x: float, df: int) -> float:
    ib = betainc_reg(df / 2.0, 0.5, df / (df + x * x))
    return 1.0 - 0.5 * ib if x > 0 else 0.5 * ib


def g_brute(values: np.ndarray, lam: float, c: float) -> float:
    """Direct indicator count of g, no sorting or binary search."""
    values = np.asarray(values, dtype=float)
    return lam * int(np.sum(values >= c)) + int(np.sum(values <= lam * c))


def g_brute_max(values: np.ndarray, lam: float, grid: np.ndarray):
    """Max of g over an arbitrary grid by direct counting, chunked."""
    values = np.asarray(values, dtype=float)
    best_g, best_c = -np.inf, None
    for chunk in np.array_split(np.asarray(grid, dtype=float), max(1, grid.size // 4096)):
        ge = (values[None, :] >= chunk[:, None]).sum(axis=1)
        le = (values[None, :] <= lam * chunk[:, None]).sum(axis=1)
        g = lam * ge + le
        k = int(np.argmax(g))
        if g[k] > best_g:
            best_g, best_c = float(g[k]), float(chunk[k])
    return best_g, best_c


def dkw_band(n: int, alpha: float = 0.01) -> float:
    """Half-width of the Dvoretzky-Kiefer-Wolfowitz confidence band."""
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * n))


def ks_critical(n: int) -> float:
    """99% critical value of the one-sample Kolmogorov-Smirnov statistic."""
    return 1.63 / math.sqrt(n)
