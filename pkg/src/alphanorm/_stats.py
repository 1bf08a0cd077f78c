"""Statistics used by the verification suite: KS distance and Kendall tau.

Both are deterministic array computations; neither draws randomness.
Kendall's tau is computed exactly in O(n log n) by counting discordant
pairs as merge inversions, which assumes continuous data (no ties; ties
have probability zero for the samplers checked here).
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["ks_statistic", "ks_critical_value", "kendall_tau"]

# Asymptotic Kolmogorov critical coefficients c(q): D_crit = c/sqrt(n).
_KS_COEFS = {0.10: 1.224, 0.05: 1.358, 0.01: 1.628}


def ks_statistic(u) -> float:
    """KS distance of probability-integral-transform values from uniform.

    D_n = max_i max(i/n - u_(i), u_(i) - (i-1)/n) over the sorted sample.
    """
    uv = np.sort(np.asarray(u, dtype=np.float64).ravel())
    n = uv.shape[0]
    if n < 1:
        raise ValueError("KS statistic needs at least one observation")
    i = np.arange(1, n + 1, dtype=np.float64)
    d_plus = np.max(i / n - uv)
    d_minus = np.max(uv - (i - 1.0) / n)
    return float(max(d_plus, d_minus))


def ks_critical_value(n: int, level: float = 0.01) -> float:
    """Asymptotic critical value c(level)/sqrt(n)."""
    n = int(n)
    if n < 1:
        raise ValueError("sample size must be positive")
    try:
        coef = _KS_COEFS[level]
    except KeyError:
        raise ValueError(f"no critical coefficient tabulated for level {level}")
    return coef / math.sqrt(n)


def _merge_count(a: np.ndarray) -> tuple[np.ndarray, int]:
    n = a.shape[0]
    if n <= 1:
        return a, 0
    mid = n // 2
    left, cl = _merge_count(a[:mid])
    right, cr = _merge_count(a[mid:])
    # Inversions across the halves: for each right element, the left
    # elements strictly greater than it.
    pos = np.searchsorted(left, right, side="right")
    cross = left.shape[0] * right.shape[0] - int(np.sum(pos))
    return np.sort(np.concatenate((left, right)), kind="mergesort"), \
        cl + cr + cross


def kendall_tau(x, y) -> tuple[float, float]:
    """Kendall's tau of paired samples, with its null standard error.

    tau = 1 - 4 D / (n(n-1)) where D counts discordant pairs (inversions
    of y after sorting by x); the returned standard error is the
    no-association formula sqrt(2(2n+5) / (9 n (n-1))).
    """
    xv = np.asarray(x, dtype=np.float64).ravel()
    yv = np.asarray(y, dtype=np.float64).ravel()
    if xv.shape != yv.shape:
        raise ValueError("paired samples must have equal length")
    n = xv.shape[0]
    if n < 2:
        raise ValueError("Kendall's tau needs at least two pairs")
    order = np.argsort(xv, kind="mergesort")
    _, discordant = _merge_count(yv[order])
    tau = 1.0 - 4.0 * discordant / (n * (n - 1.0))
    se = math.sqrt(2.0 * (2.0 * n + 5.0) / (9.0 * n * (n - 1.0)))
    return float(tau), se
