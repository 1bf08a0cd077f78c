"""Weibull companion family and tail-majorization checks.

W with shape a and scale lam has survival function exp(-(t/lam)^a) and can
be drawn as lam * X^(1/a) for X standard exponential.  The absolute
alpha-normal variable |G_a| sits between two Weibulls of the same shape:
its tail is dominated by Weibull(a, 2^(1/a)) everywhere and dominates
Weibull(a, 1) beyond an explicit threshold.  majorization_report checks
both orderings pointwise on a grid, using the exact tail 2(1 - Phi(t^(a/2)))
rather than simulation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from alphanorm import numerics
from alphanorm.alpha_normal import AlphaNormal
from alphanorm.errors import DomainError

__all__ = ["Weibull", "MajorizationReport", "majorization_report"]

EULER_GAMMA = 0.57721566490153286


@dataclass(frozen=True)
class Weibull:
    """Two-parameter Weibull law: shape and scale both positive."""

    shape: float
    scale: float = 1.0

    def __post_init__(self):
        a = float(self.shape)
        lam = float(self.scale)
        if not (math.isfinite(a) and a > 0.0):
            raise DomainError(f"shape must be a positive real, got {self.shape!r}")
        if not (math.isfinite(lam) and lam > 0.0):
            raise DomainError(f"scale must be a positive real, got {self.scale!r}")
        object.__setattr__(self, "shape", a)
        object.__setattr__(self, "scale", lam)

    def _check_nonnegative(self, t, op: str):
        if np.ndim(t) == 0:
            tf = float(t)
            if math.isnan(tf) or tf < 0.0:
                raise DomainError(f"{op} requires t >= 0, got {t!r}")
            return tf
        tv = np.asarray(t, dtype=np.float64)
        if np.any(np.isnan(tv)) or np.any(tv < 0.0):
            raise DomainError(f"{op} requires t >= 0")
        return tv

    def survival(self, t):
        """P(W >= t) = exp(-(t/scale)^shape)."""
        t = self._check_nonnegative(t, "survival")
        if np.ndim(t) == 0:
            return math.exp(-((t / self.scale) ** self.shape))
        with np.errstate(all="ignore"):
            return np.exp(-((t / self.scale) ** self.shape))

    def cdf(self, t):
        t = self._check_nonnegative(t, "cdf")
        if np.ndim(t) == 0:
            return -math.expm1(-((t / self.scale) ** self.shape))
        with np.errstate(all="ignore"):
            return -np.expm1(-((t / self.scale) ** self.shape))

    def pdf(self, t):
        """Density (shape/scale)(t/scale)^(shape-1) exp(-(t/scale)^shape).

        At t = 0 returns the limit: +inf for shape < 1, 1/scale at shape = 1,
        0 for shape > 1.
        """
        t = self._check_nonnegative(t, "pdf")
        a = self.shape
        lam = self.scale
        if np.ndim(t) == 0:
            if t == 0.0:
                return self._pdf_at_zero()
            r = t / lam
            u = r ** a
            if not math.isfinite(u):
                return 0.0
            return (a / lam) * r ** (a - 1.0) * math.exp(-u)
        with np.errstate(all="ignore"):
            r = t / lam
            u = r ** a
            out = (a / lam) * r ** (a - 1.0) * np.exp(-u)
            out = np.where(np.isinf(u), 0.0, out)
            out = np.where(r == 0.0, self._pdf_at_zero(), out)
        return out

    def _pdf_at_zero(self) -> float:
        if self.shape < 1.0:
            return math.inf
        if self.shape == 1.0:
            return 1.0 / self.scale
        return 0.0

    def sample(self, rng: numerics.RngStream, n: int | None = None):
        """Draw scale * X^(1/shape) with X standard exponential."""
        inv_a = 1.0 / self.shape
        if n is None:
            return self.scale * rng.exponential() ** inv_a
        return self.scale * rng.exponentials(int(n)) ** inv_a

    def entropy(self) -> float:
        """gamma (1 - 1/shape) + ln(scale/shape) + 1."""
        a = self.shape
        return EULER_GAMMA * (1.0 - 1.0 / a) + math.log(self.scale / a) + 1.0

    def psi_norm(self) -> float:
        """Orlicz psi_shape norm: scale * 2^(1/shape)."""
        return self.scale * 2.0 ** (1.0 / self.shape)

    def orlicz_functional(self, K: float) -> float:
        """E exp((W/K)^shape) = 1/(1 - (scale/K)^shape), finite for K > scale."""
        K = float(K)
        if math.isnan(K) or K <= self.scale:
            raise DomainError(
                f"E exp((W/K)^shape) diverges for K <= scale (K={K!r})")
        return 1.0 / (1.0 - (self.scale / K) ** self.shape)

    def orlicz_functional_numeric(self, K: float) -> float:
        """Quadrature version of orlicz_functional (independent of it)."""
        K = float(K)
        if math.isnan(K) or K <= self.scale:
            raise DomainError(
                f"E exp((W/K)^shape) diverges for K <= scale (K={K!r})")
        a = self.shape
        lam = self.scale
        # Fused exponent: pdf(t) exp((t/K)^a) decays like exp(-t^a delta)
        # with delta = lam^-a - K^-a > 0; keeping one exp avoids 0 * inf.
        delta = lam ** -a - K ** -a
        coef = a / lam

        def integrand(t):
            with np.errstate(all="ignore"):
                u = t ** a
                out = coef * (t / lam) ** (a - 1.0) * np.exp(-delta * u)
                return np.where(np.isinf(u), 0.0, out)

        value, _ = numerics.adaptive_quad(
            integrand, 0.0, math.inf,
            numerics.QuadratureSpec(abs_tol=1e-11, rel_tol=1e-11,
                                    max_subdivisions=4000),
            vectorized=True)
        return value

    def psi_norm_numeric(self) -> float:
        """The K solving E exp((W/K)^shape) = 2, by quadrature + root-finding."""
        a = self.shape
        lo = self.scale * 0.7 ** (-1.0 / a)
        hi = self.scale * 0.3 ** (-1.0 / a)
        return numerics.find_root(
            lambda K: self.orlicz_functional_numeric(K) - 2.0, lo, hi, tol=1e-9)


@dataclass(frozen=True)
class MajorizationReport:
    """Pointwise tail comparison of |G_alpha| against its Weibull envelope.

    upper_ok[i]: P(|G_alpha| >= t_i) <= survival of Weibull(alpha, 2^(1/alpha)),
    claimed for every t.  lower_ok[i]: P(|G_alpha| >= t_i) >= survival of
    Weibull(alpha, 1), claimed only for t_i >= threshold; entries below the
    threshold are vacuously true.
    """

    alpha: float
    t_grid: tuple[float, ...]
    upper_ok: tuple[bool, ...]
    lower_ok: tuple[bool, ...]
    threshold: float

    @property
    def all_ok(self) -> bool:
        return all(self.upper_ok) and all(self.lower_ok)


def majorization_report(alpha: float, t_grid) -> MajorizationReport:
    """Check the two-sided Weibull envelope of |G_alpha| on a grid."""
    dist = AlphaNormal(alpha)
    grid = tuple(float(t) for t in np.atleast_1d(np.asarray(t_grid, dtype=np.float64)))
    if not grid:
        raise DomainError("majorization grid must not be empty")
    if any(math.isnan(t) or t < 0.0 for t in grid):
        raise DomainError("majorization grid values must be >= 0")
    upper = Weibull(dist.alpha, 2.0 ** (1.0 / dist.alpha))
    lower = Weibull(dist.alpha, 1.0)
    threshold = dist.tail_lower_threshold()
    upper_ok = tuple(dist.tail_exact(t) <= upper.survival(t) for t in grid)
    lower_ok = tuple(t < threshold or dist.tail_exact(t) >= lower.survival(t)
                     for t in grid)
    return MajorizationReport(dist.alpha, grid, upper_ok, lower_ok, threshold)
