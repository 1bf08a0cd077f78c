"""The univariate alpha-normal family.

For a standard normal G and shape alpha > 0, the alpha-normal variable is
sgn(G)|G|^(2/alpha); with an underlying scale sigma it is the same transform
of sigma*G.  The family interpolates through the standard normal (alpha = 2):
below 2 the density has a vertical asymptote at zero, above 2 it is bimodal.

Closed forms implemented here:

* cdf        Phi(sgn(x)|x|^(alpha/2) / sigma)
* pdf        alpha/(2 sqrt(2 pi) sigma) |x|^(alpha/2-1) exp(-|x|^alpha/(2 sigma^2))
* moments    E|X|^p = sigma^(2p/alpha) 2^(p/alpha) Gamma(p/alpha + 1/2)/sqrt(pi)
* entropy    (1/2 - 1/alpha)(euler_gamma + ln 2) + ln(2 sqrt(2 pi)/alpha) + 1/2
* psi-norm   ||X||_{psi_alpha} = sigma^(2/alpha) (8/3)^(1/alpha)

Operations stated only for sigma = 1 (shape analysis, entropy, tail bounds,
the numeric Orlicz norm) raise UnsupportedParameterError for other scales
rather than silently extending the formulas.

Scalar arguments return floats; ndarray arguments are mapped elementwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from alphanorm import numerics
from alphanorm._backend import kernels
from alphanorm.errors import (
    DomainError,
    SingularPointError,
    UnsupportedParameterError,
)

__all__ = ["AlphaNormal", "ShapeReport", "chi2_mgf", "EULER_GAMMA"]

EULER_GAMMA = 0.57721566490153286

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_LN_2 = math.log(2.0)
_T0_BRACKET = (1.0, 3.0)

_t0_cache: float | None = None


def _t0() -> float:
    """Root of sqrt(2 pi) t exp(-t^2/2) = 1 on [1, 3] (tail crossover point)."""
    global _t0_cache
    if _t0_cache is None:
        _t0_cache = numerics.find_root(
            lambda t: _SQRT_2PI * t * math.exp(-0.5 * t * t) - 1.0,
            *_T0_BRACKET, tol=1e-13)
    return _t0_cache


def chi2_mgf(s: float) -> float:
    """Moment generating function of G^2 (chi-square, one degree of freedom).

    E exp(s G^2) = (1 - 2s)^(-1/2), defined for s < 1/2.  Because
    |G_alpha|^alpha = G^2, this is also E exp(s |G_alpha|^alpha), the
    quantity behind the psi-norm closed form.
    """
    s = float(s)
    if math.isnan(s) or s >= 0.5:
        raise DomainError(f"chi2_mgf requires s < 1/2, got {s!r}")
    return 1.0 / math.sqrt(1.0 - 2.0 * s)


@dataclass(frozen=True)
class ShapeReport:
    """Shape classification of the density.

    regime is one of "cusp" (0 < alpha < 2), "gaussian" (alpha = 2) or
    "bimodal" (alpha > 2); modes are the density maximizers; the slope is
    the one-sided derivative limit of the density at 0+.
    """

    regime: str
    modes: tuple[float, ...]
    slope_at_zero_plus: float


@dataclass(frozen=True)
class AlphaNormal:
    """Alpha-normal law with shape ``alpha`` and underlying scale ``sigma``."""

    alpha: float
    sigma: float = 1.0

    def __post_init__(self):
        a = float(self.alpha)
        s = float(self.sigma)
        if not (math.isfinite(a) and a > 0.0):
            raise DomainError(f"alpha must be a positive real, got {self.alpha!r}")
        if not (math.isfinite(s) and s > 0.0):
            raise DomainError(f"sigma must be a positive real, got {self.sigma!r}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "sigma", s)

    # -- internal -----------------------------------------------------------

    def _require_unit_sigma(self, op: str) -> None:
        if self.sigma != 1.0:
            raise UnsupportedParameterError(
                f"{op} is stated for sigma = 1 only (got sigma={self.sigma})")

    @property
    def _pdf_coef(self) -> float:
        return self.alpha / (2.0 * _SQRT_2PI * self.sigma)

    def _pdf_at_zero(self) -> float:
        if self.alpha < 2.0:
            return math.inf
        if self.alpha == 2.0:
            return 1.0 / (_SQRT_2PI * self.sigma)
        return 0.0

    # -- density, distribution, quantile, sampling ---------------------------

    def pdf(self, x):
        """Density; at x = 0 returns the limit (+inf when alpha < 2)."""
        a = self.alpha
        two_s2 = 2.0 * self.sigma * self.sigma
        if np.ndim(x) == 0:
            xf = float(x)
            if math.isnan(xf):
                return math.nan
            if xf == 0.0:
                return self._pdf_at_zero()
            ax = abs(xf)
            t = ax ** a
            if not math.isfinite(t):
                return 0.0
            return self._pdf_coef * ax ** (0.5 * a - 1.0) * math.exp(-t / two_s2)
        xv = np.asarray(x, dtype=np.float64)
        ax = np.abs(xv)
        with np.errstate(all="ignore"):
            t = ax ** a
            out = self._pdf_coef * ax ** (0.5 * a - 1.0) * np.exp(-t / two_s2)
            out = np.where(np.isinf(t), 0.0, out)
            out = np.where(ax == 0.0, self._pdf_at_zero(), out)
            out = np.where(np.isnan(xv), np.nan, out)
        return out

    def log_pdf(self, x):
        """ln pdf(x); x = 0 is rejected (singular point of the density)."""
        a = self.alpha
        two_s2 = 2.0 * self.sigma * self.sigma
        ln_coef = math.log(self._pdf_coef)
        if np.ndim(x) == 0:
            xf = float(x)
            if xf == 0.0:
                raise SingularPointError("log_pdf is undefined at x = 0")
            if math.isnan(xf):
                return math.nan
            ax = abs(xf)
            return ln_coef + (0.5 * a - 1.0) * math.log(ax) - ax ** a / two_s2
        xv = np.asarray(x, dtype=np.float64)
        if np.any(xv == 0.0):
            raise SingularPointError("log_pdf is undefined at x = 0")
        ax = np.abs(xv)
        with np.errstate(all="ignore"):
            return ln_coef + (0.5 * a - 1.0) * np.log(ax) - ax ** a / two_s2

    def cdf(self, x):
        """Phi(sgn(x)|x|^(alpha/2) / sigma)."""
        half_a = 0.5 * self.alpha
        inv_s = 1.0 / self.sigma
        if np.ndim(x) == 0:
            xf = float(x)
            if math.isnan(xf):
                return math.nan
            if xf == 0.0:
                return 0.5
            z = math.copysign(abs(xf) ** half_a * inv_s, xf)
            return kernels.std_normal_cdf(z)
        xv = np.asarray(x, dtype=np.float64)
        with np.errstate(all="ignore"):
            z = np.sign(xv) * np.abs(xv) ** half_a * inv_s
        return kernels.std_normal_cdf_vec(z)

    def quantile(self, u):
        """Inverse cdf: sgn(z)(sigma |z|)^(2/alpha) with z = Phi^{-1}(u)."""
        expo = 2.0 / self.alpha
        if np.ndim(u) == 0:
            uf = float(u)
            if math.isnan(uf) or not 0.0 < uf < 1.0:
                raise DomainError(f"quantile argument must lie in (0, 1), got {u!r}")
            z = kernels.std_normal_quantile(uf)
            if z == 0.0:
                return 0.0
            return math.copysign((self.sigma * abs(z)) ** expo, z)
        uv = np.asarray(u, dtype=np.float64)
        if np.any(np.isnan(uv)) or np.any(uv <= 0.0) or np.any(uv >= 1.0):
            raise DomainError("quantile arguments must lie in (0, 1)")
        z = kernels.std_normal_quantile_vec(uv)
        return np.sign(z) * (self.sigma * np.abs(z)) ** expo

    def sample(self, rng: numerics.RngStream, n: int | None = None):
        """Draw sgn(g)(sigma|g|)^(2/alpha) for g ~ N(0,1); n=None gives a float."""
        expo = 2.0 / self.alpha
        if n is None:
            g = rng.normal()
            if g == 0.0:
                return 0.0
            return math.copysign((self.sigma * abs(g)) ** expo, g)
        g = rng.normals(int(n))
        return np.sign(g) * (self.sigma * np.abs(g)) ** expo

    # -- shape analysis (sigma = 1) ------------------------------------------

    def density_derivative(self, x):
        """d/dx of the density on x > 0 (unit scale only).

        Equals -(alpha^2/(4 sqrt(2 pi))) x^(alpha/2-2)
        (x^alpha - (alpha-2)/alpha) exp(-x^alpha/2).
        """
        self._require_unit_sigma("density_derivative")
        a = self.alpha
        coef = -(a * a) / (4.0 * _SQRT_2PI)
        shift = (a - 2.0) / a
        if np.ndim(x) == 0:
            xf = float(x)
            if math.isnan(xf) or xf <= 0.0:
                raise DomainError(f"density_derivative requires x > 0, got {x!r}")
            t = xf ** a
            if not math.isfinite(t):
                return 0.0
            return coef * xf ** (0.5 * a - 2.0) * (t - shift) * math.exp(-0.5 * t)
        xv = np.asarray(x, dtype=np.float64)
        if np.any(np.isnan(xv)) or np.any(xv <= 0.0):
            raise DomainError("density_derivative requires x > 0")
        with np.errstate(all="ignore"):
            t = xv ** a
            out = coef * xv ** (0.5 * a - 2.0) * (t - shift) * np.exp(-0.5 * t)
        return np.where(np.isinf(t), 0.0, out)

    def shape_report(self) -> ShapeReport:
        """Regime classification, modes, and the density slope limit at 0+."""
        self._require_unit_sigma("shape_report")
        a = self.alpha
        if a < 2.0:
            return ShapeReport("cusp", (0.0,), -math.inf)
        if a == 2.0:
            return ShapeReport("gaussian", (0.0,), 0.0)
        mode = ((a - 2.0) / a) ** (1.0 / a)
        if a < 4.0:
            slope = math.inf
        elif a == 4.0:
            slope = math.sqrt(2.0 / math.pi)
        else:
            slope = 0.0
        return ShapeReport("bimodal", (-mode, mode), slope)

    # -- moments, entropy, tails, Orlicz norms --------------------------------

    def absolute_moment(self, p: float) -> float:
        """E|X|^p = sigma^(2p/alpha) 2^(p/alpha) Gamma(p/alpha + 1/2)/sqrt(pi)."""
        p = float(p)
        if math.isnan(p) or p <= 0.0:
            raise DomainError(f"moment order must be positive, got {p!r}")
        r = p / self.alpha
        log_m = (2.0 * r * math.log(self.sigma) + r * _LN_2
                 + numerics.log_gamma(r + 0.5) - 0.5 * math.log(math.pi))
        return math.exp(log_m)

    def variance(self) -> float:
        """Var X = E X^2 (the law is symmetric, so the mean is 0)."""
        return self.absolute_moment(2.0)

    def entropy(self) -> float:
        """Differential entropy (unit scale only)."""
        self._require_unit_sigma("entropy")
        a = self.alpha
        return ((0.5 - 1.0 / a) * (EULER_GAMMA + _LN_2)
                + math.log(2.0 * _SQRT_2PI / a) + 0.5)

    def psi_norm(self) -> float:
        """Orlicz psi_alpha norm: sigma^(2/alpha) (8/3)^(1/alpha)."""
        return self.sigma ** (2.0 / self.alpha) * (8.0 / 3.0) ** (1.0 / self.alpha)

    def orlicz_functional(self, K: float) -> float:
        """E exp(|X/K|^alpha) by quadrature (unit scale only).

        Finite exactly when K^alpha > 2; larger K gives smaller values.
        """
        self._require_unit_sigma("orlicz_functional")
        K = float(K)
        if math.isnan(K) or K <= 0.0:
            raise DomainError(f"Orlicz argument must be positive, got {K!r}")
        a = self.alpha
        if K ** a <= 2.0:
            raise DomainError(
                f"E exp(|X/K|^alpha) diverges for K^alpha <= 2 (K={K})")
        # Fused form of pdf(x) exp((x/K)^a): the density's exp(-x^a/2) and
        # the Orlicz exp combine into one decaying exponential, avoiding
        # 0 * inf at large x.
        delta = 0.5 - K ** -a
        coef = a / (2.0 * _SQRT_2PI)

        def integrand(x):
            with np.errstate(all="ignore"):
                t = x ** a
                out = coef * x ** (0.5 * a - 1.0) * np.exp(-delta * t)
                return np.where(np.isinf(t), 0.0, out)

        value, _ = numerics.adaptive_quad(
            integrand, 0.0, math.inf,
            numerics.QuadratureSpec(abs_tol=1e-11, rel_tol=1e-11,
                                    max_subdivisions=4000),
            vectorized=True)
        return 2.0 * value

    def psi_norm_numeric(self) -> float:
        """The K solving E exp(|X/K|^alpha) = 2, by quadrature + root-finding.

        Independent numerical cross-check of ``psi_norm`` (unit scale only).
        """
        self._require_unit_sigma("psi_norm_numeric")
        a = self.alpha
        lo = 2.2 ** (1.0 / a)
        hi = 4.0 ** (1.0 / a)
        return numerics.find_root(
            lambda K: self.orlicz_functional(K) - 2.0, lo, hi, tol=1e-9)

    def tail_upper_bound(self, t: float) -> float:
        """Upper bound exp(-t^alpha/2) on P(|X| >= t) (unit scale only)."""
        self._require_unit_sigma("tail_upper_bound")
        t = float(t)
        if math.isnan(t) or t < 0.0:
            raise DomainError(f"tail bound requires t >= 0, got {t!r}")
        return math.exp(-0.5 * t ** self.alpha)

    def tail_lower_threshold(self) -> float:
        """Point beyond which P(|X| >= t) >= exp(-t^alpha) holds (unit scale).

        Equals t0^(2/alpha) with t0 the root of sqrt(2 pi) t exp(-t^2/2) = 1.
        """
        self._require_unit_sigma("tail_lower_threshold")
        return _t0() ** (2.0 / self.alpha)

    def tail_exact(self, t: float) -> float:
        """P(|X| >= t) = 2(1 - Phi(t^(alpha/2)/sigma)), the exact tail."""
        t = float(t)
        if math.isnan(t) or t < 0.0:
            raise DomainError(f"tail requires t >= 0, got {t!r}")
        if t == 0.0:
            return 1.0
        z = t ** (0.5 * self.alpha) / self.sigma
        return 2.0 * kernels.std_normal_cdf(-z)
