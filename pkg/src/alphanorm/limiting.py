"""The alpha -> infinity limit: correlated signs through the Gauss copula.

As alpha grows, the alpha-normal CDF converges weakly to the Rademacher
step function (mass 1/2 on each of -1 and +1), and the multivariate law
converges to a distribution on the sign lattice {-1,+1}^d whose CDF is the
Gauss copula evaluated at Rademacher margin values.  The PMF follows by
inclusion-exclusion over the componentwise partial order:

    P(X = x) = sum over sign vectors y <= x of (-1)^{#{i: y_i != x_i}} F(y)

with F the limiting CDF.  Each copula value is cached and, when it needs
Monte Carlo (three or more margins at 1/2), evaluated on its own derived
substream, so results do not depend on call order and the PMF values over
the whole lattice are mutually consistent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from alphanorm import numerics
from alphanorm.alpha_normal import AlphaNormal
from alphanorm.errors import (
    DimensionError,
    DomainError,
    ResourceLimitError,
)
from alphanorm.multivariate import CorrelationMatrix, gauss_copula_with_error

__all__ = [
    "SignVector",
    "MetaRademacher",
    "rademacher_cdf",
    "pmf_bivariate",
    "weak_convergence_check",
]

_MAX_PMF_DIM = 20
_MC_SEED = 0xC0FFEE
_MC_STREAM_LIMIT = 3


def rademacher_cdf(x: float) -> float:
    """CDF of a fair sign: 0 below -1, 1/2 on [-1, 1), 1 from 1 on.

    Right-continuous, so the jump points themselves carry the upper value.
    """
    x = float(x)
    if math.isnan(x):
        raise DomainError("rademacher_cdf argument must not be NaN")
    if x < -1.0:
        return 0.0
    if x < 1.0:
        return 0.5
    return 1.0


@dataclass(frozen=True)
class SignVector:
    """Point of the sign lattice: every coordinate exactly -1 or +1."""

    coords: tuple[int, ...]

    def __post_init__(self):
        normalized = []
        for c in self.coords:
            cf = float(c)
            if cf not in (-1.0, 1.0):
                raise DomainError(
                    f"sign vector coordinates must be -1 or +1, got {c!r}")
            normalized.append(int(cf))
        object.__setattr__(self, "coords", tuple(normalized))

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)


def _as_sign_vector(x, dim: int) -> SignVector:
    sv = x if isinstance(x, SignVector) else SignVector(tuple(x))
    if len(sv) != dim:
        raise DimensionError(
            f"sign vector has length {len(sv)}, distribution dimension is {dim}")
    return sv


def pmf_bivariate(rho: float, x: int, y: int) -> float:
    """Limiting sign PMF for d = 2: C_rho(1/2,1/2) on equal signs, else
    1/2 - C_rho(1/2,1/2)."""
    rho = float(rho)
    if math.isnan(rho) or abs(rho) >= 1.0:
        raise DomainError(f"pmf_bivariate requires |rho| < 1, got {rho!r}")
    sv = SignVector((x, y))
    c = numerics.bivariate_normal_cdf(0.0, 0.0, rho)
    if sv.coords[0] == sv.coords[1]:
        return c
    return 0.5 - c


def weak_convergence_check(sigma_scale: float, x: float, alphas) -> np.ndarray:
    """Gaps |Phi_{sigma,alpha}(x) - Phi_inf(x)| along an increasing alpha list.

    x = +-1 are the discontinuity points of the limit and are rejected;
    elsewhere the gaps shrink to 0 as alpha grows.
    """
    sigma_scale = float(sigma_scale)
    if math.isnan(sigma_scale) or sigma_scale <= 0.0:
        raise DomainError(f"sigma must be positive, got {sigma_scale!r}")
    x = float(x)
    if math.isnan(x):
        raise DomainError("x must not be NaN")
    if x in (-1.0, 1.0):
        raise DomainError(
            "x = -1 and x = 1 are excluded: the limit CDF jumps there, so "
            "pointwise convergence is not claimed")
    avec = [float(a) for a in alphas]
    if not avec:
        raise DomainError("alphas must not be empty")
    if any(math.isnan(a) or a <= 0.0 for a in avec):
        raise DomainError("alphas must be positive reals")
    if any(b <= a for a, b in zip(avec, avec[1:])):
        raise DomainError("alphas must be strictly increasing")
    target = rademacher_cdf(x)
    gaps = [abs(AlphaNormal(a, sigma_scale).cdf(x) - target) for a in avec]
    return np.asarray(gaps, dtype=np.float64)


@dataclass(frozen=True)
class MetaRademacher:
    """Limiting sign distribution driven by a correlation matrix.

    mc_samples and seed control the Monte Carlo copula evaluations needed
    when three or more margins sit at 1/2; each distinct evaluation point
    gets its own substream of the seed and is cached with its standard
    error, so repeated and reordered queries are reproducible.
    """

    sigma_matrix: CorrelationMatrix
    mc_samples: int = 200_000
    seed: int = _MC_SEED
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.sigma_matrix, CorrelationMatrix):
            object.__setattr__(self, "sigma_matrix",
                               CorrelationMatrix(self.sigma_matrix))
        if int(self.mc_samples) < 1000:
            raise DomainError("mc_samples must be at least 1000")
        object.__setattr__(self, "mc_samples", int(self.mc_samples))

    @property
    def dim(self) -> int:
        return self.sigma_matrix.dim

    def _copula_at(self, u: tuple[float, ...]) -> tuple[float, float]:
        cached = self._cache.get(u)
        if cached is not None:
            return cached
        # Base-3 encoding of (0, 1/2, 1) margins keys the substream, so the
        # value at a lattice point never depends on evaluation order.
        code = 0
        for ui in u:
            code = 3 * code + int(round(2.0 * ui))
        rng = numerics.RngStream(self.seed, _MC_STREAM_LIMIT).substream(code)
        result = gauss_copula_with_error(self.sigma_matrix, u, rng,
                                         self.mc_samples)
        self._cache[u] = result
        return result

    def limit_cdf_with_error(self, x) -> tuple[float, float]:
        """Limiting CDF at x with the standard error of its MC part."""
        xv = np.asarray(x, dtype=np.float64).ravel()
        if xv.shape[0] != self.dim:
            raise DimensionError(
                f"point has length {xv.shape[0]}, distribution dimension is "
                f"{self.dim}")
        u = tuple(rademacher_cdf(c) for c in xv)
        return self._copula_at(u)

    def limit_cdf(self, x) -> float:
        return self.limit_cdf_with_error(x)[0]

    def pmf_with_error(self, x) -> tuple[float, float]:
        """Inclusion-exclusion PMF at a sign vector, with aggregated MC error.

        Sums (-1)^{#flips} F(y) over the lattice points y <= x; the 2^k
        terms (k = number of +1 coordinates) force the d <= 20 cap.  The
        value is clamped to [0, 1]; the error aggregates the independent
        per-term standard errors in quadrature.
        """
        sv = _as_sign_vector(x, self.dim)
        if self.dim > _MAX_PMF_DIM:
            raise ResourceLimitError(
                f"PMF enumeration needs 2^{self.dim} terms; dimensions above "
                f"{_MAX_PMF_DIM} are not supported")
        plus = [i for i, c in enumerate(sv.coords) if c == 1]
        total = 0.0
        var = 0.0
        for r in range(len(plus) + 1):
            for flips in combinations(plus, r):
                y = list(sv.coords)
                for i in flips:
                    y[i] = -1
                u = tuple(0.5 if c == -1 else 1.0 for c in y)
                value, se = self._copula_at(u)
                total += value if r % 2 == 0 else -value
                var += se * se
        return min(max(total, 0.0), 1.0), math.sqrt(var)

    def pmf(self, x) -> float:
        return self.pmf_with_error(x)[0]

    def support(self):
        """All 2^d sign vectors, in lexicographic (-1 first) order."""
        return [SignVector(c) for c in product((-1, 1), repeat=self.dim)]

    def sample(self, rng: numerics.RngStream, n: int | None = None):
        """Componentwise signs of N(0, Sigma) draws.

        n = None returns a SignVector; otherwise an (n, d) integer array.
        A zero normal coordinate (measure zero, but representable) maps
        to +1, matching the right-continuous margin convention.
        """
        d = self.dim
        chol = self.sigma_matrix.cholesky
        if n is None:
            z = chol @ rng.normals(d)
            return SignVector(tuple(-1 if zi < 0.0 else 1 for zi in z))
        g = rng.normals(int(n) * d).reshape(int(n), d)
        z = g @ chol.T
        return np.where(z < 0.0, -1, 1).astype(np.int64)
