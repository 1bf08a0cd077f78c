"""Multivariate alpha-normal distribution via the Gauss copula.

The joint CDF couples sigma = 1 alpha-normal margins through the Gauss
copula C_Sigma(u) = Phi_Sigma(Phi^{-1}(u_1), ..., Phi^{-1}(u_d)).
Equivalently, the joint CDF is Phi_Sigma evaluated at the transformed point
(sgn(x_i)|x_i|^{alpha/2})_i, and the joint density is

    (alpha/2)^d prod |x_i|^{alpha/2 - 1} phi_Sigma(sgn(x_i)|x_i|^{alpha/2}).

Evaluation is exact for d <= 2 (bivariate normal CDF) and Monte Carlo for
d >= 3; MC-backed operations take an optional RngStream and come with
*_with_error companions returning (value, standard_error).  When no stream
is passed, a fixed internal seed is used, so repeated calls with the same
arguments return identical values.

Correlation matrices must be symmetric with unit diagonal and positive
definite; the Cholesky factor is computed once at construction and reused
by the density, the sampler, and the MC integrator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from alphanorm import numerics
from alphanorm.alpha_normal import AlphaNormal
from alphanorm._backend import kernels
from alphanorm.errors import (
    DimensionError,
    DomainError,
    MatrixValidationError,
    SingularPointError,
)

__all__ = [
    "CorrelationMatrix",
    "MultivariateAlphaNormal",
    "gauss_copula",
    "gauss_copula_with_error",
    "bivariate_pdf",
    "parse_correlation_csv",
]

_SYMMETRY_TOL = 1e-12
_MIN_CHOLESKY_PIVOT = 1e-12

# Fixed seed for MC evaluations when the caller passes no stream; stream ids
# separate the call sites so interleaved defaults never share a substream.
_MC_SEED = 0xC0FFEE
_MC_STREAM_COPULA = 1
_MC_STREAM_CDF = 2
_DEFAULT_MC_SAMPLES = 200_000


class CorrelationMatrix:
    """Validated correlation matrix with a cached Cholesky factor.

    Requires a square symmetric array with unit diagonal, off-diagonal
    entries in [-1, 1], and positive definiteness (every Cholesky pivot
    above 1e-12).  Violations raise MatrixValidationError.
    """

    __slots__ = ("_entries", "_chol")

    def __init__(self, entries):
        mat = np.array(entries, dtype=np.float64)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise MatrixValidationError(
                f"correlation matrix must be square, got shape {mat.shape}")
        if mat.shape[0] < 1:
            raise MatrixValidationError("correlation matrix must be nonempty")
        if not np.all(np.isfinite(mat)):
            raise MatrixValidationError("correlation matrix entries must be finite")
        if np.max(np.abs(mat - mat.T)) > _SYMMETRY_TOL:
            raise MatrixValidationError("correlation matrix must be symmetric")
        mat = 0.5 * (mat + mat.T)
        if np.max(np.abs(np.diag(mat) - 1.0)) > _SYMMETRY_TOL:
            raise MatrixValidationError("correlation matrix diagonal must be 1")
        np.fill_diagonal(mat, 1.0)
        if np.max(np.abs(mat)) > 1.0:
            raise MatrixValidationError(
                "correlation entries must lie in [-1, 1]")
        try:
            chol = np.linalg.cholesky(mat)
        except np.linalg.LinAlgError as exc:
            raise MatrixValidationError(
                f"correlation matrix is not positive definite: {exc}") from exc
        if np.min(np.diag(chol)) <= _MIN_CHOLESKY_PIVOT:
            raise MatrixValidationError(
                "correlation matrix is numerically singular "
                f"(smallest Cholesky pivot {np.min(np.diag(chol)):.3e})")
        mat.setflags(write=False)
        chol.setflags(write=False)
        self._entries = mat
        self._chol = chol

    @classmethod
    def identity(cls, dim: int) -> "CorrelationMatrix":
        return cls(np.eye(int(dim)))

    @classmethod
    def bivariate(cls, rho: float) -> "CorrelationMatrix":
        rho = float(rho)
        return cls([[1.0, rho], [rho, 1.0]])

    @classmethod
    def equicorrelated(cls, dim: int, rho: float) -> "CorrelationMatrix":
        dim = int(dim)
        mat = np.full((dim, dim), float(rho))
        np.fill_diagonal(mat, 1.0)
        return cls(mat)

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def cholesky(self) -> np.ndarray:
        return self._chol

    def submatrix(self, indices) -> "CorrelationMatrix":
        idx = np.asarray(indices, dtype=np.intp)
        return CorrelationMatrix(self._entries[np.ix_(idx, idx)])

    def log_det(self) -> float:
        return 2.0 * float(np.sum(np.log(np.diag(self._chol))))

    def __repr__(self) -> str:
        return f"CorrelationMatrix(dim={self.dim})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, CorrelationMatrix)
                and np.array_equal(self._entries, other._entries))

    def __hash__(self):
        return hash((self.dim, self._entries.tobytes()))


def parse_correlation_csv(text: str) -> CorrelationMatrix:
    """Parse the exchange format: a 'd' header line, then d rows of d reals."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MatrixValidationError("empty correlation matrix input")
    try:
        d = int(lines[0])
    except ValueError as exc:
        raise MatrixValidationError(
            f"first line must be the dimension, got {lines[0]!r}") from exc
    if d < 1:
        raise MatrixValidationError(f"dimension must be positive, got {d}")
    if len(lines) != d + 1:
        raise MatrixValidationError(
            f"expected {d} matrix rows after the header, got {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        cells = [c.strip() for c in ln.split(",")]
        if len(cells) != d:
            raise MatrixValidationError(
                f"expected {d} entries per row, got {len(cells)}: {ln!r}")
        try:
            rows.append([float(c) for c in cells])
        except ValueError as exc:
            raise MatrixValidationError(f"bad matrix entry in row {ln!r}") from exc
    return CorrelationMatrix(rows)


def _check_probability_vector(u, dim: int) -> np.ndarray:
    uv = np.asarray(u, dtype=np.float64).ravel()
    if uv.shape[0] != dim:
        raise DimensionError(
            f"copula argument has length {uv.shape[0]}, matrix dimension is {dim}")
    if np.any(np.isnan(uv)) or np.any(uv < 0.0) or np.any(uv > 1.0):
        raise DomainError("copula arguments must lie in [0, 1]")
    return uv


def _frechet_clamp(value: float, uv: np.ndarray) -> float:
    lower = max(float(np.sum(uv)) - uv.shape[0] + 1.0, 0.0)
    upper = float(np.min(uv))
    return min(max(value, lower), upper)


def gauss_copula_with_error(sigma: CorrelationMatrix, u,
                            rng: numerics.RngStream | None = None,
                            n: int = _DEFAULT_MC_SAMPLES) -> tuple[float, float]:
    """Gauss copula C_Sigma(u) with its Monte Carlo standard error.

    Coordinates with u_i = 1 are marginalized away; any u_i = 0 gives 0.
    After dropping, dimensions <= 2 are evaluated exactly (standard error 0)
    and d >= 3 by the sequential-conditioning MC estimator.  The value is
    clamped to the Frechet bounds.
    """
    uv = _check_probability_vector(u, sigma.dim)
    if np.any(uv == 0.0):
        return 0.0, 0.0
    keep = np.flatnonzero(uv < 1.0)
    if keep.size == 0:
        return 1.0, 0.0
    w = uv[keep]
    z = kernels.std_normal_quantile_vec(w)
    if keep.size == 1:
        return float(w[0]), 0.0
    if keep.size == 2:
        rho = float(sigma.entries[keep[0], keep[1]])
        value = numerics.bivariate_normal_cdf(float(z[0]), float(z[1]), rho)
        return _frechet_clamp(value, uv), 0.0
    sub = sigma.submatrix(keep)
    if rng is None:
        rng = numerics.RngStream(_MC_SEED, _MC_STREAM_COPULA)
    est, se = numerics.mvn_cdf(z, sub, rng, n)
    return _frechet_clamp(est, uv), se


def gauss_copula(sigma: CorrelationMatrix, u,
                 rng: numerics.RngStream | None = None,
                 n: int = _DEFAULT_MC_SAMPLES) -> float:
    """Gauss copula value; see gauss_copula_with_error for the MC contract."""
    return gauss_copula_with_error(sigma, u, rng, n)[0]


def bivariate_pdf(rho: float, alpha: float, x, y):
    """Closed-form bivariate alpha-normal density.

    (alpha/2)^2 |xy|^(alpha/2-1) phi_rho(u, v) with u = sgn(x)|x|^(alpha/2),
    v = sgn(y)|y|^(alpha/2) and phi_rho the bivariate normal density whose
    exponent carries the usual 2(1 - rho^2) denominator.  Accepts scalars or
    broadcasting arrays.
    """
    rho = float(rho)
    if math.isnan(rho) or abs(rho) >= 1.0:
        raise DomainError(f"bivariate_pdf requires |rho| < 1, got {rho!r}")
    alpha = float(alpha)
    if math.isnan(alpha) or alpha <= 0.0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    xv = np.asarray(x, dtype=np.float64)
    yv = np.asarray(y, dtype=np.float64)
    if alpha != 2.0 and (np.any(xv == 0.0) or np.any(yv == 0.0)):
        raise SingularPointError(
            "bivariate density is singular on the axes for alpha != 2")
    half_a = 0.5 * alpha
    one_m_r2 = 1.0 - rho * rho
    log_coef = 2.0 * math.log(half_a) - math.log(2.0 * math.pi) \
        - 0.5 * math.log(one_m_r2)
    with np.errstate(all="ignore"):
        u = np.sign(xv) * np.abs(xv) ** half_a
        v = np.sign(yv) * np.abs(yv) ** half_a
        quad = (u * u - 2.0 * rho * u * v + v * v) / (2.0 * one_m_r2)
        if alpha == 2.0:
            log_pow = 0.0
        else:
            log_pow = (half_a - 1.0) * np.log(np.abs(xv * yv))
        out = np.exp(log_coef + log_pow - quad)
        out = np.where(np.isinf(quad), 0.0, out)
    if np.ndim(x) == 0 and np.ndim(y) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class MultivariateAlphaNormal:
    """Joint law with AlphaNormal(alpha) margins and Gauss-copula dependence."""

    sigma_matrix: CorrelationMatrix
    alpha: float

    def __post_init__(self):
        if not isinstance(self.sigma_matrix, CorrelationMatrix):
            object.__setattr__(self, "sigma_matrix",
                               CorrelationMatrix(self.sigma_matrix))
        a = float(self.alpha)
        if not (math.isfinite(a) and a > 0.0):
            raise DomainError(f"alpha must be a positive real, got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)

    @property
    def dim(self) -> int:
        return self.sigma_matrix.dim

    def margin(self) -> AlphaNormal:
        return AlphaNormal(self.alpha)

    def _check_point(self, x, allow_infinite: bool = True) -> np.ndarray:
        xv = np.asarray(x, dtype=np.float64).ravel()
        if xv.shape[0] != self.dim:
            raise DimensionError(
                f"point has length {xv.shape[0]}, distribution dimension is "
                f"{self.dim}")
        if np.any(np.isnan(xv)):
            raise DomainError("point coordinates must not be NaN")
        if not allow_infinite and not np.all(np.isfinite(xv)):
            raise DomainError("point coordinates must be finite")
        return xv

    def _transform(self, xv: np.ndarray) -> np.ndarray:
        with np.errstate(all="ignore"):
            return np.sign(xv) * np.abs(xv) ** (0.5 * self.alpha)

    def joint_cdf_with_error(self, x, rng: numerics.RngStream | None = None,
                             n: int = _DEFAULT_MC_SAMPLES) -> tuple[float, float]:
        """P(X <= x componentwise) and its MC standard error.

        Exact for effective dimension <= 2 (standard error 0); d >= 3 uses
        the MC integrator after marginalizing +inf coordinates.
        """
        xv = self._check_point(x)
        t = self._transform(xv)
        if np.any(t == -math.inf):
            return 0.0, 0.0
        keep = np.flatnonzero(t < math.inf)
        if keep.size == 0:
            return 1.0, 0.0
        tk = t[keep]
        if keep.size == 1:
            return kernels.std_normal_cdf(float(tk[0])), 0.0
        if keep.size == 2:
            rho = float(self.sigma_matrix.entries[keep[0], keep[1]])
            value = numerics.bivariate_normal_cdf(float(tk[0]), float(tk[1]), rho)
            return value, 0.0
        sub = self.sigma_matrix.submatrix(keep)
        if rng is None:
            rng = numerics.RngStream(_MC_SEED, _MC_STREAM_CDF)
        est, se = numerics.mvn_cdf(tk, sub, rng, n)
        return est, se

    def joint_cdf(self, x, rng: numerics.RngStream | None = None,
                  n: int = _DEFAULT_MC_SAMPLES) -> float:
        return self.joint_cdf_with_error(x, rng, n)[0]

    def joint_pdf(self, x) -> float:
        """Joint density at a point with all coordinates off the axes.

        Assembled in log space from the Cholesky factor: the Gaussian
        quadratic form plus log-determinant, the margin power terms, and
        the (alpha/2)^d coefficient.
        """
        xv = self._check_point(x, allow_infinite=False)
        a = self.alpha
        if np.any(xv == 0.0):
            if a != 2.0:
                raise SingularPointError(
                    "joint density is singular where a coordinate is 0 "
                    "(diverges for alpha < 2, vanishes for alpha > 2)")
            log_pow = 0.0
        elif a == 2.0:
            log_pow = 0.0
        else:
            log_pow = (0.5 * a - 1.0) * float(np.sum(np.log(np.abs(xv))))
        t = self._transform(xv)
        chol = self.sigma_matrix.cholesky
        w = np.linalg.solve(chol, t)
        quad = float(w @ w)
        d = self.dim
        log_phi = -0.5 * quad - 0.5 * d * math.log(2.0 * math.pi) \
            - 0.5 * self.sigma_matrix.log_det()
        return math.exp(d * math.log(0.5 * a) + log_pow + log_phi)

    def sample(self, rng: numerics.RngStream, n: int | None = None):
        """Transform N(0, Sigma) draws by sgn(z)|z|^(2/alpha) per coordinate.

        Returns a length-d vector, or an (n, d) array when n is given; row i
        consumes the d normals drawn at offsets i*d..(i+1)*d-1 of the stream.
        """
        d = self.dim
        chol = self.sigma_matrix.cholesky
        expo = 2.0 / self.alpha
        if n is None:
            g = rng.normals(d)
            z = chol @ g
            return np.sign(z) * np.abs(z) ** expo
        g = rng.normals(int(n) * d).reshape(int(n), d)
        z = g @ chol.T
        return np.sign(z) * np.abs(z) ** expo

    def empirical_cdf_check(self, x, rng: numerics.RngStream,
                            n: int) -> tuple[float, float]:
        """Fraction of n draws componentwise <= x, with binomial std error."""
        n = int(n)
        if n < 1000:
            raise DomainError(f"empirical check needs n >= 1000, got {n}")
        xv = self._check_point(x)
        draws = self.sample(rng, n)
        freq = float(np.mean(np.all(draws <= xv, axis=1)))
        se = math.sqrt(freq * (1.0 - freq) / n)
        return freq, se
