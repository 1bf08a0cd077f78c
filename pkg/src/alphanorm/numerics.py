"""Self-contained numerical kernel layer.

Standard-normal primitives, log-gamma, the bivariate normal CDF, a Monte
Carlo multivariate normal CDF, adaptive Gauss-Kronrod quadrature with
improper-interval substitutions, Brent root-finding, and the seeded RNG
stream used by every sampling operation.

No external numerical libraries are involved beyond numpy array plumbing;
the special-function and RNG work is done by the kernel backend (compiled
extension when available, pure Python otherwise, see ``alphanorm._backend``).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from alphanorm._backend import BACKEND, kernels
from alphanorm.errors import (
    BracketError,
    DimensionError,
    DomainError,
    QuadratureError,
)

__all__ = [
    "BACKEND",
    "QuadratureSpec",
    "RngStream",
    "std_normal_cdf",
    "std_normal_pdf",
    "std_normal_quantile",
    "log_gamma",
    "bivariate_normal_cdf",
    "mvn_cdf",
    "adaptive_quad",
    "find_root",
    "sample_std_normal",
    "sample_std_exponential",
]

_UINT64_CEIL = 1 << 64


@dataclass(frozen=True)
class QuadratureSpec:
    """Error targets for adaptive_quad."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not (self.abs_tol > 0.0):
            raise DomainError("abs_tol must be positive")
        if not (self.rel_tol >= 0.0):
            raise DomainError("rel_tol must be nonnegative")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be at least 1")


def _mix64(z: int) -> int:
    # splitmix64 finalizer; used only to derive child stream ids
    z = (z + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return z ^ (z >> 31)


@dataclass
class RngStream:
    """Counter-based random stream (Philox4x32-10 under the hood).

    Identical (seed, stream_id) always reproduces the identical variate
    sequence, on either kernel backend.  Distinct stream_ids index disjoint
    counter blocks, so parallel verification can hand out substreams freely.
    A stream is single-owner mutable state: share values, not streams.
    """

    seed: int
    stream_id: int = 0
    _index: int = field(default=0, repr=False, compare=False)

    def __post_init__(self):
        if not (0 <= int(self.seed) < _UINT64_CEIL):
            raise DomainError("seed must be a 64-bit unsigned integer")
        if not (0 <= int(self.stream_id) < _UINT64_CEIL):
            raise DomainError("stream_id must be a 64-bit unsigned integer")
        self.seed = int(self.seed)
        self.stream_id = int(self.stream_id)

    @property
    def position(self) -> int:
        """Number of uniforms consumed so far."""
        return self._index

    def substream(self, k: int) -> "RngStream":
        """A fresh, statistically independent stream derived from index k."""
        if k < 0:
            raise DomainError("substream index must be nonnegative")
        child = _mix64(self.stream_id ^ _mix64(k + 1))
        return RngStream(self.seed, child)

    def uniform(self) -> float:
        u = kernels.uniform_at(self.seed, self.stream_id, self._index)
        self._index += 1
        return u

    def normal(self) -> float:
        return kernels.std_normal_quantile(self.uniform())

    def exponential(self) -> float:
        return -math.log(self.uniform())

    def uniforms(self, n: int) -> np.ndarray:
        out = kernels.uniforms(self.seed, self.stream_id, self._index, int(n))
        self._index += int(n)
        return out

    def normals(self, n: int) -> np.ndarray:
        out = kernels.std_normals(self.seed, self.stream_id, self._index, int(n))
        self._index += int(n)
        return out

    def exponentials(self, n: int) -> np.ndarray:
        out = kernels.std_exponentials(self.seed, self.stream_id, self._index, int(n))
        self._index += int(n)
        return out

    def skip(self, n: int) -> None:
        """Advance the stream by n draws without generating them."""
        self._index += int(n)


def std_normal_cdf(x: float) -> float:
    """Phi(x); NaN input propagates to NaN output."""
    return kernels.std_normal_cdf(float(x))


def std_normal_pdf(x: float) -> float:
    return kernels.std_normal_pdf(float(x))


def std_normal_quantile(u: float) -> float:
    """Phi^{-1}(u) for u in (0,1); u = 0 or 1 map to ∓infinity."""
    u = float(u)
    if math.isnan(u) or u < 0.0 or u > 1.0:
        raise DomainError(f"quantile argument must lie in [0, 1], got {u!r}")
    if u == 0.0:
        return -math.inf
    if u == 1.0:
        return math.inf
    return kernels.std_normal_quantile(u)


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    x = float(x)
    if math.isnan(x) or x <= 0.0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    return kernels.log_gamma(x)


def bivariate_normal_cdf(x: float, y: float, rho: float) -> float:
    """P(Z1 <= x, Z2 <= y) for standard normals with correlation rho.

    |rho| = 1 falls back to the comonotone/countermonotone formulas
    min(Phi(x), Phi(y)) and max(Phi(x) + Phi(y) - 1, 0).
    """
    rho = float(rho)
    if math.isnan(rho) or abs(rho) > 1.0:
        raise DomainError(f"correlation must lie in [-1, 1], got {rho!r}")
    x = float(x)
    y = float(y)
    if math.isnan(x) or math.isnan(y):
        raise DomainError("coordinates must not be NaN")
    return kernels.bvn_cdf(x, y, rho)


def _cholesky_of(sigma) -> np.ndarray:
    chol = getattr(sigma, "cholesky", None)
    if chol is not None:
        # Copy: callers may hand out read-only cached factors, and the
        # compiled kernel takes a writable contiguous view.
        return np.array(chol, dtype=np.float64, order="C")
    mat = np.asarray(sigma, dtype=np.float64)
    return np.linalg.cholesky(mat)


def mvn_cdf(x, sigma, rng: RngStream, n: int) -> tuple[float, float]:
    """Monte Carlo estimate of P(Z <= x), Z ~ N(0, Sigma).

    Sequential-conditioning (separation-of-variables) estimator: unbiased,
    consumes exactly n*(d-1) uniforms from rng, returns (estimate, standard
    error of the mean).  Deterministic given (seed, stream_id, n).
    """
    xv = np.ascontiguousarray(np.asarray(x, dtype=np.float64).ravel())
    if not xv.flags.writeable:
        xv = xv.copy()
    chol = _cholesky_of(sigma)
    d = chol.shape[0]
    if xv.shape[0] != d:
        raise DimensionError(
            f"point has dimension {xv.shape[0]}, matrix has dimension {d}")
    n = int(n)
    if n < 1:
        raise DomainError("sample count must be at least 1")
    est, se = kernels.mvn_cdf_sov(xv, chol, rng.seed, rng.stream_id,
                                  rng.position, n)
    rng.skip(n * (d - 1))
    return float(est), float(se)


# ---------------------------------------------------------------------------
# adaptive Gauss-Kronrod quadrature

# 7-point Gauss / 15-point Kronrod pair (positive half; mirrored below)
_XGK_HALF = (0.991455371120813, 0.949107912342759, 0.864864423359769,
             0.741531185599394, 0.586087235467691, 0.405845151377397,
             0.207784955007898)
_WGK_HALF = (0.022935322010529, 0.063092092629979, 0.104790010322250,
             0.140653259715525, 0.169004726639267, 0.190350578064785,
             0.204432940075298)
_WGK_CENTER = 0.209482141084728
_WG_HALF = (0.129484966168870, 0.279705391489277, 0.381830050505119)
_WG_CENTER = 0.417959183673469

_NODES = np.array([-x for x in _XGK_HALF] + [0.0] + list(reversed(_XGK_HALF)))
_WGK = np.array(list(_WGK_HALF) + [_WGK_CENTER] + list(reversed(_WGK_HALF)))
_WG = np.zeros(15)
for _i, _w in zip((1, 3, 5), _WG_HALF):
    _WG[_i] = _w
    _WG[14 - _i] = _w
_WG[7] = _WG_CENTER
_EPS50 = 50.0 * np.finfo(np.float64).eps


def _panel(f, a, b, vectorized):
    mid = 0.5 * (a + b)
    h = 0.5 * (b - a)
    xs = mid + h * _NODES
    if vectorized:
        fs = np.asarray(f(xs), dtype=np.float64)
    else:
        fs = np.array([f(float(t)) for t in xs], dtype=np.float64)
    # Non-finite samples are reported as QuadratureError by the caller;
    # keep the doomed dot products from emitting runtime warnings first.
    with np.errstate(invalid="ignore", over="ignore"):
        fk = float(_WGK @ fs)
        fg = float(_WG @ fs)
        fabs_ = float(_WGK @ np.abs(fs))
        fasc = float(_WGK @ np.abs(fs - 0.5 * fk))
    value = h * fk
    resabs = h * fabs_
    resasc = h * fasc
    err = abs(h * (fk - fg))
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    err = max(err, _EPS50 * resabs)
    return value, err


def _transform_to_finite(f, a, b, vectorized):
    """Map an improper interval onto a finite one by rational substitution."""
    if a == -math.inf and b == math.inf:
        def g(t):
            onem = 1.0 - t * t
            return f(t / onem) * (1.0 + t * t) / (onem * onem)
        return g, -1.0, 1.0
    if b == math.inf:
        a0 = float(a)

        def g(t):
            onem = 1.0 - t
            return f(a0 + t / onem) / (onem * onem)
        return g, 0.0, 1.0
    if a == -math.inf:
        b0 = float(b)

        def g(t):
            onem = 1.0 - t
            return f(b0 - t / onem) / (onem * onem)
        return g, 0.0, 1.0
    return f, float(a), float(b)


def adaptive_quad(f, a: float, b: float, spec: QuadratureSpec | None = None,
                  vectorized: bool = False) -> tuple[float, float]:
    """Integrate f over (a, b); either endpoint may be infinite.

    Returns (value, error estimate) with |value - integral| bounded by
    max(abs_tol, rel_tol * |value|) on success.  Integrable endpoint
    singularities are fine (Kronrod nodes are interior); interior
    singularities must be handled by the caller splitting the range, and a
    non-finite node evaluation raises QuadratureError at once.  Pass
    ``vectorized=True`` when f accepts an ndarray of abscissae.

    Exhausting max_subdivisions raises QuadratureError carrying the best
    estimate in its ``value``/``error_estimate`` attributes.
    """
    if spec is None:
        spec = QuadratureSpec()
    a = float(a)
    b = float(b)
    if math.isnan(a) or math.isnan(b):
        raise DomainError("integration endpoints must not be NaN")
    if a == b:
        return 0.0, 0.0
    if a > b:
        raise DomainError("integration range must satisfy a <= b")
    g, lo, hi = _transform_to_finite(f, a, b, vectorized)

    value, err = _panel(g, lo, hi, vectorized)
    if not math.isfinite(value):
        raise QuadratureError(
            "non-finite integrand value; split the range at the singular point",
            value, err)
    heap = [(-err, 0, lo, hi, value, err)]
    total = value
    total_err = err
    seq = 0
    n_panels = 1
    while total_err > max(spec.abs_tol, spec.rel_tol * abs(total)):
        if n_panels >= spec.max_subdivisions:
            raise QuadratureError(
                f"max_subdivisions={spec.max_subdivisions} exhausted "
                f"(value={total!r}, error={total_err!r})",
                total, total_err)
        _, _, pa, pb, pv, pe = heapq.heappop(heap)
        total -= pv
        total_err -= pe
        pm = 0.5 * (pa + pb)
        for (qa, qb) in ((pa, pm), (pm, pb)):
            v, e = _panel(g, qa, qb, vectorized)
            if not math.isfinite(v):
                raise QuadratureError(
                    "non-finite integrand value; split the range at the "
                    "singular point", v, e)
            seq += 1
            heapq.heappush(heap, (-e, seq, qa, qb, v, e))
            total += v
            total_err += e
        n_panels += 1
        if n_panels % 64 == 0:
            # resync the incrementally tracked sums
            total = math.fsum(entry[4] for entry in heap)
            total_err = math.fsum(entry[5] for entry in heap)
    return total, max(total_err, 0.0)


def find_root(f, lo: float, hi: float, tol: float = 1e-12) -> float:
    """Brent's method on a bracketing interval [lo, hi]."""
    lo = float(lo)
    hi = float(hi)
    tol = float(tol)
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise DomainError("bracket must be finite with lo < hi")
    if not (tol > 0.0):
        raise DomainError("tol must be positive")
    a, b = lo, hi
    fa, fb = float(f(a)), float(f(b))
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0.0) == (fb > 0.0):
        raise BracketError(f"no sign change on [{lo}, {hi}]")
    c, fc = a, fa
    d = e = b - a
    eps = np.finfo(np.float64).eps
    for _ in range(200):
        if (fb > 0.0) == (fc > 0.0):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * eps * abs(b) + 0.5 * tol
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0.0:
            return b
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e = d
                d = p / q
            else:
                d = xm
                e = d
        else:
            d = xm
            e = d
        a, fa = b, fb
        if abs(d) > tol1:
            b += d
        else:
            b += tol1 if xm > 0.0 else -tol1
        fb = float(f(b))
    return b


def sample_std_normal(rng: RngStream) -> float:
    """One N(0,1) draw by inverse transform (one uniform consumed)."""
    return rng.normal()


def sample_std_exponential(rng: RngStream) -> float:
    """One Exp(1) draw by inverse transform (one uniform consumed)."""
    return rng.exponential()
