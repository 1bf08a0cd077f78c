# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels.

Twin of ``alphanorm._kernels_py``: the algorithms, iteration counts, RNG
stream layout and clamp constants are identical; see that module's docstring
for the algorithm notes.  Batch entry points run tight scalar loops instead
of numpy vectorization.
"""

from libc.math cimport (asin, exp, fabs, INFINITY, isfinite, isnan, log,
                        NAN, sin, sqrt)
from libc.stdint cimport uint32_t, uint64_t

import numpy as np

BACKEND = "compiled"

cdef double _SQRT_PI = sqrt(3.141592653589793)
cdef double _PI = 3.141592653589793
cdef double _SQRT_2 = sqrt(2.0)
cdef double _SQRT_2PI = sqrt(2.0 * _PI)
cdef double _INV_SQRT_2PI = 1.0 / _SQRT_2PI
cdef double _TWO_OVER_SQRT_PI = 2.0 / _SQRT_PI
cdef double _LN_SQRT_2PI = 0.5 * log(2.0 * _PI)

DEF ERF_SERIES_TERMS = 48
DEF ERFC_CF_ITERS = 96
DEF QUANTILE_STEPS = 4
DEF SPOUGE_A = 11

cdef double _P_LO = 1e-300
cdef double _P_HI = 1.0 - 2.0 ** -53

cdef double[ERF_SERIES_TERMS] _ERF_C
cdef double[SPOUGE_A] _SPOUGE_C


cdef void _init_tables():
    cdef int n, k
    cdef double fact, c
    fact = 1.0
    for n in range(ERF_SERIES_TERMS):
        if n > 0:
            fact *= n
        c = 1.0 / (fact * (2 * n + 1))
        _ERF_C[n] = c if n % 2 == 0 else -c
    _SPOUGE_C[0] = sqrt(2.0 * _PI)
    fact = 1.0
    for k in range(1, SPOUGE_A):
        if k > 1:
            fact *= -(k - 1)
        _SPOUGE_C[k] = exp((SPOUGE_A - k) + (k - 0.5) * log(<double>(SPOUGE_A - k))) / fact

_init_tables()

cdef double[3] _GL_X6
cdef double[3] _GL_W6
cdef double[6] _GL_X12
cdef double[6] _GL_W12
cdef double[10] _GL_X20
cdef double[10] _GL_W20

_GL_X6[:] = [-0.9324695142031522, -0.6612093864662647, -0.2386191860831970]
_GL_W6[:] = [0.1713244923791705, 0.3607615730481384, 0.4679139345726904]
_GL_X12[:] = [-0.9815606342467191, -0.9041172563704750, -0.7699026741943050,
              -0.5873179542866171, -0.3678314989981802, -0.1252334085114692]
_GL_W12[:] = [0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
              0.2031674267230659, 0.2334925365383547, 0.2491470458134029]
_GL_X20[:] = [-0.9931285991850949, -0.9639719272779138, -0.9122344282513259,
              -0.8391169718222188, -0.7463319064601508, -0.6360536807265150,
              -0.5108670019508271, -0.3737060887154196, -0.2277858511416451,
              -0.07652652113349733]
_GL_W20[:] = [0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
              0.08327674157670475, 0.1019301198172404, 0.1181945319615184,
              0.1316886384491766, 0.1420961093183821, 0.1491729864726037,
              0.1527533871307259]


# ---------------------------------------------------------------------------
# scalar special functions

cdef double _erf_small(double x) nogil:
    cdef double t = x * x
    cdef double acc = 0.0
    cdef int i
    for i in range(ERF_SERIES_TERMS - 1, -1, -1):
        acc = acc * t + _ERF_C[i]
    return _TWO_OVER_SQRT_PI * x * acc


cdef double _erfc_cf_factor(double x) nogil:
    cdef double f = x
    cdef double c = x
    cdef double d = 0.0
    cdef double a
    cdef int i
    for i in range(1, ERFC_CF_ITERS + 1):
        a = 0.5 * i
        d = x + a * d
        d = 1.0 / d
        c = x + a / c
        f *= c * d
    return 1.0 / f


cdef double _erfc(double x) nogil:
    if isnan(x):
        return x
    if x >= 0.0:
        if x <= 2.0:
            return 1.0 - _erf_small(x)
        if x > 27.5:
            return 0.0
        return exp(-x * x) / _SQRT_PI * _erfc_cf_factor(x)
    if x >= -2.0:
        return 1.0 + _erf_small(-x)
    if x < -27.5:
        return 2.0
    return 2.0 - exp(-x * x) / _SQRT_PI * _erfc_cf_factor(-x)


cdef double _erf(double x) nogil:
    if isnan(x):
        return x
    if -2.0 <= x <= 2.0:
        return _erf_small(x)
    if x > 0.0:
        return 1.0 - _erfc(x)
    return -1.0 + _erfc(-x)


cdef double _norm_cdf(double x) nogil:
    return 0.5 * _erfc(-x / _SQRT_2)


cdef double _norm_pdf(double x) nogil:
    return _INV_SQRT_2PI * exp(-0.5 * x * x)


cdef double _quantile_lower(double u) nogil:
    cdef double q = u - 0.5
    cdef double x, t, err, r
    cdef int i
    if q >= -0.425:
        x = q * _SQRT_2PI
    else:
        t = sqrt(-2.0 * log(u))
        x = -(t - (_LN_SQRT_2PI + log(t)) / t)
    for i in range(QUANTILE_STEPS):
        err = _norm_cdf(x) - u
        r = err / _norm_pdf(x)
        x -= r / (1.0 + 0.5 * r * x)
    return x


cdef double _norm_quantile(double u) nogil:
    if u <= 0.5:
        return _quantile_lower(u)
    return -_quantile_lower(1.0 - u)


cdef double _spouge(double x) nogil:
    cdef double acc = _SPOUGE_C[0]
    cdef double base
    cdef int k
    for k in range(1, SPOUGE_A):
        acc += _SPOUGE_C[k] / (x - 1.0 + k)
    base = x - 1.0 + SPOUGE_A
    return (x - 0.5) * log(base) - base + log(acc)


cdef double _log_gamma(double x) nogil:
    if x >= 0.5:
        return _spouge(x)
    return log(_PI / sin(_PI * x)) - _spouge(1.0 - x)


def erf(double x):
    return _erf(x)


def erfc(double x):
    return _erfc(x)


def std_normal_cdf(double x):
    return _norm_cdf(x)


def std_normal_pdf(double x):
    return _norm_pdf(x)


def std_normal_quantile(double u):
    return _norm_quantile(u)


def log_gamma(double x):
    return _log_gamma(x)


# ---------------------------------------------------------------------------
# bivariate normal cdf (Drezner-Wesolowsky / Genz BVND)

cdef double _bvnu(double dh, double dk, double r) nogil:
    cdef double h, k, hk, tp, bvn, hs, asr, sn, ass, a, bs, c, d, b, sp, rs, ep
    cdef double x, xsq
    cdef int i, npts, s
    cdef const double* xs
    cdef const double* ws
    if dh == INFINITY or dk == INFINITY:
        return 0.0
    if dh == -INFINITY:
        return 1.0 if dk == -INFINITY else _norm_cdf(-dk)
    if dk == -INFINITY:
        return _norm_cdf(-dh)
    h = dh
    k = dk
    hk = h * k
    tp = 2.0 * _PI
    bvn = 0.0
    if fabs(r) < 0.925:
        if r != 0.0:
            hs = 0.5 * (h * h + k * k)
            asr = asin(r)
            if fabs(r) < 0.3:
                xs = &_GL_X6[0]; ws = &_GL_W6[0]; npts = 3
            elif fabs(r) < 0.75:
                xs = &_GL_X12[0]; ws = &_GL_W12[0]; npts = 6
            else:
                xs = &_GL_X20[0]; ws = &_GL_W20[0]; npts = 10
            for i in range(npts):
                for s in range(2):
                    sn = sin(0.5 * asr * ((2 * s - 1) * xs[i] + 1.0))
                    bvn += ws[i] * exp((sn * hk - hs) / (1.0 - sn * sn))
            bvn = bvn * asr / (2.0 * tp)
        bvn += _norm_cdf(-h) * _norm_cdf(-k)
    else:
        if r < 0.0:
            k = -k
            hk = -hk
        if fabs(r) < 1.0:
            ass = (1.0 - r) * (1.0 + r)
            a = sqrt(ass)
            bs = (h - k) * (h - k)
            c = 0.125 * (4.0 - hk)
            d = 0.0625 * (12.0 - hk)
            asr = -0.5 * (bs / ass + hk)
            if asr > -100.0:
                bvn = (a * exp(asr)
                       * (1.0 - c * (bs - ass) * (1.0 - 0.2 * d * bs) / 3.0
                          + 0.2 * c * d * ass * ass))
            if -hk < 100.0:
                b = sqrt(bs)
                sp = _SQRT_2PI * _norm_cdf(-b / a)
                bvn -= (exp(-0.5 * hk) * sp * b
                        * (1.0 - c * bs * (1.0 - 0.2 * d * bs) / 3.0))
            a *= 0.5
            for i in range(10):
                for s in range(2):
                    x = a * ((2 * s - 1) * _GL_X20[i] + 1.0)
                    xsq = x * x
                    asr = -0.5 * (bs / xsq + hk)
                    if asr > -100.0:
                        rs = sqrt(1.0 - xsq)
                        sp = 1.0 + c * xsq * (1.0 + d * xsq)
                        ep = exp(-0.5 * hk * (1.0 - rs) / (1.0 + rs)) / rs
                        bvn += a * _GL_W20[i] * exp(asr) * (ep - sp)
            bvn = -bvn / tp
        if r > 0.0:
            bvn += _norm_cdf(-(h if h > k else k))
        else:
            bvn = -bvn
            if k > h:
                bvn += _norm_cdf(k) - _norm_cdf(h)
    if bvn < 0.0:
        return 0.0
    if bvn > 1.0:
        return 1.0
    return bvn


def bvn_cdf(double x, double y, double rho):
    """P(Z1 <= x, Z2 <= y), correlation rho in [-1, 1]."""
    cdef double s
    if rho >= 1.0:
        return _norm_cdf(x if x < y else y)
    if rho <= -1.0:
        s = _norm_cdf(x) + _norm_cdf(y) - 1.0
        return s if s > 0.0 else 0.0
    return _bvnu(-x, -y, rho)


# ---------------------------------------------------------------------------
# Philox4x32-10 counter-based RNG

cdef uint32_t _PHILOX_M0 = 0xD2511F53u
cdef uint32_t _PHILOX_M1 = 0xCD9E8D57u
cdef uint32_t _PHILOX_W0 = 0x9E3779B9u
cdef uint32_t _PHILOX_W1 = 0xBB67AE85u
cdef double _INV_2_53 = 2.0 ** -53


cdef void _philox_block(uint64_t seed, uint64_t stream, uint64_t block,
                        double* out2) nogil:
    cdef uint32_t x0 = <uint32_t>block
    cdef uint32_t x1 = <uint32_t>(block >> 32)
    cdef uint32_t x2 = <uint32_t>stream
    cdef uint32_t x3 = <uint32_t>(stream >> 32)
    cdef uint32_t k0 = <uint32_t>seed
    cdef uint32_t k1 = <uint32_t>(seed >> 32)
    cdef uint64_t p0, p1, u_a, u_b
    cdef uint32_t y0, y1, y2, y3
    cdef int i
    for i in range(10):
        p0 = <uint64_t>_PHILOX_M0 * x0
        p1 = <uint64_t>_PHILOX_M1 * x2
        y0 = (<uint32_t>(p1 >> 32)) ^ x1 ^ k0
        y1 = <uint32_t>p1
        y2 = (<uint32_t>(p0 >> 32)) ^ x3 ^ k1
        y3 = <uint32_t>p0
        x0 = y0; x1 = y1; x2 = y2; x3 = y3
        k0 = k0 + _PHILOX_W0
        k1 = k1 + _PHILOX_W1
    u_a = ((<uint64_t>x0) << 32) | x1
    u_b = ((<uint64_t>x2) << 32) | x3
    out2[0] = (<double>(u_a >> 11) + 0.5) * _INV_2_53
    out2[1] = (<double>(u_b >> 11) + 0.5) * _INV_2_53


def philox4x32_10(c0, c1, c2, c3, k0, k1):
    """One Philox4x32-10 block; all arguments and results uint32."""
    cdef uint32_t x0 = <uint32_t>(<uint64_t>c0)
    cdef uint32_t x1 = <uint32_t>(<uint64_t>c1)
    cdef uint32_t x2 = <uint32_t>(<uint64_t>c2)
    cdef uint32_t x3 = <uint32_t>(<uint64_t>c3)
    cdef uint32_t kk0 = <uint32_t>(<uint64_t>k0)
    cdef uint32_t kk1 = <uint32_t>(<uint64_t>k1)
    cdef uint64_t p0, p1
    cdef uint32_t y0, y1, y2, y3
    cdef int i
    for i in range(10):
        p0 = <uint64_t>_PHILOX_M0 * x0
        p1 = <uint64_t>_PHILOX_M1 * x2
        y0 = (<uint32_t>(p1 >> 32)) ^ x1 ^ kk0
        y1 = <uint32_t>p1
        y2 = (<uint32_t>(p0 >> 32)) ^ x3 ^ kk1
        y3 = <uint32_t>p0
        x0 = y0; x1 = y1; x2 = y2; x3 = y3
        kk0 = kk0 + _PHILOX_W0
        kk1 = kk1 + _PHILOX_W1
    return (x0, x1, x2, x3)


def uniform_at(seed, stream, index):
    """The index-th uniform double of the stream, in (0, 1)."""
    cdef uint64_t idx = <uint64_t>index
    cdef double[2] buf
    _philox_block(<uint64_t>seed, <uint64_t>stream, idx >> 1, buf)
    return buf[idx & 1]


def uniforms(seed, stream, start, n):
    """n uniform doubles at flat indices start .. start+n-1."""
    cdef Py_ssize_t m = <Py_ssize_t>n
    out = np.empty(m, dtype=np.float64)
    if m <= 0:
        return out
    cdef double[::1] ov = out
    cdef uint64_t sd = <uint64_t>seed
    cdef uint64_t st = <uint64_t>stream
    cdef uint64_t k0 = <uint64_t>start
    cdef uint64_t block
    cdef double[2] buf
    cdef Py_ssize_t i = 0
    cdef uint64_t k
    with nogil:
        k = k0
        while i < m:
            block = k >> 1
            _philox_block(sd, st, block, buf)
            if (k & 1) == 0:
                ov[i] = buf[0]
                i += 1
                k += 1
                if i < m:
                    ov[i] = buf[1]
                    i += 1
                    k += 1
            else:
                ov[i] = buf[1]
                i += 1
                k += 1
    return out


def std_normals(seed, stream, start, n):
    out = uniforms(seed, stream, start, n)
    cdef double[::1] ov = out
    cdef Py_ssize_t i, m = ov.shape[0]
    with nogil:
        for i in range(m):
            ov[i] = _norm_quantile(ov[i])
    return out


def std_exponentials(seed, stream, start, n):
    out = uniforms(seed, stream, start, n)
    cdef double[::1] ov = out
    cdef Py_ssize_t i, m = ov.shape[0]
    with nogil:
        for i in range(m):
            ov[i] = -log(ov[i])
    return out


# ---------------------------------------------------------------------------
# vectorized special functions (scalar loops on contiguous buffers)


def erfc_vec(x):
    arr = np.ascontiguousarray(x, dtype=np.float64)
    shape = arr.shape
    flat = arr.ravel()
    out = np.empty_like(flat)
    cdef double[::1] iv = flat
    cdef double[::1] ov = out
    cdef Py_ssize_t i, m = iv.shape[0]
    with nogil:
        for i in range(m):
            ov[i] = _erfc(iv[i])
    return out.reshape(shape)


def std_normal_cdf_vec(x):
    arr = np.ascontiguousarray(x, dtype=np.float64)
    shape = arr.shape
    flat = arr.ravel()
    out = np.empty_like(flat)
    cdef double[::1] iv = flat
    cdef double[::1] ov = out
    cdef Py_ssize_t i, m = iv.shape[0]
    with nogil:
        for i in range(m):
            ov[i] = _norm_cdf(iv[i])
    return out.reshape(shape)


def std_normal_pdf_vec(x):
    arr = np.ascontiguousarray(x, dtype=np.float64)
    shape = arr.shape
    flat = arr.ravel()
    out = np.empty_like(flat)
    cdef double[::1] iv = flat
    cdef double[::1] ov = out
    cdef Py_ssize_t i, m = iv.shape[0]
    with nogil:
        for i in range(m):
            ov[i] = _norm_pdf(iv[i])
    return out.reshape(shape)


def std_normal_quantile_vec(u):
    arr = np.ascontiguousarray(u, dtype=np.float64)
    shape = arr.shape
    flat = arr.ravel()
    out = np.empty_like(flat)
    cdef double[::1] iv = flat
    cdef double[::1] ov = out
    cdef Py_ssize_t i, m = iv.shape[0]
    with nogil:
        for i in range(m):
            ov[i] = _norm_quantile(iv[i])
    return out.reshape(shape)


# ---------------------------------------------------------------------------
# sequential-conditioning Monte Carlo estimator for P(Z <= upper), Z ~ N(0, Sigma)


def mvn_cdf_sov(upper, chol, seed, stream, start, n):
    """Genz sequential-conditioning estimate of the MVN orthant probability.

    Consumes exactly n*(d-1) uniforms at flat indices start onward; returns
    (estimate, standard error of the mean).
    """
    up = np.ascontiguousarray(upper, dtype=np.float64)
    lmat = np.ascontiguousarray(chol, dtype=np.float64)
    cdef Py_ssize_t d = up.shape[0]
    cdef Py_ssize_t nn = <Py_ssize_t>n
    cdef double[::1] bv = up
    cdef double[:, ::1] lv = lmat
    if d == 1:
        return _norm_cdf(bv[0] / lv[0, 0]), 0.0
    ybuf = np.empty(d, dtype=np.float64)
    cdef double[::1] yv = ybuf
    cdef uint64_t sd = <uint64_t>seed
    cdef uint64_t st = <uint64_t>stream
    cdef uint64_t kbase = <uint64_t>start
    cdef double e1 = _norm_cdf(bv[0] / lv[0, 0])
    cdef double total = 0.0
    cdef double total_sq = 0.0
    cdef double f, e_prev, e_i, arg, num, w
    cdef double[2] buf
    cdef uint64_t k
    cdef Py_ssize_t s, i, j
    cdef double mean, var, se
    with nogil:
        for s in range(nn):
            k = kbase + (<uint64_t>s) * (d - 1)
            f = e1
            e_prev = e1
            for i in range(1, d):
                _philox_block(sd, st, k >> 1, buf)
                w = buf[k & 1]
                k += 1
                arg = w * e_prev
                if arg < _P_LO:
                    arg = _P_LO
                elif arg > _P_HI:
                    arg = _P_HI
                yv[i - 1] = _norm_quantile(arg)
                num = bv[i]
                for j in range(i):
                    num -= lv[i, j] * yv[j]
                e_i = _norm_cdf(num / lv[i, i])
                f *= e_i
                e_prev = e_i
            total += f
            total_sq += f * f
    mean = total / nn
    se = 0.0
    if nn > 1:
        var = total_sq - nn * mean * mean
        if var < 0.0:
            var = 0.0
        var /= (nn - 1)
        se = sqrt(var / nn)
    return mean, se
