"""Kernel-level checks: counter-based RNG known answers, special-function
accuracy against mpmath, and agreement between the compiled and pure-Python
backends."""

import math

import mpmath as mp
import numpy as np
import pytest

import alphanorm._kernels_py as kpy
from alphanorm._backend import BACKEND, kernels

try:
    import alphanorm._kernels as kc
except ImportError:
    kc = None

mp.mp.dps = 40


# Published test vectors for Philox4x32 with 10 rounds: zero, all-ones,
# and pi-digits counter/key inputs.
PHILOX_KAT = [
    ((0, 0, 0, 0), (0, 0), (0x6627E8D5, 0xE169C58D, 0xBC57AC4C, 0x9B00DBD8)),
    (
        (0xFFFFFFFF, 0xFFFFFFFF, 0xFFFFFFFF, 0xFFFFFFFF),
        (0xFFFFFFFF, 0xFFFFFFFF),
        (0x408F276D, 0x41C83B0E, 0xA20BC7C6, 0x6D5451FD),
    ),
    (
        (0x243F6A88, 0x85A308D3, 0x13198A2E, 0x03707344),
        (0xA4093822, 0x299F31D0),
        (0xD16CFE09, 0x94FDCCEB, 0x5001E420, 0x24126EA1),
    ),
]


@pytest.mark.parametrize("counter,key,expected", PHILOX_KAT)
def test_philox_known_answers(counter, key, expected):
    got = kernels.philox4x32_10(*counter, *key)
    assert tuple(got) == expected


@pytest.mark.parametrize("counter,key,expected", PHILOX_KAT)
def test_philox_known_answers_python(counter, key, expected):
    got = kpy.philox4x32_10(*counter, *key)
    assert tuple(got) == expected


def test_uniforms_match_uniform_at():
    seed, stream, start, n = 42, 7, 13, 64
    block = kernels.uniforms(seed, stream, start, n)
    singles = [kernels.uniform_at(seed, stream, start + i) for i in range(n)]
    assert block.tolist() == singles


def test_uniforms_open_interval():
    u = kernels.uniforms(123, 0, 0, 10_000)
    assert np.all(u > 0.0)
    assert np.all(u < 1.0)


def test_uniforms_deterministic_and_stream_separated():
    a = kernels.uniforms(9, 1, 0, 100)
    b = kernels.uniforms(9, 1, 0, 100)
    c = kernels.uniforms(9, 2, 0, 100)
    d = kernels.uniforms(10, 1, 0, 100)
    assert a.tolist() == b.tolist()
    assert a.tolist() != c.tolist()
    assert a.tolist() != d.tolist()


def test_std_normals_are_quantile_transforms():
    seed, stream, start, n = 5, 3, 2, 50
    u = kernels.uniforms(seed, stream, start, n)
    z = kernels.std_normals(seed, stream, start, n)
    expected = [kernels.std_normal_quantile(float(ui)) for ui in u]
    assert z.tolist() == expected


def test_std_exponentials_are_log_transforms():
    seed, stream, start, n = 5, 3, 2, 50
    u = kernels.uniforms(seed, stream, start, n)
    e = kernels.std_exponentials(seed, stream, start, n)
    np.testing.assert_allclose(e, -np.log(u), rtol=1e-15)
    assert np.all(e > 0.0)


@pytest.mark.parametrize("x", [-6.0, -3.5, -1.0, -0.2, 0.0, 0.2, 0.5, 1.0, 2.7, 5.0])
def test_erf_accuracy(x):
    expected = float(mp.erf(x))
    got = kernels.erf(x)
    assert got == pytest.approx(expected, rel=5e-15, abs=1e-300)


@pytest.mark.parametrize("x", [-5.0, -1.0, 0.0, 0.5, 1.0, 3.0, 6.0, 9.0, 15.0, 25.0])
def test_erfc_accuracy(x):
    expected = float(mp.erfc(x))
    got = kernels.erfc(x)
    assert got == pytest.approx(expected, rel=5e-15, abs=1e-300)


def test_erfc_spot_value():
    # frozen mpmath reference
    assert kernels.erfc(9.0) == pytest.approx(4.1370317465138102381e-37, rel=5e-15)


def test_erfc_vec_matches_scalar():
    xs = np.linspace(-8.0, 26.0, 171)
    vec = kernels.erfc_vec(xs)
    sca = np.array([kernels.erfc(float(x)) for x in xs])
    np.testing.assert_allclose(vec, sca, rtol=1e-13)


@pytest.mark.parametrize(
    "x,expected",
    [
        (-20.0, 2.7536241186062336951e-89),
        (-8.0, 6.2209605742717841235e-16),
        (0.0, 0.5),
        (3.7, 0.99989220026652261174),
    ],
)
def test_std_normal_cdf_reference_values(x, expected):
    assert kernels.std_normal_cdf(x) == pytest.approx(expected, rel=1e-13)


def test_std_normal_cdf_grid_against_mpmath():
    for x in np.linspace(-10.0, 10.0, 81):
        expected = float(mp.ncdf(mp.mpf(float(x))))
        assert kernels.std_normal_cdf(float(x)) == pytest.approx(expected, rel=2e-14)


def test_std_normal_pdf_grid():
    for x in np.linspace(-12.0, 12.0, 49):
        expected = float(mp.npdf(mp.mpf(float(x))))
        assert kernels.std_normal_pdf(float(x)) == pytest.approx(expected, rel=5e-15)


@pytest.mark.parametrize(
    "u,expected",
    [
        (1e-12, -7.0344838253011319298),
        (0.975, 1.9599639845400542355),
    ],
)
def test_std_normal_quantile_reference_values(u, expected):
    assert kernels.std_normal_quantile(u) == pytest.approx(expected, rel=1e-14)


def test_std_normal_quantile_round_trip():
    for u in [1e-300, 1e-30, 1e-8, 0.01, 0.2, 0.5, 0.8, 0.99, 1 - 1e-8, 1 - 1e-14]:
        z = kernels.std_normal_quantile(u)
        assert kernels.std_normal_cdf(z) == pytest.approx(u, rel=4e-14)


def test_std_normal_quantile_symmetry():
    for u in [0.01, 0.1, 0.25, 0.4]:
        assert kernels.std_normal_quantile(u) == pytest.approx(
            -kernels.std_normal_quantile(1.0 - u), rel=0, abs=5e-13
        )
    assert kernels.std_normal_quantile(0.5) == 0.0


@pytest.mark.parametrize(
    "x,expected",
    [
        (0.5, 0.57236494292470008707),
        (1.0, 0.0),
        (2.0, 0.0),
        (12.3, 18.238983407092241942),
    ],
)
def test_log_gamma_reference_values(x, expected):
    assert kernels.log_gamma(x) == pytest.approx(expected, rel=1e-13, abs=1e-13)


def test_log_gamma_grid_against_mpmath():
    for x in [0.05, 0.1, 0.31, 0.5, 0.9, 1.5, 2.5, 3.7, 7.0, 11.5, 30.0, 171.0]:
        expected = float(mp.loggamma(mp.mpf(x)))
        assert kernels.log_gamma(x) == pytest.approx(expected, rel=1e-13, abs=1e-13)


def test_log_gamma_recurrence():
    # Gamma(x+1) = x Gamma(x), so lgamma(x+1) - lgamma(x) = ln x.
    for x in [0.2, 0.7, 1.3, 4.5, 9.1]:
        diff = kernels.log_gamma(x + 1.0) - kernels.log_gamma(x)
        assert diff == pytest.approx(math.log(x), rel=1e-12)


BVN_REFERENCE = [
    # frozen from a 1D reduction of the bivariate normal integral at 30 digits
    (0.5, -0.3, 0.6, 0.34362253011121080987),
    (1.2, 0.8, -0.4, 0.67957488311559166936),
    (-1.0, -1.5, 0.85, 0.057134715424166101414),
    (2.0, 0.3, 0.35, 0.61137842327052865051),
    (0.0, 0.0, -0.9, 0.071783146564353127268),
]


@pytest.mark.parametrize("x,y,rho,expected", BVN_REFERENCE)
def test_bvn_cdf_reference_values(x, y, rho, expected):
    assert kernels.bvn_cdf(x, y, rho) == pytest.approx(expected, rel=0, abs=5e-15)


def test_bvn_cdf_independence_and_symmetry():
    for x, y in [(0.3, -1.1), (1.7, 0.4), (-2.0, -0.5)]:
        prod = kernels.std_normal_cdf(x) * kernels.std_normal_cdf(y)
        assert kernels.bvn_cdf(x, y, 0.0) == pytest.approx(prod, rel=1e-14)
        for rho in [-0.8, 0.3, 0.95]:
            assert kernels.bvn_cdf(x, y, rho) == pytest.approx(
                kernels.bvn_cdf(y, x, rho), rel=0, abs=2e-16
            )


def test_bvn_cdf_orthant_identity():
    for rho in [-0.95, -0.5, -0.1, 0.2, 0.6, 0.99]:
        expected = 0.25 + math.asin(rho) / (2.0 * math.pi)
        assert kernels.bvn_cdf(0.0, 0.0, rho) == pytest.approx(expected, abs=5e-15)


def test_mvn_cdf_sov_bivariate_agrees_with_bvn():
    rho = 0.45
    chol = np.linalg.cholesky(np.array([[1.0, rho], [rho, 1.0]]))
    upper = np.array([0.6, -0.2])
    est, se = kernels.mvn_cdf_sov(upper, chol, 11, 4, 0, 40_000)
    exact = kernels.bvn_cdf(0.6, -0.2, rho)
    assert se > 0.0
    assert abs(est - exact) < 4.0 * se + 1e-12


def test_mvn_cdf_sov_deterministic():
    sig = np.array([[1.0, 0.3, 0.1], [0.3, 1.0, -0.2], [0.1, -0.2, 1.0]])
    chol = np.linalg.cholesky(sig)
    upper = np.array([0.5, 0.0, -0.4])
    a = kernels.mvn_cdf_sov(upper, chol, 3, 9, 0, 5000)
    b = kernels.mvn_cdf_sov(upper, chol, 3, 9, 0, 5000)
    assert a == b


needs_both = pytest.mark.skipif(kc is None, reason="compiled backend not built")


@needs_both
def test_backends_agree_scalar_bitwise():
    xs = [-7.5, -2.0, -0.3, 0.0, 0.7, 1.9, 6.0]
    for x in xs:
        assert kc.erf(x) == kpy.erf(x)
        assert kc.erfc(x) == kpy.erfc(x)
        assert kc.std_normal_cdf(x) == kpy.std_normal_cdf(x)
        assert kc.std_normal_pdf(x) == kpy.std_normal_pdf(x)
    for u in [1e-14, 0.02, 0.5, 0.77, 1 - 1e-10]:
        assert kc.std_normal_quantile(u) == kpy.std_normal_quantile(u)
    for t in [0.1, 0.5, 1.0, 4.2, 50.0]:
        assert kc.log_gamma(t) == kpy.log_gamma(t)
    for x, y, rho, _ in BVN_REFERENCE:
        assert kc.bvn_cdf(x, y, rho) == kpy.bvn_cdf(x, y, rho)


@needs_both
def test_backends_agree_rng():
    # The uniform stream is pure integer arithmetic and must match bitwise.
    assert kc.uniforms(42, 1, 0, 256).tolist() == kpy.uniforms(42, 1, 0, 256).tolist()
    # Batch transforms go through numpy in the python backend and libm in the
    # compiled one; roundings may differ by a few ulp.
    np.testing.assert_allclose(
        kc.std_normals(7, 2, 5, 128), kpy.std_normals(7, 2, 5, 128), rtol=1e-14
    )
    np.testing.assert_allclose(
        kc.std_exponentials(7, 2, 5, 128),
        kpy.std_exponentials(7, 2, 5, 128),
        rtol=3e-16,
    )


@needs_both
def test_backends_agree_vectorized():
    xs = np.linspace(-8.0, 8.0, 401)
    np.testing.assert_allclose(kc.erfc_vec(xs), kpy.erfc_vec(xs), rtol=1e-12)
    np.testing.assert_allclose(
        kc.std_normal_cdf_vec(xs), kpy.std_normal_cdf_vec(xs), rtol=1e-12, atol=1e-300
    )
    np.testing.assert_allclose(
        kc.std_normal_pdf_vec(xs), kpy.std_normal_pdf_vec(xs), rtol=1e-12, atol=1e-300
    )
    us = np.linspace(1e-6, 1.0 - 1e-6, 301)
    np.testing.assert_allclose(
        kc.std_normal_quantile_vec(us), kpy.std_normal_quantile_vec(us), rtol=1e-12
    )


@needs_both
def test_backends_agree_mvn_sov():
    sig = np.array([[1.0, 0.5, 0.2], [0.5, 1.0, 0.5], [0.2, 0.5, 1.0]])
    chol = np.linalg.cholesky(sig)
    upper = np.array([0.3, -0.1, 1.2])
    a = kc.mvn_cdf_sov(upper.copy(), chol.copy(), 17, 6, 0, 8000)
    b = kpy.mvn_cdf_sov(upper.copy(), chol.copy(), 17, 6, 0, 8000)
    assert a[0] == pytest.approx(b[0], rel=1e-12)
    assert a[1] == pytest.approx(b[1], rel=1e-12)


def test_backend_identifier_is_consistent():
    assert BACKEND in ("compiled", "python")
    assert kernels.BACKEND == BACKEND
