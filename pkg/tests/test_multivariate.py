"""Checks for the correlation-matrix container, the Gaussian copula, and the
multivariate distribution built on top of them."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alphanorm import (
    AlphaNormal,
    CorrelationMatrix,
    MultivariateAlphaNormal,
    bivariate_pdf,
    gauss_copula,
    gauss_copula_with_error,
    numerics,
    parse_correlation_csv,
)
from alphanorm.errors import (
    DimensionError,
    DomainError,
    MatrixValidationError,
    SingularPointError,
)
from alphanorm.numerics import QuadratureSpec, RngStream, adaptive_quad


# ---------------------------------------------------------------------------
# CorrelationMatrix


def test_matrix_accepts_valid_input():
    m = CorrelationMatrix([[1.0, 0.5], [0.5, 1.0]])
    assert m.dim == 2
    np.testing.assert_array_equal(m.entries, [[1.0, 0.5], [0.5, 1.0]])


def test_matrix_rejects_non_square():
    with pytest.raises(MatrixValidationError):
        CorrelationMatrix([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])


def test_matrix_rejects_asymmetry():
    with pytest.raises(MatrixValidationError):
        CorrelationMatrix([[1.0, 0.5], [0.2, 1.0]])


def test_matrix_symmetrizes_roundoff():
    eps = 1e-14
    m = CorrelationMatrix([[1.0, 0.5 + eps], [0.5, 1.0]])
    assert m.entries[0, 1] == m.entries[1, 0]


def test_matrix_rejects_bad_diagonal():
    with pytest.raises(MatrixValidationError):
        CorrelationMatrix([[1.1, 0.0], [0.0, 1.0]])


def test_matrix_rejects_out_of_range_entries():
    with pytest.raises(MatrixValidationError):
        CorrelationMatrix([[1.0, 1.2], [1.2, 1.0]])


def test_matrix_rejects_non_positive_definite():
    with pytest.raises(MatrixValidationError):
        CorrelationMatrix([[1.0, 1.0], [1.0, 1.0]])
    with pytest.raises(MatrixValidationError):
        CorrelationMatrix(
            [[1.0, 0.9, -0.9], [0.9, 1.0, 0.9], [-0.9, 0.9, 1.0]]
        )


def test_matrix_rejects_non_finite():
    with pytest.raises(MatrixValidationError):
        CorrelationMatrix([[1.0, math.nan], [math.nan, 1.0]])


def test_matrix_entries_read_only():
    m = CorrelationMatrix.identity(2)
    with pytest.raises(ValueError):
        m.entries[0, 1] = 0.5
    with pytest.raises(ValueError):
        m.cholesky[0, 0] = 2.0


def test_matrix_cholesky_reconstructs():
    m = CorrelationMatrix.equicorrelated(4, 0.3)
    chol = m.cholesky
    np.testing.assert_allclose(chol @ chol.T, m.entries, atol=1e-14)
    assert np.all(np.triu(chol, 1) == 0.0)


def test_matrix_log_det():
    rho = 0.6
    m = CorrelationMatrix.bivariate(rho)
    assert m.log_det() == pytest.approx(math.log(1 - rho * rho), rel=1e-14)


def test_matrix_constructors():
    eye = CorrelationMatrix.identity(3)
    np.testing.assert_array_equal(eye.entries, np.eye(3))
    bi = CorrelationMatrix.bivariate(-0.4)
    assert bi.entries[0, 1] == -0.4
    eq = CorrelationMatrix.equicorrelated(3, 0.5)
    assert eq.entries[0, 2] == 0.5
    with pytest.raises(MatrixValidationError):
        CorrelationMatrix.bivariate(1.0)
    with pytest.raises(MatrixValidationError):
        # Equicorrelation must exceed -1/(d-1) to stay positive definite.
        CorrelationMatrix.equicorrelated(3, -0.5)


def test_matrix_submatrix():
    m = CorrelationMatrix(
        [[1.0, 0.2, 0.4], [0.2, 1.0, -0.1], [0.4, -0.1, 1.0]]
    )
    sub = m.submatrix([0, 2])
    assert sub.dim == 2
    assert sub.entries[0, 1] == 0.4


def test_matrix_equality_and_hash():
    a = CorrelationMatrix.bivariate(0.3)
    b = CorrelationMatrix.bivariate(0.3)
    c = CorrelationMatrix.bivariate(0.4)
    assert a == b
    assert hash(a) == hash(b)
    assert a != c


def test_parse_correlation_csv():
    m = parse_correlation_csv("2\n1.0,0.5\n0.5,1.0\n")
    assert m.entries[0, 1] == 0.5


@pytest.mark.parametrize(
    "text",
    [
        "x\n1.0\n",  # non-integer header
        "2\n1.0,0.5\n",  # missing row
        "2\n1.0,0.5\n0.5,1.0,0.0\n",  # wrong row width
        "2\n1.0,zebra\n0.5,1.0\n",  # non-numeric cell
    ],
)
def test_parse_correlation_csv_errors(text):
    with pytest.raises(MatrixValidationError):
        parse_correlation_csv(text)


# ---------------------------------------------------------------------------
# Gaussian copula


def test_copula_independence_is_product():
    eye = CorrelationMatrix.identity(3)
    u = [0.3, 0.7, 0.9]
    assert gauss_copula(eye, u) == pytest.approx(0.3 * 0.7 * 0.9, rel=1e-12)


def test_copula_grounded():
    m = CorrelationMatrix.equicorrelated(3, 0.4)
    assert gauss_copula(m, [0.0, 0.5, 0.9]) == 0.0


def test_copula_margins_are_uniform():
    m = CorrelationMatrix.bivariate(0.7)
    for u in [0.1, 0.42, 0.88]:
        assert gauss_copula(m, [u, 1.0]) == pytest.approx(u, rel=1e-12)
        assert gauss_copula(m, [1.0, u]) == pytest.approx(u, rel=1e-12)
    assert gauss_copula(m, [1.0, 1.0]) == 1.0


def test_copula_bivariate_orthant():
    for rho in [-0.9, -0.5, 0.0, 0.5, 0.9]:
        m = CorrelationMatrix.bivariate(rho)
        expected = 0.25 + math.asin(rho) / (2.0 * math.pi)
        assert gauss_copula(m, [0.5, 0.5]) == pytest.approx(expected, abs=1e-14)


def test_copula_frechet_bounds():
    m = CorrelationMatrix.bivariate(0.8)
    for u1 in [0.2, 0.5, 0.9]:
        for u2 in [0.3, 0.6]:
            c = gauss_copula(m, [u1, u2])
            assert max(u1 + u2 - 1.0, 0.0) - 1e-12 <= c <= min(u1, u2) + 1e-12


@settings(max_examples=100, deadline=None)
@given(
    rho=st.floats(-0.95, 0.95),
    a1=st.floats(0.05, 0.9),
    a2=st.floats(0.05, 0.9),
    w1=st.floats(0.01, 0.1),
    w2=st.floats(0.01, 0.1),
)
def test_copula_two_increasing(rho, a1, a2, w1, w2):
    # Rectangle mass C(b1,b2) - C(a1,b2) - C(b1,a2) + C(a1,a2) >= 0.
    m = CorrelationMatrix.bivariate(rho)
    b1, b2 = a1 + w1, a2 + w2
    mass = (
        gauss_copula(m, [b1, b2])
        - gauss_copula(m, [a1, b2])
        - gauss_copula(m, [b1, a2])
        + gauss_copula(m, [a1, a2])
    )
    assert mass >= -1e-12


def test_copula_trivariate_monte_carlo():
    m = CorrelationMatrix(
        [[1.0, 0.5, 0.3], [0.5, 1.0, -0.2], [0.3, -0.2, 1.0]]
    )
    # Orthant closed form frozen from the pairwise arcsine identity.
    exact = 0.17488978345959250639
    value, se = gauss_copula_with_error(m, [0.5, 0.5, 0.5])
    assert se > 0.0
    assert abs(value - exact) < 4.0 * se


def test_copula_trivariate_deterministic_default():
    m = CorrelationMatrix.equicorrelated(3, 0.25)
    u = [0.4, 0.6, 0.7]
    assert gauss_copula(m, u) == gauss_copula(m, u)


def test_copula_exact_error_for_low_dimensions():
    m = CorrelationMatrix.bivariate(0.5)
    value, se = gauss_copula_with_error(m, [0.3, 0.8])
    assert se == 0.0
    value1, se1 = gauss_copula_with_error(CorrelationMatrix.identity(3),
                                          [0.3, 1.0, 1.0])
    assert (value1, se1) == (pytest.approx(0.3, rel=1e-14), 0.0)


def test_copula_validation():
    m = CorrelationMatrix.bivariate(0.5)
    with pytest.raises(DomainError):
        gauss_copula(m, [0.5, 1.2])
    with pytest.raises(DomainError):
        gauss_copula(m, [-0.1, 0.5])
    with pytest.raises(DimensionError):
        gauss_copula(m, [0.5, 0.5, 0.5])


# ---------------------------------------------------------------------------
# MultivariateAlphaNormal


def test_mv_construction_and_margins():
    m = MultivariateAlphaNormal(CorrelationMatrix.bivariate(0.5), 3.0)
    assert m.dim == 2
    assert m.margin() == AlphaNormal(3.0)
    with pytest.raises(DomainError):
        MultivariateAlphaNormal(CorrelationMatrix.identity(2), -1.0)


def test_mv_joint_cdf_gaussian_case_is_transformless():
    rho = 0.45
    m = MultivariateAlphaNormal(CorrelationMatrix.bivariate(rho), 2.0)
    for x in [(0.5, -0.3), (1.2, 0.8), (-1.0, -1.5)]:
        assert m.joint_cdf(list(x)) == pytest.approx(
            numerics.bivariate_normal_cdf(x[0], x[1], rho), rel=1e-12
        )


def test_mv_joint_cdf_composes_copula_and_margins():
    sig = CorrelationMatrix.bivariate(-0.6)
    m = MultivariateAlphaNormal(sig, 1.5)
    margin = m.margin()
    for x in [(0.4, 0.9), (-0.7, 0.2)]:
        u = [margin.cdf(x[0]), margin.cdf(x[1])]
        assert m.joint_cdf(list(x)) == pytest.approx(gauss_copula(sig, u), rel=1e-11)


def test_mv_joint_cdf_origin_orthant():
    rho = 0.5
    m = MultivariateAlphaNormal(CorrelationMatrix.bivariate(rho), 0.7)
    expected = 0.25 + math.asin(rho) / (2.0 * math.pi)
    assert m.joint_cdf([0.0, 0.0]) == pytest.approx(expected, abs=1e-13)


def test_mv_joint_cdf_infinite_coordinates():
    sig = CorrelationMatrix.bivariate(0.3)
    m = MultivariateAlphaNormal(sig, 2.5)
    margin = m.margin()
    assert m.joint_cdf([math.inf, 0.8]) == pytest.approx(margin.cdf(0.8), rel=1e-12)
    assert m.joint_cdf([-math.inf, 0.8]) == 0.0
    assert m.joint_cdf([math.inf, math.inf]) == 1.0


def test_mv_joint_cdf_dimension_check():
    m = MultivariateAlphaNormal(CorrelationMatrix.identity(2), 1.0)
    with pytest.raises(DimensionError):
        m.joint_cdf([0.0])
    with pytest.raises(DomainError):
        m.joint_cdf([0.0, math.nan])


def test_mv_joint_pdf_gaussian_matches_mvn_density():
    sig = CorrelationMatrix(
        [[1.0, 0.3, 0.1], [0.3, 1.0, -0.2], [0.1, -0.2, 1.0]]
    )
    m = MultivariateAlphaNormal(sig, 2.0)
    entries = sig.entries
    inv = np.linalg.inv(entries)
    norm = 1.0 / math.sqrt((2 * math.pi) ** 3 * np.linalg.det(entries))
    for x in [np.array([0.5, -0.2, 1.0]), np.array([0.0, 0.3, -0.8])]:
        expected = norm * math.exp(-0.5 * float(x @ inv @ x))
        assert m.joint_pdf(x) == pytest.approx(expected, rel=1e-12)


def test_mv_joint_pdf_independence_factorizes():
    m = MultivariateAlphaNormal(CorrelationMatrix.identity(2), 3.0)
    margin = m.margin()
    for x in [(0.4, -1.1), (1.3, 0.2)]:
        assert m.joint_pdf(list(x)) == pytest.approx(
            margin.pdf(x[0]) * margin.pdf(x[1]), rel=1e-12
        )


def test_mv_joint_pdf_zero_coordinate():
    m = MultivariateAlphaNormal(CorrelationMatrix.bivariate(0.4), 1.0)
    with pytest.raises(SingularPointError):
        m.joint_pdf([0.0, 0.5])
    gauss = MultivariateAlphaNormal(CorrelationMatrix.bivariate(0.4), 2.0)
    assert math.isfinite(gauss.joint_pdf([0.0, 0.5]))


def test_mv_joint_pdf_matches_bivariate_helper():
    rho, alpha = -0.35, 2.6
    m = MultivariateAlphaNormal(CorrelationMatrix.bivariate(rho), alpha)
    for x, y in [(0.5, 0.7), (-1.2, 0.3), (2.0, -2.0)]:
        assert m.joint_pdf([x, y]) == pytest.approx(
            bivariate_pdf(rho, alpha, x, y), rel=1e-12
        )


def test_bivariate_pdf_broadcasts():
    xs = np.array([0.3, -0.6, 1.1])
    ys = np.array([0.2, 0.9, -0.4])
    vals = bivariate_pdf(0.5, 3.0, xs, ys)
    singles = [bivariate_pdf(0.5, 3.0, float(a), float(b)) for a, b in zip(xs, ys)]
    np.testing.assert_allclose(vals, singles, rtol=1e-15)


def test_bivariate_pdf_symmetric_in_sign_flip():
    # The density is invariant under negating both coordinates.
    for rho, alpha in [(0.5, 1.0), (-0.7, 4.0)]:
        assert bivariate_pdf(rho, alpha, 0.8, 0.3) == pytest.approx(
            bivariate_pdf(rho, alpha, -0.8, -0.3), rel=1e-14
        )


def test_bivariate_pdf_domain():
    with pytest.raises(DomainError):
        bivariate_pdf(1.0, 2.0, 0.1, 0.2)
    with pytest.raises(SingularPointError):
        bivariate_pdf(0.3, 1.0, 0.0, 0.5)


def test_bivariate_pdf_integrates_to_one():
    rho, alpha = 0.5, 3.0
    spec = QuadratureSpec(1e-9, 1e-9, 400)

    def inner(y_fixed):
        def f(xs):
            return bivariate_pdf(rho, alpha, xs, np.full_like(xs, y_fixed))
        total = 0.0
        for lo, hi in [(-math.inf, 0.0), (0.0, math.inf)]:
            v, _ = adaptive_quad(f, lo, hi, spec, vectorized=True)
            total += v
        return total

    outer = 0.0
    for lo, hi in [(-math.inf, 0.0), (0.0, math.inf)]:
        v, _ = adaptive_quad(inner, lo, hi, QuadratureSpec(1e-8, 1e-8, 200))
        outer += v
    assert outer == pytest.approx(1.0, abs=1e-6)


def test_mv_sample_deterministic_shape_and_margins():
    sig = CorrelationMatrix.bivariate(0.5)
    m = MultivariateAlphaNormal(sig, 1.0)
    a = m.sample(RngStream(42, 9), 30_000)
    b = m.sample(RngStream(42, 9), 30_000)
    np.testing.assert_array_equal(a, b)
    assert a.shape == (30_000, 2)
    margin = m.margin()
    for j in range(2):
        u = np.sort(margin.cdf(a[:, j]))
        n = len(u)
        i = np.arange(1, n + 1)
        dn = max(np.max(i / n - u), np.max(u - (i - 1) / n))
        assert dn < 1.628 / math.sqrt(n)


def test_mv_sample_single_row():
    m = MultivariateAlphaNormal(CorrelationMatrix.identity(3), 2.0)
    row = m.sample(RngStream(1, 1))
    assert row.shape == (3,)


def test_mv_sample_gaussian_correlation():
    rho = 0.6
    m = MultivariateAlphaNormal(CorrelationMatrix.bivariate(rho), 2.0)
    x = m.sample(RngStream(7, 3), 100_000)
    r = np.corrcoef(x[:, 0], x[:, 1])[0, 1]
    assert r == pytest.approx(rho, abs=0.01)


def test_mv_sample_kendall_tau():
    # Kendall's tau of a Gaussian copula is (2/pi) asin(rho), invariant
    # under the marginal power transform.
    rho = 0.5
    m = MultivariateAlphaNormal(CorrelationMatrix.bivariate(rho), 1.0)
    x = m.sample(RngStream(15, 4), 20_000)
    from alphanorm._stats import kendall_tau

    tau, se = kendall_tau(x[:, 0], x[:, 1])
    assert abs(tau - 1.0 / 3.0) < 4.0 * se + 0.005


def test_mv_empirical_cdf_check():
    sig = CorrelationMatrix.bivariate(0.5)
    m = MultivariateAlphaNormal(sig, 1.0)
    point = [0.5, 1.0]
    freq, se = m.empirical_cdf_check(point, RngStream(42, 9), 50_000)
    assert 0.0 < freq < 1.0
    assert se > 0.0
    assert abs(freq - m.joint_cdf(point)) < 4.0 * se


def test_mv_empirical_cdf_check_validation():
    m = MultivariateAlphaNormal(CorrelationMatrix.bivariate(0.2), 1.0)
    with pytest.raises(DomainError):
        m.empirical_cdf_check([0.0, 0.0], RngStream(1, 0), 999)
    with pytest.raises(DimensionError):
        m.empirical_cdf_check([0.0, 0.0, 0.0], RngStream(1, 0), 2000)


def test_mv_empirical_cdf_check_infinite_point():
    m = MultivariateAlphaNormal(CorrelationMatrix.bivariate(0.2), 1.0)
    freq, se = m.empirical_cdf_check([math.inf, math.inf], RngStream(2, 0), 2000)
    assert freq == 1.0
    assert se == 0.0
