"""alphanorm: the alpha-normal distribution family and its companions.

Univariate laws (AlphaNormal, Weibull), Orlicz psi-norms, the copula-based
multivariate alpha-normal distribution, and the alpha -> infinity sign
limit, together with the quadrature, root-finding, special-function, and
RNG machinery used to cross-check every closed form numerically.

Hot numeric kernels run in a compiled extension when it is available and
fall back to a pure-Python twin otherwise; `alphanorm.BACKEND` names the
one in use, and the ALPHANORM_BACKEND environment variable ("compiled" or
"python") forces the choice at import time.
"""

from alphanorm._backend import BACKEND
from alphanorm.alpha_normal import AlphaNormal, ShapeReport, chi2_mgf
from alphanorm.errors import (
    AlphanormError,
    BracketError,
    DimensionError,
    DomainError,
    MatrixValidationError,
    QuadratureError,
    ResourceLimitError,
    SingularPointError,
    UnsupportedParameterError,
)
from alphanorm.limiting import (
    MetaRademacher,
    SignVector,
    pmf_bivariate,
    rademacher_cdf,
    weak_convergence_check,
)
from alphanorm.multivariate import (
    CorrelationMatrix,
    MultivariateAlphaNormal,
    bivariate_pdf,
    gauss_copula,
    gauss_copula_with_error,
    parse_correlation_csv,
)
from alphanorm.numerics import (
    QuadratureSpec,
    RngStream,
    adaptive_quad,
    bivariate_normal_cdf,
    find_root,
    log_gamma,
    mvn_cdf,
    std_normal_cdf,
    std_normal_pdf,
    std_normal_quantile,
)
from alphanorm.weibull import MajorizationReport, Weibull, majorization_report

__version__ = "0.1.0"

__all__ = [
    "AlphaNormal",
    "AlphanormError",
    "BACKEND",
    "BracketError",
    "CorrelationMatrix",
    "DimensionError",
    "DomainError",
    "MajorizationReport",
    "MatrixValidationError",
    "MetaRademacher",
    "MultivariateAlphaNormal",
    "QuadratureError",
    "QuadratureSpec",
    "ResourceLimitError",
    "RngStream",
    "ShapeReport",
    "SignVector",
    "UnsupportedParameterError",
    "Weibull",
    "adaptive_quad",
    "bivariate_normal_cdf",
    "bivariate_pdf",
    "chi2_mgf",
    "find_root",
    "gauss_copula",
    "gauss_copula_with_error",
    "log_gamma",
    "majorization_report",
    "mvn_cdf",
    "parse_correlation_csv",
    "pmf_bivariate",
    "rademacher_cdf",
    "std_normal_cdf",
    "std_normal_pdf",
    "std_normal_quantile",
    "SingularPointError",
    "weak_convergence_check",
    "__version__",
]
