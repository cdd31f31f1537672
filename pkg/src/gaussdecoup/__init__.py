"""Decoupling coefficients and inequality constants for Gaussian vectors.

The package quantifies near-independence of a centered Gaussian vector
through its decoupling coefficient p(X) (normalized absolute row sums of the
covariance), evaluates the product-of-marginals bound constants that are
valid whenever the exponent satisfies p >= 2 p(X), estimates the Toeplitz
determinants those constants depend on (exactly by Cholesky, asymptotically
by the second-order determinant limit G(f)^n b(f)), computes the
Brascamp-Lieb constant behind the bound, and verifies every inequality by
Monte Carlo sampling plus quadrature.
"""

from .brascamp import (
    EbProblem,
    detB_identity_check,
    eb_objective,
    eb_optimize,
    eb_upper_bound,
    gaussian_extremal_check,
    matrix_B,
    minkowski_check,
    ostrowski_bound,
    random_spd,
)
from .covmodel import (
    CovarianceMatrix,
    HilbertSpec,
    MovingAverageSpec,
    SparseSupportSpec,
    SpectralSymbol,
    build_dense,
    constant_symbol,
    from_moving_average,
    from_stationary,
    grid_points,
    hilbert_covariance,
    inverse_power_gamma,
    inverse_power_gamma_sequence,
    inverse_power_symbol,
    ma1_symbol,
    sparse_support_covariance,
    symbol_from_grid,
    symbol_from_name,
)
from .decoupling import (
    DecouplingBound,
    RefinedBound,
    corollary1_bound,
    corollary1_log_bound,
    decoupling_bound,
    decoupling_coefficient,
    refined_constant,
    stationary_decoupling_coefficient,
    stationary_p_bounds,
    theorem1_constant,
    theorem1_log_constant,
)
from .errors import (
    ConditionViolated,
    ConfigError,
    GaussDecoupError,
    InvalidSpec,
    NonConvergent,
    NonFiniteInput,
    NonPositiveDiagonal,
    NonPositiveSymbol,
    NotPositiveDefinite,
    NotSymmetric,
)
from .szego import (
    ConditionReport,
    SzegoEstimate,
    Theorem2Constant,
    b_constant,
    condition_report,
    geometric_mean,
    log_symbol_coefficients,
    szego_asymptote,
    theorem2_constant,
    toeplitz_section,
)
from .verify import (
    KhatriSidakReports,
    TestFunctionSpec,
    VerificationReport,
    marginal_p_norm,
    sample_gaussian,
    verify_khatri_sidak,
    verify_kls,
    verify_theorem1,
)

__version__ = "0.1.0"
