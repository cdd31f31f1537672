"""Semantic exception hierarchy shared by all gaussdecoup modules."""


class GaussDecoupError(Exception):
    """Base class for all package errors."""


class NotSymmetric(GaussDecoupError):
    """Input matrix deviates from symmetry beyond tolerance."""


class NotPositiveDefinite(GaussDecoupError):
    """Cholesky factorization failed or a pivot fell below threshold."""


class NonPositiveDiagonal(GaussDecoupError):
    """A variance (diagonal entry) is zero or negative."""


class InvalidSpec(GaussDecoupError):
    """A generative model spec is structurally invalid (empty support, bad shape, ...)."""


class NonFiniteInput(GaussDecoupError):
    """Input contains NaN or infinity."""


class NonPositiveSymbol(GaussDecoupError):
    """Spectral symbol is not strictly positive; geometric mean undefined."""


class NonConvergent(GaussDecoupError):
    """A coefficient series failed its tail-convergence check at the working resolution."""


class ConditionViolated(GaussDecoupError):
    """The exponent hypothesis p >= 2*p(X) does not hold.

    Carries the offending decoupling coefficient so callers can report
    how far the requested exponent falls short.
    """

    def __init__(self, p: float, p_x: float, message: str | None = None):
        self.p = p
        self.p_x = p_x
        if message is None:
            message = f"exponent p={p} violates p >= 2*p(X) = {2.0 * p_x}"
        super().__init__(message)


class ConfigError(GaussDecoupError):
    """Scenario configuration failed to parse or validate."""
