"""Decoupling coefficient and decoupling-inequality constants.

The decoupling coefficient of a centered Gaussian vector X with covariance C,

    p(X) = max_i sum_j |C[i][j]| / C[i][i]        (sum includes j = i),

equals 1 exactly when the components are independent and governs the
admissible exponents: the product-of-marginals bound holds for p >= 2 p(X).

Two prefactors are computed for that bound, always in log space so that
dimensions in the thousands stay representable:

- the generic constant  2^{(n/2)(1-1/p)} (prod sigma_i)^{1/p} / det(C)^{1/(2p)},
- the refined constant  p^{(n/2)(1-1/p)} (prod sigma_i)
                          / [det(p*I(var) - C)^{(1/2)(1-1/p)} det(C)^{1/(2p)}],

where the refined form keeps the exact determinant of ``p*I(var) - C`` that
the generic form lower-bounds via diagonal dominance.  The refined constant
is never larger than the generic one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .covmodel import CovarianceMatrix
from .errors import ConditionViolated, NotPositiveDefinite

__all__ = [
    "DecouplingBound",
    "RefinedBound",
    "decoupling_coefficient",
    "stationary_decoupling_coefficient",
    "stationary_p_bounds",
    "theorem1_log_constant",
    "theorem1_constant",
    "refined_constant",
    "corollary1_log_bound",
    "corollary1_bound",
    "decoupling_bound",
]


def decoupling_coefficient(C: CovarianceMatrix) -> float:
    """p(X): max over rows of the absolute row sum normalized by the variance."""
    rows = np.abs(C.entries).sum(axis=1)
    return float((rows / C.variances).max())


def stationary_decoupling_coefficient(gamma, n: int) -> float:
    """p(X) of the n-section Toeplitz matrix, from gamma alone (no matrix built).

    Row k sums gamma(0) plus both one-sided partial sums of |gamma|, so a
    prefix-sum scan gives the exact coefficient in O(n).
    """
    gamma = np.asarray(gamma, dtype=float).ravel()
    if gamma.size == 0 or gamma[0] <= 0:
        raise ValueError("gamma[0] must be strictly positive")
    g = np.zeros(n)
    m = min(n, gamma.size)
    g[:m] = np.abs(gamma[:m])
    prefix = np.concatenate([[0.0], np.cumsum(g[1:])])  # prefix[m] = sum_{h=1}^m |gamma(h)|
    k = np.arange(1, n + 1)
    rows = g[0] + prefix[k - 1] + prefix[n - k]
    return float(rows.max() / g[0])


def stationary_p_bounds(gamma, n: int) -> tuple[float, float]:
    """(S, 2S) with S = sum_{1<=h<=n-1} |gamma(h)|/gamma(0).

    The usable sandwich for the Toeplitz section is S <= p(X) <= 1 + 2S;
    the first row alone already gives p(X) >= 1 + S.
    """
    gamma = np.asarray(gamma, dtype=float).ravel()
    if gamma.size == 0 or gamma[0] <= 0:
        raise ValueError("gamma[0] must be strictly positive")
    m = min(n, gamma.size)
    s = float(np.abs(gamma[1:m]).sum() / gamma[0])
    return s, 2.0 * s


def _require_condition(C: CovarianceMatrix, p: float) -> float:
    p_x = decoupling_coefficient(C)
    if p < 2.0 * p_x:
        raise ConditionViolated(p, p_x)
    return p_x


def theorem1_log_constant(C: CovarianceMatrix, p: float) -> float:
    """log of 2^{(n/2)(1-1/p)} (prod sigma_i)^{1/p} / det(C)^{1/(2p)}.

    Requires p >= 2 p(X) (strict hypothesis, no tolerance slack).
    """
    _require_condition(C, p)
    n = C.n
    sum_log_sigma = 0.5 * float(np.sum(np.log(C.variances)))
    return (n / 2.0) * (1.0 - 1.0 / p) * math.log(2.0) + sum_log_sigma / p - C.log_det / (2.0 * p)


def theorem1_constant(C: CovarianceMatrix, p: float) -> float:
    """Linear-space generic constant; may overflow to inf for very large n."""
    return math.exp(theorem1_log_constant(C, p))


@dataclass(frozen=True)
class RefinedBound:
    """Refined prefactor with its tightness ratio against the generic one."""

    log_value: float
    log_generic: float

    @property
    def value(self) -> float:
        return math.exp(self.log_value)

    @property
    def tightness(self) -> float:
        """refined / generic, <= 1 whenever both are defined."""
        return math.exp(self.log_value - self.log_generic)


def refined_constant(C: CovarianceMatrix, p: float) -> RefinedBound:
    """Proof-intermediate prefactor with the exact determinant of p*I(var) - C.

    ``p*I(var) - C`` is checked positive definite by Cholesky (it is strictly
    diagonally dominant whenever p > 2 p(X)).
    """
    n = C.n
    shifted = p * np.diag(C.variances) - C.entries
    try:
        chol = np.linalg.cholesky(shifted)
    except np.linalg.LinAlgError as exc:
        p_x = decoupling_coefficient(C)
        if p < 2.0 * p_x:
            raise ConditionViolated(
                p, p_x, f"p*I(var) - C not positive definite at p={p} < 2*p(X)={2 * p_x}"
            ) from exc
        raise NotPositiveDefinite(f"p*I(var) - C failed Cholesky: {exc}") from exc
    log_det_shifted = 2.0 * float(np.sum(np.log(np.diag(chol))))
    sum_log_sigma = 0.5 * float(np.sum(np.log(C.variances)))
    log_value = (
        (n / 2.0) * (1.0 - 1.0 / p) * math.log(p)
        + sum_log_sigma
        - 0.5 * (1.0 - 1.0 / p) * log_det_shifted
        - C.log_det / (2.0 * p)
    )
    return RefinedBound(log_value=log_value, log_generic=theorem1_log_constant(C, p))


def corollary1_log_bound(C: CovarianceMatrix, p: float, eps) -> float:
    """log of 2^{n/2}/det(C)^{1/(2p)} * prod (sigma_i/sqrt(2) * P{|X_i|<=eps_i})^{1/p}.

    Central probabilities are exact error-function values,
    P{|X_i| <= eps_i} = erf(eps_i / (sigma_i sqrt(2))).
    """
    if p < 2.0:
        raise ConditionViolated(p, 1.0, f"the sup-bound needs p >= 2, got p={p}")
    _require_condition(C, p)
    eps = np.asarray(eps, dtype=float).ravel()
    if eps.size != C.n or np.any(eps <= 0):
        raise ValueError("eps must be a length-n vector of positive reals")
    sigma = C.sigmas
    probs = erf(eps / (sigma * math.sqrt(2.0)))
    n = C.n
    return (
        (n / 2.0) * math.log(2.0)
        - C.log_det / (2.0 * p)
        + float(np.sum(np.log(sigma / math.sqrt(2.0)) + np.log(probs))) / p
    )


def corollary1_bound(C: CovarianceMatrix, p: float, eps) -> float:
    return math.exp(corollary1_log_bound(C, p, eps))


@dataclass(frozen=True)
class DecouplingBound:
    """Everything Theorem-1-shaped about (C, p) in one record.

    Constants live in log space; the linear-space properties may overflow to
    inf for very large n and are meant for display.
    """

    p_X: float
    p: float
    valid: bool
    n: int
    log_constant_generic: float | None
    log_constant_refined: float | None

    @property
    def constant_generic(self) -> float | None:
        if self.log_constant_generic is None:
            return None
        return math.exp(self.log_constant_generic)

    @property
    def constant_refined(self) -> float | None:
        if self.log_constant_refined is None:
            return None
        return math.exp(self.log_constant_refined)

    def to_json_dict(self) -> dict:
        return {
            "p_X": self.p_X,
            "p": self.p,
            "valid": self.valid,
            "n": self.n,
            "log_constant_generic": self.log_constant_generic,
            "log_constant_refined": self.log_constant_refined,
            "constant_generic": self.constant_generic,
            "constant_refined": self.constant_refined,
        }


def decoupling_bound(C: CovarianceMatrix, p: float) -> DecouplingBound:
    """Aggregate p(X), validity of the exponent hypothesis, and both constants."""
    p_x = decoupling_coefficient(C)
    valid = p >= 2.0 * p_x
    log_generic = None
    log_refined = None
    if valid:
        log_generic = theorem1_log_constant(C, p)
        log_refined = refined_constant(C, p).log_value
    return DecouplingBound(
        p_X=p_x,
        p=p,
        valid=valid,
        n=C.n,
        log_constant_generic=log_generic,
        log_constant_refined=log_refined,
    )
