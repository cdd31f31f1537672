"""Covariance matrices of Gaussian vectors and their generative models.

Builders for the covariance families used throughout the package:

- dense symmetric positive-definite matrices (validated, Cholesky-backed),
- stationary Toeplitz matrices from an autocovariance sequence,
- moving-average processes ``X_k = sum_m c_m xi_{k-m}`` with i.i.d. standard
  Gaussian innovations (covariance = autocorrelation of the coefficients),
- the inverse-power coefficient family ``c_m = |m|^{-r}`` with closed-form
  autocovariance at ``r = 1``,
- Hilbert-type matrices ``{1/(a_k + a_l)}`` (Cauchy/Gram structure),
- sparse-support moving averages whose covariance lives on a difference set.

Also houses the spectral-symbol representation: a 2*pi-periodic non-negative
function sampled on a uniform grid over ``[-pi, pi)`` together with its
Fourier coefficients ``d_k``, which generate the Toeplitz sections.

All returned objects are immutable after construction; every function here is
pure and safe to call concurrently.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import mpmath
import numpy as np
from scipy.linalg import toeplitz
from scipy.signal import fftconvolve
from scipy.special import zeta

from .errors import (
    InvalidSpec,
    NonFiniteInput,
    NonPositiveDiagonal,
    NotPositiveDefinite,
    NotSymmetric,
)

# Dense autocorrelation switches to FFT beyond this support length.
_DIRECT_CORR_LIMIT = 8192
# Harmonic numbers are summed directly up to here, asymptotic beyond.
_HARMONIC_DIRECT_LIMIT = 10**6
# Default number of grid points (2K) for spectral symbols.
DEFAULT_GRID_SIZE = 4096

PI_SQUARED_OVER_3 = np.pi**2 / 3.0


@dataclass(frozen=True)
class CovarianceMatrix:
    """Validated symmetric positive-definite covariance matrix.

    Attributes
    ----------
    entries : (n, n) ndarray
        The covariance entries (variance units). Symmetric as stored.
    chol : (n, n) ndarray
        Lower-triangular Cholesky factor, ``chol @ chol.T == entries``.
    log_det : float
        ``2 * sum(log(diag(chol)))``.
    """

    entries: np.ndarray
    chol: np.ndarray
    log_det: float

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def variances(self) -> np.ndarray:
        return np.diag(self.entries)

    @property
    def sigmas(self) -> np.ndarray:
        """Marginal standard deviations sqrt(E X_i^2)."""
        return np.sqrt(np.diag(self.entries))


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _validate_spd(entries: np.ndarray, context: str = "") -> CovarianceMatrix:
    """Symmetry, diagonal and Cholesky checks shared by all builders."""
    n = entries.shape[0]
    scale = np.abs(entries).max() if n else 1.0
    asym = np.abs(entries - entries.T).max() if n else 0.0
    if asym > 1e-12 * max(scale, 1e-300):
        raise NotSymmetric(
            f"max |e[i][j]-e[j][i]| = {asym:.3e} exceeds 1e-12 * max|e| = {1e-12 * scale:.3e}"
            + context
        )
    diag = np.diag(entries)
    if np.any(diag <= 0):
        raise NonPositiveDiagonal(
            f"diagonal entries must be strictly positive; min = {diag.min():.3e}" + context
        )
    try:
        chol = np.linalg.cholesky(entries)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(f"Cholesky failed: {exc}" + context) from exc
    # Scale-aware pivot floor: reject numerically marginal matrices.
    pivot_floor = 1e-12 * np.trace(entries) / n
    pivots = np.diag(chol) ** 2
    if pivots.min() <= pivot_floor:
        raise NotPositiveDefinite(
            f"smallest Cholesky pivot {pivots.min():.3e} at or below threshold "
            f"{pivot_floor:.3e} (1e-12 * trace/n)" + context
        )
    log_det = 2.0 * float(np.sum(np.log(np.diag(chol))))
    return CovarianceMatrix(_freeze(entries), _freeze(chol), log_det)


def build_dense(entries) -> CovarianceMatrix:
    """Validate a dense covariance matrix and attach its Cholesky factor.

    Raises
    ------
    NotSymmetric, NonPositiveDiagonal, NotPositiveDefinite
    """
    entries = np.array(entries, dtype=float)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise InvalidSpec(f"expected a square array, got shape {entries.shape}")
    if not np.all(np.isfinite(entries)):
        raise NonFiniteInput("covariance entries contain NaN or infinity")
    return _validate_spd(entries)


def from_stationary(gamma, n: int) -> CovarianceMatrix:
    """Toeplitz covariance with entries gamma(|i-j|).

    ``gamma`` is indexed from lag 0; shorter sequences are zero-padded,
    longer ones truncated to the first ``n`` lags.
    """
    gamma = np.asarray(gamma, dtype=float).ravel()
    if gamma.size == 0 or gamma[0] <= 0:
        raise NonPositiveDiagonal("gamma[0] (the variance) must be strictly positive")
    col = np.zeros(n)
    m = min(n, gamma.size)
    col[:m] = gamma[:m]
    return _validate_spd(toeplitz(col))


@dataclass(frozen=True)
class MovingAverageSpec:
    """Coefficients c_m of a moving average, finite support or truncated.

    ``offsets`` and ``values`` hold the stored support; ``cutoff_tail_bound``
    is an upper bound on the discarded l2 mass ``sum_{|m|>M} c_m^2`` when the
    support was truncated (0.0 for exact finite supports).
    """

    offsets: np.ndarray
    values: np.ndarray
    cutoff_tail_bound: float = 0.0

    def __post_init__(self):
        offsets = np.asarray(self.offsets, dtype=np.int64).ravel()
        values = np.asarray(self.values, dtype=float).ravel()
        if offsets.size != values.size or offsets.size == 0:
            raise InvalidSpec("offsets and values must be equal-length and nonempty")
        if np.unique(offsets).size != offsets.size:
            raise InvalidSpec("duplicate coefficient offsets")
        if not np.all(np.isfinite(values)):
            raise NonFiniteInput("moving-average coefficients contain NaN or infinity")
        order = np.argsort(offsets)
        object.__setattr__(self, "offsets", _freeze(offsets[order]))
        object.__setattr__(self, "values", _freeze(values[order]))

    @classmethod
    def from_coeffs(cls, coeffs: dict) -> "MovingAverageSpec":
        """Build from a map {offset m: coefficient c_m}."""
        items = sorted(coeffs.items())
        return cls(
            offsets=np.array([m for m, _ in items], dtype=np.int64),
            values=np.array([c for _, c in items], dtype=float),
        )

    @classmethod
    def inverse_power(cls, r: float, cutoff: int) -> "MovingAverageSpec":
        """c_m = |m|^{-r} for 1 <= |m| <= cutoff, c_0 = 0.

        The discarded tail ``sum_{|m|>cutoff} m^{-2r}`` is attached as
        ``cutoff_tail_bound`` (exact Hurwitz-zeta value).
        """
        if r < 1:
            raise InvalidSpec(f"inverse-power family needs r >= 1, got {r}")
        if cutoff < 1:
            raise InvalidSpec("cutoff must be a positive integer")
        m = np.arange(1, cutoff + 1, dtype=np.int64)
        c = m.astype(float) ** (-r)
        return cls(
            offsets=np.concatenate([-m[::-1], m]),
            values=np.concatenate([c[::-1], c]),
            cutoff_tail_bound=2.0 * float(zeta(2.0 * r, cutoff + 1)),
        )

    def autocovariance(self, max_lag: int) -> np.ndarray:
        """gamma(h) = sum_m c_m c_{m-h} for h = 0..max_lag, over the stored support."""
        lo = int(self.offsets[0])
        hi = int(self.offsets[-1])
        dense = np.zeros(hi - lo + 1)
        dense[self.offsets - lo] = self.values
        if dense.size <= _DIRECT_CORR_LIMIT:
            ac = np.correlate(dense, dense, mode="full")
        else:
            ac = fftconvolve(dense, dense[::-1], mode="full")
        center = dense.size - 1
        out = np.zeros(max_lag + 1)
        avail = min(max_lag, dense.size - 1)
        out[: avail + 1] = ac[center : center + avail + 1]
        return out


def from_moving_average(spec: MovingAverageSpec, n: int) -> CovarianceMatrix:
    """Stationary covariance of the moving average, E X_k X_l = sum_m c_m c_{m-k+l}."""
    gamma = spec.autocovariance(n - 1)
    try:
        return _validate_spd(toeplitz(gamma))
    except NotPositiveDefinite as exc:
        raise NotPositiveDefinite(
            f"{exc}; truncation tail bound sum_(|m|>M) c_m^2 = {spec.cutoff_tail_bound:.3e}"
        ) from exc


def harmonic_number(k: int) -> float:
    """H_k = sum_{j=1}^k 1/j, direct up to 1e6 and asymptotic beyond."""
    if k < 0:
        raise ValueError("harmonic number needs k >= 0")
    if k == 0:
        return 0.0
    if k <= _HARMONIC_DIRECT_LIMIT:
        return float(np.sum(1.0 / np.arange(1, k + 1)))
    kf = float(k)
    return float(np.log(kf) + np.euler_gamma + 1.0 / (2 * kf) - 1.0 / (12 * kf**2))


def _one_sided_sum(mu: int, r: float, rel_tol: float = 1e-14) -> float:
    """sum_{k>=1} 1/(k^r (k+mu)^r) for r > 1, accurate to ~1e-14 relative.

    Head summed directly to K >= max(1000, 4*mu); the tail is expanded as
    (k+mu)^{-r} = sum_j binom(-r,j) mu^j k^{-r-j} and summed exactly with
    Hurwitz zeta values.  The binomial series converges geometrically since
    mu/(K+1) <= 1/4.
    """
    K = max(1000, 4 * mu)
    k = np.arange(1, K + 1, dtype=float)
    head = float(np.sum(1.0 / (k**r * (k + mu) ** r)))
    tail = 0.0
    coef = 1.0  # binom(-r, j), j = 0
    for j in range(120):
        term = coef * float(mu) ** j * float(zeta(2 * r + j, K + 1))
        tail += term
        if abs(term) < rel_tol * max(head, 1e-300):
            break
        coef *= (-r - j) / (j + 1)
    return head + tail


def inverse_power_gamma(mu: int, r: float = 1.0) -> float:
    """Autocovariance E X_k X_{k+mu} of the c_m = |m|^{-r} moving average.

    At ``r = 1`` the full series telescopes to the closed form
    ``(2/mu) (H_mu + H_{mu-1})``; for ``r > 1`` the series is summed with a
    rigorous tail so the truncation error stays below 1e-10.  The variance
    (``mu = 0``) equals ``2 zeta(2r)``, i.e. ``pi^2/3`` at ``r = 1``.
    """
    if mu < 0:
        mu = -mu
    if r < 1:
        raise ValueError(f"inverse-power autocovariance needs r >= 1, got {r}")
    if mu == 0:
        if r == 1.0:
            return PI_SQUARED_OVER_3
        return 2.0 * float(zeta(2.0 * r, 1))
    if r == 1.0:
        return (2.0 / mu) * (harmonic_number(mu) + harmonic_number(mu - 1))
    middle = 0.0
    if mu >= 2:
        m = np.arange(1, mu, dtype=float)
        middle = float(np.sum((m * (mu - m)) ** (-r)))
    return 2.0 * _one_sided_sum(mu, r) + middle


def inverse_power_gamma_sequence(max_lag: int, r: float = 1.0) -> np.ndarray:
    """gamma(0..max_lag) for the inverse-power family; vectorized at r = 1."""
    if r == 1.0:
        out = np.empty(max_lag + 1)
        out[0] = PI_SQUARED_OVER_3
        if max_lag >= 1:
            H = np.concatenate([[0.0], np.cumsum(1.0 / np.arange(1, max_lag + 1))])
            mu = np.arange(1, max_lag + 1, dtype=float)
            out[1:] = (2.0 / mu) * (H[1 : max_lag + 1] + H[0:max_lag])
        return out
    return np.array([inverse_power_gamma(h, r) for h in range(max_lag + 1)])


@dataclass(frozen=True)
class HilbertSpec:
    """Strictly increasing positive sequence a_i generating {1/(a_k+a_l)}."""

    a: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float).ravel()
        if a.size == 0:
            raise InvalidSpec("empty sequence")
        if not np.all(np.isfinite(a)):
            raise NonFiniteInput("sequence contains NaN or infinity")
        if a[0] <= 0 or np.any(np.diff(a) <= 0):
            raise InvalidSpec("sequence must be strictly positive and strictly increasing")
        object.__setattr__(self, "a", _freeze(a))


def hilbert_covariance(spec: HilbertSpec, n: int) -> CovarianceMatrix:
    """Hilbert-type covariance entries[k][l] = 1/(a_k + a_l)."""
    if spec.a.size < n:
        raise InvalidSpec(f"spec has {spec.a.size} terms, need at least n = {n}")
    a = spec.a[:n]
    entries = 1.0 / (a[:, None] + a[None, :])
    try:
        return _validate_spd(entries)
    except NotPositiveDefinite as exc:
        cond = float(np.linalg.cond(entries))
        raise NotPositiveDefinite(
            f"{exc}; condition estimate {cond:.3e} (nearly equal a's degrade rank)"
        ) from exc


@dataclass(frozen=True)
class SparseSupportSpec:
    """Moving average supported on |m| in A, X_k = sum_{|m| in A} b_|m| xi_{k-m}."""

    support: tuple
    weights: dict

    def __post_init__(self):
        support = tuple(sorted(set(int(m) for m in self.support)))
        if len(support) == 0:
            raise InvalidSpec("support set A must be nonempty")
        if support[0] <= 0:
            raise InvalidSpec("support must consist of positive integers")
        weights = {int(m): float(self.weights[m]) for m in support}
        if not all(np.isfinite(b) for b in weights.values()):
            raise NonFiniteInput("weights contain NaN or infinity")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def unit(cls, support) -> "SparseSupportSpec":
        return cls(support=tuple(support), weights={int(m): 1.0 for m in support})

    def autocovariance(self, max_lag: int) -> np.ndarray:
        """gamma(h); exactly zero when h is not a difference of signed support points."""
        signed = {}
        for m in self.support:
            signed[m] = self.weights[m]
            signed[-m] = self.weights[m]
        gamma = np.zeros(max_lag + 1)
        for h in range(max_lag + 1):
            acc = 0.0
            hit = False
            for m, bm in signed.items():
                other = signed.get(m - h)
                if other is not None:
                    acc += bm * other
                    hit = True
            gamma[h] = acc if hit else 0.0
        return gamma


def sparse_support_covariance(spec: SparseSupportSpec, n: int) -> CovarianceMatrix:
    """Covariance of the sparse-support moving average; Toeplitz on a difference set."""
    gamma = spec.autocovariance(n - 1)
    return _validate_spd(toeplitz(gamma))


# ---------------------------------------------------------------------------
# Spectral symbols
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralSymbol:
    """A 2*pi-periodic real symbol sampled on a uniform grid over [-pi, pi).

    ``d[k]`` holds the Fourier coefficients (1/2pi) int e^{-ikt} f(t) dt for
    k = 0..K; negative indices follow from d_{-k} = conj(d_k).  For even
    symbols the coefficients are stored as reals.  ``c`` (the log-symbol
    coefficients, populated only for strictly positive symbols) follows the
    same convention.
    """

    grid: np.ndarray
    d: np.ndarray
    K: int
    strictly_positive: bool
    even: bool
    c: np.ndarray | None = None
    c_alias_bound: float | None = None

    @property
    def grid_size(self) -> int:
        return self.grid.size

    def fourier_coefficient(self, k: int):
        """d_k for any |k| <= K."""
        if abs(k) > self.K:
            raise ValueError(f"|k| = {abs(k)} exceeds resolution K = {self.K}")
        val = self.d[abs(k)]
        return np.conj(val) if k < 0 else val


def grid_points(grid_size: int = DEFAULT_GRID_SIZE) -> np.ndarray:
    """The uniform sample points t_j = -pi + 2*pi*j/grid_size, j = 0..grid_size-1."""
    return -np.pi + 2.0 * np.pi * np.arange(grid_size) / grid_size


def symbol_from_grid(values) -> SpectralSymbol:
    """Build a SpectralSymbol from samples on the uniform grid over [-pi, pi).

    Coefficients come from the discrete Fourier transform of the grid, which
    is the trapezoidal rule for the defining integral and exact for
    trigonometric polynomials of degree < K.
    """
    v = np.asarray(values, dtype=float).ravel()
    if v.size < 16 or v.size % 2 != 0:
        raise InvalidSpec(f"need an even number >= 16 of grid values, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise NonFiniteInput("grid values contain NaN or infinity")
    n = v.size
    K = n // 2
    # t_j = -pi + j*(2pi/n) puts a (-1)^k phase in front of the plain DFT.
    F = np.fft.fft(v)[: K + 1] / n
    d = np.where(np.arange(K + 1) % 2 == 0, 1.0, -1.0) * F
    scale = max(np.abs(v).max(), 1e-300)
    idx = np.arange(n)
    even = bool(np.abs(v - v[(n - idx) % n]).max() <= 1e-12 * scale)
    if even:
        d = d.real.copy()
    strictly_positive = bool(v.min() > 0.0)
    return SpectralSymbol(
        grid=_freeze(v.copy()),
        d=_freeze(d),
        K=K,
        strictly_positive=strictly_positive,
        even=even,
    )


def constant_symbol(value: float, grid_size: int = DEFAULT_GRID_SIZE) -> SpectralSymbol:
    return symbol_from_grid(np.full(grid_size, float(value)))


def ma1_symbol(a: float, grid_size: int = DEFAULT_GRID_SIZE) -> SpectralSymbol:
    """Symbol of the MA(1) process with coefficients (1, a): f = |1 + a e^{it}|^2."""
    t = grid_points(grid_size)
    return symbol_from_grid(1.0 + a * a + 2.0 * a * np.cos(t))


def inverse_power_symbol(r: float, grid_size: int = DEFAULT_GRID_SIZE) -> SpectralSymbol:
    """Symbol |2 sum_{m>=1} cos(mt)/m^r|^2 of the inverse-power family.

    Needs r > 1: at r <= 1 the symbol is unbounded at t = 0 (the
    autocovariance is not absolutely summable) and cannot be gridded.
    Evaluated through the generalized Clausen function.
    """
    if r <= 1:
        raise InvalidSpec(
            f"inverse-power symbol needs r > 1 (unbounded at t = 0 for r = {r}); "
            "use the closed-form autocovariance route instead"
        )
    K = grid_size // 2
    step = np.pi / K
    u = np.array([2.0 * float(mpmath.clcos(r, i * step)) for i in range(K + 1)])
    j = np.arange(grid_size)
    return symbol_from_grid(u[np.abs(j - K)] ** 2)


def symbol_from_name(name: str, grid_size: int = DEFAULT_GRID_SIZE) -> SpectralSymbol:
    """Parse a named built-in: "constant", "ma1:a=<real>", "inverse_power:r=<real>"."""
    head, _, argstr = name.partition(":")
    args = {}
    if argstr:
        for item in argstr.split(","):
            key, _, val = item.partition("=")
            if not val:
                raise InvalidSpec(f"malformed symbol argument {item!r} in {name!r}")
            args[key.strip()] = float(val)
    if head == "constant":
        return constant_symbol(args.pop("value", 1.0), grid_size)
    if head == "ma1":
        if "a" not in args:
            raise InvalidSpec("ma1 symbol needs a=<real>")
        return ma1_symbol(args.pop("a"), grid_size)
    if head == "inverse_power":
        if "r" not in args:
            raise InvalidSpec("inverse_power symbol needs r=<real>")
        return inverse_power_symbol(args.pop("r"), grid_size)
    raise InvalidSpec(f"unknown symbol family {head!r}")


# ---------------------------------------------------------------------------
# File ingestion (JSON arrays or CSV columns)
# ---------------------------------------------------------------------------


def load_values(path) -> np.ndarray:
    """Read a 1-D value sequence from a JSON array or a one-value-per-line CSV."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        data = json.loads(path.read_text())
        return np.asarray(data, dtype=float).ravel()
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    return np.array([float(row[0]) for row in rows])


def load_matrix(path) -> np.ndarray:
    """Read a 2-D array from nested JSON arrays or CSV rows."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        data = json.loads(path.read_text())
        return np.asarray(data, dtype=float)
    with open(path, newline="") as fh:
        rows = [[float(x) for x in row] for row in csv.reader(fh) if row]
    return np.asarray(rows, dtype=float)
