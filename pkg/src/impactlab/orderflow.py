"""Synthetic order flow with controlled long-memory sign statistics.

Signs are obtained by thresholding a stationary Gaussian sequence.  For a
bivariate normal pair with correlation rho, E[sign(X) sign(Y)] =
(2/pi) * arcsin(rho), so imposing

    rho(lag) = sin(pi/2 * c0 * lag**-gamma)

on the Gaussian makes the *sign* autocorrelation an exact power law
c0 * lag**-gamma at every lag >= 1.  The Gaussian sequence is synthesised by
circulant embedding of its covariance, which is exact and O(n log n).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.fft import next_fast_len

from .series import LagCurve, MarkSeries, SignSeries

__all__ = [
    "ConstantLaw",
    "LognormalLaw",
    "UniformLaw",
    "ParetoLaw",
    "law_from_spec",
    "gen_signs",
    "gen_marks",
    "estimate_sign_corr",
    "sign_corr_target",
]


# ---------------------------------------------------------------------------
# Positive marginal laws for spreads and volumes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstantLaw:
    """Degenerate law: every draw equals `value`."""

    value: float

    kind = "constant"

    def __post_init__(self) -> None:
        if not self.value > 0:
            raise ValueError("constant law requires a strictly positive value")

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return np.full(n, float(self.value))

    def spec(self) -> dict:
        return {"kind": self.kind, "value": self.value}


@dataclass(frozen=True)
class LognormalLaw:
    """exp(N(mu, sigma^2)); support is always strictly positive."""

    mu: float = 0.0
    sigma: float = 1.0

    kind = "lognormal"

    def __post_init__(self) -> None:
        if self.sigma < 0:
            raise ValueError("lognormal law requires sigma >= 0")

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.lognormal(self.mu, self.sigma, n)

    def spec(self) -> dict:
        return {"kind": self.kind, "mu": self.mu, "sigma": self.sigma}


@dataclass(frozen=True)
class UniformLaw:
    """Uniform on [low, high] with 0 < low <= high."""

    low: float
    high: float

    kind = "uniform"

    def __post_init__(self) -> None:
        if not 0 < self.low <= self.high:
            raise ValueError("uniform law requires 0 < low <= high")

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.low, self.high, n)

    def spec(self) -> dict:
        return {"kind": self.kind, "low": self.low, "high": self.high}


@dataclass(frozen=True)
class ParetoLaw:
    """Pareto with tail exponent `exponent` and scale `minimum` (inverse CDF)."""

    exponent: float
    minimum: float = 1.0

    kind = "pareto"

    def __post_init__(self) -> None:
        if not self.exponent > 0:
            raise ValueError("pareto law requires a positive tail exponent")
        if not self.minimum > 0:
            raise ValueError("pareto law requires a positive minimum")

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        u = rng.random(n)
        return self.minimum * u ** (-1.0 / self.exponent)

    def spec(self) -> dict:
        return {"kind": self.kind, "exponent": self.exponent, "minimum": self.minimum}


_LAWS = {
    "constant": ConstantLaw,
    "lognormal": LognormalLaw,
    "uniform": UniformLaw,
    "pareto": ParetoLaw,
}


def law_from_spec(spec: dict):
    """Build a marginal law from a {'kind': ..., <params>} mapping."""
    if "kind" not in spec:
        raise ValueError("law spec needs a 'kind' entry")
    kind = spec["kind"]
    if kind not in _LAWS:
        raise ValueError(f"unknown law kind {kind!r}; expected one of {sorted(_LAWS)}")
    params = {k: v for k, v in spec.items() if k != "kind"}
    return _LAWS[kind](**params)


# ---------------------------------------------------------------------------
# Long-memory sign generation
# ---------------------------------------------------------------------------


def sign_corr_target(lags: np.ndarray, gamma: float, c0: float) -> np.ndarray:
    """Target sign autocorrelation c0 * lag**-gamma (1 at lag 0)."""
    lags = np.asarray(lags, dtype=np.float64)
    out = np.empty_like(lags)
    zero = lags == 0
    out[zero] = 1.0
    out[~zero] = c0 * lags[~zero] ** (-gamma)
    return out


def _embedding_length(n: int) -> int:
    m = next_fast_len(2 * (n - 1))
    while m % 2:
        m = next_fast_len(m + 1)
    return m


def _circulant_gaussian(rho_half: np.ndarray, m: int, rng: np.random.Generator) -> np.ndarray:
    """Stationary Gaussian sequence with autocovariance rho_half[0..m//2].

    Standard circulant embedding: the covariance is periodised to length m,
    diagonalised by the FFT, and coloured complex white noise is transformed
    back.  Requires the periodised covariance to be non-negative definite;
    tiny negative eigenvalues from rounding are clipped.
    """
    cov = np.concatenate([rho_half, rho_half[-2:0:-1]])
    lam = np.fft.fft(cov).real
    lmax = lam.max()
    if lam.min() < -1e-8 * lmax:
        raise ValueError(
            "circulant embedding of the requested covariance is not positive "
            "semidefinite; the correlation law cannot be realised"
        )
    np.clip(lam, 0.0, None, out=lam)
    z = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    x = np.fft.fft(z * np.sqrt(lam / m)).real
    return x


def gen_signs(n: int, gamma: float, c0: float = 0.3, seed: int = 0) -> SignSeries:
    """Generate n trade signs with autocorrelation c0 * lag**-gamma.

    Parameters
    ----------
    n : number of trades (>= 2).
    gamma : positive decay exponent of the sign autocorrelation; values
        below 1 give long memory (non-summable correlations).
    c0 : correlation amplitude in (0, 1]; the lag-1 autocorrelation.
    seed : integer seed; identical arguments reproduce the series bitwise.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    if not 0 < c0 <= 1:
        raise ValueError("c0 must lie in (0, 1]")
    m = _embedding_length(n)
    lags = np.arange(m // 2 + 1, dtype=np.float64)
    target = sign_corr_target(lags, gamma, c0)
    rho = np.sin(0.5 * np.pi * target)
    rho[0] = 1.0
    if np.any(np.abs(rho) > 1.0):
        raise ValueError("required Gaussian correlation leaves [-1, 1]")
    rng = np.random.default_rng(seed)
    x = _circulant_gaussian(rho, m, rng)[:n]
    return SignSeries(np.where(x >= 0.0, 1, -1).astype(np.int8))


def gen_marks(
    n: int,
    spread_law=ConstantLaw(1.0),
    volume_law=ConstantLaw(1.0),
    psi: float = 0.1,
    seed: int = 0,
) -> MarkSeries:
    """Draw i.i.d. spreads and volumes (independent of signs and of each other).

    Spreads are drawn before volumes from a single seeded generator, so a
    fixed (laws, psi, seed) tuple reproduces the marks exactly.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    spreads = spread_law.sample(n, rng)
    volumes = volume_law.sample(n, rng)
    return MarkSeries(spreads, volumes, psi=psi)


def estimate_sign_corr(signs: SignSeries, max_lag: int) -> LagCurve:
    """Empirical sign autocorrelation values[l] = mean_n eps[n+l] * eps[n].

    No mean is subtracted (signs are centred by construction), which avoids
    the usual O(n**-gamma) bias of demeaned estimators on long-memory series.
    Products of +-1 signs are exactly +-1, so the per-lag standard error
    follows from the mean alone: var = (1 - mean^2) * count / (count - 1).
    The quoted errors treat summands as independent; long-memory inflation is
    not corrected here.
    """
    x = signs.to_float()
    n = len(x)
    if not 0 <= max_lag < n:
        raise ValueError("max_lag must be smaller than the series length")
    values = np.empty(max_lag + 1)
    counts = n - np.arange(max_lag + 1)
    values[0] = 1.0
    for lag in range(1, max_lag + 1):
        values[lag] = (x[lag:] @ x[: n - lag]) / (n - lag)
    with np.errstate(invalid="ignore"):
        stderr = np.where(
            counts >= 2,
            np.sqrt(np.clip(1.0 - values**2, 0.0, None) / np.maximum(counts - 1, 1)),
            np.nan,
        )
    stderr[0] = 0.0
    return LagCurve(values, counts.astype(np.int64), stderr)
