"""Surprise reformulation of transient impact, and conditional-impact checks.

A linear predictor of the next trade sign turns the propagator price into a
permanent response to the *unpredictable* part of the flow: with prediction
coefficients b the price

    p[t] = p0 + g1 * sum_{t'<t} (eps[t'] - eps_hat[t'])

coincides sample-by-sample with the causal impact sum whose kernel satisfies

    G(1) = g1,   G(l+1) = G(l) - g1 * b(l).

Decaying kernels therefore correspond to positive predictor coefficients
(persistent flow), and the kernel increments are the negated, rescaled
predictor.  `fit_linear_predictor` returns the least-squares predictor, and
`kernel_from_filter` / `filter_from_kernel` are exact inverses implementing
the identification above.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_toeplitz, toeplitz
from scipy.signal import fftconvolve

from .orderflow import estimate_sign_corr
from .propagator import Kernel
from .series import PriceSeries, SignSeries

__all__ = [
    "LinearFilter",
    "ConditionalImpactReport",
    "fit_linear_predictor",
    "predict_signs",
    "surprise_price",
    "kernel_from_filter",
    "filter_from_kernel",
    "conditional_impact",
]

_MAX_COND = 1e10


@dataclass(frozen=True, eq=False)
class LinearFilter:
    """Sign-prediction coefficients b at lags 1..M: eps_hat[t] = sum b(l) eps[t-l]."""

    b: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.b, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError("filter coefficients must be one-dimensional")
        if not np.isfinite(arr).all():
            raise ValueError("filter coefficients must be finite")
        object.__setattr__(self, "b", arr)

    @property
    def order(self) -> int:
        return len(self.b)

    def gain_bound(self) -> float:
        """Bound on |eps_hat| for +-1 inputs: sum of |b|."""
        return float(np.abs(self.b).sum())


def fit_linear_predictor(signs: SignSeries, order: int) -> LinearFilter:
    """Least-squares linear predictor of the next sign from the last `order`.

    Solves the normal equations T b = c built from the empirical sign
    autocorrelation (T the symmetric Toeplitz matrix of C(0..M-1), c the
    vector C(1..M)) with the Levinson-Durbin solver.  Persistent flow gives
    positive coefficients.
    """
    n = len(signs)
    if not 1 <= order < n / 10:
        raise ValueError("order must satisfy 1 <= order < len(signs)/10")
    corr = estimate_sign_corr(signs, order)
    col = corr.values[:order]
    rhs = corr.values[1 : order + 1]
    cond = float(np.linalg.cond(toeplitz(col)))
    if not np.isfinite(cond) or cond > _MAX_COND:
        raise np.linalg.LinAlgError(
            f"sign autocorrelation matrix is near-singular (cond {cond:.2e})"
        )
    b = solve_toeplitz(col, rhs)
    return LinearFilter(b)


def predict_signs(signs: SignSeries, filt: LinearFilter) -> np.ndarray:
    """Causal predictions eps_hat[t] = sum_l b(l) eps[t-l] (zero-padded start)."""
    x = signs.to_float()
    n = len(x)
    kernel = np.concatenate([[0.0], filt.b])
    if n * len(kernel) <= (1 << 24):
        hat = np.convolve(x, kernel)[:n]
    else:
        hat = fftconvolve(x, kernel)[:n]
    return hat


def surprise_price(
    signs: SignSeries,
    filt: LinearFilter,
    g1: float,
    p0: float = 0.0,
) -> PriceSeries:
    """Permanent response to the surprise in the order flow.

    p[t] = p0 + g1 * sum_{t'<t} (eps[t'] - eps_hat[t']).  A perfectly
    predicted flow leaves the price at p0; a zero filter gives a plain random
    walk over the signs.
    """
    if not g1 > 0:
        raise ValueError("g1 must be positive")
    x = signs.to_float()
    innov = x - predict_signs(signs, filt)
    steps = np.concatenate([[0.0], g1 * innov[:-1]])
    return PriceSeries(p0 + np.cumsum(steps), p0)


def kernel_from_filter(filt: LinearFilter, g1: float, length: int | None = None) -> Kernel:
    """Impact kernel equivalent to a surprise model with predictor `filt`.

    G(1) = g1 and G(l+1) = G(l) - g1*b(l), cumulated over the filter order.
    Beyond the filter order the surprise response is permanent, so `length`
    (default order+1) may extend the tabulation by holding the last value.
    """
    if not g1 > 0:
        raise ValueError("g1 must be positive")
    M = filt.order
    g = np.empty(M + 1)
    g[0] = g1
    g[1:] = g1 - g1 * np.cumsum(filt.b)
    if length is not None:
        if length < M + 1:
            raise ValueError("length must be at least order + 1")
        g = np.concatenate([g, np.full(length - M - 1, g[-1])])
    return Kernel(g, "tabulated", {})


def filter_from_kernel(kernel: Kernel) -> LinearFilter:
    """Predictor whose surprise model reproduces `kernel`; inverse of
    `kernel_from_filter`: b(l) = (G(l) - G(l+1)) / G(1)."""
    g = kernel.g
    if g[0] == 0:
        raise ValueError("G(1) must be non-zero")
    return LinearFilter(-np.diff(g) / g[0])


@dataclass(frozen=True)
class ConditionalImpactReport:
    """One-step conditional impacts split by flow continuation/reversal.

    balance = p_plus * g_plus - (1 - p_plus) * g_minus; its vanishing is the
    condition for the next return to be unpredictable from the last sign.
    """

    p_plus: float
    g_plus: float
    g_minus: float
    balance: float
    balance_stderr: float
    n_continuations: int
    n_reversals: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_plus <= 1.0:
            raise ValueError("p_plus must lie in [0, 1]")

    def to_dict(self) -> dict:
        return {
            "p_plus": self.p_plus,
            "g_plus": self.g_plus,
            "g_minus": self.g_minus,
            "balance": self.balance,
            "balance_stderr": self.balance_stderr,
        }


def conditional_impact(price: PriceSeries, signs: SignSeries) -> ConditionalImpactReport:
    """Impact of a trade conditioned on whether it continues the previous one.

    p_plus is the buy-follows-buy probability (estimated on buys); g_plus and
    g_minus are the mean signed next-step moves after continuing resp.
    reversing trades.  The balance weighs the branches by their in-sample
    frequencies, which makes it identical to the mean next-step move signed
    by the *previous* trade -- the efficiency condition in estimator form --
    and its standard error comes from batch means of that product series.
    """
    p = price.mid
    x = signs.signs
    n = len(p)
    if len(x) != n:
        raise ValueError("price and signs must have equal length")
    if n < 100:
        raise ValueError("need at least 100 aligned samples")
    # Trade t+1 moves the mid from p[t+1] to p[t+2].
    move = (p[2:] - p[1:-1]) * x[1 : n - 1]
    cont = x[1 : n - 1] == x[: n - 2]
    buys = x[: n - 2] == 1
    n_cont = int(cont.sum())
    n_rev = int((~cont).sum())
    if n_cont < 2 or n_rev < 2:
        raise ValueError("insufficient samples in a conditional branch")
    p_plus = float(cont[buys].mean()) if buys.any() else float(cont.mean())
    g_plus = float(move[cont].mean())
    g_minus = float(move[~cont].mean())
    # cont <=> eps[t+1]*eps[t] = +1, so frequency-weighted branch difference
    # collapses to the signed product mean.
    signed = move * np.where(cont, 1.0, -1.0)
    balance = float(signed.mean())
    stderr = _balance_stderr(signed)
    return ConditionalImpactReport(
        p_plus=p_plus,
        g_plus=g_plus,
        g_minus=g_minus,
        balance=balance,
        balance_stderr=stderr,
        n_continuations=n_cont,
        n_reversals=n_rev,
    )


def _balance_stderr(signed: np.ndarray) -> float:
    """Batch-means error of the signed product mean (serial dependence)."""
    m = len(signed)
    block = 512
    nblocks = m // block
    if nblocks >= 8:
        means = signed[: nblocks * block].reshape(nblocks, block).mean(axis=1)
        return float(means.std(ddof=1) / np.sqrt(nblocks))
    return float(signed.std(ddof=1) / np.sqrt(m))
