"""Transient-impact price construction, response functions and diffusion checks.

The price is a causal sum over past impacts: each trade moves the mid by its
sign times its mark factor, propagated forward by a single-trade kernel G.
The response curve averages signed price moves after a trade; for correlated
flow it mixes G with the sign autocorrelation, and the model-implied mix is
available as `predicted_response`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from .series import LagCurve, MarkSeries, PriceSeries, SignSeries

__all__ = [
    "Kernel",
    "ModelParams",
    "make_kernel",
    "build_price",
    "response",
    "predicted_response",
    "signature_plot",
    "critical_beta",
]

KERNEL_FAMILIES = ("power_law", "permanent", "exponential", "tabulated")

# Direct convolution below this work estimate: exact sums for tiny cases.
_DIRECT_CONV_OPS = 1 << 24


def critical_beta(gamma: float) -> float:
    """Kernel decay exponent that offsets sign memory of exponent gamma."""
    return 0.5 * (1.0 - gamma)


def _power_law_values(lags: np.ndarray, gamma0: float, beta: float, ell0: float) -> np.ndarray:
    return gamma0 / (ell0**2 + lags.astype(np.float64) ** 2) ** (0.5 * beta)


@dataclass(frozen=True, eq=False)
class Kernel:
    """Single-trade impact G tabulated on lags 1..L, plus family metadata.

    `g[i]` is G(i+1).  The family records how values continue beyond the
    truncation lag L: analytic families extend by their formula, `permanent`
    holds its level, and `tabulated` kernels are zero beyond L.
    """

    g: np.ndarray
    family: str = "tabulated"
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        arr = np.asarray(self.g, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("kernel values must form a non-empty 1-d array")
        if not np.isfinite(arr).all():
            raise ValueError("kernel values must be finite")
        if self.family not in KERNEL_FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}")
        object.__setattr__(self, "g", arr)

    @property
    def truncation(self) -> int:
        return len(self.g)

    def extended(self, max_lag: int) -> np.ndarray:
        """Values at lags 1..max_lag, continuing beyond L per family."""
        L = self.truncation
        if max_lag <= L:
            return self.g[:max_lag].copy()
        tail_lags = np.arange(L + 1, max_lag + 1, dtype=np.float64)
        if self.family == "power_law":
            tail = _power_law_values(tail_lags, **self.params)
        elif self.family == "permanent":
            tail = np.full(len(tail_lags), self.params["g0"])
        elif self.family == "exponential":
            tail = self.params["g0"] * np.exp(-tail_lags / self.params["tau"])
        else:
            tail = np.zeros(len(tail_lags))
        return np.concatenate([self.g, tail])


def make_kernel(family: str, L: int, **params) -> Kernel:
    """Tabulate an impact kernel on lags 1..L.

    Families, with their parameters:

    - ``power_law``: gamma0 / (ell0**2 + lag**2)**(beta/2); requires beta > 0,
      gamma0 > 0, ell0 >= 0 (ell0 = 0 gives a pure power law).
    - ``permanent``: constant g0 > 0.
    - ``exponential``: g0 * exp(-lag/tau); requires tau > 0.
    - ``tabulated``: explicit `values` (finite, length L).
    """
    if L < 1:
        raise ValueError("truncation lag L must be at least 1")
    lags = np.arange(1, L + 1, dtype=np.float64)
    if family == "power_law":
        beta = params.get("beta")
        gamma0 = params.get("gamma0", 1.0)
        ell0 = params.get("ell0", 0.0)
        if beta is None or beta <= 0:
            raise ValueError("power_law kernel requires beta > 0")
        if gamma0 <= 0:
            raise ValueError("power_law kernel requires gamma0 > 0")
        if ell0 < 0:
            raise ValueError("power_law kernel requires ell0 >= 0")
        g = _power_law_values(lags, gamma0, beta, ell0)
        return Kernel(g, "power_law", {"gamma0": gamma0, "beta": beta, "ell0": ell0})
    if family == "permanent":
        g0 = params.get("g0")
        if g0 is None or g0 <= 0:
            raise ValueError("permanent kernel requires g0 > 0")
        return Kernel(np.full(L, float(g0)), "permanent", {"g0": float(g0)})
    if family == "exponential":
        g0 = params.get("g0")
        tau = params.get("tau")
        if g0 is None or g0 <= 0:
            raise ValueError("exponential kernel requires g0 > 0")
        if tau is None or tau <= 0:
            raise ValueError("exponential kernel requires tau > 0")
        g = g0 * np.exp(-lags / tau)
        return Kernel(g, "exponential", {"g0": float(g0), "tau": float(tau)})
    if family == "tabulated":
        values = params.get("values")
        if values is None:
            raise ValueError("tabulated kernel requires values")
        values = np.asarray(values, dtype=np.float64)
        if len(values) != L:
            raise ValueError("tabulated kernel values must have length L")
        return Kernel(values, "tabulated", {})
    raise ValueError(f"unknown kernel family {family!r}")


@dataclass(frozen=True)
class ModelParams:
    """Response normalisation K (> 0) and the volume-impact exponent psi."""

    K: float = 1.0
    psi: float = 0.1

    def __post_init__(self) -> None:
        if not self.K > 0:
            raise ValueError("K must be positive")

    @classmethod
    def from_marks(cls, marks: MarkSeries) -> "ModelParams":
        """Default normalisation K = E[S * V**psi] of the mark law."""
        return cls(K=float(marks.impact_sizes().mean()), psi=marks.psi)


def build_price(
    signs: SignSeries,
    marks: MarkSeries,
    kernel: Kernel,
    p0: float = 0.0,
) -> PriceSeries:
    """Causal impact sum p[t] = p0 + sum_{0 < t-t' <= L} G(t-t') * eps * S * V**psi.

    Contributions older than the kernel truncation L are dropped.  p[t] never
    depends on trades at or after t, so p[t] is the pre-trade mid.
    """
    n = len(signs)
    if len(marks) != n:
        raise ValueError("signs and marks must have equal length")
    if kernel.truncation > n:
        raise ValueError("kernel truncation exceeds the series length")
    phi = signs.to_float() * marks.impact_sizes()
    gpad = np.concatenate([[0.0], kernel.g])
    if n * len(gpad) <= _DIRECT_CONV_OPS:
        acc = np.convolve(phi, gpad)[:n]
    else:
        acc = fftconvolve(phi, gpad)[:n]
    return PriceSeries(p0 + acc, p0)


def _batch_stderr(prod: np.ndarray, lag: int) -> float:
    """Standard error of the mean of serially dependent per-trade products.

    Batch means with blocks much longer than the lag absorb the overlap
    correlation between successive windows; short series fall back to the
    naive i.i.d. error.
    """
    m = len(prod)
    block = max(512, 16 * lag)
    nblocks = m // block
    if nblocks >= 8:
        means = prod[: nblocks * block].reshape(nblocks, block).mean(axis=1)
        return float(means.std(ddof=1) / np.sqrt(nblocks))
    if m < 2:
        return np.nan
    return float(prod.std(ddof=1) / np.sqrt(m))


def response(price: PriceSeries, signs: SignSeries, max_lag: int) -> LagCurve:
    """Average signed price move: values[l] = mean_n (p[n+l] - p[n]) * eps[n].

    Averages over all trades, independently of their volume.  Standard errors
    use batch means (blocks of >= 16 lags) because successive windows overlap.
    """
    p = price.mid
    x = signs.to_float()
    n = len(p)
    if len(x) != n:
        raise ValueError("price and signs must have equal length")
    if not 1 <= max_lag < n:
        raise ValueError("max_lag must leave at least one overlapping pair")
    values = np.zeros(max_lag + 1)
    counts = (n - np.arange(max_lag + 1)).astype(np.int64)
    stderr = np.zeros(max_lag + 1)
    for lag in range(1, max_lag + 1):
        prod = (p[lag:] - p[:-lag]) * x[: n - lag]
        values[lag] = prod.mean()
        stderr[lag] = _batch_stderr(prod, lag)
    return LagCurve(values, counts, stderr)


def predicted_response(
    kernel: Kernel,
    corr: LagCurve,
    params: ModelParams,
    max_lag: int,
) -> LagCurve:
    """Model-implied response from a kernel and a sign autocorrelation.

    values[l] = K * [ G(l) + sum_{0<n<l} G(l-n) C(n)
                       + sum_{n=1..L} (G(l+n) - G(n)) C(n) ]

    The trailing sum is truncated at the kernel truncation L; G beyond L is
    continued per the kernel family (zero for tabulated kernels, which matches
    how `build_price` drops old contributions).
    """
    L = kernel.truncation
    if max_lag > L:
        raise ValueError("max_lag must not exceed the kernel truncation")
    if corr.max_lag < L:
        raise ValueError("corr must cover lags up to the kernel truncation")
    c = corr.values[: L + 1]
    g = kernel.g
    gext = kernel.extended(L + max_lag)
    values = np.zeros(max_lag + 1)
    # sum_{0<n<l} G(l-n) C(n): a linear convolution of G and C over lags >= 1.
    conv = np.convolve(g[: max_lag - 1], c[1:max_lag]) if max_lag >= 2 else np.zeros(0)
    # sum_n G(l+n) C(n) for each l, and the l-independent sum_n G(n) C(n).
    cross = np.correlate(gext, c[1 : L + 1], mode="valid")
    s0 = float(g @ c[1 : L + 1])
    for lag in range(1, max_lag + 1):
        term2 = conv[lag - 2] if lag >= 2 else 0.0
        values[lag] = params.K * (gext[lag - 1] + term2 + cross[lag] - s0)
    return LagCurve.model_curve(values)


def signature_plot(price: PriceSeries, max_lag: int) -> LagCurve:
    """Diffusion check: values[l] = Var(p[n+l] - p[n]) / l.

    Flat in l for a diffusive (unpredictable) price; growing under trending,
    decaying under mean-reversion.  The lag-0 entry is NaN by convention.
    Standard errors come from non-overlapping windows.
    """
    p = price.mid
    n = len(p)
    if not 1 <= max_lag <= n - 2:
        raise ValueError("need at least two increments at max_lag")
    values = np.full(max_lag + 1, np.nan)
    counts = np.zeros(max_lag + 1, dtype=np.int64)
    stderr = np.full(max_lag + 1, np.nan)
    for lag in range(1, max_lag + 1):
        d = p[lag:] - p[:-lag]
        values[lag] = d.var() / lag
        counts[lag] = len(d)
        disjoint = p[::lag]
        dd = np.diff(disjoint) ** 2
        if len(dd) >= 2:
            stderr[lag] = dd.std(ddof=1) / np.sqrt(len(dd)) / lag
    return LagCurve(values, counts, stderr)
