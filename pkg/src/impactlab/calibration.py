"""Kernel recovery from response curves and the generic fitting toolbox.

The response-from-kernel map is linear in the tabulated kernel, so recovering
G from an empirical response and sign autocorrelation is a (possibly
regularised) linear least-squares problem.  The toolbox also provides log-log
power-law fits with an optional fitted asymptote, the Hill tail-index
estimator, and the volatility decomposition regression.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz
from scipy.optimize import minimize_scalar

from .propagator import Kernel
from .series import LagCurve

__all__ = [
    "FitResult",
    "VolDecomposition",
    "CalibrationResult",
    "response_matrix",
    "calibrate_kernel",
    "fit_powerlaw",
    "hill_tail",
    "hill_plot",
    "vol_decomposition",
]


@dataclass(frozen=True)
class FitResult:
    """Amplitude/exponent pair with a confidence band for the exponent.

    For log-log fits `exponent` is the slope (negative for decaying curves)
    and `amplitude` the prefactor; for tail fits `exponent` is the tail index
    and `amplitude` the order statistic anchoring the tail.  `offset` holds a
    jointly fitted asymptote when one was requested.
    """

    amplitude: float
    exponent: float
    stderr_exponent: float
    fit_range: tuple
    residual: float
    offset: float = 0.0

    def __post_init__(self) -> None:
        if self.residual < 0:
            raise ValueError("residual must be non-negative")

    def to_dict(self) -> dict:
        return {
            "amplitude": self.amplitude,
            "exponent": self.exponent,
            "stderr": self.stderr_exponent,
            "range": list(self.fit_range),
            "residual": self.residual,
            "offset": self.offset,
        }


@dataclass(frozen=True)
class VolDecomposition:
    """Split of squared per-trade volatility into impact and jump parts."""

    A: float
    J2: float
    r2: float
    jump_share: float
    impact_dominated: bool

    def __post_init__(self) -> None:
        if self.J2 < 0:
            raise ValueError("J2 must be non-negative")

    def to_dict(self) -> dict:
        return {
            "A": self.A,
            "J2": self.J2,
            "r2": self.r2,
            "jump_share": self.jump_share,
            "impact_dominated": self.impact_dominated,
        }


# ---------------------------------------------------------------------------
# Kernel calibration
# ---------------------------------------------------------------------------


def response_matrix(corr_values: np.ndarray, L: int) -> np.ndarray:
    """Dense operator M with response(l) = K * (M @ g) for a tabulated kernel.

    Row l, column m (both 1-based lags): M[l, m] = C(|l - m|) - C(m), which
    folds the instantaneous term, the inter-lag convolution and the trailing
    difference sum of the response formula into one matrix.
    """
    c = np.asarray(corr_values, dtype=np.float64)
    if len(c) < L + 1:
        raise ValueError("corr_values must cover lags 0..L")
    M = toeplitz(c[:L]) - c[1 : L + 1][np.newaxis, :]
    return M


@dataclass(frozen=True)
class CalibrationResult:
    """Recovered kernel plus solver diagnostics."""

    kernel: Kernel
    condition_number: float
    residual: float
    ridge: float

    def to_dict(self) -> dict:
        return {
            "condition_number": self.condition_number,
            "residual": self.residual,
            "ridge": self.ridge,
            "L": self.kernel.truncation,
        }


_MAX_COND = 1e12


def calibrate_kernel(
    R_emp: LagCurve,
    C_emp: LagCurve,
    K: float,
    L: int,
    ridge: float = 0.0,
    noise_scale: np.ndarray | float | None = None,
) -> CalibrationResult:
    """Recover G(1..L) from an empirical response and sign autocorrelation.

    Minimises ||R - K*M g||^2 + ridge * ||D g||^2 where M is the response
    operator and D the first-difference matrix (the truth is a smooth
    decaying kernel, so kernel increments are penalised).

    If `noise_scale` is given (per-lag noise std, scalar or length-L array),
    the ridge weight is chosen by the discrepancy principle: the smallest
    ridge whose residual norm reaches the expected noise norm.
    """
    if not K > 0:
        raise ValueError("K must be positive")
    if R_emp.max_lag < L or C_emp.max_lag < L:
        raise ValueError("response and correlation curves must cover lags 1..L")
    if ridge < 0:
        raise ValueError("ridge must be non-negative")
    r = R_emp.values[1 : L + 1]
    A = K * response_matrix(C_emp.values, L)
    cond = float(np.linalg.cond(A))
    D = np.diff(np.eye(L), axis=0)

    def solve(w: float) -> tuple[np.ndarray, float]:
        if w == 0.0:
            g, *_ = np.linalg.lstsq(A, r, rcond=None)
        else:
            Astack = np.vstack([A, np.sqrt(w) * D])
            rstack = np.concatenate([r, np.zeros(L - 1)])
            g, *_ = np.linalg.lstsq(Astack, rstack, rcond=None)
        res = float(np.linalg.norm(A @ g - r))
        return g, res

    if noise_scale is not None:
        target = float(np.linalg.norm(np.broadcast_to(noise_scale, (L,))))
        g, res = solve(0.0)
        if res < target:
            # Bisect log-ridge up to the discrepancy level; residual grows
            # monotonically with the ridge weight.
            lo, hi = -14.0, 8.0
            while solve(10.0**hi)[1] < target and hi < 20.0:
                hi += 2.0
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                _, res_mid = solve(10.0**mid)
                if res_mid < target:
                    lo = mid
                else:
                    hi = mid
            ridge = 10.0 ** (0.5 * (lo + hi))
        g, res = solve(ridge)
    else:
        if ridge == 0.0 and cond > _MAX_COND:
            raise np.linalg.LinAlgError(
                f"response operator is rank-deficient (cond {cond:.2e}); "
                "a positive ridge is required"
            )
        g, res = solve(ridge)

    kernel = Kernel(g, "tabulated", {})
    return CalibrationResult(kernel, cond, res, float(ridge))


# ---------------------------------------------------------------------------
# Power-law fitting
# ---------------------------------------------------------------------------


def _log_bin(lags, y, w, n_bins):
    """Geometric binning: average y (and weights) within log-spaced lag bins."""
    lo, hi = lags[0], lags[-1]
    edges = np.geomspace(lo, hi * (1 + 1e-12), n_bins + 1)
    idx = np.searchsorted(edges, lags, side="right") - 1
    bl, by, bw = [], [], []
    for b in range(n_bins):
        sel = idx == b
        m = int(sel.sum())
        if m == 0:
            continue
        bl.append(np.exp(np.mean(np.log(lags[sel]))))
        by.append(np.mean(y[sel]))
        # Mean of independent-ish points: variances add in quadrature.
        bw.append(m**2 / np.sum(1.0 / w[sel]))
    return np.asarray(bl), np.asarray(by), np.asarray(bw)


def _wls_line(x, y, w):
    """Weighted straight-line fit; returns slope, intercept, slope stderr,
    residuals and the unexplained weighted variance fraction."""
    W = np.asarray(w, dtype=np.float64)
    X = np.column_stack([np.ones_like(x), x])
    XtW = X.T * W
    cov = np.linalg.inv(XtW @ X)
    beta = cov @ (XtW @ y)
    resid = y - X @ beta
    dof = max(len(x) - 2, 1)
    scale = float((W * resid**2).sum() / dof)
    slope_se = float(np.sqrt(cov[1, 1] * scale))
    ybar = float((W * y).sum() / W.sum())
    tss = float((W * (y - ybar) ** 2).sum())
    rss = float((W * resid**2).sum())
    unexplained = rss / tss if tss > 0 else np.inf
    return float(beta[1]), float(beta[0]), slope_se, resid, unexplained


def fit_powerlaw(
    curve: LagCurve,
    lag_range: tuple,
    offset_mode: str = "none",
    n_bins: int | None = None,
    weighted: bool = False,
) -> FitResult:
    """Log-log power-law fit y(l) = amplitude * l**exponent (+ offset).

    Parameters
    ----------
    curve : lag curve to fit (entries with zero counts are model values and
        are used as-is).
    lag_range : inclusive (lo, hi) lag interval.
    offset_mode : "none", or "fit_asymptote" to jointly fit a constant y(inf)
        by one-dimensional search minimising the log-log residual.
    n_bins : optionally average the curve in this many geometric lag bins
        before fitting (recommended for noisy tails).
    weighted : weight points by their standard errors (in log space).
    """
    lo, hi = int(lag_range[0]), int(lag_range[1])
    if lo < 1 or hi <= lo:
        raise ValueError("lag_range must satisfy 1 <= lo < hi")
    hi = min(hi, curve.max_lag)
    lags = np.arange(lo, hi + 1, dtype=np.float64)
    y = curve.values[lo : hi + 1]
    se = curve.stderr[lo : hi + 1]
    keep = np.isfinite(y)
    lags, y, se = lags[keep], y[keep], se[keep]
    if weighted:
        ok = np.isfinite(se) & (se > 0)
        if not ok.any():
            raise ValueError("weighted fit requested but no usable standard errors")
        lags, y, se = lags[ok], y[ok], se[ok]
        w = 1.0 / se**2
    else:
        w = np.ones_like(y)
    if n_bins is not None:
        lags, y, w = _log_bin(lags, y, w, n_bins)
        if weighted:
            se = 1.0 / np.sqrt(w)
    if len(y) < 4:
        raise ValueError("need at least 4 points to fit a power law")

    logl = np.log(lags)

    # Points this close to a candidate asymptote carry no slope information
    # and cannot enter a log transform; they still enter the data-space score.
    floor = 2.0 * se if weighted else np.zeros_like(y)

    def fit_at(offset: float):
        shifted = y - offset
        sel = shifted > np.maximum(floor, 0.0)
        if offset == 0.0 and offset_mode == "none":
            sel = np.ones_like(sel, dtype=bool)
            if np.any(shifted <= 0):
                return None
        if sel.sum() < 4:
            return None
        logy = np.log(shifted[sel])
        # In log space var(log y) ~ (se/y)^2, so weights scale with y^2.
        wlog = w[sel] * shifted[sel] ** 2 if weighted else w[sel]
        slope, intercept, slope_se, resid, _ = _wls_line(np.log(lags[sel]), logy, wlog)
        rms = float(np.sqrt(np.mean(resid**2)))
        # Score the candidate offset in data space with offset-independent
        # weights: a pure log-residual objective is degenerate (pushing the
        # offset far down flattens the log curve and shrinks its residuals
        # without fitting anything).
        model = offset + np.exp(intercept) * lags**slope
        chi2 = float(np.sum(w * (y - model) ** 2))
        return slope, intercept, slope_se, rms, chi2

    if offset_mode == "none":
        if np.any(y <= 0):
            raise ValueError("curve values must be positive on the fit range")
        offset = 0.0
        out = fit_at(0.0)
    elif offset_mode == "fit_asymptote":
        ymin, ymax = float(y.min()), float(y.max())
        span = ymax - ymin
        if span <= 0:
            raise ValueError("curve is constant; no power law to fit")

        def objective(a: float) -> float:
            res = fit_at(a)
            return res[4] if res is not None else np.inf

        lo_a = ymin - 2 * span
        hi_a = ymax
        grid = np.linspace(lo_a, hi_a, 201)
        scores = np.array([objective(a) for a in grid])
        if not np.isfinite(scores).any():
            raise ValueError("asymptote search found no feasible offset")
        k = int(np.argmin(scores))
        glo = grid[max(k - 1, 0)]
        ghi = grid[min(k + 1, len(grid) - 1)]
        best = minimize_scalar(objective, bounds=(glo, ghi), method="bounded")
        offset = float(best.x) if best.fun <= scores[k] else float(grid[k])
        out = fit_at(offset)
        if out is None:
            raise ValueError("asymptote search failed to find positive residual values")
    else:
        raise ValueError("offset_mode must be 'none' or 'fit_asymptote'")

    slope, intercept, slope_se, rms, _ = out
    return FitResult(
        amplitude=float(np.exp(intercept)),
        exponent=slope,
        stderr_exponent=slope_se,
        fit_range=(lo, hi),
        residual=rms,
        offset=offset,
    )


# ---------------------------------------------------------------------------
# Tail index estimation
# ---------------------------------------------------------------------------


def hill_tail(samples: np.ndarray, k: int) -> FitResult:
    """Hill tail-index estimate over the k largest order statistics.

    mu_hat = k / sum_{i<=k} ln(x_(i) / x_(k+1)), with asymptotic standard
    error mu_hat / sqrt(k).  Scale-invariant by construction.  The residual
    reports the RMS misfit of the ordered log-tail against the fitted Pareto
    quantiles, as a linearity diagnostic.
    """
    x = np.asarray(samples, dtype=np.float64)
    x = x[np.isfinite(x) & (x > 0)]
    if k < 20:
        raise ValueError("k must be at least 20 for a stable tail estimate")
    if len(x) <= k:
        raise ValueError("need more than k positive samples")
    order = np.sort(x)[::-1]
    top = order[:k]
    anchor = order[k]
    logs = np.log(top / anchor)
    total = logs.sum()
    if total <= 0:
        raise ValueError("degenerate tail: ties make the Hill ratio undefined")
    mu = k / total
    # Pareto quantile line the ordered tail should follow.
    expected = np.log((k + 1) / np.arange(1, k + 1)) / mu
    resid = float(np.sqrt(np.mean((logs - expected) ** 2)))
    return FitResult(
        amplitude=float(anchor),
        exponent=float(mu),
        stderr_exponent=float(mu / np.sqrt(k)),
        fit_range=(1, k),
        residual=resid,
    )


def hill_plot(samples: np.ndarray, k_values) -> tuple[np.ndarray, np.ndarray]:
    """Hill estimates across k, for plateau inspection (no auto-selection)."""
    ks = np.asarray(list(k_values), dtype=np.int64)
    mus = np.array([hill_tail(samples, int(k)).exponent for k in ks])
    return ks, mus


# ---------------------------------------------------------------------------
# Volatility decomposition
# ---------------------------------------------------------------------------


def vol_decomposition(
    sigma1_sq: np.ndarray,
    R1_sq: np.ndarray,
    dominance_threshold: float = 0.1,
) -> VolDecomposition:
    """Constrained regression sigma1^2 = A * R1^2 + J2 with J2 >= 0.

    When the unconstrained intercept is negative, J2 is pinned at zero and
    the slope refit through the origin (the exact solution of the constrained
    problem).  `jump_share` is J2 / mean(sigma1^2); the impact-dominated flag
    is raised when that share falls below `dominance_threshold`.
    """
    y = np.asarray(sigma1_sq, dtype=np.float64)
    x = np.asarray(R1_sq, dtype=np.float64)
    if len(y) != len(x):
        raise ValueError("inputs must have equal length")
    if len(y) < 10:
        raise ValueError("need at least 10 points")
    if (y < 0).any() or (x < 0).any():
        raise ValueError("inputs must be non-negative")
    if np.ptp(x) == 0:
        raise ValueError("regressor is constant; decomposition is degenerate")
    xc = x - x.mean()
    A = float((xc @ (y - y.mean())) / (xc @ xc))
    J2 = float(y.mean() - A * x.mean())
    if J2 < 0:
        J2 = 0.0
        A = float((x @ y) / (x @ x))
    fitted = A * x + J2
    ss_res = float(((y - fitted) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    share = float(J2 / y.mean()) if y.mean() > 0 else 0.0
    return VolDecomposition(
        A=A,
        J2=J2,
        r2=r2,
        jump_share=share,
        impact_dominated=bool(share < dominance_threshold),
    )
