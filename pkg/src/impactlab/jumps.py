"""Jump detection on one-minute returns: local volatility, threshold events,
tail statistics, news matching and post-jump relaxation profiles.

A bin is an s-jump when |r(t)| exceeds s times the trailing mean absolute
return.  The trailing window excludes the current bin, so detection is causal
and the tested return never suppresses its own threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .calibration import FitResult, fit_powerlaw, hill_tail
from .series import LagCurve

__all__ = [
    "ReturnSeries",
    "LocalVol",
    "JumpEvent",
    "NewsFeed",
    "JumpTail",
    "RelaxationProfile",
    "local_vol",
    "detect_jumps",
    "jump_tail",
    "match_news",
    "relaxation_profile",
    "split_sessions",
    "synthetic_returns",
]


@dataclass(frozen=True, eq=False)
class ReturnSeries:
    """One-minute bin returns at strictly increasing timestamps (minutes)."""

    timestamps: np.ndarray
    returns: np.ndarray

    def __post_init__(self) -> None:
        ts = np.asarray(self.timestamps, dtype=np.float64)
        r = np.asarray(self.returns, dtype=np.float64)
        if ts.ndim != 1 or r.ndim != 1 or len(ts) != len(r):
            raise ValueError("timestamps and returns must be aligned 1-d arrays")
        if len(ts) == 0:
            raise ValueError("series must not be empty")
        if not np.isfinite(r).all():
            raise ValueError("returns must be finite")
        if len(ts) > 1 and not (np.diff(ts) > 0).all():
            raise ValueError("timestamps must be strictly increasing")
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "returns", r)

    def __len__(self) -> int:
        return len(self.returns)


def split_sessions(series: ReturnSeries, max_gap: float) -> list[ReturnSeries]:
    """Split at timestamp gaps larger than `max_gap` minutes.

    Returns crossing a session boundary should not enter jump statistics;
    run the pipeline on each piece separately.
    """
    if max_gap <= 0:
        raise ValueError("max_gap must be positive")
    gaps = np.where(np.diff(series.timestamps) > max_gap)[0] + 1
    pieces = []
    start = 0
    for cut in list(gaps) + [len(series)]:
        if cut > start:
            pieces.append(ReturnSeries(series.timestamps[start:cut], series.returns[start:cut]))
        start = cut
    return pieces


@dataclass(frozen=True, eq=False)
class LocalVol:
    """Trailing mean absolute return per bin; first `window` bins unusable."""

    sigma: np.ndarray
    window: int
    usable: np.ndarray

    def __len__(self) -> int:
        return len(self.sigma)


def local_vol(returns: ReturnSeries, window: int = 120) -> LocalVol:
    """sigma(t) = mean of |r| over the `window` bins strictly before t.

    The first `window` bins are flagged unusable, as are bins whose whole
    trailing window is zero (sigma = 0 carries no scale).
    """
    if window < 2:
        raise ValueError("window must be at least 2")
    r = np.abs(returns.returns)
    n = len(r)
    if n <= window:
        raise ValueError("series must be longer than the window")
    csum = np.concatenate([[0.0], np.cumsum(r)])
    sigma = np.full(n, np.nan)
    sigma[window:] = (csum[window:-1] - csum[:-window - 1]) / window
    usable = np.zeros(n, dtype=bool)
    usable[window:] = sigma[window:] > 0
    return LocalVol(sigma=sigma, window=window, usable=usable)


@dataclass(frozen=True)
class JumpEvent:
    """Detected s-jump: bin index, timestamp, realized size and classification."""

    index: int
    t: float
    s_realized: float
    direction: int
    classification: str = "unclassified"
    matched_news_time: float | None = None


def detect_jumps(returns: ReturnSeries, vol: LocalVol, s: float) -> list[JumpEvent]:
    """Bins with |r(t)| strictly above s * sigma(t) on the usable range."""
    if not s > 1:
        raise ValueError("threshold s must exceed 1")
    if len(vol) != len(returns):
        raise ValueError("vol must be computed from the same series")
    r = returns.returns
    with np.errstate(invalid="ignore"):
        hits = np.where(vol.usable & (np.abs(r) > s * vol.sigma))[0]
    return [
        JumpEvent(
            index=int(i),
            t=float(returns.timestamps[i]),
            s_realized=float(abs(r[i]) / vol.sigma[i]),
            direction=int(np.sign(r[i])),
        )
        for i in hits
    ]


@dataclass(frozen=True, eq=False)
class JumpTail:
    """Tail fit plus the cumulative count-vs-size curve behind it."""

    fit: FitResult
    s: np.ndarray
    cumulative: np.ndarray


def jump_tail(events: list[JumpEvent], s_min: float) -> JumpTail:
    """Tail index of realized jump sizes above s_min (Hill estimator).

    Also returns the cumulative number of events of size >= s for plotting:
    sizes sorted descending against counts 1..n.
    """
    sizes = np.array([e.s_realized for e in events], dtype=np.float64)
    above = np.sort(sizes[sizes > s_min])[::-1]
    if len(above) < 50:
        raise ValueError("need at least 50 events above s_min")
    fit = hill_tail(above, k=len(above) - 1)
    return JumpTail(fit=fit, s=above, cumulative=np.arange(1, len(above) + 1))


def crossover_size(tail_a: JumpTail, tail_b: JumpTail) -> float:
    """Size at which two fitted cumulative tails N(s) = k * (s/anchor)**-mu cross.

    Extrapolates both fits beyond the observed range; the heavier tail
    dominates beyond the returned size.
    """
    fa, fb = tail_a.fit, tail_b.fit
    if fa.exponent == fb.exponent:
        raise ValueError("tails with equal exponents do not cross")
    la = np.log(len(tail_a.s)) + fa.exponent * np.log(fa.amplitude)
    lb = np.log(len(tail_b.s)) + fb.exponent * np.log(fb.amplitude)
    return float(np.exp((la - lb) / (fa.exponent - fb.exponent)))


@dataclass(frozen=True, eq=False)
class NewsFeed:
    """Per-ticker news timestamps (minutes), sorted."""

    timestamps: np.ndarray
    tickers: tuple

    def __post_init__(self) -> None:
        ts = np.asarray(self.timestamps, dtype=np.float64)
        tick = tuple(str(t) for t in self.tickers)
        if ts.ndim != 1 or len(ts) != len(tick):
            raise ValueError("timestamps and tickers must be aligned")
        if len(ts) > 1 and (np.diff(ts) < 0).any():
            raise ValueError("timestamps must be sorted")
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "tickers", tick)

    def __len__(self) -> int:
        return len(self.timestamps)


def match_news(
    events: list[JumpEvent],
    feed: NewsFeed,
    window_before: float = 2.0,
    window_after: float = 10.0,
    ticker: str | None = None,
) -> list[JumpEvent]:
    """Classify events as news / no_news by proximity to feed items.

    An event can be claimed by an item lying in [t - window_before,
    t + window_after].  Matching is greedy by time distance (nearest pair
    first, earliest jump on ties) and each news item matches at most one
    jump.  Events returned in the original order, all classified.
    """
    if window_before < 0 or window_after < 0:
        raise ValueError("windows must be non-negative")
    times = feed.timestamps
    if ticker is not None:
        times = times[np.array([t == ticker for t in feed.tickers], dtype=bool)]
    candidates = []
    for ei, ev in enumerate(events):
        lo = np.searchsorted(times, ev.t - window_before, side="left")
        hi = np.searchsorted(times, ev.t + window_after, side="right")
        for ni in range(int(lo), int(hi)):
            candidates.append((abs(times[ni] - ev.t), ev.t, ei, ni))
    candidates.sort()
    used_events: set[int] = set()
    used_items: set[int] = set()
    matched: dict[int, float] = {}
    for _, _, ei, ni in candidates:
        if ei in used_events or ni in used_items:
            continue
        used_events.add(ei)
        used_items.add(ni)
        matched[ei] = float(times[ni])
    out = []
    for ei, ev in enumerate(events):
        if ei in matched:
            out.append(replace(ev, classification="news", matched_news_time=matched[ei]))
        else:
            out.append(replace(ev, classification="no_news", matched_news_time=None))
    return out


@dataclass(frozen=True, eq=False)
class RelaxationProfile:
    """Event-aligned mean |r| after jumps, and its power-law relaxation fit."""

    curve: LagCurve
    fit: FitResult
    n_events: int


def relaxation_profile(
    returns: ReturnSeries,
    events: list[JumpEvent],
    horizon: int,
    fit_range: tuple | None = None,
) -> dict[str, RelaxationProfile]:
    """Average |r(t0 + tau)| for tau = 1..horizon across events, per class.

    The jump bin itself is excluded.  Only events with the full horizon
    available enter; at least 10 are required per classification.  The decay
    is fitted as offset + amplitude * tau**exponent (asymptote fitted
    jointly), so `-exponent` estimates the relaxation exponent.
    """
    if horizon < 4:
        raise ValueError("horizon must be at least 4")
    r = np.abs(returns.returns)
    n = len(r)
    groups: dict[str, list[int]] = {}
    for ev in events:
        if ev.index + horizon < n:
            groups.setdefault(ev.classification, []).append(ev.index)
    out: dict[str, RelaxationProfile] = {}
    lo, hi = fit_range if fit_range is not None else (1, horizon)
    for label, idx in groups.items():
        if len(idx) < 10:
            raise ValueError(
                f"only {len(idx)} '{label}' events have a full post-event window; need >= 10"
            )
        idx_arr = np.asarray(idx)
        offsets = np.arange(1, horizon + 1)
        block = r[idx_arr[:, None] + offsets[None, :]]
        values = np.concatenate([[np.nan], block.mean(axis=0)])
        stderr = np.concatenate([[np.nan], block.std(axis=0, ddof=1) / np.sqrt(len(idx))])
        counts = np.concatenate([[0], np.full(horizon, len(idx), dtype=np.int64)])
        curve = LagCurve(values, counts, stderr)
        fit = fit_powerlaw(curve, (lo, hi), offset_mode="fit_asymptote", weighted=True)
        out[label] = RelaxationProfile(curve=curve, fit=fit, n_events=len(idx))
    return out


# ---------------------------------------------------------------------------
# Synthetic return generator with planted jumps
# ---------------------------------------------------------------------------


def synthetic_returns(
    n_bins: int,
    seed: int,
    base_vol: float = 1.0,
    jump_spacing: int = 250,
    jump_law=None,
    relax_zeta: float | None = None,
    relax_amplitude: float = 0.0,
    relax_horizon: int = 200,
    window: int = 120,
    clip: float = 2.5,
) -> tuple[ReturnSeries, list[int]]:
    """Gaussian-background returns with planted jumps of known size law.

    The background is a clipped normal (|z| <= clip), so it never crosses a
    jump threshold of 4 on its own.  Each planted jump is written as
    r = +-s * sigma_trail(t) with s drawn from `jump_law` and sigma_trail the
    actual trailing mean absolute return, so the realized size recovered by
    the detection pipeline equals the planted s exactly.  If `relax_zeta` is
    set, the background scale after each jump is raised by
    relax_amplitude * tau**-relax_zeta for tau = 1..relax_horizon.

    Returns the series and the planted jump bin indices.
    """
    from .orderflow import ParetoLaw  # local import: laws live with the flow generators

    if jump_law is None:
        jump_law = ParetoLaw(exponent=4.0, minimum=4.0)
    if n_bins <= window + jump_spacing:
        raise ValueError("n_bins too small for the requested spacing")
    rng = np.random.default_rng(seed)
    z = np.clip(rng.standard_normal(n_bins), -clip, clip)
    jump_bins: list[int] = []
    t = window + int(rng.integers(1, jump_spacing))
    while t < n_bins:
        jump_bins.append(t)
        t += max(1, int(rng.integers(jump_spacing // 2, 3 * jump_spacing // 2)))
    sizes = jump_law.sample(len(jump_bins), rng)
    jump_sign = np.where(rng.random(len(jump_bins)) < 0.5, -1.0, 1.0)
    excess = np.zeros(n_bins)
    if relax_zeta is not None and relax_amplitude > 0:
        tau = np.arange(1, relax_horizon + 1, dtype=np.float64)
        bump = relax_amplitude * tau**-relax_zeta
        for tb in jump_bins:
            hi = min(n_bins, tb + relax_horizon + 1)
            excess[tb + 1 : hi] += bump[: hi - tb - 1]
    r = base_vol * (1.0 + excess) * z
    jump_set = dict(zip(jump_bins, range(len(jump_bins))))
    absr = np.abs(r)
    csum = 0.0
    # Sequential pass keeps sigma_trail causal while jumps overwrite returns.
    buf = absr[:window].copy()
    csum = buf.sum()
    pos = 0
    for t in range(window, n_bins):
        sigma_t = csum / window
        if t in jump_set:
            j = jump_set[t]
            r[t] = jump_sign[j] * sizes[j] * sigma_t
            absr[t] = abs(r[t])
        csum += absr[t] - buf[pos]
        buf[pos] = absr[t]
        pos = (pos + 1) % window
    return ReturnSeries(np.arange(n_bins, dtype=np.float64), r), jump_bins
