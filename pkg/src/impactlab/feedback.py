"""Reduced-form spread-volatility feedback loop.

A damped two-variable map in which the spread chases the volatility-implied
spread and the volatility chases the spread-implied volatility:

    S[t+1]     = max(s_floor, (1 - g_sv) * S[t] + g_sv * vol[t] / c + eta_S)
    vol[t+1]   = max(0,       (1 - g_vs) * vol[t] + g_vs * c * S[t] + eta_V)

Every point on the line vol = c * S is a fixed point of the noiseless map, so
one eigenvalue of the deterministic part is exactly 1: the *level* along the
equilibrium line feels no restoring force (a soft mode) and random-walks under
noise.  The transverse imbalance mode contracts or explodes at rate
|1 - g_sv - g_vs|, which is what decides stability.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "FeedbackParams",
    "CoupledSeries",
    "CrisisStats",
    "simulate_feedback",
    "stability_threshold",
    "soft_mode_eigenvalues",
    "crisis_statistics",
]

_ESCAPE_FACTOR = 1e9


@dataclass(frozen=True)
class FeedbackParams:
    """Gains and scales of the coupled spread-volatility map."""

    c: float = 0.5
    g_sv: float = 0.2
    g_vs: float = 0.2
    noise_s: float = 0.001
    noise_v: float = 0.001
    s_floor: float = 0.01
    crisis_multiple: float = 4.0

    def __post_init__(self) -> None:
        if not self.c > 0:
            raise ValueError("c must be positive")
        if self.g_sv < 0 or self.g_vs < 0:
            raise ValueError("gains must be non-negative")
        if self.noise_s < 0 or self.noise_v < 0:
            raise ValueError("noise scales must be non-negative")
        if not self.s_floor > 0:
            raise ValueError("s_floor must be positive")
        if not self.crisis_multiple > 0:
            raise ValueError("crisis_multiple must be positive")


@dataclass(frozen=True, eq=False)
class CoupledSeries:
    """Simulated spread/vol paths with crisis flags and a stability verdict."""

    spread: np.ndarray
    vol: np.ndarray
    crisis_flags: np.ndarray
    stable: bool
    params: FeedbackParams

    def __len__(self) -> int:
        return len(self.spread)


def soft_mode_eigenvalues(params: FeedbackParams) -> tuple[float, float]:
    """Eigenvalues of the deterministic 2x2 map: (soft mode, imbalance mode).

    The matrix [[1-a, a/c], [b*c, 1-b]] has eigenvalues exactly 1 (along the
    vol = c*S line) and 1 - a - b (transverse).
    """
    a, b = params.g_sv, params.g_vs
    m = np.array([[1 - a, a / params.c], [b * params.c, 1 - b]])
    eig = np.linalg.eigvals(m)
    order = np.argsort(np.abs(eig - 1.0))
    return float(eig[order[0]].real), float(eig[order[1]].real)


def stability_threshold(params: FeedbackParams) -> float:
    """Contraction rate of the spread-vol imbalance: |1 - g_sv - g_vs|.

    The full spectral radius of the map is pinned at 1 by the structural
    soft mode (any level on vol = c*S is an equilibrium), so the stability
    verdict rests on the transverse eigenvalue alone: below 1 the imbalance
    mean-reverts, at 1 it diffuses, above 1 it explodes.
    """
    return abs(1.0 - params.g_sv - params.g_vs)


_CHUNK = 16384


def simulate_feedback(params: FeedbackParams, n: int, seed: int = 0) -> CoupledSeries:
    """Iterate the coupled map for n steps from S=1, vol=c.

    Deterministic per seed.  If the trajectory escapes (non-finite values or
    growth beyond 1e9 times the starting scale) the run stops early, the
    remainder is padded with the last value, and `stable` is False; numeric
    blow-up is an explicit outcome, not a crash.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = np.random.default_rng(seed)
    a, b, c = params.g_sv, params.g_vs, params.c
    spread = np.empty(n)
    vol = np.empty(n)
    s = max(params.s_floor, 1.0)
    v = c * s
    spread[0], vol[0] = s, v
    escape = _ESCAPE_FACTOR * max(s, v, 1.0)
    stable = True
    t = 1
    while t < n:
        m = min(_CHUNK, n - t)
        eta_s = params.noise_s * rng.standard_normal(m)
        eta_v = params.noise_v * rng.standard_normal(m)
        for i in range(m):
            s_new = (1 - a) * s + a * v / c + eta_s[i]
            v_new = (1 - b) * v + b * c * s + eta_v[i]
            s = s_new if s_new > params.s_floor else params.s_floor
            v = v_new if v_new > 0.0 else 0.0
            spread[t] = s
            vol[t] = v
            t += 1
            if not (np.isfinite(s) and np.isfinite(v)) or s > escape or v > escape:
                stable = False
                spread[t:] = spread[t - 1]
                vol[t:] = vol[t - 1]
                t = n
                break
    if stable:
        mean_vol = vol.mean()
        flags = vol > params.crisis_multiple * mean_vol
    else:
        flags = np.zeros(n, dtype=bool)
        flags[-1] = True
    return CoupledSeries(spread=spread, vol=vol, crisis_flags=flags, stable=stable, params=params)


@dataclass(frozen=True, eq=False)
class CrisisStats:
    """Episode statistics of flagged crisis bins."""

    n_episodes: int
    durations: np.ndarray
    sizes: np.ndarray
    inter_times: np.ndarray

    def to_dict(self) -> dict:
        return {
            "n_episodes": self.n_episodes,
            "mean_duration": float(self.durations.mean()) if self.n_episodes else 0.0,
            "max_duration": int(self.durations.max()) if self.n_episodes else 0,
            "mean_inter_time": float(self.inter_times.mean()) if len(self.inter_times) else 0.0,
        }


def crisis_statistics(series: CoupledSeries, s_threshold: float | None = None) -> CrisisStats:
    """Contiguous flagged runs: counts, durations, sizes, inter-crisis times.

    With `s_threshold` given, bins are re-flagged at that multiple of the
    long-run mean volatility instead of using the stored flags.  Episode size
    is the summed volatility excess over the threshold.
    """
    if s_threshold is not None:
        if not s_threshold > 0:
            raise ValueError("s_threshold must be positive")
        level = s_threshold * series.vol.mean()
        flags = series.vol > level
    else:
        level = series.params.crisis_multiple * series.vol.mean()
        flags = series.crisis_flags
    f = np.asarray(flags, dtype=bool)
    edges = np.diff(f.astype(np.int8))
    starts = list(np.where(edges == 1)[0] + 1)
    ends = list(np.where(edges == -1)[0] + 1)
    if f[0]:
        starts = [0] + starts
    if f[-1]:
        ends = ends + [len(f)]
    durations = np.array([e - s for s, e in zip(starts, ends)], dtype=np.int64)
    sizes = np.array(
        [float(np.clip(series.vol[s:e] - level, 0.0, None).sum()) for s, e in zip(starts, ends)]
    )
    inter = np.diff(np.asarray(starts, dtype=np.int64)) if len(starts) > 1 else np.empty(0, dtype=np.int64)
    return CrisisStats(
        n_episodes=len(durations),
        durations=durations,
        sizes=sizes,
        inter_times=inter,
    )
