"""Aligned per-trade arrays and lag-indexed estimate curves."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SignSeries",
    "MarkSeries",
    "TradeSeries",
    "PriceSeries",
    "LagCurve",
    "unit_marks",
]


def _require_1d(arr: np.ndarray, name: str) -> np.ndarray:
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a one-dimensional array")
    if arr.size == 0:
        raise ValueError(f"{name} must not be empty")
    return arr


@dataclass(frozen=True, eq=False)
class SignSeries:
    """Trade signs in trade time: +1 buyer-initiated, -1 seller-initiated."""

    signs: np.ndarray

    def __post_init__(self) -> None:
        arr = _require_1d(np.asarray(self.signs, dtype=np.int8), "signs")
        if not np.isin(arr, (-1, 1)).all():
            raise ValueError("signs must contain only -1 and +1")
        object.__setattr__(self, "signs", arr)

    def __len__(self) -> int:
        return len(self.signs)

    def to_float(self) -> np.ndarray:
        return self.signs.astype(np.float64)


@dataclass(frozen=True, eq=False)
class MarkSeries:
    """Per-trade spreads and volumes plus the volume-impact exponent psi."""

    spreads: np.ndarray
    volumes: np.ndarray
    psi: float = 0.1

    def __post_init__(self) -> None:
        s = _require_1d(np.asarray(self.spreads, dtype=np.float64), "spreads")
        v = _require_1d(np.asarray(self.volumes, dtype=np.float64), "volumes")
        if len(s) != len(v):
            raise ValueError("spreads and volumes must have equal length")
        if not (np.isfinite(s).all() and (s > 0).all()):
            raise ValueError("spreads must be finite and strictly positive")
        if not (np.isfinite(v).all() and (v > 0).all()):
            raise ValueError("volumes must be finite and strictly positive")
        if self.psi < 0:
            raise ValueError("psi must be non-negative")
        object.__setattr__(self, "spreads", s)
        object.__setattr__(self, "volumes", v)

    def __len__(self) -> int:
        return len(self.spreads)

    def impact_sizes(self) -> np.ndarray:
        """Mark factor S * V**psi multiplying each signed trade."""
        if self.psi == 0.0:
            return self.spreads.copy()
        return self.spreads * self.volumes**self.psi


def unit_marks(n: int) -> MarkSeries:
    """Marks with S = V = 1, i.e. a mark factor identically one."""
    ones = np.ones(n)
    return MarkSeries(ones, ones, psi=0.0)


@dataclass(frozen=True, eq=False)
class TradeSeries:
    """Aligned signs, marks and (optionally) the pre-trade mid-price."""

    signs: SignSeries
    marks: MarkSeries
    mid: np.ndarray | None = None

    def __post_init__(self) -> None:
        if len(self.signs) != len(self.marks):
            raise ValueError("signs and marks must have equal length")
        if self.mid is not None:
            mid = _require_1d(np.asarray(self.mid, dtype=np.float64), "mid")
            if len(mid) != len(self.signs):
                raise ValueError("mid must align with signs")
            if not np.isfinite(mid).all():
                raise ValueError("mid must be finite")
            object.__setattr__(self, "mid", mid)

    def __len__(self) -> int:
        return len(self.signs)


@dataclass(frozen=True, eq=False)
class PriceSeries:
    """Mid-price path in trade time; mid[t] is the price just before trade t."""

    mid: np.ndarray
    p0: float = 0.0

    def __post_init__(self) -> None:
        arr = _require_1d(np.asarray(self.mid, dtype=np.float64), "mid")
        if not np.isfinite(arr).all():
            raise ValueError("mid must be finite")
        object.__setattr__(self, "mid", arr)

    def __len__(self) -> int:
        return len(self.mid)


@dataclass(frozen=True, eq=False)
class LagCurve:
    """A function of integer lag 0..L with sample counts and standard errors.

    stderr[l] is NaN wherever fewer than two samples entered the estimate
    (counts[l] < 2), and for model-implied curves that carry no samples at all.
    """

    values: np.ndarray
    counts: np.ndarray
    stderr: np.ndarray

    def __post_init__(self) -> None:
        v = _require_1d(np.asarray(self.values, dtype=np.float64), "values")
        c = _require_1d(np.asarray(self.counts, dtype=np.int64), "counts")
        e = _require_1d(np.asarray(self.stderr, dtype=np.float64), "stderr")
        if not (len(v) == len(c) == len(e)):
            raise ValueError("values, counts and stderr must have equal length")
        if (c < 0).any():
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "counts", c)
        object.__setattr__(self, "stderr", e)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def max_lag(self) -> int:
        return len(self.values) - 1

    @property
    def lags(self) -> np.ndarray:
        return np.arange(len(self.values))

    @classmethod
    def model_curve(cls, values: np.ndarray) -> "LagCurve":
        """Wrap model-implied values (no samples behind them)."""
        values = np.asarray(values, dtype=np.float64)
        counts = np.zeros(len(values), dtype=np.int64)
        stderr = np.full(len(values), np.nan)
        return cls(values, counts, stderr)
