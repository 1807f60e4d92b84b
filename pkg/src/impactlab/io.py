"""CSV/JSON serialisation, run manifests and deterministic file output.

All floats are written with shortest round-trip `repr`, so identical inputs
produce byte-identical files; manifests record sha256 digests of every output.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import time
from pathlib import Path

import numpy as np

from .errors import DataError
from .jumps import JumpEvent, NewsFeed, ReturnSeries
from .propagator import Kernel
from .series import LagCurve, MarkSeries, SignSeries, TradeSeries

__all__ = [
    "stage_seed",
    "sha256_file",
    "atomic_write_text",
    "write_json",
    "fmt",
    "write_trades_csv",
    "ingest_trades",
    "write_lagcurve_csv",
    "read_lagcurve_csv",
    "write_kernel_csv",
    "read_kernel_csv",
    "write_filter_csv",
    "write_events_csv",
    "write_coupled_csv",
    "read_returns_csv",
    "write_returns_csv",
    "read_news_csv",
    "RunManifest",
]


def stage_seed(master: int, stage: str) -> int:
    """Derive a named substream seed: adding stages never shifts earlier ones."""
    digest = hashlib.sha256(f"{master}:{stage}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def fmt(x) -> str:
    """Shortest round-trip decimal for floats; plain str otherwise."""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def atomic_write_text(path: Path, text: str) -> None:
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def write_json(path: Path, obj) -> None:
    atomic_write_text(Path(path), json.dumps(obj, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# Trade series
# ---------------------------------------------------------------------------


def write_trades_csv(path: Path, trades: TradeSeries) -> None:
    """Schema: n,sign,volume,spread[,mid]."""
    with_mid = trades.mid is not None
    lines = ["n,sign,volume,spread,mid" if with_mid else "n,sign,volume,spread"]
    for i in range(len(trades)):
        row = [
            str(i),
            str(int(trades.signs.signs[i])),
            fmt(trades.marks.volumes[i]),
            fmt(trades.marks.spreads[i]),
        ]
        if with_mid:
            row.append(fmt(trades.mid[i]))
        lines.append(",".join(row))
    atomic_write_text(Path(path), "\n".join(lines) + "\n")


def ingest_trades(path: Path, psi: float = 0.1) -> TradeSeries:
    """Read and validate a trade CSV; malformed rows are named by line number."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"input file not found: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if header not in (["n", "sign", "volume", "spread"], ["n", "sign", "volume", "spread", "mid"]):
            raise DataError(
                f"{path}: header must be n,sign,volume,spread[,mid]; got {','.join(header)}"
            )
        with_mid = len(header) == 5
        signs, volumes, spreads, mids = [], [], [], []
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != len(header):
                raise DataError(f"{path}: line {lineno}: expected {len(header)} fields")
            try:
                sign = int(row[1])
                volume = float(row[2])
                spread = float(row[3])
                mid = float(row[4]) if with_mid else None
            except ValueError as exc:
                raise DataError(f"{path}: line {lineno}: {exc}") from None
            if sign not in (-1, 1):
                raise DataError(f"{path}: line {lineno}: sign must be -1 or +1, got {row[1]}")
            if not volume > 0:
                raise DataError(f"{path}: line {lineno}: volume must be positive")
            if not spread > 0:
                raise DataError(f"{path}: line {lineno}: spread must be positive")
            signs.append(sign)
            volumes.append(volume)
            spreads.append(spread)
            if with_mid:
                mids.append(mid)
    if not signs:
        raise DataError(f"{path}: no data rows")
    return TradeSeries(
        signs=SignSeries(np.array(signs, dtype=np.int8)),
        marks=MarkSeries(np.array(spreads), np.array(volumes), psi=psi),
        mid=np.array(mids) if with_mid else None,
    )


# ---------------------------------------------------------------------------
# Curves, kernels, filters
# ---------------------------------------------------------------------------


def write_lagcurve_csv(path: Path, curve: LagCurve) -> None:
    """Schema: lag,value,count,stderr."""
    lines = ["lag,value,count,stderr"]
    for lag in range(len(curve)):
        lines.append(
            f"{lag},{fmt(curve.values[lag])},{int(curve.counts[lag])},{fmt(curve.stderr[lag])}"
        )
    atomic_write_text(Path(path), "\n".join(lines) + "\n")


def read_lagcurve_csv(path: Path) -> LagCurve:
    path = Path(path)
    if not path.exists():
        raise DataError(f"input file not found: {path}")
    values, counts, stderr = [], [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["lag", "value", "count", "stderr"]:
            raise DataError(f"{path}: header must be lag,value,count,stderr")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                lag = int(row[0])
                if lag != len(values):
                    raise ValueError(f"lag {lag} out of order")
                values.append(float(row[1]))
                counts.append(int(row[2]))
                stderr.append(float(row[3]))
            except (ValueError, IndexError) as exc:
                raise DataError(f"{path}: line {lineno}: {exc}") from None
    if not values:
        raise DataError(f"{path}: no data rows")
    return LagCurve(np.array(values), np.array(counts), np.array(stderr))


def write_kernel_csv(path: Path, kernel: Kernel) -> None:
    """Schema: lag,g."""
    lines = ["lag,g"]
    for i, g in enumerate(kernel.g, start=1):
        lines.append(f"{i},{fmt(g)}")
    atomic_write_text(Path(path), "\n".join(lines) + "\n")


def read_kernel_csv(path: Path) -> Kernel:
    path = Path(path)
    if not path.exists():
        raise DataError(f"input file not found: {path}")
    g = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["lag", "g"]:
            raise DataError(f"{path}: header must be lag,g")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                g.append(float(row[1]))
            except (ValueError, IndexError) as exc:
                raise DataError(f"{path}: line {lineno}: {exc}") from None
    if not g:
        raise DataError(f"{path}: no data rows")
    return Kernel(np.array(g), "tabulated", {})


def write_filter_csv(path: Path, b: np.ndarray) -> None:
    """Schema: lag,b."""
    lines = ["lag,b"]
    for i, v in enumerate(np.asarray(b, dtype=np.float64), start=1):
        lines.append(f"{i},{fmt(v)}")
    atomic_write_text(Path(path), "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Jumps and feedback
# ---------------------------------------------------------------------------


def write_events_csv(path: Path, events: list[JumpEvent]) -> None:
    """Schema: t,s_realized,direction,classification,matched_news_time."""
    lines = ["t,s_realized,direction,classification,matched_news_time"]
    for ev in events:
        matched = fmt(ev.matched_news_time) if ev.matched_news_time is not None else ""
        lines.append(
            f"{fmt(ev.t)},{fmt(ev.s_realized)},{ev.direction},{ev.classification},{matched}"
        )
    atomic_write_text(Path(path), "\n".join(lines) + "\n")


def write_coupled_csv(path: Path, spread, vol, flags) -> None:
    """Schema: t,spread,vol,crisis."""
    lines = ["t,spread,vol,crisis"]
    for t in range(len(spread)):
        lines.append(f"{t},{fmt(spread[t])},{fmt(vol[t])},{int(flags[t])}")
    atomic_write_text(Path(path), "\n".join(lines) + "\n")


def write_returns_csv(path: Path, series: ReturnSeries) -> None:
    """Schema: timestamp,return."""
    lines = ["timestamp,return"]
    for t, r in zip(series.timestamps, series.returns):
        lines.append(f"{fmt(t)},{fmt(r)}")
    atomic_write_text(Path(path), "\n".join(lines) + "\n")


def read_returns_csv(path: Path) -> ReturnSeries:
    path = Path(path)
    if not path.exists():
        raise DataError(f"input file not found: {path}")
    ts, rs = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["timestamp", "return"]:
            raise DataError(f"{path}: header must be timestamp,return")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                ts.append(float(row[0]))
                rs.append(float(row[1]))
            except (ValueError, IndexError) as exc:
                raise DataError(f"{path}: line {lineno}: {exc}") from None
    if not ts:
        raise DataError(f"{path}: no data rows")
    try:
        return ReturnSeries(np.array(ts), np.array(rs))
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None


def read_news_csv(path: Path) -> NewsFeed:
    """Schema: timestamp,ticker."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"input file not found: {path}")
    ts, tickers = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["timestamp", "ticker"]:
            raise DataError(f"{path}: header must be timestamp,ticker")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                ts.append(float(row[0]))
                tickers.append(row[1].strip())
            except (ValueError, IndexError) as exc:
                raise DataError(f"{path}: line {lineno}: {exc}") from None
    order = np.argsort(np.array(ts), kind="stable")
    return NewsFeed(np.array(ts)[order], tuple(tickers[i] for i in order))


# ---------------------------------------------------------------------------
# Run manifest
# ---------------------------------------------------------------------------


class RunManifest:
    """Collects stage summaries and output digests; written atomically last."""

    def __init__(self, experiment: str, seed: int, config: dict, out_dir: Path):
        from . import __version__

        self.out_dir = Path(out_dir)
        self._t0 = time.time()
        self.data = {
            "tool": {"name": "impactlab", "version": __version__, "numpy": np.__version__},
            "experiment": experiment,
            "seed": seed,
            "config": config,
            "started_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(self._t0)),
            "stages": [],
            "outputs": [],
        }

    def add_stage(self, name: str, summary: dict) -> None:
        self.data["stages"].append({"name": name, "summary": summary})

    def add_output(self, path: Path) -> None:
        path = Path(path)
        self.data["outputs"].append(
            {
                "path": str(path.relative_to(self.out_dir)),
                "sha256": sha256_file(path),
                "bytes": path.stat().st_size,
            }
        )

    def write(self) -> Path:
        self.data["wall_seconds"] = round(time.time() - self._t0, 3)
        target = self.out_dir / "manifest.json"
        write_json(target, self.data)
        return target
