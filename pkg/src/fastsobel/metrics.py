"""Similarity, difference and throughput metrics."""

from __future__ import annotations

import statistics
import time
from dataclasses import astuple, dataclass, fields
from typing import Callable, NamedTuple

import numpy as np

from .errors import DimMismatch, EmptyPlane

K1 = 0.01
K2 = 0.03


@dataclass(frozen=True)
class SsimStats:
    mu_x: float
    mu_y: float
    var_x: float
    var_y: float
    cov_xy: float
    c1: float
    c2: float
    ssim: float


def _pair(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise DimMismatch(f"shapes differ: {x.shape} vs {y.shape}")
    if x.size == 0:
        raise EmptyPlane("cannot compare empty planes")
    return x, y


def ssim_global(x, y, data_range: float | None = None) -> SsimStats:
    """Single SSIM value from whole-plane statistics.

    Uses population (ddof=0) moments and ``C1 = (0.01 L)^2``,
    ``C2 = (0.03 L)^2``.  ``L`` defaults to the joint value span of both
    planes, or 1 if both are the same constant.
    """
    x, y = _pair(x, y)
    if data_range is None:
        data_range = float(max(x.max(), y.max()) - min(x.min(), y.min())) or 1.0
    if data_range <= 0:
        raise ValueError("data_range must be positive")
    c1 = (K1 * data_range) ** 2
    c2 = (K2 * data_range) ** 2
    mu_x = float(x.mean())
    mu_y = float(y.mean())
    dx = x - mu_x
    dy = y - mu_y
    var_x = float(np.mean(dx * dx))
    var_y = float(np.mean(dy * dy))
    cov = float(np.mean(dx * dy))
    num = (2 * mu_x * mu_y + c1) * (2 * cov + c2)
    den = (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2)
    return SsimStats(mu_x, mu_y, var_x, var_y, cov, c1, c2, num / den)


class DiffStats(NamedTuple):
    max_abs: float
    mean_abs: float
    count_nonzero: int


def diff_stats(x, y) -> DiffStats:
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise DimMismatch(f"shapes differ: {x.shape} vs {y.shape}")
    if x.dtype.kind in "iu" and y.dtype.kind in "iu":
        d = np.abs(x.astype(np.int64) - y.astype(np.int64))
        max_abs = int(d.max()) if d.size else 0
    else:
        d = np.abs(x.astype(np.float64) - y.astype(np.float64))
        max_abs = float(d.max()) if d.size else 0.0
    mean_abs = float(d.mean()) if d.size else 0.0
    return DiffStats(max_abs, mean_abs, int(np.count_nonzero(d)))


@dataclass(frozen=True)
class BenchReport:
    label: str
    width: int
    height: int
    iterations: int
    mean_s: float
    stddev_s: float
    mps: float
    mps_per_core: float

    @classmethod
    def from_times(cls, label, width, height, times, workers=1) -> "BenchReport":
        if not times:
            raise ValueError("need at least one timed iteration")
        mean = statistics.fmean(times)
        std = statistics.pstdev(times) if len(times) > 1 else 0.0
        mps = width * height / (mean * 1e6)
        return cls(label, width, height, len(times), mean, std, mps, mps / max(1, workers))

    @staticmethod
    def csv_header() -> str:
        names = [f.name for f in fields(BenchReport)]
        return ",".join(n.replace("iterations", "iters") for n in names)

    def csv_row(self) -> str:
        label, w, h, n, mean, std, mps, mpc = astuple(self)
        return f"{label},{w},{h},{n},{mean:.9g},{std:.9g},{mps:.6g},{mpc:.6g}"


def measure(
    run: Callable[[], object],
    iterations: int,
    *,
    width: int,
    height: int,
    label: str = "",
    workers: int = 1,
    clock: Callable[[], float] = time.perf_counter,
) -> BenchReport:
    """Time ``run`` ``iterations`` times after one discarded warm-up call."""
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    run()
    times = []
    for _ in range(iterations):
        t0 = clock()
        run()
        times.append(clock() - t0)
    return BenchReport.from_times(label, width, height, times, workers)
