"""Operation counters for the streaming engine."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field


@dataclass
class OpCounters:
    """Counts are per strip: a batched call over S strips adds S.

    ``row_conv5`` / ``row_conv3`` count horizontal row convolutions by
    variant (F, H, k0, k1).  ``steady`` repeats the counts for work done on
    behalf of incremental rows only, i.e. after the first ``2r + 1`` rows of
    a strip have primed the rings; ``steady_rows`` is the number of such
    (row, strip) pairs.
    """

    row_conv5: Counter = field(default_factory=Counter)
    row_conv3: Counter = field(default_factory=Counter)
    row_diff: int = 0
    mac: int = 0
    steady: Counter = field(default_factory=Counter)
    steady_rows: int = 0

    def conv(self, variant: str, strips: int, taps: int, width: int, steady: bool, size: int = 5):
        (self.row_conv5 if size == 5 else self.row_conv3)[variant] += strips
        self.mac += strips * taps * width
        if steady:
            self.steady[variant] += strips

    def diff(self, strips: int, width: int, steady: bool):
        self.row_diff += strips
        self.mac += strips * width
        if steady:
            self.steady["D"] += strips

    def kd_per_row(self) -> float:
        """Steady-state k0 + k1 row convolutions per incremental row per strip."""
        if not self.steady_rows:
            return 0.0
        return (self.steady["k0"] + self.steady["k1"]) / self.steady_rows

    def merge(self, other: "OpCounters") -> "OpCounters":
        self.row_conv5.update(other.row_conv5)
        self.row_conv3.update(other.row_conv3)
        self.row_diff += other.row_diff
        self.mac += other.mac
        self.steady.update(other.steady)
        self.steady_rows += other.steady_rows
        return self

    def as_dict(self) -> dict:
        return {
            "row_conv5": dict(self.row_conv5),
            "row_conv3": dict(self.row_conv3),
            "row_diff": self.row_diff,
            "mac": self.mac,
            "steady": dict(self.steady),
            "steady_rows": self.steady_rows,
        }
