"""Fixed-depth circular banks of per-row pass results.

Row ``x`` always lives in slot ``x % depth``.  Depth 5 holds exactly the
window of a 5x5 operator; depth 6 leaves room for one row fetched ahead of
the current center.
"""

from __future__ import annotations

from ..errors import MissingRow, VariantMismatch


class RowRing:
    def __init__(self, depth: int, name: str = "ring"):
        if depth < 1:
            raise ValueError("depth must be positive")
        self.depth = depth
        self.name = name
        self.slots = [None] * depth
        self.rows = [None] * depth

    def slot(self, row: int) -> int:
        if row < 0:
            raise MissingRow(f"{self.name}: negative row index {row}")
        return row % self.depth

    def put(self, row: int, data):
        """Store ``data`` for source row ``row``; returns the row it evicted."""
        s = self.slot(row)
        evicted = self.rows[s]
        self.slots[s] = data
        self.rows[s] = row
        return evicted

    def resident(self) -> set[int]:
        return {r for r in self.rows if r is not None}

    def __contains__(self, row: int) -> bool:
        return row >= 0 and self.rows[row % self.depth] == row

    def get(self, row: int):
        s = self.slot(row)
        if self.rows[s] != row:
            raise MissingRow(f"{self.name}: row {row} not resident (slot {s} holds {self.rows[s]})")
        return self.slots[s]

    def window(self, center: int, radius: int = 2) -> list:
        return [self.get(center + k) for k in range(-radius, radius + 1)]


class KdPlusBank(RowRing):
    """A ring whose slots also record which kd_plus row vector produced them
    and the sign the data was stored with."""

    def __init__(self, depth: int, name: str = "kd+"):
        super().__init__(depth, name)
        self.variants = [None] * depth
        self.signs = [1] * depth

    def put(self, row: int, data, variant: str = None, sign: int = 1):
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        evicted = super().put(row, data)
        s = row % self.depth
        self.variants[s] = variant
        self.signs[s] = sign
        return evicted

    def tag(self, row: int) -> tuple[str, int]:
        s = self.slot(row)
        if self.rows[s] != row:
            raise MissingRow(f"{self.name}: row {row} not resident")
        return self.variants[s], self.signs[s]

    def get(self, row: int, variant: str = None):
        """Return ``(data, sign)``; ``data == sign * F_variant(row)``."""
        data = super().get(row)
        s = row % self.depth
        if variant is not None and self.variants[s] != variant:
            raise VariantMismatch(
                f"{self.name}: row {row} holds {self.variants[s]}, expected {variant}"
            )
        return data, self.signs[s]
