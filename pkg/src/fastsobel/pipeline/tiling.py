"""Column strips: the CPU stand-in for one warp's worth of lanes.

A strip reads ``lane_width`` input columns and produces ``lane_width - 2r``
outputs; the last ``2r`` lanes only supply neighbours.  Consecutive strips
therefore overlap by ``2r`` input columns.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ImageTooSmall, LaneTooNarrow

DEFAULT_LANES = 32


@dataclass(frozen=True)
class Strip:
    in_offset: int
    out_offset: int
    out_width: int

    def in_width(self, r: int) -> int:
        return self.out_width + 2 * r


@dataclass(frozen=True)
class StripPlan:
    width: int
    lane_width: int
    r: int
    strips: tuple[Strip, ...]

    @property
    def out_width(self) -> int:
        return self.width - 2 * self.r

    @property
    def stride(self) -> int:
        """Output columns per full strip."""
        return self.lane_width - 2 * self.r

    def __len__(self):
        return len(self.strips)


def plan_strips(width: int, lane_width: int = DEFAULT_LANES, r: int = 2) -> StripPlan:
    """Cover ``width - 2r`` output columns with strips of ``lane_width`` lanes.

    Images narrower than one strip get a single shrunk strip, as does the
    right-hand remainder of wider images.
    """
    if r < 1:
        raise ValueError("radius must be at least 1")
    if lane_width <= 2 * r:
        raise LaneTooNarrow(f"{lane_width} lanes leave no outputs for radius {r}")
    if width < 2 * r + 1:
        raise ImageTooSmall(f"width {width} is below the {2 * r + 1}-pixel window")
    stride = lane_width - 2 * r
    out_width = width - 2 * r
    strips = tuple(
        Strip(in_offset=x, out_offset=x, out_width=min(stride, out_width - x))
        for x in range(0, out_width, stride)
    )
    return StripPlan(width=width, lane_width=lane_width, r=r, strips=strips)
