"""Streaming Sobel engine.

Each strip is streamed top to bottom.  Horizontal pass results for the rows
around the current center are held in ring buffers, so every new input row
costs one F (K_x row), one H (K_y row), one D (centre difference) and a
handful of kd_plus row convolutions; the vertical stage is then a short
multiply-accumulate over the ring.  The kd_minus direction needs no row
convolution of its own: it is rebuilt from the F and D rings.

Each strip is also cut into blocks of rows that stream independently, each
primed with its own halo rows.  All (block, strip) units advance in
lockstep, so one numpy call processes the same step of every unit at once.
Units in different worker groups share nothing but the read-only input.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np

from ..errors import ImageTooSmall
from ..filters import DEFAULT_PARAMS, FilterParams
from ..oracle import as_gray, rss
from .counters import OpCounters
from .ring import KdPlusBank, RowRing
from .rows import (
    GD_PLUS_TERMS,
    K0,
    K1,
    hpass_d,
    hpass_f,
    hpass_h,
    hpass_kd,
    recover_diag,
    stream_taps,
    vagg_gd_minus,
    vagg_gd_plus,
    vagg_gx,
    vagg_gy,
)
from .tiling import DEFAULT_LANES, StripPlan, plan_strips

# kd_plus vector each priming row is first convolved with, and its stored
# sign.  Row 2 is the first center: its own row vector is zero, so it gets
# k1 instead, ready for when it sits just above the next center.
PRIME_KD = ((K0, 1), (K1, 1), (K1, 1), (K1, -1), (K0, -1))

SCHEDULES = ("reuse", "naive")
DEFAULT_BLOCK_ROWS = 128


class StreamResult(NamedTuple):
    gx: np.ndarray
    gy: np.ndarray
    gd: np.ndarray
    gdt: np.ndarray
    g: np.ndarray
    counters: OpCounters


class StreamResult3(NamedTuple):
    gx: np.ndarray
    gy: np.ndarray
    g: np.ndarray
    counters: OpCounters


def _is_canonical(plan: StripPlan) -> bool:
    return all(
        s.in_offset == k * plan.stride and s.out_offset == s.in_offset
        for k, s in enumerate(plan.strips)
    )


def _lane_rows(img: np.ndarray, plan: StripPlan, dtype, height: int) -> np.ndarray:
    """``(height, strips, lane_width)`` array of each strip's input window.

    Lanes past the right edge and rows past the bottom of the image read
    zeros; their outputs are discarded, like idle threads.
    """
    h, w = img.shape
    lane = plan.lane_width
    span = max(s.in_offset for s in plan.strips) + lane
    padded = np.zeros((height, max(span, w)), dtype=dtype)
    padded[:h, :w] = img
    if _is_canonical(plan):
        view = np.lib.stride_tricks.sliding_window_view(padded, lane, axis=1)
        return view[:, ::plan.stride][:, :len(plan)]
    idx = np.array([s.in_offset for s in plan.strips])[:, None] + np.arange(lane)
    return padded[:, idx]


def _blocked(img, plan: StripPlan, dtype, block_rows: int | None):
    """Cut every strip into row blocks of ``block_rows`` outputs.

    Returns a ``(block_rows + 2r, blocks, strips, lane_width)`` view; each
    ``[:, i, j]`` column is streamed independently, primed with its own
    ``2r`` halo rows.
    """
    r = plan.r
    out_h = img.shape[0] - 2 * r
    n_blocks = 1 if not block_rows else -(-out_h // block_rows)
    bh = -(-out_h // n_blocks)
    rows = _lane_rows(img, plan, dtype, n_blocks * bh + 2 * r)
    win = np.lib.stride_tricks.sliding_window_view(rows, bh + 2 * r, axis=0)[::bh]
    return np.moveaxis(win, -1, 0)


def _unblock(parts, plan: StripPlan, out_h: int) -> np.ndarray:
    """Stitch ``(planes, block_rows, blocks, strips, ow)`` results back to full planes."""
    blocks = np.concatenate(parts, axis=3)
    k, bh, nb, s, ow = blocks.shape
    stacked = np.moveaxis(blocks, 2, 1).reshape(k, nb * bh, s, ow)[:, :out_h]
    return [_scatter(stacked[i], plan) for i in range(k)]


def _scatter(blocks: np.ndarray, plan: StripPlan) -> np.ndarray:
    """Inverse of ``_lane_rows`` for an ``(rows, strips, lanes - 2r)`` block."""
    n, s, ow = blocks.shape
    if _is_canonical(plan):
        return np.ascontiguousarray(blocks.reshape(n, s * ow)[:, :plan.out_width])
    out = np.empty((n, plan.out_width), dtype=blocks.dtype)
    for k, strip in enumerate(plan.strips):
        out[:, strip.out_offset:strip.out_offset + strip.out_width] = blocks[:, k, :strip.out_width]
    return out


def _groups(n: int, workers: int) -> list[slice]:
    workers = max(1, min(workers, n))
    edges = np.linspace(0, n, workers + 1).round().astype(int)
    return [slice(lo, hi) for lo, hi in zip(edges[:-1], edges[1:])]


def schedule5(n_rows: int, prefetch: bool, reuse: bool = True):
    """Order of operations for streaming one 5x5 unit over ``n_rows`` rows.

    Yields ``("load", u, steady)`` (fetch row ``u`` and run its F, H and D
    passes), ``("kd", u, variant, sign, steady)`` (convolve row ``u`` with a
    kd_plus row vector, stored with ``sign``) and ``("emit", v, steady)``
    (aggregate center ``v``).  ``steady`` marks work done for an incremental
    row rather than for priming.
    """
    def load(u):
        steady = u > 4
        yield ("load", u, steady)
        if reuse:
            variant, sign = PRIME_KD[u] if u < 5 else (K0, -1)
            yield ("kd", u, variant, sign, steady)

    for u in range(5):
        yield from load(u)
    for v in range(2, n_rows - 2):
        steady = v > 2
        if prefetch:
            # the next row goes in before this center is aggregated
            if v + 3 < n_rows:
                yield from load(v + 3)
        elif steady:
            yield from load(v + 2)
        if reuse:
            if steady:
                yield ("kd", v - 2, K0, 1, True)   # held k1 while it sat above the center
                yield ("kd", v + 1, K1, -1, True)  # held -k0 while it was the newest row
            # v - 1 still holds the k1 row written when it was the center
        else:
            for offset, variant, _ in GD_PLUS_TERMS:
                yield ("kd", v + offset, variant, 1, steady)
        yield ("emit", v, steady)


def schedule3(n_rows: int, prefetch: bool):
    """3x3 counterpart of :func:`schedule5` (no diagonal rows)."""
    for u in range(3):
        yield ("load", u, False)
    for v in range(1, n_rows - 1):
        steady = v > 1
        if prefetch:
            if v + 2 < n_rows:
                yield ("load", v + 2, True)
        elif steady:
            yield ("load", v + 1, True)
        yield ("emit", v, steady)


def _stream5(rows, taps, prefetch: bool, schedule: str) -> tuple[np.ndarray, OpCounters]:
    n_rows, *units, lane = rows.shape
    n_units = int(np.prod(units))
    ow = lane - 4
    depth = 6 if prefetch else 5
    counters = OpCounters()
    pix = RowRing(depth, "pixels")
    f_ring = RowRing(depth, "F")
    h_ring = RowRing(depth, "H")
    d_ring = RowRing(depth, "D")
    bank = KdPlusBank(depth)
    out = np.empty((4, n_rows - 4, *units, ow), dtype=np.int32)

    for event in schedule5(n_rows, prefetch, schedule == "reuse"):
        kind, u = event[0], event[1]
        steady = event[-1]
        if kind == "load":
            row = rows[u]
            pix.put(u, row)
            f_ring.put(u, hpass_f(row, taps))
            counters.conv("F", n_units, 4, ow, steady)
            h_ring.put(u, hpass_h(row, taps))
            counters.conv("H", n_units, 5, ow, steady)
            d_ring.put(u, hpass_d(row))
            counters.diff(n_units, ow, steady)
        elif kind == "kd":
            variant, sign = event[2], event[3]
            bank.put(u, hpass_kd(pix.get(u), variant, taps, sign), variant, sign)
            counters.conv(variant, n_units, 5, ow, steady)
        else:
            i = u - 2
            out[0, i] = vagg_gx(f_ring, u, taps)
            out[1, i] = vagg_gy(h_ring, u, taps)
            gd, gdt = recover_diag(vagg_gd_plus(bank, u, taps), vagg_gd_minus(f_ring, d_ring, u, taps))
            out[2, i] = gd
            out[3, i] = gdt
            counters.mac += n_units * ow * 23
            if steady:
                counters.steady_rows += n_units
    return out, counters


def _check_plan(plan: StripPlan | None, width: int, lanes: int, r: int) -> StripPlan:
    if plan is None:
        return plan_strips(width, lanes, r)
    if plan.width != width or plan.r != r:
        raise ValueError(f"plan is for width {plan.width}, r={plan.r}; image needs width {width}, r={r}")
    return plan


def _run_groups(fn, rows, plan, workers):
    groups = _groups(len(plan), workers)
    if len(groups) == 1:
        return [fn(rows)]
    with ThreadPoolExecutor(max_workers=len(groups)) as pool:
        return list(pool.map(lambda g: fn(rows[:, :, g]), groups))


def run_stream(
    img,
    p: FilterParams = DEFAULT_PARAMS,
    plan: StripPlan | None = None,
    prefetch: bool = True,
    *,
    lanes: int = DEFAULT_LANES,
    workers: int = 1,
    block_rows: int | None = DEFAULT_BLOCK_ROWS,
    schedule: str = "reuse",
) -> StreamResult:
    """Four-direction 5x5 Sobel via the streaming engine.

    ``prefetch`` selects a depth-6 ring with each row fetched one step
    ahead; without it the rings are depth 5.  ``schedule="naive"``
    recomputes all four kd_plus rows every step and exists for comparison.
    ``block_rows`` splits each strip vertically into independently streamed
    blocks (``None`` streams whole columns).
    """
    if schedule not in SCHEDULES:
        raise ValueError(f"schedule must be one of {SCHEDULES}")
    img = as_gray(img)
    h, w = img.shape
    if h < 5 or w < 5:
        raise ImageTooSmall(f"{w}x{h} image is smaller than 5x5")
    plan = _check_plan(plan, w, lanes, 2)
    taps = stream_taps(p)
    rows = _blocked(img, plan, taps.dtype, block_rows)
    parts = _run_groups(lambda r: _stream5(r, taps, prefetch, schedule), rows, plan, workers)
    counters = OpCounters()
    for _, c in parts:
        counters.merge(c)
    gx, gy, gd, gdt = _unblock([b for b, _ in parts], plan, h - 4)
    return StreamResult(gx, gy, gd, gdt, rss(gx, gy, gd, gdt), counters)


def _stream3(rows, prefetch: bool) -> tuple[np.ndarray, OpCounters]:
    n_rows, *units, lane = rows.shape
    n_units = int(np.prod(units))
    ow = lane - 2
    depth = 4 if prefetch else 3
    counters = OpCounters()
    f_ring = RowRing(depth, "F")
    h_ring = RowRing(depth, "H")
    out = np.empty((2, n_rows - 2, *units, ow), dtype=np.int32)

    for kind, u, steady in schedule3(n_rows, prefetch):
        if kind == "load":
            row = rows[u]
            f_ring.put(u, row[..., 2:] - row[..., :-2])
            counters.conv("F", n_units, 2, ow, steady, size=3)
            mid = row[..., 1:-1]
            h_ring.put(u, row[..., :-2] + row[..., 2:] + mid + mid)
            counters.conv("H", n_units, 3, ow, steady, size=3)
        else:
            f0, f1, f2 = f_ring.window(u, 1)
            h0, _, h2 = h_ring.window(u, 1)
            out[0, u - 1] = f0 + f2 + 2 * f1
            out[1, u - 1] = h2 - h0
            counters.mac += n_units * ow * 5
            if steady:
                counters.steady_rows += n_units
    return out, counters


def run_stream_3x3(
    img,
    plan: StripPlan | None = None,
    prefetch: bool = True,
    *,
    lanes: int = DEFAULT_LANES,
    workers: int = 1,
    block_rows: int | None = DEFAULT_BLOCK_ROWS,
) -> StreamResult3:
    """Two-direction 3x3 Sobel with the same streaming scheme at radius 1."""
    img = as_gray(img)
    h, w = img.shape
    if h < 3 or w < 3:
        raise ImageTooSmall(f"{w}x{h} image is smaller than 3x3")
    plan = _check_plan(plan, w, lanes, 1)
    rows = _blocked(img, plan, np.int32, block_rows)
    parts = _run_groups(lambda r: _stream3(r, prefetch), rows, plan, workers)
    counters = OpCounters()
    for _, c in parts:
        counters.merge(c)
    gx, gy = _unblock([b for b, _ in parts], plan, h - 2)
    return StreamResult3(gx, gy, rss(gx, gy), counters)
