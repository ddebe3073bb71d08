"""Row-level horizontal passes and vertical aggregations.

All functions work on arrays whose last axis is the pixel row, so a single
call can process every lane of every strip at once.  A horizontal pass
shrinks the last axis by 4; output ``x`` belongs to input column ``x + 2``.

Integer parameters give exact results directly.  When ``b``, ``m`` or ``n``
are fractions with common denominator ``q``, horizontal passes return values
scaled up by ``q`` (or ``q**2`` for the K_d+ rows) and the vertical stages
divide the scale back out, so the gradients are still exact integers.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from ..errors import ParityViolation, RowTooShort, VariantMismatch
from ..filters import FilterParams, validate_params

K0 = "k0"
K1 = "k1"


@dataclass(frozen=True)
class StreamTaps:
    """Integer taps for every pass, derived from ``FilterParams``."""

    a: int
    q: int
    B: int
    N: int
    M: int

    @property
    def q2(self):
        return self.q * self.q

    # K_d- second column vector, scaled by q**2
    @property
    def e_outer(self):
        return self.M * self.B + self.B * self.q - self.N * self.q

    @property
    def e_inner(self):
        return self.N * self.B + self.B * self.B - self.M * self.B

    @property
    def e_center(self):
        return 2 * self.B * self.q - 2 * self.N * self.B

    def bound(self) -> int:
        """Upper bound on any intermediate magnitude for 8-bit input."""
        a, q, B, N, M = self.a, self.q, abs(self.B), abs(self.N), abs(self.M)
        f = 2 * q + 2 * B
        h = 2 * q + 2 * N + M
        k0 = a * q * (2 * M + 2 * (N + B) + 2 * q)
        k1 = a * (2 * q * abs(B - N) + 2 * M * B + 2 * N * B)
        c = 2 * M + 2 * (N + B) + 2 * q
        e = 2 * abs(self.e_outer) + 2 * abs(self.e_inner) + abs(self.e_center)
        return 255 * max(a * f * h, 4 * max(k0, k1), a * (c * f + 2 * e))

    @property
    def dtype(self):
        return np.int32 if self.bound() < 2**31 else np.int64


@functools.lru_cache(maxsize=64)
def stream_taps(p: FilterParams) -> StreamTaps:
    validate_params(p)
    q = p.denominator
    return StreamTaps(
        a=p.a,
        q=q,
        B=int(p.b * q),
        N=int(p.n * q),
        M=int(p.m * q),
    )


def _taps(p) -> StreamTaps:
    return p if isinstance(p, StreamTaps) else stream_taps(p)


def _row(row):
    row = np.asarray(row)
    if row.dtype.kind not in "iu":
        raise TypeError(f"pixel rows must be integers, got {row.dtype}")
    if row.dtype.kind == "u":
        row = row.astype(np.int32)
    if row.shape[-1] < 5:
        raise RowTooShort(f"row of length {row.shape[-1]} is shorter than 5 taps")
    return row


def _sym(row, outer, inner, center):
    """``outer*(p0+p4) + inner*(p1+p3) + center*p2`` over every window."""
    w = row.shape[-1] - 4
    p0, p1, p2, p3, p4 = (row[..., j:j + w] for j in range(5))
    out = p0 + p4
    if outer != 1:
        out *= outer
    out += inner * (p1 + p3)
    if center:
        out += center * p2
    return out


def _anti(row, outer, inner):
    """``outer*(p4-p0) + inner*(p3-p1)`` over every window."""
    w = row.shape[-1] - 4
    out = row[..., 4:4 + w] - row[..., 0:w]
    if outer != 1:
        out *= outer
    if inner:
        out += inner * (row[..., 3:3 + w] - row[..., 1:1 + w])
    return out


def hpass_f(row, p) -> np.ndarray:
    """Horizontal derivative pass, taps ``(-1, -b, 0, b, 1)``."""
    t = _taps(p)
    return _anti(_row(row), t.q, t.B)


def hpass_h(row, p) -> np.ndarray:
    """Horizontal smoothing pass, taps ``(1, n, m, n, 1)``."""
    t = _taps(p)
    return _sym(_row(row), t.q, t.N, t.M)


def hpass_d(row) -> np.ndarray:
    """Difference of the two pixels flanking the center, taps ``(0, -1, 0, 1, 0)``."""
    row = _row(row)
    w = row.shape[-1] - 4
    return row[..., 3:3 + w] - row[..., 1:1 + w]


def hpass_kd(row, variant: str, p, sign: int = 1) -> np.ndarray:
    """One row vector of kd_plus.

    ``k0`` is the top row ``a*(-m, -n-b, -2, -n-b, -m)`` and ``k1`` the second
    row ``a*(b-n, -mb, -2nb, -mb, b-n)``.  The bottom two rows are their
    negations and are never convolved; pass ``sign=-1`` to produce them at the
    same cost.
    """
    t = _taps(p)
    row = _row(row)
    if variant == K0:
        s = -sign * t.a * t.q
        return _sym(row, s * t.M, s * (t.N + t.B), s * 2 * t.q)
    if variant == K1:
        s = sign * t.a
        return _sym(row, s * t.q * (t.B - t.N), -s * t.M * t.B, -s * 2 * t.N * t.B)
    raise VariantMismatch(f"unknown kd_plus row variant {variant!r}")


def _unscale(acc, t: StreamTaps):
    if t.q != 1:
        acc //= t.q2
    return acc


def vagg_gx(ring, v: int, p) -> np.ndarray:
    """``a * (F[v-2] + n F[v-1] + m F[v] + n F[v+1] + F[v+2])``."""
    t = _taps(p)
    f0, f1, f2, f3, f4 = ring.window(v)
    acc = f0 + f4
    if t.q != 1:
        acc *= t.q
    acc += t.N * (f1 + f3)
    acc += t.M * f2
    if t.a != 1:
        acc *= t.a
    return _unscale(acc, t)


def vagg_gy(ring, v: int, p) -> np.ndarray:
    """``a * (-H[v-2] - b H[v-1] + b H[v+1] + H[v+2])``."""
    t = _taps(p)
    h0, h1, _, h3, h4 = ring.window(v)
    acc = h4 - h0
    if t.q != 1:
        acc *= t.q
    acc += t.B * (h3 - h1)
    if t.a != 1:
        acc *= t.a
    return _unscale(acc, t)


# (row offset from center, expected variant, sign of its term in G_d+)
GD_PLUS_TERMS = ((-2, K0, 1), (-1, K1, 1), (1, K1, -1), (2, K0, -1))


def vagg_gd_plus(bank, v: int, p=None) -> np.ndarray:
    """``F_k0[v-2] + F_k1[v-1] - F_k1[v+1] - F_k0[v+2]``.

    Each slot may hold its vector negated; the stored sign flag is folded
    into the term here instead of rewriting the slot.
    """
    acc = None
    for offset, variant, coef in GD_PLUS_TERMS:
        data, sign = bank.get(v + offset, variant)
        if acc is None:
            acc = data * (coef * sign)
        elif coef * sign > 0:
            acc += data
        else:
            acc -= data
    if p is not None:
        acc = _unscale(acc, _taps(p))
    return acc


def vagg_gd_minus(f_ring, d_ring, v: int, p) -> np.ndarray:
    """kd_minus response from the F rows already held for K_x plus the cheap D rows."""
    t = _taps(p)
    f0, f1, f2, f3, f4 = f_ring.window(v)
    d0, d1, d2, d3, d4 = d_ring.window(v)
    acc = f0 + f4
    acc *= t.M
    acc += (t.N + t.B) * (f1 + f3)
    acc += 2 * t.q * f2
    acc -= t.e_outer * (d0 + d4)
    if t.e_inner:
        acc -= t.e_inner * (d1 + d3)
    if t.e_center:
        acc -= t.e_center * d2
    if t.a != 1:
        acc *= t.a
    return _unscale(acc, t)


def recover_diag(gd_plus, gd_minus) -> tuple[np.ndarray, np.ndarray]:
    """Exact halving back to the K_d and K_dt responses."""
    gd_plus = np.asarray(gd_plus)
    gd_minus = np.asarray(gd_minus)
    if gd_plus.shape != gd_minus.shape:
        raise ValueError("gd_plus and gd_minus differ in shape")
    total = gd_plus + gd_minus
    if np.any(total & 1):
        raise ParityViolation("G_d+ and G_d- have odd sum")
    total >>= 1
    # gd - gdt == gd_minus, so the second half comes for free
    return total, total - gd_minus
