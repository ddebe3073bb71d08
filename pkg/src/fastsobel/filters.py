"""Generalized 5x5 Sobel filter family.

Every kernel is built from four shape parameters ``(a, b, m, n)``:

    K_x = a * [1, n, m, n, 1]^T x [-1, -b, 0, b, 1]
    K_y = K_x^T

plus the two diagonal kernels K_d and K_dt, which are not separable.  The
defaults ``(1, 2, 6, 4)`` reproduce the OpenCV 5x5 weights.

Parameters are kept as exact rationals so that the integrality check is
exact.  Kernels come back as read-only ``int32`` arrays.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NonIntegralWeight, NonPositiveParam, WeightOverflow

#: Largest admissible |weight|; keeps 25 * max|k| * 255 inside int32.
MAX_WEIGHT = 2**15

KX3 = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.int32)
KY3 = np.array([[-1, -2, -1], [0, 0, 0], [1, 2, 1]], dtype=np.int32)
KX3.flags.writeable = False
KY3.flags.writeable = False


class Direction(str, enum.Enum):
    X = "X"
    Y = "Y"
    D = "D"
    DT = "DT"


def _rational(value) -> Fraction:
    if isinstance(value, float):
        # str() round-trips the shortest decimal, so 0.1 stays 1/10
        return Fraction(str(value))
    return Fraction(value)


@dataclass(frozen=True)
class FilterParams:
    """Shape parameters of the generalized operator.

    ``a`` is a global integer scale; ``b``, ``m``, ``n`` are positive
    rationals.  Construction only coerces types; call :func:`validate_params`
    (or any function that materializes a kernel) to enforce the constraints.
    """

    a: int = 1
    b: Fraction = Fraction(2)
    m: Fraction = Fraction(6)
    n: Fraction = Fraction(4)

    def __post_init__(self):
        a = _rational(self.a)
        object.__setattr__(self, "a", int(a) if a.denominator == 1 else a)
        for name in ("b", "m", "n"):
            object.__setattr__(self, name, _rational(getattr(self, name)))

    @property
    def denominator(self) -> int:
        """Least common denominator of ``b``, ``m`` and ``n``."""
        return int(np.lcm.reduce([self.b.denominator, self.m.denominator, self.n.denominator]))

    def __str__(self):
        return f"(a={self.a}, b={self.b}, m={self.m}, n={self.n})"


DEFAULT_PARAMS = FilterParams()


def _symbolic(p: FilterParams, direction: Direction) -> list[list[Fraction]]:
    a, b, m, n = Fraction(p.a), p.b, p.m, p.n
    if direction is Direction.X:
        rows = [
            [-1, -b, 0, b, 1],
            [-n, -n * b, 0, n * b, n],
            [-m, -m * b, 0, m * b, m],
            [-n, -n * b, 0, n * b, n],
            [-1, -b, 0, b, 1],
        ]
    elif direction is Direction.Y:
        rows = [
            [-1, -n, -m, -n, -1],
            [-b, -n * b, -m * b, -n * b, -b],
            [0, 0, 0, 0, 0],
            [b, n * b, m * b, n * b, b],
            [1, n, m, n, 1],
        ]
    elif direction is Direction.D:
        rows = [
            [-m, -n, -1, -b, 0],
            [-n, -m * b, -n * b, 0, b],
            [-1, -n * b, 0, n * b, 1],
            [-b, 0, n * b, m * b, n],
            [0, b, 1, n, m],
        ]
    else:
        rows = [
            [0, -b, -1, -n, -m],
            [b, 0, -n * b, -m * b, -n],
            [1, n * b, 0, -n * b, -1],
            [n, m * b, n * b, 0, -b],
            [m, n, 1, b, 0],
        ]
    return [[a * Fraction(w) for w in row] for row in rows]


def _frozen(weights) -> np.ndarray:
    arr = np.array(weights, dtype=np.int32)
    arr.flags.writeable = False
    return arr


@functools.lru_cache(maxsize=256)
def _materialize_all(p: FilterParams) -> dict[Direction, np.ndarray]:
    if not (isinstance(p.a, int) and p.a >= 1):
        raise NonPositiveParam(f"a must be a positive integer, got {p.a}")
    for name in ("b", "m", "n"):
        if getattr(p, name) <= 0:
            raise NonPositiveParam(f"{name} must be positive, got {getattr(p, name)}")
    kernels = {}
    for direction in Direction:
        sym = _symbolic(p, direction)
        for i, row in enumerate(sym):
            for j, w in enumerate(row):
                if w.denominator != 1:
                    raise NonIntegralWeight(direction.value, i, j, w)
                if abs(w) > MAX_WEIGHT:
                    raise WeightOverflow(
                        f"|K_{direction.value.lower()}[{i}][{j}]| = {abs(w)} exceeds {MAX_WEIGHT}"
                    )
        kernels[direction] = _frozen([[int(w) for w in row] for row in sym])
    return kernels


def validate_params(p: FilterParams) -> None:
    """Raise if ``p`` does not produce four all-integer kernels."""
    _materialize_all(p)


def materialize(p: FilterParams, direction: Direction | str) -> np.ndarray:
    """Return the 5x5 integer kernel for ``direction`` (X, Y, D or DT)."""
    return _materialize_all(p)[Direction(direction)]


def kernels(p: FilterParams) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    k = _materialize_all(p)
    return k[Direction.X], k[Direction.Y], k[Direction.D], k[Direction.DT]


def make_kd_sum_diff(p: FilterParams) -> tuple[np.ndarray, np.ndarray]:
    """Sum and difference of the two diagonal kernels.

    Unlike K_d and K_dt themselves, ``kd_plus`` is antisymmetric top/bottom
    with a zero middle row and ``kd_minus`` is antisymmetric left/right with
    a zero middle column, so both can be streamed row by row.
    """
    kd = materialize(p, Direction.D).astype(np.int64)
    kdt = materialize(p, Direction.DT).astype(np.int64)
    return _frozen(kd + kdt), _frozen(kd - kdt)


@dataclass(frozen=True)
class SeparablePair:
    """Rank-1 kernel ``scale * outer(col, row)``."""

    col: tuple[Fraction, ...]
    row: tuple[Fraction, ...]
    scale: int = 1

    def outer(self) -> np.ndarray:
        full = [[self.scale * c * r for r in self.row] for c in self.col]
        if any(w.denominator != 1 for line in full for w in line):
            raise NonIntegralWeight("pair", 0, 0, full)
        return np.array([[int(w) for w in line] for line in full], dtype=np.int64)


def decompose_kd_minus(p: FilterParams) -> tuple[SeparablePair, SeparablePair]:
    """Split ``kd_minus`` into two rank-1 terms, ``s1 - s2``.

    ``s1`` shares its horizontal vector with K_x, so its row pass is free in
    the streaming engine; ``s2``'s horizontal vector only differences the
    two pixels adjacent to the center.
    """
    validate_params(p)
    b, m, n = p.b, p.m, p.n
    s1 = SeparablePair(
        col=(m, n + b, Fraction(2), n + b, m),
        row=(Fraction(-1), -b, Fraction(0), b, Fraction(1)),
        scale=p.a,
    )
    s2 = SeparablePair(
        col=(
            m * b + b - n,
            n * b + b * b - m * b,
            2 * b - 2 * n * b,
            n * b + b * b - m * b,
            m * b - n + b,
        ),
        row=(Fraction(0), Fraction(-1), Fraction(0), Fraction(1), Fraction(0)),
        scale=p.a,
    )
    return s1, s2


def separable_factors(p: FilterParams, direction: Direction | str) -> SeparablePair:
    """Column/row factorization of K_x or K_y."""
    validate_params(p)
    smooth = (Fraction(1), p.n, p.m, p.n, Fraction(1))
    deriv = (Fraction(-1), -p.b, Fraction(0), p.b, Fraction(1))
    if Direction(direction) is Direction.X:
        return SeparablePair(col=smooth, row=deriv, scale=p.a)
    if Direction(direction) is Direction.Y:
        return SeparablePair(col=deriv, row=smooth, scale=p.a)
    raise ValueError("only X and Y are separable")
