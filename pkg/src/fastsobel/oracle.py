"""Brute-force reference operators.

Everything here is direct 2D correlation: every output pixel is the full
weighted sum over its window, all taps included, with no reuse between
neighbouring pixels or rows.  This is the ground truth the streaming
pipeline is checked against, so it is kept deliberately plain.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import ImageTooSmall, ParityViolation
from .filters import KX3, KY3, FilterParams, kernels, make_kd_sum_diff, validate_params


class Gradients2(NamedTuple):
    gx: np.ndarray
    gy: np.ndarray
    g: np.ndarray


class Gradients4(NamedTuple):
    gx: np.ndarray
    gy: np.ndarray
    gd: np.ndarray
    gdt: np.ndarray
    g: np.ndarray


def as_gray(img) -> np.ndarray:
    arr = np.asarray(img)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2D plane, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise ValueError("gray samples must lie in [0, 255]")
        arr = arr.astype(np.uint8)
    return arr


def conv2d_valid(img, k) -> np.ndarray:
    """Valid-mode correlation of an 8-bit plane with a square integer kernel.

    ``out[y, x] = sum_ij k[i, j] * img[y + i, x + j]``; the output is smaller
    than the input by ``2r`` in each axis.
    """
    img = as_gray(img)
    k = np.asarray(k)
    kh, kw = k.shape
    h, w = img.shape
    if h < kh or w < kw:
        raise ImageTooSmall(f"{w}x{h} image is smaller than the {kw}x{kh} kernel")
    oh, ow = h - kh + 1, w - kw + 1
    src = img.astype(np.int32)
    out = np.zeros((oh, ow), dtype=np.int32)
    for i in range(kh):
        for j in range(kw):
            out += np.int32(k[i, j]) * src[i:i + oh, j:j + ow]
    return out


def rss(*planes) -> np.ndarray:
    """Root sum of squares of integer gradient planes, in float64."""
    acc = np.square(planes[0], dtype=np.float64)
    tmp = np.empty_like(acc)
    for plane in planes[1:]:
        acc += np.square(plane, out=tmp, dtype=np.float64)
    return np.sqrt(acc, out=acc)


def sobel3_2d(img) -> Gradients2:
    """Classic two-direction 3x3 Sobel."""
    img = as_gray(img)
    gx = conv2d_valid(img, KX3)
    gy = conv2d_valid(img, KY3)
    return Gradients2(gx, gy, rss(gx, gy))


def sobel5_4d(img, p: FilterParams = FilterParams()) -> Gradients4:
    """Four-direction 5x5 Sobel by four independent 2D correlations."""
    img = as_gray(img)
    kx, ky, kd, kdt = kernels(p)
    gx = conv2d_valid(img, kx)
    gy = conv2d_valid(img, ky)
    gd = conv2d_valid(img, kd)
    gdt = conv2d_valid(img, kdt)
    return Gradients4(gx, gy, gd, gdt, rss(gx, gy, gd, gdt))


def halve_exact(total: np.ndarray, what: str = "value") -> np.ndarray:
    if np.any(total & 1):
        raise ParityViolation(f"odd {what}; the sum/difference of the diagonal responses must be even")
    return total >> 1


def diag_via_sum_diff(img, p: FilterParams = FilterParams()) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal responses recovered from the kd_plus / kd_minus responses."""
    validate_params(p)
    kd_plus, kd_minus = make_kd_sum_diff(p)
    g_plus = conv2d_valid(img, kd_plus)
    g_minus = conv2d_valid(img, kd_minus)
    gd = halve_exact(g_plus + g_minus, "G_d+ + G_d-")
    gdt = halve_exact(g_plus - g_minus, "G_d+ - G_d-")
    return gd, gdt
