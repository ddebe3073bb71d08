"""Deterministic test images from a seeded SplitMix64 stream."""

from __future__ import annotations

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_MUL2 = np.uint64(0x94D049BB133111EB)


def splitmix64(seed: int, n: int) -> np.ndarray:
    """First ``n`` outputs of SplitMix64 started from ``seed``."""
    state = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    z = state + _GAMMA * np.arange(1, n + 1, dtype=np.uint64)
    z = (z ^ (z >> np.uint64(30))) * _MUL1
    z = (z ^ (z >> np.uint64(27))) * _MUL2
    return z ^ (z >> np.uint64(31))


def random_image(width: int, height: int, seed: int = 0) -> np.ndarray:
    """Uniform 8-bit noise, identical on every platform for a given seed."""
    if width < 1 or height < 1:
        raise ValueError("image dimensions must be positive")
    bits = splitmix64(seed, width * height)
    return (bits >> np.uint64(56)).astype(np.uint8).reshape(height, width)


def parse_size(text: str) -> tuple[int, int]:
    """``"640x480"`` -> ``(640, 480)``; a bare ``"512"`` means square."""
    parts = text.lower().split("x")
    if len(parts) == 1:
        parts = parts * 2
    if len(parts) != 2:
        raise ValueError(f"bad size {text!r}, expected WxH")
    w, h = (int(p) for p in parts)
    if w < 1 or h < 1:
        raise ValueError(f"bad size {text!r}")
    return w, h
