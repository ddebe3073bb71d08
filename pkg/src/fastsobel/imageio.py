"""PGM/PNG input and output, replicate padding and plane export."""

from __future__ import annotations

import io
import os
import re
from dataclasses import dataclass

import numpy as np
from PIL import Image

from .errors import CorruptFile, UnsupportedExtension, UnsupportedFormat

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"
_TOKEN = re.compile(rb"\s*(?:#[^\n]*(?:\n|$)\s*)*(\d+)")


def luma(rgb: np.ndarray) -> np.ndarray:
    """Integer BT.601 luma, ``(77 R + 150 G + 29 B + 128) >> 8``."""
    rgb = rgb.astype(np.uint32)
    y = (77 * rgb[..., 0] + 150 * rgb[..., 1] + 29 * rgb[..., 2] + 128) >> 8
    return y.astype(np.uint8)


def _parse_pgm(raw: bytes) -> np.ndarray:
    magic = raw[:2]
    pos = 2
    header = []
    for _ in range(3):
        m = _TOKEN.match(raw, pos)
        if not m:
            raise CorruptFile("truncated PGM header")
        header.append(int(m.group(1)))
        pos = m.end()
    width, height, maxval = header
    if width < 1 or height < 1:
        raise CorruptFile(f"bad PGM dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedFormat(f"unsupported bit depth: PGM maxval {maxval} (only 255)")
    n = width * height
    if magic == b"P5":
        if pos >= len(raw) or not raw[pos:pos + 1].isspace():
            raise CorruptFile("missing whitespace after PGM maxval")
        body = raw[pos + 1:pos + 1 + n]
        if len(body) != n:
            raise CorruptFile(f"PGM payload has {len(body)} of {n} bytes")
        return np.frombuffer(body, dtype=np.uint8).reshape(height, width).copy()
    values = [int(t) for t in re.findall(rb"\d+", re.sub(rb"#[^\n]*", b"", raw[pos:]))]
    if len(values) < n:
        raise CorruptFile(f"PGM payload has {len(values)} of {n} samples")
    data = np.array(values[:n], dtype=np.int64)
    if data.max(initial=0) > maxval:
        raise CorruptFile("PGM sample exceeds maxval")
    return data.astype(np.uint8).reshape(height, width)


def _decode_png(raw: bytes) -> np.ndarray:
    try:
        im = Image.open(io.BytesIO(raw))
        im.load()
    except Exception as exc:
        raise CorruptFile(f"unreadable PNG: {exc}") from exc
    mode = im.mode
    if mode in ("I", "I;16", "I;16B", "I;16L", "F"):
        raise UnsupportedFormat(f"unsupported bit depth: PNG mode {mode}")
    if mode == "P":
        im = im.convert("RGBA" if "transparency" in im.info else "RGB")
        mode = im.mode
    if mode == "1":
        im = im.convert("L")
        mode = "L"
    arr = np.asarray(im)
    if mode == "L":
        return arr.copy()
    if mode == "LA":
        return arr[..., 0].copy()
    if mode in ("RGB", "RGBA"):
        return luma(arr)
    raise UnsupportedFormat(f"unsupported PNG mode {mode}")


def load_gray(path) -> np.ndarray:
    """Read a PGM (P2/P5, maxval 255) or 8-bit PNG as a uint8 luminance plane."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:2] in (b"P5", b"P2"):
        return _parse_pgm(raw)
    if raw.startswith(PNG_MAGIC):
        return _decode_png(raw)
    raise UnsupportedFormat(f"{path}: not a PGM or PNG file")


def write_pgm(path, plane: np.ndarray, plain: bool = False) -> None:
    plane = np.asarray(plane, dtype=np.uint8)
    h, w = plane.shape
    with open(path, "wb") as fh:
        if plain:
            fh.write(f"P2\n{w} {h}\n255\n".encode())
            for row in plane:
                fh.write(" ".join(map(str, row.tolist())).encode() + b"\n")
        else:
            fh.write(f"P5\n{w} {h}\n255\n".encode())
            fh.write(np.ascontiguousarray(plane).tobytes())


def write_gray(path, plane: np.ndarray) -> None:
    ext = os.path.splitext(str(path))[1].lower()
    if ext == ".pgm":
        write_pgm(path, plane)
    elif ext == ".png":
        Image.fromarray(np.ascontiguousarray(plane, dtype=np.uint8)).save(path, format="PNG")
    else:
        raise UnsupportedExtension(f"{path}: expected .pgm or .png")


@dataclass(frozen=True)
class PaddedPlane:
    inner: np.ndarray
    r: int
    plane: np.ndarray

    def __array__(self, dtype=None, copy=None):
        return self.plane if dtype is None else self.plane.astype(dtype)

    @property
    def shape(self):
        return self.plane.shape


def pad_replicate(img, r: int) -> PaddedPlane:
    """Clamp-to-edge padding by ``r`` pixels on every side."""
    if r < 1:
        raise ValueError("padding radius must be >= 1")
    inner = np.asarray(img)
    return PaddedPlane(inner, r, np.pad(inner, r, mode="edge"))


def to_display(plane, mode: str) -> np.ndarray:
    """Map a gradient plane to 8-bit.

    ``clamp_abs``: ``min(|v|, 255)``.  ``normalize``: ``|v|`` scaled so the
    maximum becomes 255 (an all-zero plane stays black).
    """
    mag = np.abs(np.asarray(plane, dtype=np.float64))
    if mode == "clamp_abs":
        out = np.minimum(mag, 255.0)
    elif mode == "normalize":
        top = mag.max() if mag.size else 0.0
        out = mag * (255.0 / top) if top > 0 else np.zeros_like(mag)
    else:
        raise ValueError(f"unknown display mode {mode!r}")
    return np.rint(out).astype(np.uint8)


def save_plane(plane, path, mode: str | None = None) -> None:
    """Write a signed or real plane as an 8-bit image; format from the extension.

    The default mode is ``normalize`` for floating planes (magnitudes) and
    ``clamp_abs`` for integer planes.
    """
    plane = np.asarray(plane)
    if plane.size == 0:
        raise ValueError("cannot save an empty plane")
    if mode is None:
        mode = "normalize" if plane.dtype.kind == "f" else "clamp_abs"
    ext = os.path.splitext(str(path))[1].lower()
    if ext not in (".pgm", ".png"):
        raise UnsupportedExtension(f"{path}: expected .pgm or .png")
    write_gray(path, to_display(plane, mode))
