"""Bitmap rendering of point clouds, reproducing the reference recipe.

A square window of half-width `range` is mapped onto a 2*res x 2*res
grid with res = unit_res * range.  Each point z lands at 1-based
coordinates

    row = round(res - unit_res * Im z)
    col = round(res + unit_res * Re z)

and, when strictly interior (1 < row < 2*res and 1 < col < 2*res), stamps
a fixed 3x3 intensity kernel centered there.  Overlapping stamps combine
by elementwise maximum, which keeps the accumulation order-independent
(an overwriting stamp would make output depend on point order).  The
final grayscale image is 1 - accumulated, so points are dark on white.

Rounding is half-away-from-zero throughout; exact .5 ties do not occur
for cyclotomic coordinates, so this is a determinism pin, not a
behavioral choice.  PNG output is written by a tiny built-in encoder
(8-bit grayscale, zlib-compressed, fixed settings) so identical inputs
produce byte-identical files.
"""

from __future__ import annotations

import struct
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import floor
from typing import Iterable, Sequence

import numpy as np

KERNEL = np.array(
    [
        [0.3, 0.75, 0.3],
        [0.75, 1.0, 0.75],
        [0.3, 0.75, 0.3],
    ]
)


def round_half_away(x: float) -> int:
    """Round to nearest integer, ties away from zero."""
    return floor(x + 0.5) if x >= 0 else -floor(-x + 0.5)


@dataclass(frozen=True)
class BitmapSpec:
    """Plot window and resolution: extent +-range, unit_res pixels per unit."""

    range: float
    unit_res: int

    def __post_init__(self):
        if self.range <= 0:
            raise ValueError(f"range must be positive, got {self.range}")
        if self.unit_res <= 0 or self.unit_res != int(self.unit_res):
            raise ValueError(f"unit_res must be a positive integer, got {self.unit_res}")
        res = self.unit_res * self.range
        if abs(res - round(res)) > 1e-9 or round(res) <= 0:
            raise ValueError(f"unit_res * range = {res} must be a positive integer")

    @property
    def res(self) -> int:
        return round(self.unit_res * self.range)

    @property
    def side(self) -> int:
        return 2 * self.res


@dataclass(frozen=True)
class GrayImage:
    """Final grayscale raster, values in [0, 1], 0 = black."""

    spec: BitmapSpec
    pixels: np.ndarray

    def __post_init__(self):
        side = self.spec.side
        if self.pixels.shape != (side, side):
            raise ValueError(f"expected {side}x{side} pixels, got {self.pixels.shape}")


def _stamp_chunk(values: Sequence[complex], spec: BitmapSpec) -> np.ndarray:
    res = spec.res
    side = spec.side
    unit = spec.unit_res
    acc = np.zeros((side, side))
    for z in values:
        row = round_half_away(res - unit * z.imag)
        col = round_half_away(res + unit * z.real)
        if 1 < row < side and 1 < col < side:
            # 1-based center (row, col); the 3x3 block is rows row-1..row+1
            box = acc[row - 2 : row + 1, col - 2 : col + 1]
            np.maximum(box, KERNEL, out=box)
    return acc


def render_bitmap(values: Iterable[complex], spec: BitmapSpec, workers: int = 1) -> GrayImage:
    """Stamp every point and invert.  Output is independent of workers:
    chunks accumulate into private arrays merged by elementwise max."""
    values = list(values)
    chunk = 8192
    chunks = [values[lo : lo + chunk] for lo in range(0, len(values), chunk)] or [[]]
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            accs = list(pool.map(lambda c: _stamp_chunk(c, spec), chunks))
    else:
        accs = [_stamp_chunk(c, spec) for c in chunks]
    acc = accs[0]
    for other in accs[1:]:
        np.maximum(acc, other, out=acc)
    return GrayImage(spec, 1.0 - acc)


def image_bytes(img: GrayImage) -> bytes:
    """8-bit quantization: byte = round(255 * clamp(v, 0, 1)), row-major."""
    clamped = np.clip(img.pixels, 0.0, 1.0)
    # half-away-from-zero on nonnegative values = floor(x + 0.5)
    quantized = np.floor(255.0 * clamped + 0.5).astype(np.uint8)
    return quantized.tobytes()


def _png_chunk(tag: bytes, payload: bytes) -> bytes:
    body = tag + payload
    return struct.pack(">I", len(payload)) + body + struct.pack(">I", zlib.crc32(body))


def encode_png(img: GrayImage) -> bytes:
    """Minimal deterministic PNG: 8-bit grayscale, filter 0, zlib level 9."""
    side = img.spec.side
    raw = image_bytes(img)
    scanlines = b"".join(
        b"\x00" + raw[r * side : (r + 1) * side] for r in range(side)
    )
    ihdr = struct.pack(">IIBBBBB", side, side, 8, 0, 0, 0, 0)
    return b"".join(
        [
            b"\x89PNG\r\n\x1a\n",
            _png_chunk(b"IHDR", ihdr),
            _png_chunk(b"IDAT", zlib.compress(scanlines, 9)),
            _png_chunk(b"IEND", b""),
        ]
    )


def write_png(img: GrayImage, path) -> None:
    with open(path, "wb") as fh:
        fh.write(encode_png(img))


def export_points(values: Iterable[complex], fmt: str = "csv") -> str:
    """Serialize a deduplicated point list: CSV rows or a JSON array.

    Floats are printed with 11 decimal places (12 significant digits at
    plot scale) so files diff cleanly across runs.
    """
    def fold(v: float) -> float:
        r = round(v, 11)
        return 0.0 if r == 0 else r  # avoid "-0.00000000000"

    pts = [(fold(z.real), fold(z.imag)) for z in values]
    if fmt == "csv":
        lines = ["re,im"]
        lines += [f"{re:.11f},{im:.11f}" for re, im in pts]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        import json

        return json.dumps([[re, im] for re, im in pts], separators=(",", ":"))
    raise ValueError(f"unknown format {fmt!r}")
