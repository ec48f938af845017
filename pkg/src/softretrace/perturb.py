"""Seeded Gaussian pixel noise, plus binary PPM/PGM image I/O.

The sampling algorithm is pinned permanently for portability of test
vectors: for each pixel row r, uniforms come from a fresh
PCG64(SeedSequence((seed, r))) stream and are mapped through the inverse
normal CDF.  Row substreams mean a row-parallel implementation would
produce byte-identical output to this serial one.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import ndtri


@dataclass(frozen=True)
class PerturbConfig:
    sigma: float
    seed: int

    def __post_init__(self) -> None:
        if self.sigma < 0.0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")


@dataclass(frozen=True)
class RasterImage:
    """8-bit image, shape (height, width, channels); channels is 1 or 3."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        if self.pixels.ndim != 3 or self.pixels.shape[2] not in (1, 3):
            raise ValueError(f"expected (h, w, 1|3) pixels, got shape {self.pixels.shape}")
        if self.pixels.dtype != np.uint8:
            raise ValueError(f"expected uint8 pixels, got {self.pixels.dtype}")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def channels(self) -> int:
        return self.pixels.shape[2]

    @classmethod
    def constant(cls, width: int, height: int, value: int, channels: int = 1) -> "RasterImage":
        return cls(np.full((height, width, channels), value, dtype=np.uint8))


def gaussian_perturb(image: RasterImage, config: PerturbConfig) -> RasterImage:
    """Add N(0, sigma^2) per pixel, round to nearest, clamp to [0, 255].

    sigma = 0 returns the input bytes unchanged.  Same (image, sigma,
    seed) always gives the same bytes.
    """
    if config.sigma == 0.0:
        return image
    h, w, c = image.pixels.shape
    out = np.empty((h, w, c), dtype=np.float64)
    for row in range(h):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((config.seed, row))))
        u = rng.random(w * c)
        # random() yields [0, 1); lift exact zeros to the smallest
        # representable draw so ndtri never sees 0
        u = np.maximum(u, 2.0**-53)
        noise = config.sigma * ndtri(u)
        out[row] = image.pixels[row].astype(np.float64) + noise.reshape(w, c)
    clipped = np.clip(np.rint(out), 0, 255).astype(np.uint8)
    return RasterImage(clipped)


def _read_header_tokens(data: bytes, count: int) -> tuple[list[int], int]:
    # header fields may be separated by arbitrary whitespace and
    # '#'-comments; returns (fields, offset of first raster byte)
    fields: list[int] = []
    i = 0
    while len(fields) < count:
        if i >= len(data):
            raise ValueError("truncated image header")
        ch = data[i : i + 1]
        if ch == b"#":
            while i < len(data) and data[i : i + 1] != b"\n":
                i += 1
        elif ch.isspace():
            i += 1
        else:
            j = i
            while j < len(data) and not data[j : j + 1].isspace() and data[j : j + 1] != b"#":
                j += 1
            fields.append(int(data[i:j]))
            i = j
    # exactly one whitespace byte separates the header from the raster
    if i >= len(data) or not data[i : i + 1].isspace():
        raise ValueError("missing separator before raster data")
    return fields, i + 1


def read_image(path: str | Path) -> RasterImage:
    """Read a binary PGM (P5) or PPM (P6) file."""
    data = Path(path).read_bytes()
    magic = data[:2]
    if magic == b"P5":
        channels = 1
    elif magic == b"P6":
        channels = 3
    else:
        raise ValueError(f"unsupported magic {magic!r}; only binary P5/P6")
    (width, height, maxval), offset = _read_header_tokens(data[2:], 3)
    offset += 2
    if maxval != 255:
        raise ValueError(f"only maxval 255 supported, got {maxval}")
    expected = width * height * channels
    raster = data[offset : offset + expected]
    if len(raster) != expected:
        raise ValueError(f"raster has {len(raster)} bytes, expected {expected}")
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, channels).copy()
    return RasterImage(pixels)


def image_bytes(image: RasterImage) -> bytes:
    """Serialized binary PGM (1 channel) or PPM (3); canonical header."""
    magic = b"P5" if image.channels == 1 else b"P6"
    header = magic + f"\n{image.width} {image.height}\n255\n".encode()
    return header + image.pixels.tobytes()


def write_image(image: RasterImage, path: str | Path) -> None:
    Path(path).write_bytes(image_bytes(image))
