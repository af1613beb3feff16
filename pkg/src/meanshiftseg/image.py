"""Grayscale image container plus histogram, entropy and difference primitives."""

from __future__ import annotations

import operator
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MAX_BIT_DEPTH",
    "GrayImage",
    "gray_histogram",
    "gray_probabilities",
    "entropy",
    "abs_diff",
    "quantize",
]

MAX_BIT_DEPTH = 16


def _check_bit_depth(bit_depth) -> int:
    depth = operator.index(bit_depth)
    if not 1 <= depth <= MAX_BIT_DEPTH:
        raise ValueError(f"bit_depth must be in 1..{MAX_BIT_DEPTH}, got {depth}")
    return depth


@dataclass(frozen=True, eq=False)
class GrayImage:
    """A rectangular grid of integer gray levels in [0, 2**bit_depth - 1].

    Pixels are held row-major in a read-only int32 array, so instances are
    immutable and safe to share between threads.
    """

    pixels: np.ndarray
    bit_depth: int = 8

    def __post_init__(self):
        depth = _check_bit_depth(self.bit_depth)
        arr = np.asarray(self.pixels)
        if arr.ndim != 2:
            raise ValueError(f"pixels must be a 2-D array, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"image must be at least 1x1, got shape {arr.shape}")
        if not np.issubdtype(arr.dtype, np.integer):
            raise TypeError(f"pixels must have an integer dtype, got {arr.dtype}")
        top = (1 << depth) - 1
        if int(arr.min()) < 0 or int(arr.max()) > top:
            raise ValueError(f"gray levels must lie in [0, {top}] for bit_depth={depth}")
        arr = np.ascontiguousarray(arr, dtype=np.int32)
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)
        object.__setattr__(self, "bit_depth", depth)

    @classmethod
    def constant(cls, shape: tuple[int, int], value: int, bit_depth: int = 8) -> "GrayImage":
        """Image of the given (height, width) filled with one gray level."""
        return cls(np.full(shape, value, dtype=np.int32), bit_depth)

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)

    @property
    def levels(self) -> int:
        """Number of representable gray levels, 2**bit_depth."""
        return 1 << self.bit_depth

    @property
    def max_level(self) -> int:
        return self.levels - 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.bit_depth == other.bit_depth and np.array_equal(self.pixels, other.pixels)

    def __hash__(self) -> int:
        return hash((self.bit_depth, self.pixels.tobytes()))

    def __repr__(self) -> str:
        return f"GrayImage({self.height}x{self.width}, bit_depth={self.bit_depth})"


def _as_image(image, bit_depth: int | None = None) -> GrayImage:
    if isinstance(image, GrayImage):
        return image
    return GrayImage(np.asarray(image), 8 if bit_depth is None else bit_depth)


def gray_histogram(image) -> np.ndarray:
    """Occurrence count of every gray level; array of length 2**bit_depth."""
    img = _as_image(image)
    return np.bincount(img.pixels.ravel(), minlength=img.levels)


def gray_probabilities(image) -> np.ndarray:
    """Occurrence probability of every gray level (counts / pixel count)."""
    img = _as_image(image)
    counts = gray_histogram(img)
    return counts / float(img.pixels.size)


def entropy(image) -> float:
    """Shannon entropy of the gray-level distribution, in bits.

    Levels that never occur contribute exactly zero, so the result lies in
    [0, bit_depth] and is zero precisely for constant images.
    """
    img = _as_image(image)
    counts = np.bincount(img.pixels.ravel())
    p = counts[counts > 0] / float(img.pixels.size)
    # + 0.0 turns the -0.0 produced by constant images into plain 0.0
    return float(-np.sum(p * np.log2(p)) + 0.0)


def abs_diff(a, b) -> GrayImage:
    """Pixelwise absolute difference of two images of equal shape and depth."""
    a = _as_image(a)
    b = _as_image(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a.bit_depth != b.bit_depth:
        raise ValueError(f"bit depth mismatch: {a.bit_depth} vs {b.bit_depth}")
    return GrayImage(np.abs(a.pixels - b.pixels), a.bit_depth)


def quantize(values, bit_depth: int = 8):
    """Round half away from zero, then clamp to [0, 2**bit_depth - 1].

    Accepts a scalar or an array of real gray values and returns an int
    (scalar input) or an int32 array of the same shape.
    """
    depth = _check_bit_depth(bit_depth)
    v = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(v)):
        raise ValueError("gray values must be finite")
    rounded = np.sign(v) * np.floor(np.abs(v) + 0.5)
    out = np.clip(rounded, 0, (1 << depth) - 1).astype(np.int32)
    if out.ndim == 0:
        return int(out)
    return out
