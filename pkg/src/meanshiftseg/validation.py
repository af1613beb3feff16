"""Input validation helpers shared by the estimators, drivers and CLI."""

from __future__ import annotations

import math
import operator

import numpy as np

from .image import GrayImage

__all__ = [
    "check_gray_image",
    "check_positive_int",
    "check_positive_float",
    "check_nonnegative_float",
    "check_choice",
]


def check_gray_image(X, bit_depth: int | None = None) -> GrayImage:
    """Coerce ``X`` into a validated :class:`GrayImage`.

    ``X`` may already be a GrayImage (its depth must then agree with
    ``bit_depth`` when given) or any 2-D integer array-like. Plain arrays
    default to 8 bits per pixel.
    """
    if isinstance(X, GrayImage):
        if bit_depth is not None and bit_depth != X.bit_depth:
            raise ValueError(
                f"image has bit_depth={X.bit_depth} but bit_depth={bit_depth} was requested"
            )
        return X
    arr = np.asarray(X)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D gray image, got array of shape {arr.shape}")
    if np.issubdtype(arr.dtype, np.floating):
        raise TypeError(
            "gray images must be integer-valued; quantize real values first"
        )
    return GrayImage(arr, 8 if bit_depth is None else bit_depth)


def check_positive_int(name: str, value, minimum: int = 1) -> int:
    try:
        out = operator.index(value)
    except TypeError:
        raise TypeError(f"{name} must be an integer, got {value!r}") from None
    if out < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {out}")
    return out


def check_positive_float(name: str, value) -> float:
    out = float(value)
    if not math.isfinite(out) or out <= 0:
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return out


def check_nonnegative_float(name: str, value) -> float:
    out = float(value)
    if not math.isfinite(out) or out < 0:
        raise ValueError(f"{name} must be a nonnegative finite number, got {value!r}")
    return out


def check_choice(name: str, value: str, choices) -> str:
    if value not in choices:
        allowed = ", ".join(sorted(choices))
        raise ValueError(f"{name} must be one of {{{allowed}}}, got {value!r}")
    return value
