"""Mean shift filtering of gray images over the joint spatial-range domain.

Every pixel seeds a window in (row, col, gray) space. A window member is any
pixel within ``spatial_radius`` of the window center (Euclidean circle by
default, Chebyshev square optionally) whose gray value is within
``range_radius`` of the center's gray value. The center repeatedly moves to
the mean of its members, optionally weighted by a quadratic falloff, until
the gray component of the move drops below ``step_tol`` or ``max_steps`` is
reached. One full pass filters every pixel independently against the
unchanged input image, then quantizes, so results do not depend on pixel
order and may be computed by any number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .image import GrayImage, quantize
from .validation import (
    check_choice,
    check_gray_image,
    check_nonnegative_float,
    check_positive_float,
    check_positive_int,
)

__all__ = [
    "KERNEL_UNIFORM",
    "KERNEL_EPANECHNIKOV",
    "WINDOW_CIRCLE",
    "WINDOW_SQUARE",
    "JointPoint",
    "MeanShiftParams",
    "window_members",
    "mean_shift_vector",
    "filter_pixel",
    "filter_pass",
    "MeanShiftFilter",
]

KERNEL_UNIFORM = "uniform"
KERNEL_EPANECHNIKOV = "epanechnikov"
KERNELS = frozenset({KERNEL_UNIFORM, KERNEL_EPANECHNIKOV})

WINDOW_CIRCLE = "circle"
WINDOW_SQUARE = "square"
WINDOWS = frozenset({WINDOW_CIRCLE, WINDOW_SQUARE})


class JointPoint(NamedTuple):
    """A joint-domain position: two spatial coordinates plus a gray value."""

    row: float
    col: float
    gray: float


@dataclass(frozen=True)
class MeanShiftParams:
    """Window radii and mode-seeking limits for one filtering pass.

    spatial_radius: window radius in pixels (integer >= 1).
    range_radius: window radius in gray levels (> 0).
    kernel: "uniform" members count equally; "epanechnikov" weights them by
        max(0, 1 - d^2) with d the joint distance normalized by the radii.
    max_steps: cap on mode-seeking moves per pixel.
    step_tol: stop once the gray component of a move is below this (strict).
    window: spatial membership test, "circle" (Euclidean) or "square"
        (Chebyshev).
    """

    spatial_radius: int = 4
    range_radius: float = 12.0
    kernel: str = KERNEL_UNIFORM
    max_steps: int = 100
    step_tol: float = 0.01
    window: str = WINDOW_CIRCLE

    def __post_init__(self):
        object.__setattr__(
            self, "spatial_radius", check_positive_int("spatial_radius", self.spatial_radius)
        )
        object.__setattr__(
            self, "range_radius", check_positive_float("range_radius", self.range_radius)
        )
        check_choice("kernel", self.kernel, KERNELS)
        object.__setattr__(self, "max_steps", check_positive_int("max_steps", self.max_steps))
        object.__setattr__(
            self, "step_tol", check_nonnegative_float("step_tol", self.step_tol)
        )
        check_choice("window", self.window, WINDOWS)


def _seek_modes(img_f, height, width, cr, cc, cg, params):
    """Mode-seek a batch of window centers; returns their final gray values.

    ``cr``/``cc``/``cg`` are 1-D float64 starting centers. Window candidates
    are accumulated in row-major order; keep it that way, the filter output
    is contracted to be bit-identical to a straight row-major scan.
    """
    hs = params.spatial_radius
    hr = params.range_radius
    hs_sq = hs * hs
    hr_sq = hr * hr
    circle = params.window == WINDOW_CIRCLE
    epanechnikov = params.kernel == KERNEL_EPANECHNIKOV
    offsets = [(dr, dc) for dr in range(-hs, hs + 1) for dc in range(-hs, hs + 1)]

    out = np.empty(cr.shape[0], dtype=np.float64)
    idx = np.arange(cr.shape[0])
    for _ in range(params.max_steps):
        n = cr.shape[0]
        sw = np.zeros(n)
        sr = np.zeros(n)
        sc = np.zeros(n)
        sg = np.zeros(n)
        base_r = np.floor(cr).astype(np.int64)
        base_c = np.floor(cc).astype(np.int64)
        for dr, dc in offsets:
            rr = base_r + dr
            col = base_c + dc
            inside = (rr >= 0) & (rr < height) & (col >= 0) & (col < width)
            g = img_f[np.where(inside, rr, 0), np.where(inside, col, 0)]
            drf = rr - cr
            dcf = col - cc
            sq = drf * drf + dcf * dcf
            if circle:
                near = sq <= hs_sq
            else:
                near = (np.abs(drf) <= hs) & (np.abs(dcf) <= hs)
            dg = g - cg
            member = inside & near & (np.abs(dg) <= hr)
            if epanechnikov:
                u = sq / hs_sq + (dg * dg) / hr_sq
                wgt = np.where(member, np.maximum(0.0, 1.0 - u), 0.0)
            else:
                wgt = member.astype(np.float64)
            sw += wgt
            sr += wgt * rr
            sc += wgt * col
            sg += wgt * g
        # A drifted window can lose every sample (total weight zero); such
        # centers stay put and count as converged.
        starved = sw == 0.0
        denom = np.where(starved, 1.0, sw)
        nr = sr / denom
        nc = sc / denom
        ng = sg / denom
        shift = np.abs(ng - cg)
        cr = np.where(starved, cr, nr)
        cc = np.where(starved, cc, nc)
        cg = np.where(starved, cg, ng)
        done = starved | (shift < params.step_tol)
        if done.any():
            out[idx[done]] = cg[done]
            if done.all():
                return out
            keep = ~done
            idx = idx[keep]
            cr = cr[keep]
            cc = cc[keep]
            cg = cg[keep]
    out[idx] = cg
    return out


def window_members(image, center, params: MeanShiftParams | None = None) -> np.ndarray:
    """Pixels inside the joint window around ``center``, as an (n, 3) array.

    ``center`` is a (row, col, gray) triple; its spatial part is clamped into
    the image. Rows of the result are (row, col, gray) joint points in
    row-major pixel order. The window is clipped at the borders.
    """
    img = check_gray_image(image)
    params = params or MeanShiftParams()
    cr, cc, cg = (float(v) for v in center)
    if not all(map(math.isfinite, (cr, cc, cg))):
        raise ValueError("window center must be finite")
    cr = min(max(cr, 0.0), img.height - 1.0)
    cc = min(max(cc, 0.0), img.width - 1.0)

    hs = params.spatial_radius
    r0 = max(0, math.ceil(cr - hs))
    r1 = min(img.height - 1, math.floor(cr + hs))
    c0 = max(0, math.ceil(cc - hs))
    c1 = min(img.width - 1, math.floor(cc + hs))
    rows, cols = np.mgrid[r0 : r1 + 1, c0 : c1 + 1]
    gray = img.pixels[r0 : r1 + 1, c0 : c1 + 1]

    drf = rows - cr
    dcf = cols - cc
    if params.window == WINDOW_CIRCLE:
        near = drf * drf + dcf * dcf <= hs * hs
    else:
        near = (np.abs(drf) <= hs) & (np.abs(dcf) <= hs)
    member = near & (np.abs(gray - cg) <= params.range_radius)
    return np.stack(
        [rows[member], cols[member], gray[member]], axis=1
    ).astype(np.float64)


def mean_shift_vector(
    members,
    center,
    *,
    kernel: str = KERNEL_UNIFORM,
    spatial_radius: float | None = None,
    range_radius: float | None = None,
) -> JointPoint:
    """Displacement from ``center`` to the (weighted) mean of ``members``.

    With the uniform kernel this is the plain arithmetic mean of the members
    minus the center; it points toward increasing sample density. The
    epanechnikov kernel weights each member by max(0, 1 - d^2), where d is
    the joint distance normalized by the two radii (required in that case).
    A zero total weight yields a zero displacement.
    """
    pts = np.asarray(members, dtype=np.float64)
    if pts.size == 0:
        raise ValueError("members must be nonempty")
    pts = pts.reshape(-1, 3)
    cr, cc, cg = (float(v) for v in center)
    check_choice("kernel", kernel, KERNELS)
    if kernel == KERNEL_UNIFORM:
        mean = pts.mean(axis=0)
    else:
        if spatial_radius is None or range_radius is None:
            raise ValueError("epanechnikov weighting needs spatial_radius and range_radius")
        u = ((pts[:, 0] - cr) ** 2 + (pts[:, 1] - cc) ** 2) / float(spatial_radius) ** 2
        u = u + (pts[:, 2] - cg) ** 2 / float(range_radius) ** 2
        wgt = np.maximum(0.0, 1.0 - u)
        total = wgt.sum()
        if total == 0.0:
            return JointPoint(0.0, 0.0, 0.0)
        mean = (wgt[:, None] * pts).sum(axis=0) / total
    return JointPoint(mean[0] - cr, mean[1] - cc, mean[2] - cg)


def filter_pixel(image, row: int, col: int, params: MeanShiftParams | None = None) -> float:
    """Mode-seek from one pixel; returns the converged, unquantized gray value."""
    img = check_gray_image(image)
    params = params or MeanShiftParams()
    if not (0 <= row < img.height and 0 <= col < img.width):
        raise IndexError(f"pixel ({row}, {col}) outside {img.height}x{img.width} image")
    img_f = img.pixels.astype(np.float64)
    result = _seek_modes(
        img_f,
        img.height,
        img.width,
        np.array([float(row)]),
        np.array([float(col)]),
        np.array([img_f[row, col]]),
        params,
    )
    return float(result[0])


def _filter_rows(img_f, height, width, row_start, row_stop, params):
    count = row_stop - row_start
    cr = np.repeat(np.arange(row_start, row_stop, dtype=np.float64), width)
    cc = np.tile(np.arange(width, dtype=np.float64), count)
    cg = img_f[row_start:row_stop].astype(np.float64).ravel()
    values = _seek_modes(img_f, height, width, cr, cc, cg, params)
    return values.reshape(count, width)


def filter_pass(image, params: MeanShiftParams | None = None, *, threads: int = 1):
    """One full mean shift filtering pass over the image.

    Each output pixel is the quantized mode-seek result of the matching
    input pixel; all pixels are computed against the unchanged input.
    ``threads`` bounds worker parallelism (row blocks); any value produces
    bit-identical output. Returns a GrayImage for GrayImage input, else an
    array with the input's dtype.
    """
    img = check_gray_image(image)
    params = params or MeanShiftParams()
    threads = check_positive_int("threads", threads)
    img_f = img.pixels.astype(np.float64)
    height, width = img.shape

    workers = min(threads, height)
    if workers <= 1:
        raw = _filter_rows(img_f, height, width, 0, height, params)
    else:
        bounds = np.linspace(0, height, workers + 1).astype(int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(
                pool.map(
                    lambda span: _filter_rows(img_f, height, width, span[0], span[1], params),
                    zip(bounds[:-1], bounds[1:]),
                )
            )
        raw = np.vstack(blocks)

    result = GrayImage(quantize(raw, img.bit_depth), img.bit_depth)
    if isinstance(image, GrayImage):
        return result
    return result.pixels.astype(np.asarray(image).dtype)


class MeanShiftFilter(BaseEstimator, TransformerMixin):
    """Single-pass mean shift filter with the estimator interface.

    Stateless: ``fit`` only validates parameters, ``transform`` filters any
    image (2-D integer array or GrayImage) and returns it in the same form.
    ``single_shift=True`` caps mode seeking at one move per pixel.
    """

    def __init__(
        self,
        spatial_radius=4,
        range_radius=12.0,
        kernel=KERNEL_UNIFORM,
        max_steps=100,
        step_tol=0.01,
        single_shift=False,
        window=WINDOW_CIRCLE,
        bit_depth=None,
        threads=1,
    ):
        self.spatial_radius = spatial_radius
        self.range_radius = range_radius
        self.kernel = kernel
        self.max_steps = max_steps
        self.step_tol = step_tol
        self.single_shift = single_shift
        self.window = window
        self.bit_depth = bit_depth
        self.threads = threads

    def _resolved_params(self) -> MeanShiftParams:
        return MeanShiftParams(
            spatial_radius=self.spatial_radius,
            range_radius=self.range_radius,
            kernel=self.kernel,
            max_steps=1 if self.single_shift else self.max_steps,
            step_tol=self.step_tol,
            window=self.window,
        )

    def fit(self, X, y=None):
        self._resolved_params()
        check_gray_image(X, self.bit_depth)
        return self

    def transform(self, X):
        params = self._resolved_params()
        img = check_gray_image(X, self.bit_depth)
        result = filter_pass(img, params, threads=self.threads)
        if isinstance(X, GrayImage):
            return result
        return result.pixels.astype(np.asarray(X).dtype)
