"""Independent reference implementations used as test oracles.

Everything here is deliberately naive: per-pixel tallies, full-image double
loops with no spatial indexing, and plain Python float arithmetic. The
filtering oracle accumulates window samples in row-major order, which the
library's filter contract also guarantees, so comparisons are exact.
"""

from __future__ import annotations

import math
from collections import Counter

import numpy as np


def histogram_reference(pixels, levels: int) -> list[int]:
    counts = [0] * levels
    arr = np.asarray(pixels)
    for row in range(arr.shape[0]):
        for col in range(arr.shape[1]):
            counts[int(arr[row, col])] += 1
    return counts


def entropy_reference(pixels) -> float:
    arr = np.asarray(pixels)
    total = arr.size
    counts = Counter(int(v) for v in arr.ravel())
    acc = 0.0
    for count in counts.values():
        p = count / total
        acc += p * math.log2(p)
    return -acc + 0.0


def quantize_reference(value: float, bit_depth: int) -> int:
    rounded = math.floor(abs(value) + 0.5)
    if value < 0:
        rounded = -rounded
    return max(0, min((1 << bit_depth) - 1, rounded))


def window_members_reference(pixels, center, hs, hr, window="circle"):
    """Double-loop membership scan; returns (row, col, gray) tuples."""
    arr = np.asarray(pixels)
    cr, cc, cg = (float(v) for v in center)
    members = []
    for row in range(arr.shape[0]):
        for col in range(arr.shape[1]):
            drf = row - cr
            dcf = col - cc
            if window == "circle":
                near = drf * drf + dcf * dcf <= hs * hs
            else:
                near = abs(drf) <= hs and abs(dcf) <= hs
            if near and abs(float(arr[row, col]) - cg) <= hr:
                members.append((float(row), float(col), float(arr[row, col])))
    return members


def _seek_reference(arr, start_row, start_col, hs, hr, kernel, max_steps, tol, window):
    height, width = arr.shape
    hs_sq = hs * hs
    hr_sq = hr * hr
    cr = float(start_row)
    cc = float(start_col)
    cg = float(arr[start_row, start_col])
    for _ in range(max_steps):
        sw = 0.0
        sr = 0.0
        sc = 0.0
        sg = 0.0
        for rr in range(height):
            for col in range(width):
                drf = rr - cr
                dcf = col - cc
                sq = drf * drf + dcf * dcf
                if window == "circle":
                    near = sq <= hs_sq
                else:
                    near = abs(drf) <= hs and abs(dcf) <= hs
                if not near:
                    continue
                g = float(arr[rr, col])
                dg = g - cg
                if abs(dg) > hr:
                    continue
                if kernel == "uniform":
                    w = 1.0
                else:
                    u = sq / hs_sq + (dg * dg) / hr_sq
                    w = 1.0 - u
                    if w <= 0.0:
                        continue
                sw += w
                sr += w * rr
                sc += w * col
                sg += w * g
        if sw == 0.0:
            break
        ng = sg / sw
        shift = abs(ng - cg)
        cr = sr / sw
        cc = sc / sw
        cg = ng
        if shift < tol:
            break
    return cg


def filter_pass_reference(
    pixels,
    bit_depth=8,
    hs=4,
    hr=12.0,
    kernel="uniform",
    max_steps=100,
    tol=0.01,
    window="circle",
):
    """Brute-force filtering pass; returns quantized int pixels."""
    arr = np.asarray(pixels)
    out = np.empty(arr.shape, dtype=np.int32)
    for row in range(arr.shape[0]):
        for col in range(arr.shape[1]):
            value = _seek_reference(arr, row, col, hs, hr, kernel, max_steps, tol, window)
            out[row, col] = quantize_reference(value, bit_depth)
    return out


def run_driver_reference(image, params, criterion, threshold, max_iter):
    """Straight-line reimplementation of the iterative drivers.

    Uses the library's filter pass (the loop under test is the driver, and
    both criteria must compare against identical filtering) but recomputes
    entropies and difference images independently.
    """
    from meanshiftseg.filtering import filter_pass

    current = image
    prev_entropy = entropy_reference(current.pixels)
    records = []
    terminated = "MaxIters"
    for iteration in range(1, max_iter + 1):
        filtered = filter_pass(current, params)
        image_entropy = entropy_reference(filtered.pixels)
        if criterion == "old":
            errabs = abs(image_entropy - prev_entropy)
        else:
            diff = np.abs(filtered.pixels.astype(np.int64) - current.pixels.astype(np.int64))
            errabs = entropy_reference(diff)
        records.append((iteration, errabs, image_entropy))
        prev_entropy = image_entropy
        current = filtered
        if errabs <= threshold:
            terminated = "Threshold"
            break
    return current, records, terminated


def region_count_reference(pixels) -> int:
    """Count 4-connected equal-gray regions via scipy, one level at a time."""
    from scipy import ndimage

    arr = np.asarray(pixels)
    structure = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]])
    total = 0
    for level in np.unique(arr):
        _, n = ndimage.label(arr == level, structure=structure)
        total += n
    return total
