"""Diagnostics for segmentation runs.

Line profiles show how homogeneous segmented regions are, flat-zone labeling
counts constant regions, the difference-image histogram peak checks where
consecutive passes still disagree, and the stability metrics quantify how
smoothly a stopping-criterion trace decays.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

import numpy as np

from .image import gray_histogram
from .imgio import write_text_atomic
from .validation import check_gray_image

__all__ = [
    "ROW",
    "COLUMN",
    "StabilityReport",
    "extract_profile",
    "stability_metrics",
    "label_regions",
    "diff_histogram_peak",
    "write_profile_csv",
    "format_stability_report",
]

ROW = "row"
COLUMN = "column"
_ORIENTATIONS = {ROW: ROW, COLUMN: COLUMN, "col": COLUMN}


@dataclass(frozen=True)
class StabilityReport:
    """How smoothly a criterion trace decays.

    oscillation_count: sign changes between successive first differences
        (both nonzero); zero for any monotone trace.
    total_variation: sum of absolute first differences.
    iterations: number of trace values.
    """

    oscillation_count: int
    total_variation: float
    iterations: int


def extract_profile(image, orientation: str, index: int) -> np.ndarray:
    """Gray values along one row (left to right) or column (top to bottom)."""
    img = check_gray_image(image)
    try:
        orient = _ORIENTATIONS[orientation]
    except KeyError:
        raise ValueError(f"orientation must be 'row' or 'column', got {orientation!r}") from None
    index = int(index)
    limit = img.height if orient == ROW else img.width
    if not 0 <= index < limit:
        raise IndexError(f"{orient} index {index} outside 0..{limit - 1}")
    if orient == ROW:
        return img.pixels[index].copy()
    return img.pixels[:, index].copy()


def _criterion_series(trace) -> list[float]:
    records = getattr(trace, "records", None)
    if records is not None:
        return [float(rec.criterion) for rec in records]
    return [float(v) for v in trace]


def stability_metrics(trace) -> StabilityReport:
    """Oscillation count and total variation of a criterion trace.

    Accepts an IterationTrace or any sequence of criterion values.
    """
    values = _criterion_series(trace)
    if not values:
        raise ValueError("trace must contain at least one value")
    diffs = [b - a for a, b in zip(values, values[1:])]
    oscillations = 0
    for prev, cur in zip(diffs, diffs[1:]):
        if prev != 0.0 and cur != 0.0 and (prev > 0) != (cur > 0):
            oscillations += 1
    return StabilityReport(
        oscillation_count=oscillations,
        total_variation=float(sum(abs(d) for d in diffs)),
        iterations=len(values),
    )


def label_regions(image) -> tuple[np.ndarray, int]:
    """4-connected components of equal gray level.

    Returns a label map of the image's shape plus the region count. Labels
    are consecutive from 0 in order of first appearance (row-major scan).
    """
    img = check_gray_image(image)
    pixels = img.pixels
    height, width = img.shape
    labels = np.full((height, width), -1, dtype=np.int32)
    count = 0
    for seed_row in range(height):
        for seed_col in range(width):
            if labels[seed_row, seed_col] >= 0:
                continue
            level = pixels[seed_row, seed_col]
            labels[seed_row, seed_col] = count
            queue = deque([(seed_row, seed_col)])
            while queue:
                row, col = queue.popleft()
                for nr, nc in ((row - 1, col), (row + 1, col), (row, col - 1), (row, col + 1)):
                    if (
                        0 <= nr < height
                        and 0 <= nc < width
                        and labels[nr, nc] < 0
                        and pixels[nr, nc] == level
                    ):
                        labels[nr, nc] = count
                        queue.append((nr, nc))
            count += 1
    return labels, count


def diff_histogram_peak(image) -> int:
    """Gray level with the highest count; ties go to the smallest level."""
    counts = gray_histogram(check_gray_image(image))
    return int(np.argmax(counts))


def write_profile_csv(values, path) -> None:
    """Write a profile as CSV with header ``position,gray``."""
    lines = ["position,gray"]
    for position, gray in enumerate(values):
        lines.append(f"{position},{int(gray)}")
    write_text_atomic(path, "\n".join(lines) + "\n")


def format_stability_report(report: StabilityReport) -> str:
    """Single-line JSON record of a stability report."""
    return json.dumps(
        {
            "oscillations": report.oscillation_count,
            "total_variation": report.total_variation,
            "iterations": report.iterations,
        }
    )
