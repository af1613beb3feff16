"""Mean shift segmentation of grayscale images with entropy stopping rules."""

from .image import (
    GrayImage,
    abs_diff,
    entropy,
    gray_histogram,
    gray_probabilities,
    quantize,
)
from .filtering import (
    JointPoint,
    MeanShiftFilter,
    MeanShiftParams,
    filter_pass,
    filter_pixel,
    mean_shift_vector,
    window_members,
)
from .segmentation import (
    IterationTrace,
    MeanShiftSegmenter,
    SegmentationResult,
    TraceRecord,
    criterion_value,
    segment,
    write_trace_csv,
)
from .analysis import (
    StabilityReport,
    diff_histogram_peak,
    extract_profile,
    format_stability_report,
    label_regions,
    stability_metrics,
    write_profile_csv,
)
from .imgio import PgmFormatError, load_image, read_pgm, read_png, write_pgm
from .validation import check_gray_image

__version__ = "0.1.0"

__all__ = [
    "GrayImage",
    "abs_diff",
    "entropy",
    "gray_histogram",
    "gray_probabilities",
    "quantize",
    "JointPoint",
    "MeanShiftFilter",
    "MeanShiftParams",
    "filter_pass",
    "filter_pixel",
    "mean_shift_vector",
    "window_members",
    "IterationTrace",
    "MeanShiftSegmenter",
    "SegmentationResult",
    "TraceRecord",
    "criterion_value",
    "segment",
    "write_trace_csv",
    "StabilityReport",
    "diff_histogram_peak",
    "extract_profile",
    "format_stability_report",
    "label_regions",
    "stability_metrics",
    "write_profile_csv",
    "PgmFormatError",
    "load_image",
    "read_pgm",
    "read_png",
    "write_pgm",
    "check_gray_image",
]
