"""Command line front end: segment images, export traces, compare criteria.

Exit codes: 0 on success, 1 for I/O or file-format problems (the offending
file is named on stderr), 2 for argument errors (usage goes to stderr).
All output files are written atomically; a failed run leaves no partial
outputs behind.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .analysis import extract_profile, format_stability_report, stability_metrics
from .filtering import KERNELS, WINDOW_CIRCLE, WINDOWS, MeanShiftParams
from .imgio import PgmFormatError, load_image, write_pgm
from .segmentation import SegmentationResult, segment, write_trace_csv
from .analysis import write_profile_csv
from .validation import check_positive_float, check_positive_int

__all__ = ["build_parser", "main"]

_CLI_CRITERIA = ("old", "new")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="segment",
        description=(
            "Segment a grayscale image by iterated mean shift filtering, "
            "stopping via an entropy-based rule."
        ),
    )
    parser.add_argument("--input", required=True, help="input image (P5 PGM, or 8-bit gray PNG)")
    parser.add_argument("--output", help="output PGM path")
    parser.add_argument(
        "--criterion",
        choices=_CLI_CRITERIA,
        default=None,
        help=(
            "stopping rule: 'old' = change of image entropy between passes, "
            "'new' = entropy of the difference image (default: new)"
        ),
    )
    parser.add_argument("--hs", type=int, default=4, help="spatial window radius in pixels (default 4)")
    parser.add_argument("--hr", type=float, default=12.0, help="gray-range window radius (default 12)")
    parser.add_argument(
        "--kernel", choices=sorted(KERNELS), default="uniform", help="window weighting (default uniform)"
    )
    parser.add_argument(
        "--threshold", type=float, default=0.001, help="stopping threshold (default 0.001)"
    )
    parser.add_argument("--max-iters", type=int, default=50, help="cap on filtering passes (default 50)")
    parser.add_argument(
        "--single-shift",
        action="store_true",
        help="cap per-pixel mode seeking at one move per pass",
    )
    parser.add_argument(
        "--window",
        choices=sorted(WINDOWS),
        default=WINDOW_CIRCLE,
        help="spatial window shape (default circle)",
    )
    parser.add_argument("--trace-csv", help="write the per-iteration criterion trace here")
    parser.add_argument(
        "--profile",
        action="append",
        default=[],
        metavar="ORIENT:INDEX:PATH",
        help="export an intensity profile of the result, e.g. row:32:profile.csv (repeatable)",
    )
    parser.add_argument(
        "--compare",
        action="store_true",
        help="run both criteria and report their stability side by side",
    )
    parser.add_argument("--threads", type=int, default=1, help="worker threads per pass (default 1)")
    parser.add_argument(
        "--passthrough",
        action="store_true",
        help="read the input and write it back unprocessed (requires --output)",
    )
    return parser


def _tagged(path: str, tag: str) -> str:
    p = Path(path)
    if p.suffix:
        return str(p.with_name(f"{p.stem}.{tag}{p.suffix}"))
    return str(p.with_name(f"{p.name}.{tag}"))


def _parse_profiles(parser: argparse.ArgumentParser, specs):
    parsed = []
    for spec in specs:
        parts = spec.split(":", 2)
        if len(parts) != 3 or parts[0] not in ("row", "col", "column"):
            parser.error(f"--profile expects ORIENT:INDEX:PATH with ORIENT row|col, got {spec!r}")
        orient = "row" if parts[0] == "row" else "column"
        try:
            index = int(parts[1])
        except ValueError:
            parser.error(f"--profile index must be an integer, got {parts[1]!r}")
        if not parts[2]:
            parser.error(f"--profile output path is empty in {spec!r}")
        parsed.append((orient, index, parts[2]))
    return parsed


def _summary(name: str, result: SegmentationResult) -> str:
    return (
        f"criterion={name} iterations={result.iterations} "
        f"final_criterion={result.final_criterion:.9g} "
        f"terminated_by={result.trace.terminated_by}"
    )


def _write_outputs(args, tag: str | None, result: SegmentationResult, profiles) -> None:
    def out_path(path: str) -> str:
        return path if tag is None else _tagged(path, tag)

    if args.output:
        write_pgm(result.image, out_path(args.output))
    if args.trace_csv:
        write_trace_csv(result.trace, out_path(args.trace_csv))
    for orient, index, path in profiles:
        write_profile_csv(extract_profile(result.image, orient, index), out_path(path))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)

        if args.compare and args.criterion is not None:
            parser.error("--criterion cannot be combined with --compare")
        if args.passthrough and not args.output:
            parser.error("--passthrough requires --output")
        profiles = _parse_profiles(parser, args.profile)
        try:
            params = MeanShiftParams(
                spatial_radius=args.hs,
                range_radius=args.hr,
                kernel=args.kernel,
                max_steps=1 if args.single_shift else 100,
                window=args.window,
            )
            threshold = check_positive_float("threshold", args.threshold)
            max_iter = check_positive_int("max-iters", args.max_iters)
            threads = check_positive_int("threads", args.threads)
        except (TypeError, ValueError) as exc:
            parser.error(str(exc))
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        image = load_image(args.input)
    except (OSError, PgmFormatError) as exc:
        print(f"error: {args.input}: {exc}", file=sys.stderr)
        return 1

    for orient, index, _ in profiles:
        limit = image.height if orient == "row" else image.width
        if not 0 <= index < limit:
            print(
                f"error: profile {orient} index {index} outside 0..{limit - 1} "
                f"for {args.input}",
                file=sys.stderr,
            )
            return 2

    try:
        if args.passthrough:
            write_pgm(image, args.output)
            return 0

        if args.compare:
            results = {
                name: segment(
                    image,
                    params,
                    criterion=name,
                    threshold=threshold,
                    max_iter=max_iter,
                    threads=threads,
                )
                for name in _CLI_CRITERIA
            }
            for name in _CLI_CRITERIA:
                _write_outputs(args, name, results[name], profiles)
            for name in _CLI_CRITERIA:
                print(_summary(name, results[name]))
            for name in _CLI_CRITERIA:
                report = stability_metrics(results[name].trace)
                print(f"stability_{name}={format_stability_report(report)}")
            return 0

        name = args.criterion or "new"
        result = segment(
            image,
            params,
            criterion=name,
            threshold=threshold,
            max_iter=max_iter,
            threads=threads,
        )
        _write_outputs(args, None, result, profiles)
        print(_summary(name, result))
        return 0
    except OSError as exc:
        target = getattr(exc, "filename", None) or args.output or args.input
        print(f"error: {target}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
