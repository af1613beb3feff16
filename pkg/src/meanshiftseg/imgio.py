"""Binary PGM (P5) reading and writing, bit-exact, plus optional PNG input.

PGM is the normative interchange format: 8-bit images use maxval 255 and one
byte per sample, deeper images use two big-endian bytes and maxval
2**bit_depth - 1. Header comments are tolerated on read and never written.
PNG input (8-bit grayscale only) is available when Pillow is installed.
"""

from __future__ import annotations

import os
import tempfile

import numpy as np

from .image import GrayImage

__all__ = [
    "PgmFormatError",
    "read_pgm",
    "write_pgm",
    "pgm_bytes",
    "read_png",
    "load_image",
    "write_bytes_atomic",
    "write_text_atomic",
]

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
_WHITESPACE = b" \t\n\r\v\f"


class PgmFormatError(ValueError):
    """Raised when an image file is malformed or unsupported."""


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    n = len(data)
    while pos < n:
        byte = data[pos]
        if byte in _WHITESPACE:
            pos += 1
        elif byte == ord("#"):
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
        else:
            break
    start = pos
    while pos < n and data[pos] not in _WHITESPACE:
        pos += 1
    if start == pos:
        raise PgmFormatError("truncated PGM header")
    return data[start:pos], pos


def _header_int(data: bytes, pos: int, what: str) -> tuple[int, int]:
    token, pos = _next_token(data, pos)
    try:
        return int(token), pos
    except ValueError:
        raise PgmFormatError(f"invalid {what} in PGM header: {token!r}") from None


def read_pgm(source) -> GrayImage:
    """Read a binary (P5) PGM file from a path or a bytes object."""
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    else:
        with open(source, "rb") as fh:
            data = fh.read()

    magic, pos = _next_token(data, 0)
    if magic != b"P5":
        raise PgmFormatError(f"not a binary PGM (P5) file, magic is {magic!r}")
    width, pos = _header_int(data, pos, "width")
    height, pos = _header_int(data, pos, "height")
    maxval, pos = _header_int(data, pos, "maxval")
    if width < 1 or height < 1:
        raise PgmFormatError(f"invalid PGM dimensions {width}x{height}")
    if not 1 <= maxval <= 65535:
        raise PgmFormatError(f"PGM maxval must be in 1..65535, got {maxval}")
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise PgmFormatError("missing whitespace between PGM header and raster")
    pos += 1  # exactly one whitespace byte separates header and raster

    raster = data[pos:]
    sample_width = 2 if maxval > 255 else 1
    expected = width * height * sample_width
    if len(raster) != expected:
        raise PgmFormatError(
            f"PGM raster has {len(raster)} bytes, expected {expected}"
        )
    dtype = ">u2" if sample_width == 2 else np.uint8
    pixels = np.frombuffer(raster, dtype=dtype).reshape(height, width).astype(np.int32)
    if int(pixels.max()) > maxval:
        raise PgmFormatError(f"PGM sample exceeds declared maxval {maxval}")
    return GrayImage(pixels, maxval.bit_length())


def pgm_bytes(image: GrayImage) -> bytes:
    """Canonical P5 encoding of an image (no comments, single-\\n header)."""
    header = f"P5\n{image.width} {image.height}\n{image.max_level}\n".encode("ascii")
    if image.bit_depth <= 8:
        raster = image.pixels.astype(np.uint8).tobytes()
    else:
        raster = image.pixels.astype(">u2").tobytes()
    return header + raster


def write_pgm(image: GrayImage, path) -> None:
    """Write an image as binary PGM, atomically (temp file plus rename)."""
    write_bytes_atomic(path, pgm_bytes(image))


def read_png(path) -> GrayImage:
    """Read an 8-bit grayscale PNG. Requires Pillow."""
    try:
        from PIL import Image
    except ImportError:  # pragma: no cover - depends on environment
        raise ImportError(
            "PNG input requires Pillow; install the 'png' extra"
        ) from None
    with Image.open(path) as im:
        if im.format != "PNG":
            raise PgmFormatError(f"not a PNG file: {path}")
        if im.mode != "L":
            raise PgmFormatError(
                f"only 8-bit grayscale PNG is supported, got mode {im.mode!r}"
            )
        pixels = np.asarray(im, dtype=np.int32)
    return GrayImage(pixels, 8)


def load_image(path) -> GrayImage:
    """Load a PGM or PNG image, sniffing the format from its first bytes."""
    with open(path, "rb") as fh:
        head = fh.read(len(PNG_SIGNATURE))
    if head.startswith(b"P5"):
        return read_pgm(path)
    if head == PNG_SIGNATURE:
        return read_png(path)
    raise PgmFormatError(f"unrecognized image format (not P5 PGM or PNG): {path}")


def write_bytes_atomic(path, data: bytes) -> None:
    """Write bytes via a temp file in the target directory, then rename.

    The destination either keeps its previous content or receives the full
    new content; a partially written file is never left at ``path``.
    """
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp.", suffix="~")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_text_atomic(path, text: str) -> None:
    write_bytes_atomic(path, text.encode("utf-8"))
