"""Image file I/O: binary PGM (P5, maxval 255) and 8-bit grayscale PNG.

Reads sniff the file content (magic bytes), writes pick the format from the
file extension. Anything outside the two supported formats is rejected with
an error naming the offending property. RGB/RGBA PNG inputs are converted to
luminance with a warning since grayscale data often ships wrapped in RGB.
"""

from __future__ import annotations

import warnings
from pathlib import Path

import numpy as np
from PIL import Image

from mlzoom.errors import ImageFormatError
from mlzoom.image import GrayImage, round_half_away

_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


def load_image(path) -> GrayImage:
    """Load a PGM (P5) or 8-bit PNG file as a GrayImage."""
    path = Path(path)
    with open(path, "rb") as fh:
        head = fh.read(8)
    if head.startswith(b"P5"):
        return _load_pgm(path)
    if head == _PNG_SIGNATURE:
        return _load_png(path)
    if head.startswith(b"P6") or head.startswith(b"P2") or head.startswith(b"P3"):
        kind = head[:2].decode("ascii")
        raise ImageFormatError(f"{path}: PNM type {kind} unsupported, only binary P5")
    raise ImageFormatError(f"{path}: not a P5 PGM or PNG file")


def save_image(img: GrayImage, path) -> None:
    """Write a GrayImage; `.pgm` selects binary P5, `.png` 8-bit grayscale PNG."""
    path = Path(path)
    ext = path.suffix.lower()
    if ext == ".pgm":
        header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(img.pixels.tobytes())
    elif ext == ".png":
        Image.fromarray(img.pixels, mode="L").save(path, format="PNG")
    else:
        raise ImageFormatError(f"{path}: unknown extension {ext!r}, use .pgm or .png")


def _load_pgm(path: Path) -> GrayImage:
    data = path.read_bytes()
    fields, offset = _parse_pnm_header(data, path)
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise ImageFormatError(f"{path}: invalid dimensions {width}x{height}")
    if maxval != 255:
        raise ImageFormatError(f"{path}: maxval {maxval} unsupported, only 8-bit (255)")
    raster = data[offset:]
    expected = width * height
    if len(raster) < expected:
        raise ImageFormatError(
            f"{path}: truncated raster, expected {expected} bytes, got {len(raster)}"
        )
    if len(raster) > expected:
        raise ImageFormatError(f"{path}: {len(raster) - expected} trailing bytes after raster")
    arr = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    return GrayImage(arr)


def _parse_pnm_header(data: bytes, path: Path):
    # magic, then three whitespace-separated integers; '#' starts a comment
    # running to end of line; a single whitespace byte separates the header
    # from the raster.
    if not data.startswith(b"P5"):
        raise ImageFormatError(f"{path}: missing P5 magic")
    pos = 2
    fields = []
    while len(fields) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        token = data[start:pos]
        if not token:
            raise ImageFormatError(f"{path}: truncated PGM header")
        try:
            fields.append(int(token))
        except ValueError:
            raise ImageFormatError(f"{path}: bad PGM header token {token!r}") from None
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise ImageFormatError(f"{path}: missing whitespace after PGM header")
    return tuple(fields), pos + 1


_REC601 = np.array([0.299, 0.587, 0.114], dtype=np.float64)


def _load_png(path: Path) -> GrayImage:
    with Image.open(path) as im:
        im.load()
        mode = im.mode
        if mode == "L":
            return GrayImage(np.asarray(im, dtype=np.uint8))
        if mode in ("I", "I;16", "I;16B", "I;16L", "I;16N"):
            raise ImageFormatError(f"{path}: 16-bit depth unsupported, only 8-bit")
        if mode == "P":
            raise ImageFormatError(f"{path}: palette PNG unsupported")
        if mode == "1":
            raise ImageFormatError(f"{path}: 1-bit depth unsupported, only 8-bit")
        if mode in ("RGB", "RGBA"):
            warnings.warn(
                f"{path}: multi-channel PNG converted to luminance (Rec.601)",
                UserWarning,
                stacklevel=3,
            )
            rgb = np.asarray(im, dtype=np.float64)[:, :, :3]
            gray = round_half_away(rgb @ _REC601)
            return GrayImage(np.clip(gray, 0.0, 255.0).astype(np.uint8))
        if mode == "LA":
            warnings.warn(
                f"{path}: alpha channel dropped on load",
                UserWarning,
                stacklevel=3,
            )
            return GrayImage(np.asarray(im, dtype=np.uint8)[:, :, 0])
        raise ImageFormatError(f"{path}: unsupported PNG mode {mode!r}")
