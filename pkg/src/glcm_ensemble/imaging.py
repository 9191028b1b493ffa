"""Image decoding, grayscale conversion, resizing and gray-level quantization."""

from __future__ import annotations

import io
import os
import struct
from dataclasses import dataclass

import numpy as np

from .errors import (
    CorruptFile,
    ImageIOError,
    InvalidDimensions,
    InvalidLevels,
    UnsupportedFormat,
)

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit grayscale raster; ``pixels`` has shape (height, width)."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise InvalidDimensions(f"expected a nonempty 2-D array, got shape {px.shape}")
        if px.dtype != np.uint8:
            if not np.issubdtype(px.dtype, np.integer):
                raise ValueError("intensities must be integers")
            if px.min() < 0 or px.max() > 255:
                raise ValueError("intensities must lie in [0, 255]")
            px = px.astype(np.uint8)
        px = np.ascontiguousarray(px)
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def data(self) -> list[int]:
        """Row-major intensities."""
        return self.pixels.ravel().tolist()

    @classmethod
    def from_data(cls, width: int, height: int, data) -> "GrayImage":
        arr = np.asarray(data)
        if arr.size != width * height:
            raise InvalidDimensions(f"{arr.size} values for a {width}x{height} image")
        return cls(arr.reshape(height, width))

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)


@dataclass(frozen=True, eq=False)
class QuantizedImage:
    """Image of gray-level bin indices in ``[0, levels)``."""

    pixels: np.ndarray
    levels: int

    def __post_init__(self):
        _check_levels(self.levels)
        px = np.ascontiguousarray(self.pixels, dtype=np.int64)
        if px.ndim != 2 or px.size == 0:
            raise InvalidDimensions(f"expected a nonempty 2-D array, got shape {px.shape}")
        if px.min() < 0 or px.max() >= self.levels:
            raise ValueError(f"bin indices must lie in [0, {self.levels})")
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


# ---------------------------------------------------------------- decoding


def load_image(path) -> GrayImage:
    """Read a PGM (P2/P5, maxval 255) or 8-bit PNG file as grayscale."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ImageIOError(f"{path}: {exc.strerror or exc}") from exc
    if raw[:2] in (b"P2", b"P5"):
        return decode_pgm(raw)
    if raw[:8] == PNG_SIGNATURE:
        return decode_png(raw)
    raise UnsupportedFormat(f"{path}: not a PGM (P2/P5) or PNG file")


def _pgm_tokens(raw: bytes, count: int, pos: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated header tokens, skipping comments."""
    tokens = []
    n = len(raw)
    while len(tokens) < count:
        while pos < n and raw[pos] in b" \t\r\n\v\f":
            pos += 1
        if pos < n and raw[pos] == ord("#"):
            while pos < n and raw[pos] not in b"\r\n":
                pos += 1
            continue
        if pos >= n:
            raise CorruptFile("truncated PGM header")
        start = pos
        while pos < n and raw[pos] not in b" \t\r\n\v\f#":
            pos += 1
        tokens.append(raw[start:pos])
    return tokens, pos


def _header_int(token: bytes, what: str) -> int:
    if not token.isdigit():
        raise CorruptFile(f"bad PGM {what}: {token!r}")
    return int(token)


def decode_pgm(raw: bytes) -> GrayImage:
    magic = raw[:2]
    (w_tok, h_tok, max_tok), pos = _pgm_tokens(raw, 3, 2)
    width = _header_int(w_tok, "width")
    height = _header_int(h_tok, "height")
    maxval = _header_int(max_tok, "maxval")
    if width < 1 or height < 1:
        raise CorruptFile(f"bad PGM dimensions {width}x{height}")
    if maxval != 255:
        raise CorruptFile(f"PGM maxval must be 255, got {maxval}")
    n = width * height
    if magic == b"P5":
        # exactly one whitespace byte separates the header from the raster
        if pos >= len(raw):
            raise CorruptFile("truncated PGM payload")
        payload = raw[pos + 1 : pos + 1 + n]
        if len(payload) != n:
            raise CorruptFile(f"truncated PGM payload: {len(payload)} of {n} bytes")
        pixels = np.frombuffer(payload, dtype=np.uint8)
    else:
        body = raw[pos:].split()
        if len(body) < n:
            raise CorruptFile(f"truncated PGM payload: {len(body)} of {n} samples")
        try:
            values = np.array([int(tok) for tok in body[:n]], dtype=np.int64)
        except ValueError as exc:
            raise CorruptFile("non-numeric sample in P2 raster") from exc
        if values.min() < 0 or values.max() > maxval:
            raise CorruptFile("P2 sample exceeds maxval")
        pixels = values.astype(np.uint8)
    return GrayImage(pixels.reshape(height, width))


def write_pgm(img: GrayImage, path) -> None:
    """Write a binary (P5) PGM with maxval 255."""
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    try:
        with open(path, "wb") as fh:
            fh.write(header + img.pixels.tobytes())
    except OSError as exc:
        raise ImageIOError(f"{path}: {exc.strerror or exc}") from exc


def _png_header(raw: bytes) -> tuple[int, int]:
    """Return (bit depth, colour type) from the IHDR chunk."""
    if len(raw) < 33 or raw[12:16] != b"IHDR":
        raise CorruptFile("PNG without a valid IHDR chunk")
    _w, _h, depth, ctype = struct.unpack(">IIBB", raw[16:26])
    return depth, ctype


def decode_png(raw: bytes) -> GrayImage:
    from PIL import Image

    depth, ctype = _png_header(raw)
    if depth != 8:
        raise UnsupportedFormat(f"only 8-bit PNG is supported, got bit depth {depth}")
    # 0 gray, 2 RGB, 4 gray+alpha, 6 RGBA; palette (3) is not supported
    if ctype not in (0, 2, 4, 6):
        raise UnsupportedFormat(f"unsupported PNG colour type {ctype}")
    try:
        with Image.open(io.BytesIO(raw)) as im:
            im.load()
            arr = np.asarray(im)
    except (OSError, SyntaxError, ValueError) as exc:
        raise CorruptFile(f"cannot decode PNG: {exc}") from exc
    if arr.ndim == 2:
        return GrayImage(arr.astype(np.uint8))
    if ctype == 4:
        return GrayImage(arr[..., 0].astype(np.uint8))
    return GrayImage(rgb_to_gray(arr[..., :3]))


def rgb_to_gray(rgb: np.ndarray) -> np.ndarray:
    """Rec.601 luma, rounded half up: round(0.299 R + 0.587 G + 0.114 B)."""
    rgb = np.asarray(rgb, dtype=np.float64)
    r, g, b = LUMA_WEIGHTS
    luma = r * rgb[..., 0] + g * rgb[..., 1] + b * rgb[..., 2]
    return np.clip(np.floor(luma + 0.5), 0, 255).astype(np.uint8)


# ------------------------------------------------------------- geometry


def _axis_weights(n_in: int, n_out: int):
    """Integer interpolation weights along one axis.

    Half-pixel centres map output sample x to input coordinate
    (x + 0.5) * n_in / n_out - 0.5 = ((2x + 1) * n_in - n_out) / (2 * n_out).
    That is kept as an exact fraction over ``den`` so ties round the same way
    on every platform.
    """
    den = 2 * n_out
    num = (2 * np.arange(n_out, dtype=np.int64) + 1) * n_in - n_out
    num = np.clip(num, 0, (n_in - 1) * den)
    lo = num // den
    hi = np.minimum(lo + 1, n_in - 1)
    frac = num - lo * den  # weight of ``hi``, in units of 1/den
    return lo, hi, frac, den


def resize(img: GrayImage, out_w: int, out_h: int) -> GrayImage:
    """Bilinear resize with half-pixel-centre sampling and edge clamping.

    Computed in exact integer arithmetic and rounded half up.
    """
    if out_w < 1 or out_h < 1:
        raise InvalidDimensions(f"target size must be positive, got {out_w}x{out_h}")
    if (out_w, out_h) == (img.width, img.height):
        return img
    src = img.pixels.astype(np.int64)
    x0, x1, fx, dx = _axis_weights(img.width, out_w)
    y0, y1, fy, dy = _axis_weights(img.height, out_h)
    rows = src[:, x0] * (dx - fx) + src[:, x1] * fx
    num = rows[y0, :] * (dy - fy)[:, None] + rows[y1, :] * fy[:, None]
    den = dx * dy
    out = (2 * num + den) // (2 * den)
    return GrayImage(np.clip(out, 0, 255).astype(np.uint8))


def _check_levels(levels: int) -> None:
    if not isinstance(levels, (int, np.integer)) or not 2 <= levels <= 256:
        raise InvalidLevels(f"levels must be an integer in [2, 256], got {levels!r}")


def quantize(img: GrayImage, levels: int, stretch: bool = False) -> QuantizedImage:
    """Map intensities to ``levels`` uniform-width bins: floor(p * G / 256).

    With ``stretch`` the bins span the image's own [min, max] range instead
    of [0, 255]; a constant image then quantizes to all zeros.
    """
    _check_levels(levels)
    p = img.pixels.astype(np.int64)
    if stretch:
        lo = int(p.min())
        span = int(p.max()) - lo + 1
        bins = (p - lo) * levels // span
    else:
        bins = (p * levels) >> 8
    return QuantizedImage(bins, int(levels))


def load_gray(path, size: tuple[int, int] | None = None) -> GrayImage:
    """Convenience: load and optionally resize to ``size`` = (width, height)."""
    img = load_image(os.fspath(path))
    if size is not None:
        img = resize(img, *size)
    return img
