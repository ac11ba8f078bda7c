"""Grayscale image loading, saving, padding and synthetic test patterns.

Images are held as ``uint8`` arrays of shape ``(height, width)``. PGM (P2/P5,
maxval 255) is parsed here directly; PNG decoding is delegated to Pillow.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass

import numpy as np


class ImageError(Exception):
    """Base class for image loading failures."""


class ImageReadError(ImageError):
    """File missing, unreadable or truncated."""


class UnsupportedFormatError(ImageError):
    """File is not a PGM/PNG variant this module understands."""


class EmptyImageError(ImageError):
    """Image has a zero width or height."""


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit grayscale image, row-major ``data[y, x]``."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {arr.shape}")
        if arr.shape[0] == 0 or arr.shape[1] == 0:
            raise EmptyImageError(f"zero-dimension image {arr.shape[1]}x{arr.shape[0]}")
        if arr.dtype != np.uint8:
            if np.any(arr < 0) or np.any(arr > 255):
                raise ValueError("intensities must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.data.shape == other.data.shape and bool(np.array_equal(self.data, other.data))

    def __repr__(self):
        return f"GrayImage({self.width}x{self.height})"


# ---------------------------------------------------------------- PGM / PNG

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"
_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def _pgm_tokens(buf: bytes, count: int, pos: int = 0):
    tokens = []
    for _ in range(count):
        m = _TOKEN.match(buf, pos)
        if m is None:
            raise ImageReadError("truncated PGM header")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens, pos


def _parse_pgm(buf: bytes) -> np.ndarray:
    magic = buf[:2]
    try:
        (w, h, maxval), pos = _pgm_tokens(buf, 3, 2)
        w, h, maxval = int(w), int(h), int(maxval)
    except ValueError as exc:
        raise ImageReadError(f"malformed PGM header: {exc}") from None
    if maxval != 255:
        raise UnsupportedFormatError(f"only maxval 255 is supported, got {maxval}")
    if w <= 0 or h <= 0:
        raise EmptyImageError(f"zero-dimension image {w}x{h}")
    n = w * h
    if magic == b"P5":
        # exactly one whitespace byte separates the header from the raster
        raster = buf[pos + 1 : pos + 1 + n]
        if len(raster) < n:
            raise ImageReadError(f"truncated P5 raster: {len(raster)} of {n} bytes")
        pixels = np.frombuffer(raster, dtype=np.uint8)
    else:
        fields = buf[pos:].split()
        if len(fields) < n:
            raise ImageReadError(f"truncated P2 raster: {len(fields)} of {n} samples")
        try:
            pixels = np.array([int(f) for f in fields[:n]], dtype=np.int64)
        except ValueError:
            raise ImageReadError("non-integer sample in P2 raster") from None
        if pixels.min() < 0 or pixels.max() > 255:
            raise ImageReadError("P2 sample outside [0, 255]")
    return pixels.astype(np.uint8).reshape(h, w)


def luma_bt601(rgb: np.ndarray) -> np.ndarray:
    """round(0.299 R + 0.587 G + 0.114 B), halves rounded up."""
    rgb = np.asarray(rgb, dtype=np.float64)
    y = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
    return np.clip(np.floor(y + 0.5), 0, 255).astype(np.uint8)


def _parse_png(path) -> np.ndarray:
    from PIL import Image, UnidentifiedImageError

    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            if mode == "L":
                return np.asarray(im, dtype=np.uint8)
            if mode == "P":
                im = im.convert("RGBA" if "transparency" in im.info else "RGB")
                mode = im.mode
            if mode in ("RGB", "RGBA"):
                return luma_bt601(np.asarray(im)[..., :3])
            if mode == "LA":
                return np.asarray(im)[..., 0].astype(np.uint8)
            raise UnsupportedFormatError(f"unsupported PNG mode {mode!r}")
    except UnidentifiedImageError as exc:
        raise ImageReadError(str(exc)) from None
    except (OSError, SyntaxError) as exc:
        raise ImageReadError(f"{path}: {exc}") from None


def load_image(path) -> GrayImage:
    """Read a PGM (P2/P5) or PNG file. Color PNGs are reduced to BT.601 luma."""
    try:
        with open(path, "rb") as fh:
            buf = fh.read()
    except OSError as exc:
        raise ImageReadError(f"cannot read {os.fspath(path)}: {exc.strerror}") from None
    if buf[:2] in (b"P2", b"P5"):
        data = _parse_pgm(buf)
    elif buf.startswith(_PNG_MAGIC):
        data = _parse_png(path)
    elif len(buf) < 2:
        raise ImageReadError(f"{os.fspath(path)}: file too short")
    else:
        raise UnsupportedFormatError(f"{os.fspath(path)}: not a PGM (P2/P5) or PNG file")
    if data.size == 0:
        raise EmptyImageError(f"{os.fspath(path)}: zero-dimension image")
    return GrayImage(data)


def save_pgm(img: GrayImage, path, binary: bool = True) -> None:
    header = f"{'P5' if binary else 'P2'}\n{img.width} {img.height}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        if binary:
            fh.write(img.data.tobytes())
        else:
            for row in img.data:
                fh.write((" ".join(str(int(v)) for v in row) + "\n").encode("ascii"))


# ------------------------------------------------------------- padding, synth

def pad_to_block_multiple(img: GrayImage, block: int) -> GrayImage:
    """Grow both dimensions to the next multiple of ``block`` by edge replication."""
    if block < 1:
        raise ValueError("block must be >= 1")
    h, w = img.height, img.width
    ph, pw = -h % block, -w % block
    if ph == 0 and pw == 0:
        return img
    return GrayImage(np.pad(img.data, ((0, ph), (0, pw)), mode="edge"))


def synth_image(kind: str, width: int, height: int, param: int | None = None) -> GrayImage:
    """Deterministic test pattern.

    kind is ``"constant"`` (``param`` = level), ``"gradient"`` or
    ``"checkerboard"`` (``param`` = tile period, tile (0, 0) is black).
    """
    if width < 1 or height < 1:
        raise ValueError("dimensions must be positive")
    y, x = np.mgrid[0:height, 0:width]
    if kind == "constant":
        c = 128 if param is None else int(param)
        if not 0 <= c <= 255:
            raise ValueError("constant level must lie in [0, 255]")
        data = np.full((height, width), c, dtype=np.uint8)
    elif kind == "gradient":
        denom = width + height - 2
        if denom == 0:
            data = np.zeros((1, 1), dtype=np.uint8)
        else:
            data = np.floor(255.0 * (x + y) / denom + 0.5).astype(np.uint8)
    elif kind == "checkerboard":
        period = 8 if param is None else int(param)
        if period < 1:
            raise ValueError("checkerboard period must be >= 1")
        data = (((x // period + y // period) % 2) * 255).astype(np.uint8)
    else:
        raise ValueError(f"unknown synthetic pattern {kind!r}")
    return GrayImage(data)


_SYNTH = re.compile(r"^synth:(constant|gradient|checkerboard)(?::(\d+))?:(\d+)x(\d+)$")


def parse_synth_spec(spec: str) -> GrayImage:
    """Build an image from ``synth:<kind>[:<param>]:<W>x<H>``."""
    m = _SYNTH.match(spec)
    if m is None:
        raise ValueError(
            f"bad synthetic input {spec!r}; expected synth:<kind>[:<param>]:<W>x<H>"
        )
    kind, param, w, h = m.groups()
    return synth_image(kind, int(w), int(h), None if param is None else int(param))


def open_input(source: str) -> GrayImage:
    if source.startswith("synth:"):
        return parse_synth_spec(source)
    return load_image(source)
