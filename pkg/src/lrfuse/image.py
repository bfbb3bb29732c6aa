"""Grayscale image representation and file I/O.

Images are plain 2-D ``float64`` numpy arrays in the nominal intensity
range [0, 255].  Pixels stay real-valued through the whole processing
chain; rounding happens only inside the dynamic-range quantizer and when
writing files.  The on-disk format is 8-bit PGM (binary P5 or ASCII P2 on
read, always P5 with maxval 255 on write).
"""

from __future__ import annotations

import numpy as np

MAX_INTENSITY = 255.0


class PgmError(ValueError):
    """Malformed PGM data; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


def as_image(data) -> np.ndarray:
    """Coerce to a valid 2-D float64 image, rejecting bad shapes and non-finite values."""
    img = np.asarray(data, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError(f"image must be 2-D, got shape {img.shape}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError(f"image dimensions must be positive, got {img.shape}")
    if not np.isfinite(img).all():
        raise ValueError("image contains NaN or Inf")
    return img


def quantize(img) -> np.ndarray:
    """Clamp intensities to the dynamic range [0, 255].

    Values inside the range pass through unchanged, values above 255 map
    to 255 and negative values map to 0.  Idempotent.
    """
    return np.clip(as_image(img), 0.0, MAX_INTENSITY)


def extend_to_even(img) -> tuple[np.ndarray, tuple[int, int]]:
    """Replicate the last row/column so both dimensions become even.

    Returns the (possibly) extended image together with the original
    dimensions, so the caller can undo the extension with :func:`crop`.
    Even-dimension inputs are returned unchanged.
    """
    img = as_image(img)
    rows, cols = img.shape
    out = img
    if rows % 2:
        out = np.vstack([out, out[-1:, :]])
    if cols % 2:
        out = np.hstack([out, out[:, -1:]])
    return out, (rows, cols)


def crop(img, dims: tuple[int, int]) -> np.ndarray:
    """Top-left sub-image of the given (rows, cols); inverse of extend_to_even."""
    img = as_image(img)
    rows, cols = int(dims[0]), int(dims[1])
    if rows < 1 or cols < 1:
        raise ValueError(f"crop dimensions must be positive, got {dims}")
    if rows > img.shape[0] or cols > img.shape[1]:
        raise ValueError(f"crop dimensions {dims} exceed image shape {img.shape}")
    return img[:rows, :cols].copy()


# -- PGM ----------------------------------------------------------------


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    """Next whitespace-separated header token, skipping '#' comments."""
    n = len(data)
    while pos < n:
        byte = data[pos : pos + 1]
        if byte == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif byte.isspace():
            pos += 1
        else:
            break
    if pos >= n:
        raise PgmError("unexpected end of data while reading header", pos)
    start = pos
    while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
        pos += 1
    return data[start:pos], pos


def _int_token(data: bytes, pos: int, what: str) -> tuple[int, int]:
    token, end = _next_token(data, pos)
    try:
        value = int(token)
    except ValueError:
        raise PgmError(f"malformed {what} {token!r}", end - len(token)) from None
    return value, end


def load_pgm(data: bytes) -> np.ndarray:
    """Parse PGM bytes (binary P5 or ASCII P2, maxval <= 255) into an image.

    Pixel (i, j) of the result is the file's sample at row i, column j.
    Comments ('#' to end of line) are allowed anywhere in the header.
    """
    if not isinstance(data, (bytes, bytearray, memoryview)):
        raise TypeError("load_pgm expects a byte sequence")
    data = bytes(data)
    magic, pos = _next_token(data, 0)
    if magic not in (b"P2", b"P5"):
        raise PgmError(f"not a PGM: bad magic {magic!r}", 0)
    cols, pos = _int_token(data, pos, "width")
    rows, pos = _int_token(data, pos, "height")
    maxval, pos = _int_token(data, pos, "maxval")
    if cols < 1 or rows < 1:
        raise PgmError(f"malformed header: bad dimensions {cols}x{rows}", pos)
    if not 0 < maxval <= 255:
        raise PgmError(f"unsupported maxval {maxval} (must be 1..255)", pos)

    count = rows * cols
    if magic == b"P5":
        # Exactly one whitespace byte separates the header from the payload.
        if pos >= len(data) or not data[pos : pos + 1].isspace():
            raise PgmError("missing whitespace before pixel data", pos)
        pos += 1
        payload = data[pos : pos + count]
        if len(payload) < count:
            raise PgmError("unexpected end of pixel data", len(data))
        samples = np.frombuffer(payload, dtype=np.uint8, count=count)
        if samples.max(initial=0) > maxval:
            raise PgmError(f"sample exceeds maxval {maxval}", pos)
    else:
        values = []
        for _ in range(count):
            try:
                value, pos = _int_token(data, pos, "sample")
            except PgmError:
                raise PgmError("unexpected end of pixel data", len(data)) from None
            if not 0 <= value <= maxval:
                raise PgmError(f"sample {value} out of range 0..{maxval}", pos)
            values.append(value)
        samples = np.array(values, dtype=np.uint8)
    return samples.reshape(rows, cols).astype(np.float64)


def save_pgm(img) -> bytes:
    """Encode an image as binary P5 PGM with maxval 255.

    Each pixel is rounded to the nearest integer (halves away from zero)
    and clamped to [0, 255], so integer-valued in-range images round-trip
    bit exactly through load_pgm(save_pgm(img)).
    """
    img = as_image(img)
    rounded = np.trunc(img + np.copysign(0.5, img))
    clamped = np.clip(rounded, 0.0, MAX_INTENSITY).astype(np.uint8)
    rows, cols = img.shape
    header = f"P5\n{cols} {rows}\n255\n".encode("ascii")
    return header + clamped.tobytes()


def read_pgm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        return load_pgm(fh.read())


def write_pgm(path, img) -> None:
    with open(path, "wb") as fh:
        fh.write(save_pgm(img))
