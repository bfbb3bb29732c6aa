"""Random sampling masks for the interpolation-averaging scheme.

Two mask pairs are used downstream: a complementary non-overlapping pair
covering every pixel exactly once, and a pair sharing an ``eta`` fraction
of observed pixels built from a random three-way partition of the grid.
Masks are plain 2-D boolean arrays (True = observed).
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .image import as_image
from .rng import RandomStream


class MaskedImage(NamedTuple):
    """An image observed through a mask; unobserved pixels are exactly 0."""

    image: np.ndarray
    mask: np.ndarray


def _check_dims(dims) -> tuple[int, int]:
    rows, cols = int(dims[0]), int(dims[1])
    if rows < 2 or cols < 2:
        raise ValueError(f"mask dimensions must be at least 2x2, got {dims}")
    return rows, cols


def round_half_up(x: float) -> int:
    """round() with halves away from zero, used for all mask cardinalities."""
    return int(np.floor(x + 0.5))


def gen_nonoverlap_pair(dims, stream: RandomStream) -> tuple[np.ndarray, np.ndarray]:
    """Complementary mask pair: the first has exactly floor(MN/2) zeros.

    Zero positions are drawn uniformly without replacement; the second
    mask is the elementwise complement, so the pair is disjoint and
    together covers every pixel.
    """
    rows, cols = _check_dims(dims)
    count = rows * cols
    first = np.ones(count, dtype=bool)
    first[stream.permutation(count)[: count // 2]] = False
    first = first.reshape(rows, cols)
    return first, ~first


def gen_overlap_pair(
    dims, eta: float, stream: RandomStream
) -> tuple[np.ndarray, np.ndarray]:
    """Mask pair sharing round(eta*MN) observed pixels and covering everything.

    The grid is partitioned into a shared part of round(eta*MN) pixels and
    two private parts split as evenly as possible (the first private part
    gets the extra pixel on odd splits).  Each mask is the union of the
    shared part with one private part.
    """
    rows, cols = _check_dims(dims)
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    count = rows * cols
    n_shared = round_half_up(eta * count)
    rest = count - n_shared
    n_second = rest - rest // 2
    perm = stream.permutation(count)
    second = np.zeros(count, dtype=bool)
    third = np.zeros(count, dtype=bool)
    second[perm[:n_shared]] = True
    third[perm[:n_shared]] = True
    second[perm[n_shared : n_shared + n_second]] = True
    third[perm[n_shared + n_second :]] = True
    return second.reshape(rows, cols), third.reshape(rows, cols)


def apply_mask(img, mask) -> MaskedImage:
    """Zero out unobserved pixels and keep the mask alongside the image."""
    img = as_image(img)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != img.shape:
        raise ValueError(f"mask shape {mask.shape} != image shape {img.shape}")
    return MaskedImage(np.where(mask, img, 0.0), mask)


def empty_mask_line(mask) -> tuple[str, int] | None:
    """First fully-unobserved row or column of a mask, or None if none exists."""
    mask = np.asarray(mask, dtype=bool)
    row_counts = mask.sum(axis=1)
    if not row_counts.all():
        return "row", int(np.argmin(row_counts != 0))
    col_counts = mask.sum(axis=0)
    if not col_counts.all():
        return "column", int(np.argmin(col_counts != 0))
    return None
