"""Single-level orthonormal Haar transform, hard thresholding, and fusion.

The analysis operates on disjoint 2x2 blocks [[a, b], [c, d]]:

    LL = (a+b+c+d)/2   LH = (a+b-c-d)/2
    HL = (a-b+c-d)/2   HH = (a-b-c+d)/2

This normalization is orthonormal (it preserves Frobenius energy), so
threshold values are directly comparable to pixel-intensity scale.
Fusion averages the approximation bands and, per detail position, keeps
the coefficient of largest magnitude across the inputs unless all
magnitudes fall below the threshold, in which case the output is 0.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .image import as_image


class SubbandSet(NamedTuple):
    """One-level decomposition: approximation plus three detail bands."""

    ll: np.ndarray
    lh: np.ndarray
    hl: np.ndarray
    hh: np.ndarray


def dwt_haar(img) -> SubbandSet:
    """Orthonormal 2-D Haar analysis of an even-dimension image."""
    img = as_image(img)
    rows, cols = img.shape
    if rows % 2 or cols % 2:
        raise ValueError(f"image dimensions must be even, got {img.shape}")
    a = img[0::2, 0::2]
    b = img[0::2, 1::2]
    c = img[1::2, 0::2]
    d = img[1::2, 1::2]
    return SubbandSet(
        ll=(a + b + c + d) / 2.0,
        lh=(a + b - c - d) / 2.0,
        hl=(a - b + c - d) / 2.0,
        hh=(a - b - c + d) / 2.0,
    )


def idwt_haar(bands: SubbandSet) -> np.ndarray:
    """Exact inverse of dwt_haar (orthonormal synthesis)."""
    ll, lh, hl, hh = (np.asarray(band, dtype=np.float64) for band in bands)
    if not (ll.shape == lh.shape == hl.shape == hh.shape):
        raise ValueError("subbands must share dimensions")
    rows, cols = ll.shape
    out = np.empty((2 * rows, 2 * cols))
    out[0::2, 0::2] = (ll + lh + hl + hh) / 2.0
    out[0::2, 1::2] = (ll + lh - hl - hh) / 2.0
    out[1::2, 0::2] = (ll - lh + hl - hh) / 2.0
    out[1::2, 1::2] = (ll - lh - hl + hh) / 2.0
    return out


def hard_threshold(band, tau: float) -> np.ndarray:
    """Zero coefficients with magnitude strictly below tau; keep the rest."""
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    band = np.asarray(band, dtype=np.float64)
    return np.where(np.abs(band) < tau, 0.0, band)


def fuse(sets: list[SubbandSet], tau: float) -> SubbandSet:
    """Fuse k decompositions: mean LL, max-magnitude detail selection with threshold.

    Per detail position the coefficient of largest magnitude among the k
    inputs is kept (ties go to the earliest input); if even the largest
    magnitude is strictly below tau, the output coefficient is 0.  Detail
    outputs are therefore always either 0 or one of the inputs, never a
    blend.
    """
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    if len(sets) == 0:
        raise ValueError("need at least one subband set to fuse")
    shape = np.asarray(sets[0].ll).shape
    for bands in sets:
        for band in bands:
            if np.asarray(band).shape != shape:
                raise ValueError("subband sets must share dimensions")

    ll = np.mean([bands.ll for bands in sets], axis=0)

    def select(stack: np.ndarray) -> np.ndarray:
        magnitude = np.abs(stack)
        winner = magnitude.argmax(axis=0)  # first max wins ties
        chosen = np.take_along_axis(stack, winner[np.newaxis], axis=0)[0]
        return np.where(magnitude.max(axis=0) < tau, 0.0, chosen)

    lh = select(np.stack([bands.lh for bands in sets]))
    hl = select(np.stack([bands.hl for bands in sets]))
    hh = select(np.stack([bands.hh for bands in sets]))
    return SubbandSet(ll=ll, lh=lh, hl=hl, hh=hh)
