"""Mixed-noise observation model: Gaussian noise, impulses, and their composition.

The corruption chain is additive white Gaussian noise first, then
salt-and-pepper replacement, then the dynamic-range quantizer, so impulse
pixels always end at exactly 0 or 255 and everything else is a clamped
Gaussian-perturbed original.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .image import MAX_INTENSITY, as_image, quantize
from .rng import RandomStream


@dataclass(frozen=True)
class NoiseParams:
    """Mixed-noise parameters: Gaussian sigma, salt/pepper probabilities, seed."""

    sigma: float
    p1: float
    p2: float
    seed: int = 0

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if not (0.0 <= self.p1 <= 1.0 and 0.0 <= self.p2 <= 1.0):
            raise ValueError(f"p1, p2 must lie in [0, 1], got {self.p1}, {self.p2}")
        if self.p1 + self.p2 > 1.0:
            raise ValueError(f"p1 + p2 must not exceed 1, got {self.p1 + self.p2}")

    @property
    def rho(self) -> float:
        """Normalized impulse intensity p1 + p2."""
        return self.p1 + self.p2


def add_awgn(img, sigma: float, stream: RandomStream) -> np.ndarray:
    """Add zero-mean Gaussian noise of standard deviation ``sigma`` per pixel.

    No clamping happens here; the quantizer is applied by the caller.
    """
    img = as_image(img)
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return img.copy()
    return img + sigma * stream.normal(img.shape)


def add_sapn(img, p1: float, p2: float, stream: RandomStream) -> np.ndarray:
    """Replace each pixel by 255 with probability p1, by 0 with probability p2.

    A single uniform draw per pixel decides the branch: u < p1 is salt,
    p1 <= u < p1 + p2 is pepper, the rest keep their value.
    """
    img = as_image(img)
    if not (0.0 <= p1 <= 1.0 and 0.0 <= p2 <= 1.0 and p1 + p2 <= 1.0):
        raise ValueError(f"invalid impulse probabilities p1={p1}, p2={p2}")
    u = stream.uniform(img.shape)
    out = img.copy()
    out[u < p1] = MAX_INTENSITY
    out[(u >= p1) & (u < p1 + p2)] = 0.0
    return out


def corrupt_mixed(img, params: NoiseParams) -> np.ndarray:
    """Full observation model: quantize(sapn(awgn(img)))."""
    root = RandomStream(params.seed)
    noisy = add_awgn(img, params.sigma, root.substream("awgn"))
    noisy = add_sapn(noisy, params.p1, params.p2, root.substream("sapn"))
    return quantize(noisy)
