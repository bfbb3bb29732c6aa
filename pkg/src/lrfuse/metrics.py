"""Image quality measures: MSE, PSNR, and SSIM.

PSNR uses the 8-bit peak value 255.  SSIM follows the standard single-scale
definition: an 11x11 Gaussian window with standard deviation 1.5,
stabilizers C1 = (0.01*255)^2 and C2 = (0.03*255)^2, averaged over all
fully-inside window positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .image import MAX_INTENSITY, as_image

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_C1 = (0.01 * MAX_INTENSITY) ** 2
SSIM_C2 = (0.03 * MAX_INTENSITY) ** 2


@dataclass(frozen=True)
class QualityReport:
    mse: float
    psnr_db: float  # math.inf when mse == 0
    ssim: float


def _pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x, y = as_image(x), as_image(y)
    if x.shape != y.shape:
        raise ValueError(f"image shapes differ: {x.shape} vs {y.shape}")
    return x, y


def mse(x, y) -> float:
    """Mean squared error over all pixels."""
    x, y = _pair(x, y)
    diff = x - y
    return float(np.mean(diff * diff))


def psnr(x, y) -> float:
    """Peak signal-to-noise ratio in dB; +inf for identical images."""
    err = mse(x, y)
    if err == 0.0:
        return math.inf
    return 10.0 * math.log10(MAX_INTENSITY**2 / err)


def _gaussian_window() -> np.ndarray:
    half = (SSIM_WINDOW - 1) / 2.0
    offsets = np.arange(SSIM_WINDOW) - half
    kernel = np.exp(-(offsets**2) / (2.0 * SSIM_SIGMA**2))
    window = np.outer(kernel, kernel)
    return window / window.sum()


_WINDOW = _gaussian_window()


def _windowed_mean(img: np.ndarray) -> np.ndarray:
    # 'valid' windowed weighted means via a sliding view; no padding.
    view = np.lib.stride_tricks.sliding_window_view(img, (SSIM_WINDOW, SSIM_WINDOW))
    return np.einsum("ijkl,kl->ij", view, _WINDOW)


def ssim(x, y) -> float:
    """Mean structural similarity index over all valid window positions."""
    x, y = _pair(x, y)
    if min(x.shape) < SSIM_WINDOW:
        raise ValueError(
            f"images must be at least {SSIM_WINDOW}x{SSIM_WINDOW} for SSIM, got {x.shape}"
        )
    mu_x = _windowed_mean(x)
    mu_y = _windowed_mean(y)
    var_x = _windowed_mean(x * x) - mu_x * mu_x
    var_y = _windowed_mean(y * y) - mu_y * mu_y
    cov = _windowed_mean(x * y) - mu_x * mu_y
    numerator = (2.0 * mu_x * mu_y + SSIM_C1) * (2.0 * cov + SSIM_C2)
    denominator = (mu_x * mu_x + mu_y * mu_y + SSIM_C1) * (var_x + var_y + SSIM_C2)
    return float(np.mean(numerator / denominator))


def quality_report(x, y) -> QualityReport:
    """MSE, PSNR and SSIM of a reference/test pair in one shot."""
    return QualityReport(mse=mse(x, y), psnr_db=psnr(x, y), ssim=ssim(x, y))
