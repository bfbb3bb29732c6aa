"""End-to-end mixed-noise denoiser.

The pipeline turns one noisy image into four randomly masked sub-images,
completes each with low-rank alternating minimization, and merges the four
reconstructions either by wavelet-domain fusion with hard thresholding or
by plain averaging (the control variant).

Steps, in order: extend to even dims -> generate the two mask pairs
(regenerating any pair that produced an empty row/column) -> lrmf_am on
each masked sub-image -> fuse -> crop back -> clamp to [0, 255].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import wavelet
from .image import as_image, crop, extend_to_even, quantize
from .lowrank import FactorSettings, lrmf_am, top_singular_values
from .rng import RandomStream
from .sampling import apply_mask, empty_mask_line, gen_nonoverlap_pair, gen_overlap_pair

SUB_IMAGES = 4

FUSION_MODES = ("hard", "average")


class MaskRetryError(RuntimeError):
    """Raised when mask regeneration keeps producing empty rows/columns."""


@dataclass(frozen=True)
class PipelineConfig:
    """All denoiser tunables; the defaults are the standard operating point."""

    rank: int = 10
    eta: float = 0.5
    tau: float = 15.0
    auto_tau: bool = False  # when True, tau = (rank+1)-th singular value / 2
    fusion: str = "hard"
    max_iter: int = 100
    tol: float = 1e-6
    seed: int = 0
    mask_retry_limit: int = 8

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"rank must be positive, got {self.rank}")
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta}")
        if self.tau < 0.0 or not np.isfinite(self.tau):
            raise ValueError(f"tau must be finite and >= 0, got {self.tau}")
        if self.fusion not in FUSION_MODES:
            raise ValueError(f"fusion must be one of {FUSION_MODES}, got {self.fusion!r}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be positive, got {self.max_iter}")
        if self.mask_retry_limit < 1:
            raise ValueError(
                f"mask_retry_limit must be positive, got {self.mask_retry_limit}"
            )


@dataclass(frozen=True)
class RunReport:
    """What one denoise run actually did."""

    tau: float
    iterations: tuple[int, ...]  # LRMF iteration count per sub-image
    traces: tuple[tuple[float, ...], ...]  # masked-objective trace per sub-image
    mask_attempts: int  # total mask-pair generations, >= 2


def tau_select(noisy, rank: int) -> float:
    """Threshold rule tau = lambda_{r+1} / 2 from the noisy image's spectrum."""
    noisy = as_image(noisy)
    if rank + 1 > min(noisy.shape):
        raise ValueError(
            f"rank {rank} needs at least {rank + 1} singular values, "
            f"image has min dim {min(noisy.shape)}"
        )
    return 0.5 * top_singular_values(noisy, rank + 1)[-1]


def _generate_masks(dims, eta, seed, retry_limit):
    """The four sampling masks: one complementary pair, one eta-overlap pair.

    A pair whose mask has a fully unobserved row or column is redrawn from
    the next attempt sub-stream, at most ``retry_limit`` times per pair.
    """
    masks = []
    attempts = 0
    for pair_index in range(2):
        for attempt in range(retry_limit):
            stream = RandomStream(seed, "masks", pair_index, attempt)
            if pair_index == 0:
                pair = gen_nonoverlap_pair(dims, stream)
            else:
                pair = gen_overlap_pair(dims, eta, stream)
            attempts += 1
            if all(empty_mask_line(m) is None for m in pair):
                masks.extend(pair)
                break
        else:
            raise MaskRetryError(
                f"mask pair {pair_index} still has an empty row/column after "
                f"{retry_limit} attempts at dims {tuple(dims)}"
            )
    return masks, attempts


def _reconstructions(work, cfg, masks=None, init_seeds=None):
    """LRMF completion of each masked copy of ``work``.

    ``masks``/``init_seeds`` exist for tests that need to pin the sampling
    pattern or make the four runs share an initialization.
    """
    if masks is None:
        masks, attempts = _generate_masks(
            work.shape, cfg.eta, cfg.seed, cfg.mask_retry_limit
        )
    else:
        attempts = 0
    if init_seeds is None:
        root = RandomStream(cfg.seed)
        init_seeds = [root.child_seed("init", i) for i in range(len(masks))]
    phats, iterations, traces = [], [], []
    for mask, init_seed in zip(masks, init_seeds):
        settings = FactorSettings(
            rank=cfg.rank, max_iter=cfg.max_iter, tol=cfg.tol, init_seed=init_seed
        )
        phat, _, trace = lrmf_am(apply_mask(work, mask), settings)
        phats.append(phat)
        iterations.append(len(trace) // 2)
        traces.append(tuple(trace))
    return phats, iterations, traces, attempts


def _fuse_hard(phats, tau):
    fused = wavelet.fuse([wavelet.dwt_haar(p) for p in phats], tau)
    return wavelet.idwt_haar(fused)


def _fuse_average(phats):
    return np.mean(phats, axis=0)


def denoise_both(noisy, cfg: PipelineConfig, *, _masks=None, _init_seeds=None):
    """Run the pipeline once, returning both fusion variants.

    The four LRMF reconstructions dominate the cost and do not depend on
    the fusion rule, so comparative studies share them.  Returns
    ``((hard_image, average_image), RunReport)``.
    """
    noisy = as_image(noisy)
    tau = tau_select(noisy, cfg.rank) if cfg.auto_tau else cfg.tau
    work, dims = extend_to_even(noisy)
    phats, iterations, traces, attempts = _reconstructions(
        work, cfg, masks=_masks, init_seeds=_init_seeds
    )
    report = RunReport(
        tau=tau,
        iterations=tuple(iterations),
        traces=tuple(traces),
        mask_attempts=attempts,
    )
    hard = quantize(crop(_fuse_hard(phats, tau), dims))
    average = quantize(crop(_fuse_average(phats), dims))
    return (hard, average), report


def denoise(noisy, cfg: PipelineConfig, *, _masks=None, _init_seeds=None):
    """Denoise one image, returning ``(image, RunReport)`` for cfg.fusion."""
    (hard, average), report = denoise_both(
        noisy, cfg, _masks=_masks, _init_seeds=_init_seeds
    )
    return (hard if cfg.fusion == "hard" else average), report
