"""Low-rank reconstruction of masked images by alternating minimization.

A masked image is modelled as the product A @ B of an (M, r) and an
(r, N) factor.  Starting from a seeded Gaussian A, the two factors are
updated in turn, each update being a set of independent per-column (or
per-row) least-squares problems restricted to the observed pixels.  Each
half-step solves its subproblem exactly, so the masked objective is
non-increasing along the trace and the iteration converges to a
stationary point; the limit depends on the initialization, which is why
callers run several differently-seeded reconstructions and fuse them.

The per-column solves go through :mod:`lrfuse.kernels` (compiled LAPACK
kernel when built, batched-SVD NumPy fallback otherwise).

Also provided: the leading singular values of an image via power
iteration with deflation, used by the threshold-selection rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .rng import RandomStream
from .sampling import MaskedImage, empty_mask_line

# Relative singular-value cutoff shared by ls_solve and both kernel backends.
LS_RCOND = 1e-10


class EmptyMaskLineError(ValueError):
    """A mask row or column has no observed pixel; the caller should resample."""

    def __init__(self, axis: str, index: int):
        super().__init__(f"mask {axis} {index} has no observed pixel")
        self.axis = axis
        self.index = index


class FactorPair(NamedTuple):
    """Low-rank factors: a is (M, r), b is (r, N)."""

    a: np.ndarray
    b: np.ndarray

    @property
    def rank(self) -> int:
        return self.a.shape[1]


@dataclass(frozen=True)
class FactorSettings:
    """Alternating-minimization tunables."""

    rank: int = 10
    max_iter: int = 100
    tol: float = 1e-6
    init_seed: int = 0

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"rank must be >= 1, got {self.rank}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if not self.tol > 0:
            raise ValueError(f"tol must be > 0, got {self.tol}")


def ls_solve(design, target) -> np.ndarray:
    """Minimum-norm least-squares solution of design @ x ~= target.

    Rank-revealing: singular directions below relative tolerance
    ``LS_RCOND`` are discarded.  Zero rows (or no rows at all) are
    allowed; an empty or all-zero design yields the zero vector.
    """
    design = np.asarray(design, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if design.ndim != 2 or target.ndim != 1:
        raise ValueError("design must be 2-D and target 1-D")
    if design.shape[0] != target.shape[0]:
        raise ValueError(
            f"design has {design.shape[0]} rows but target has {target.shape[0]}"
        )
    if not (np.isfinite(design).all() and np.isfinite(target).all()):
        raise ValueError("non-finite values in least-squares input")
    r = design.shape[1]
    if design.shape[0] == 0 or not design.any():
        return np.zeros(r)
    solution, _, _, _ = np.linalg.lstsq(design, target, rcond=LS_RCOND)
    return solution


def masked_objective(pair: FactorPair, sub: MaskedImage) -> float:
    """Sum of squared residuals of a @ b against the observed pixels only."""
    a, b = pair.a, pair.b
    if a.shape[0] != sub.image.shape[0] or b.shape[1] != sub.image.shape[1]:
        raise ValueError(
            f"factor shapes {a.shape}x{b.shape} do not match image {sub.image.shape}"
        )
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"inner factor dimensions differ: {a.shape} vs {b.shape}")
    residual = a @ b - sub.image
    return float(np.sum((residual * sub.mask) ** 2))


def _masked_sse(a, b, values, mask) -> float:
    residual = a @ b - values
    return float(np.sum((residual * mask) ** 2))


def lrmf_am(
    sub: MaskedImage, settings: FactorSettings
) -> tuple[np.ndarray, FactorPair, list[float]]:
    """Reconstruct a masked image as a rank-r product by alternating minimization.

    Alternates a B-step (per-column least squares over each column's
    observed rows) and an A-step (per-row least squares over each row's
    observed columns) from a seeded random A.  Stops when the relative
    decrease of the masked objective between consecutive full iterations
    falls below ``settings.tol``, or after ``settings.max_iter``
    iterations.

    Returns the reconstruction a @ b over ALL pixels (observed pixels are
    replaced too), the factors, and the masked-objective trace with one
    entry per half-step.
    """
    values, mask = np.asarray(sub.image, dtype=np.float64), np.asarray(sub.mask, bool)
    m, n = values.shape
    r = settings.rank
    if r >= min(m, n):
        raise ValueError(f"rank {r} must be < min{values.shape}")
    bad = empty_mask_line(mask)
    if bad is not None:
        raise EmptyMaskLineError(*bad)

    a = RandomStream(settings.init_seed).normal((m, r))
    values_t = np.ascontiguousarray(values.T)
    mask_t = np.ascontiguousarray(mask.T)

    trace: list[float] = []
    previous = None
    for _ in range(settings.max_iter):
        b = kernels.solve_columns(a, values, mask, LS_RCOND)
        trace.append(_masked_sse(a, b, values, mask))
        a = kernels.solve_columns(np.ascontiguousarray(b.T), values_t, mask_t, LS_RCOND).T
        current = _masked_sse(a, b, values, mask)
        trace.append(current)
        if previous is not None and previous - current < settings.tol * previous:
            break
        if current == 0.0:
            break
        previous = current
    return a @ b, FactorPair(a, b), trace


def top_singular_values(img, count: int) -> list[float]:
    """Leading ``count`` singular values, descending, via deflated power iteration.

    Runs power iteration on the Gram operator of the smaller side,
    deflating each converged eigenpair; iterates are re-orthogonalized
    against the converged basis every step to keep the deflation stable.
    Convergence: successive Rayleigh quotients within relative 1e-12,
    capped at 5000 iterations per value.
    """
    x = np.asarray(img, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {x.shape}")
    if count < 1 or count > min(x.shape):
        raise ValueError(f"count must lie in 1..{min(x.shape)}, got {count}")
    gram = x.T @ x if x.shape[1] <= x.shape[0] else x @ x.T
    size = gram.shape[0]
    start = RandomStream(0x5EED, "spectrum")

    values: list[float] = []
    basis: list[np.ndarray] = []
    for k in range(count):
        v = start.substream(k).normal(size)
        rho = 0.0
        for _ in range(5000):
            for u in basis:
                v -= (u @ v) * u
            w = gram @ v
            norm_v = np.linalg.norm(v)
            if norm_v == 0.0:
                rho = 0.0
                break
            rho_new = float(v @ w) / float(norm_v * norm_v)
            norm_w = np.linalg.norm(w)
            if norm_w == 0.0:
                rho = 0.0
                break
            v = w / norm_w
            if abs(rho_new - rho) <= 1e-12 * max(abs(rho_new), 1e-300):
                rho = rho_new
                break
            rho = rho_new
        rho = max(rho, 0.0)
        values.append(float(np.sqrt(rho)))
        norm_v = np.linalg.norm(v)
        if norm_v > 0.0:
            v = v / norm_v
            gram = gram - rho * np.outer(v, v)
            basis.append(v)
    return values
