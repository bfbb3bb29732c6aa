"""Pure-NumPy kernel: batched masked least squares over all columns at once.

Each column j of the target solves min ||F[I_j] x - v[I_j, j]|| where I_j
is that column's observed row set.  Zeroing the unobserved rows of the
design (and target) leaves the problem unchanged, so the per-column
problems become a stack of equal-shape matrices solved with one batched
SVD call.  Singular values <= rcond * sigma_max (per column) are treated
as zero, matching LAPACK's gelss convention, and the returned solution is
the minimum-norm one.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def solve_columns(factor, values, mask, rcond: float) -> np.ndarray:
    """Solve min ||factor[mask[:, j]] @ x - values[mask[:, j], j]|| for every j.

    factor: (m, r) float64; values: (m, n) float64; mask: (m, n) bool/uint8.
    Returns the (r, n) matrix of minimum-norm solutions.
    """
    factor = np.asarray(factor, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    mask = np.asarray(mask, dtype=bool)
    m, r = factor.shape
    n = values.shape[1]
    designs = factor[np.newaxis, :, :] * mask.T[:, :, np.newaxis]  # (n, m, r)
    targets = np.where(mask, values, 0.0).T  # (n, m)
    u, s, vt = np.linalg.svd(designs, full_matrices=False)
    keep = s > rcond * s[:, :1]
    inv_s = np.where(keep, 1.0 / np.where(s > 0.0, s, 1.0), 0.0)
    coeffs = inv_s * np.einsum("nmr,nm->nr", u, targets)
    return np.einsum("nki,nk->ni", vt, coeffs).T
