"""Masked least-squares kernel with two interchangeable backends.

The compiled Cython backend (per-column LAPACK dgelss on compacted
sub-problems) is used when its extension module is importable; otherwise
the batched pure-NumPy kernel takes over.  Set LRFUSE_BACKEND=python or
LRFUSE_BACKEND=compiled to force one side; "compiled" raises if the
extension is missing.  Both backends implement the same minimum-norm
semantics with the same singular-value cutoff and agree to roundoff, but
are not bit-identical to each other; see benchmarks/bench_backends.py for
a speed and agreement comparison.
"""

from __future__ import annotations

import os

_ENV_VAR = "LRFUSE_BACKEND"


def _load():
    choice = os.environ.get(_ENV_VAR, "auto").strip().lower()
    if choice not in ("auto", "compiled", "python"):
        raise ValueError(
            f"{_ENV_VAR} must be 'auto', 'compiled' or 'python', got {choice!r}"
        )
    if choice in ("auto", "compiled"):
        try:
            from . import _masked_ls

            return _masked_ls.solve_columns, "compiled"
        except ImportError:
            if choice == "compiled":
                raise
    from . import reference

    return reference.solve_columns, "python"


solve_columns, BACKEND = _load()
