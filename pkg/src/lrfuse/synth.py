"""Bundled deterministic test scene.

A 256x256 piecewise-smooth grayscale image: a separable background
gradient, two smooth waves, and seven block features.  Every term is a
rank-1 outer product.  Each block is a 36x36 checkerboard of
bright and dark cells, so it is zero-mean along both axes and stays
orthogonal to the smooth terms, and the blocks sit on pairwise-disjoint
row and column bands so they are also orthogonal to each other.  The
scene therefore has exact rank 10 with every component strong (singular
values from roughly 2.5e3 up to 3.5e4, then a drop of over two orders of
magnitude down to integer-rounding residue).  That spectrum is the regime
the rank-10 reconstruction stage targets.  The image is generated
analytically (no RNG) and rounded to integers so it survives a PGM round
trip bit-exactly.
"""

from __future__ import annotations

import numpy as np

# (row0, col0, contrast): top-left corner of a 36x36 block patterned as a
# 4x4 checkerboard of 9x9 cells with the given contrast.  Row bands and
# column bands are both pairwise disjoint.
_BLOCKS = (
    (2, 146, 80.0),
    (38, 38, 82.0),
    (74, 218, 81.0),
    (110, 2, 84.0),
    (146, 110, 80.0),
    (182, 182, -82.0),
    (218, 74, 81.0),
)
_BLOCK = 36


def synthetic_test_image(rows: int = 256, cols: int = 256) -> np.ndarray:
    """Piecewise-smooth gradient-plus-blocks scene, integer-valued."""
    y = np.linspace(0.0, 1.0, rows)
    x = np.linspace(0.0, 1.0, cols)
    img = np.outer(10.5 + 2.0 * y, 10.5 + 2.0 * x)
    img += 23.0 * np.outer(np.sin(2.0 * np.pi * y), np.sin(2.0 * np.pi * x))
    img += 23.0 * np.outer(np.cos(2.0 * np.pi * y), np.cos(2.0 * np.pi * x))
    strips = np.repeat([1.0, -1.0, 1.0, -1.0], _BLOCK // 4)
    for r0, c0, contrast in _BLOCKS:
        tile = contrast * np.outer(strips, strips)
        img[r0:r0 + _BLOCK, c0:c0 + _BLOCK] += tile
    # The terms are sized so the sum already sits inside [0, 255]; the clip
    # only guards tiny sizes where the ramps are sampled more coarsely.
    return np.round(np.clip(img, 0.0, 255.0))


def main(argv=None) -> int:
    """Write the synthetic scene to a PGM path: python -m lrfuse.synth OUT.pgm"""
    import argparse

    from .image import write_pgm

    parser = argparse.ArgumentParser(description=main.__doc__)
    parser.add_argument("output", help="destination PGM path")
    parser.add_argument("--size", type=int, default=256, help="image side length")
    args = parser.parse_args(argv)
    write_pgm(args.output, synthetic_test_image(args.size, args.size))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
