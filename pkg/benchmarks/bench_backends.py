"""Time the compiled masked least-squares kernel against the pure-Python one.

The masked column solve is the hot spot of the alternating minimization:
it runs twice per iteration, on every sub-image reconstruction.  This
script times both implementations on the same batch of problems, checks
they agree, and reports the speedup.  Run it from the repository root:

    python3 benchmarks/bench_backends.py
    python3 benchmarks/bench_backends.py --size 512 --rank 14 --repeats 9
"""

import argparse
import sys
import time

import numpy as np

from lrfuse.kernels import reference
from lrfuse.lowrank import LS_RCOND
from lrfuse.rng import RandomStream

try:
    from lrfuse.kernels import _masked_ls as compiled
except ImportError:
    compiled = None


def make_problem(size, rank, density, seed):
    stream = RandomStream(seed, "bench")
    factor = stream.normal((size, rank))
    values = stream.normal((size, rank)) @ stream.normal((rank, size))
    values += 0.1 * stream.normal((size, size))
    mask = stream.uniform((size, size)) < density
    return factor, values, mask


def best_time(fn, args, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - start)
    return min(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=256, help="square problem size")
    parser.add_argument("--rank", type=int, default=10, help="factor rank")
    parser.add_argument("--density", type=float, default=0.75, help="observed fraction")
    parser.add_argument("--repeats", type=int, default=5, help="timing repeats (best-of)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    factor, values, mask = make_problem(args.size, args.rank, args.density, args.seed)
    call = (factor, values, mask, LS_RCOND)

    ref_out = reference.solve_columns(*call)
    ref_time = best_time(reference.solve_columns, call, args.repeats)
    print(f"problem: {args.size}x{args.size}, rank {args.rank}, "
          f"density {args.density:.2f}, best of {args.repeats}")
    print(f"python   solve_columns: {1e3 * ref_time:8.2f} ms")

    if compiled is None:
        print("compiled backend not built; skipping comparison")
        return 0

    comp_out = compiled.solve_columns(*call)
    comp_time = best_time(compiled.solve_columns, call, args.repeats)
    diff = float(np.max(np.abs(comp_out - ref_out)))
    print(f"compiled solve_columns: {1e3 * comp_time:8.2f} ms")
    print(f"speedup: {ref_time / comp_time:.2f}x   max abs disagreement: {diff:.3e}")
    if diff > 1e-9:
        print("backends disagree beyond 1e-9", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
