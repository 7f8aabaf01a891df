"""Time the numba and numpy kernel variants side by side.

    python3 benchmarks/bench_kernels.py [--repeat N] [--end-to-end]

Kernel timings call both variants in one process. ``--end-to-end`` also
times a full Stern run with each backend, switched through
LEEISD_DISABLE_NUMBA in a subprocess.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from leeisd import kernels
from leeisd._accel import NUMBA_AVAILABLE

END_TO_END = """
import time, numpy as np
from leeisd.complexity import optimize_params
from leeisd.isd import plant_instance, stern_z4
rng = np.random.default_rng(1)
inst, _ = plant_instance("Z4", 60, 8, 8, 10, rng)
params = optimize_params("Z4", 60, 8, 8, 10, strategy="full").params
stern_z4(inst, params, np.random.default_rng(0), max_iters=2)
start = time.perf_counter()
res = stern_z4(inst, params, np.random.default_rng(0), max_iters=200)
print(f"{time.perf_counter() - start:.3f} {res.status} {res.iterations}")
"""


def cases(rng):
    a = rng.integers(0, 4, size=(120, 200))
    b = rng.integers(0, 4, size=(200, 150))
    yield "matmul_mod 120x200x150", lambda f: f(a, b, 4), "matmul_mod"

    g = rng.integers(0, 4, size=(80, 200))
    cols = np.arange(60, dtype=np.int64)
    yield "gauss_jordan 80x200, 60 pivots", lambda f: f(g.copy(), cols, 4), "gauss_jordan"

    mat = rng.integers(0, 4, size=(40, 30))
    prev = rng.integers(0, 4, size=(500, 40))
    cnt = 20000
    parent = rng.integers(0, 500, size=cnt)
    coord = rng.integers(0, 30, size=cnt)
    delta = rng.choice(np.array([1, 2, 3]), size=cnt)
    yield "intermediate_sums 20000 x 40", lambda f: f(mat, prev, parent, coord, delta, 4), "intermediate_sums"

    bmat = rng.integers(0, 4, size=(100, 20))
    e1 = rng.integers(0, 4, size=(20000, 20))
    s2 = rng.integers(0, 4, size=100)
    # target beyond reach forces a full scan
    yield "first_extension 20000 x 100 (no hit)", lambda f: f(bmat, s2, e1, -1, 4), "first_extension"

    rows = rng.integers(0, 4, size=(50000, 64))
    yield "weights 50000 x 64", lambda f: f(rows, 4), "weights"


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def end_to_end():
    out = {}
    for backend, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, LEEISD_DISABLE_NUMBA=flag)
        res = subprocess.run([sys.executable, "-c", END_TO_END], capture_output=True, text=True, env=env, check=True)
        out[backend] = res.stdout.split()
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args(argv)
    if not NUMBA_AVAILABLE:
        print("numba is not importable; the loop variants run as plain python")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<40} {'numba ms':>10} {'numpy ms':>10} {'ratio':>8}")
    for label, call, name in cases(rng):
        loops = getattr(kernels, f"{name}_loops")
        vec = getattr(kernels, f"{name}_numpy")
        call(loops)  # compile outside the timing
        t_loops = best(lambda: call(loops), args.repeat)
        t_vec = best(lambda: call(vec), args.repeat)
        print(f"{label:<40} {1e3 * t_loops:>10.2f} {1e3 * t_vec:>10.2f} {t_vec / t_loops:>8.2f}")
    if args.end_to_end:
        for backend, (secs, status, iters) in end_to_end().items():
            print(f"stern n=60 with {backend}: {secs} s, {status} after {iters} iterations")


if __name__ == "__main__":
    main()
