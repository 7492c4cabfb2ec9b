"""Compare the compiled kernels against the numpy/interpreted fallback.

    python benchmarks/bench_kernels.py [--size 512] [--repeat 3] [--sweep 4x4]

Each kernel runs on the same random image under both backends (numba is
warmed up first so compilation is excluded).  The sweep row runs
``binshape sweep`` in a subprocess with and without BINSHAPE_DISABLE_NUMBA.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from binshape import kernels

# interpreted loops (labeling, holes, tracing) get a smaller image
LOOP_ONLY = {"label4", "holes8", "trace_paths"}


def best_of(fn, arg, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(arg)
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_rows(size, small, repeat, seed):
    rng = np.random.default_rng(seed)
    big = (rng.random((size, size)) < 0.7).astype(np.uint8)
    little = big[:small, :small].copy()
    fast, slow = kernels.numba_backend(), kernels.numpy_backend()
    rows = []
    for name in ("label4", "distance", "holes8", "level_stats", "trace_paths"):
        arr = little if name in LOOP_ONLY else big
        if name == "holes8":
            call = lambda be, a=arr: be["holes8"](a, fast["label4"](a)[0])
            arg_fast = arg_slow = None
            f_fast, f_slow = (lambda _: call(fast)), (lambda _: call(slow))
        elif name == "level_stats":
            dist = fast["distance"](arr)
            f_fast, f_slow, arg_fast, arg_slow = fast[name], slow[name], dist, dist
        else:
            f_fast, f_slow, arg_fast, arg_slow = fast[name], slow[name], arr, arr
        f_fast(arg_fast)  # compile
        t_fast = best_of(f_fast, arg_fast, repeat)
        t_slow = best_of(f_slow, arg_slow, repeat)
        rows.append((f"{name} {arr.shape[0]}x{arr.shape[1]}", t_fast, t_slow))
    # a solid square needs size/2 erosion rounds in the vectorised fallback
    solid = np.ones((size, size), np.uint8)
    fast["distance"](solid)
    rows.append((f"distance solid {size}x{size}", best_of(fast["distance"], solid, repeat), best_of(slow["distance"], solid, repeat)))
    return rows


def sweep_row(grid):
    w, h = grid.split("x")
    cmd = [sys.executable, "-m", "binshape", "sweep", "--width", w, "--height", h]
    out = []
    for disable in (False, True):
        env = dict(os.environ)
        env.pop(kernels.DISABLE_ENV, None)
        if disable:
            env[kernels.DISABLE_ENV] = "1"
        if not disable:
            subprocess.run(cmd, env=env, capture_output=True, check=True)  # populate the jit cache
        t0 = time.perf_counter()
        subprocess.run(cmd, env=env, capture_output=True, check=True)
        out.append(time.perf_counter() - t0)
    return (f"sweep {grid} (process)", out[0], out[1])


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--size", type=int, default=512, help="side of the image for vectorised kernels")
    p.add_argument("--loop-size", type=int, default=128, help="side of the image for loop-only kernels")
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--sweep", default="4x4", help="grid for the end-to-end sweep row, or 'none'")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    if not kernels.NUMBA_AVAILABLE:
        sys.exit("numba is not installed; nothing to compare")

    rows = kernel_rows(args.size, args.loop_size, args.repeat, args.seed)
    if args.sweep != "none":
        rows.append(sweep_row(args.sweep))
    print(f"{'kernel':<26}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for name, t_fast, t_slow in rows:
        print(f"{name:<26}{t_fast:>12.5f}{t_slow:>12.5f}{t_slow / t_fast:>9.1f}x")


if __name__ == "__main__":
    main()
