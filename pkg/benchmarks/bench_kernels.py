"""Compare the numba and numpy counting kernels, and the full sweep under each.

    python benchmarks/bench_kernels.py [--repeat 5] [--sweep]

The sweep numbers come from fresh subprocesses, since the backend is fixed
at import time by DLREDUCE_NO_NUMBA.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from dlreduce import kernels


def best_of(fn, repeat):
    fn()  # warm up (and compile)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_table(repeat):
    rng = np.random.default_rng(0)
    rows = []
    for B, m in ((4096, 3), (65536, 3), (4096, 8)):
        rel = rng.random((B, m, m)) < 0.5
        target = rng.random((B, m)) < 0.5
        body = rng.random((B, m, m)) < 0.5
        codes = rng.integers(0, 1 << 12, size=B)
        cases = {
            "count_at_least": lambda impl: impl.count_at_least(rel, target, 2),
            "quantify": lambda impl: impl.quantify(body, 2, 1, True),
            "decode_bits": lambda impl: impl.decode_bits(codes, 12),
        }
        for name, call in cases.items():
            a = call(kernels.numpy_impl)
            b = call(kernels.numba_impl)
            assert np.array_equal(a, b), name
            t_np = best_of(lambda: call(kernels.numpy_impl), repeat)
            t_nb = best_of(lambda: call(kernels.numba_impl), repeat)
            rows.append((name, B, m, t_np, t_nb))
    print(f"{'kernel':<16}{'B':>7}{'m':>3}{'numpy ms':>11}{'numba ms':>11}{'speedup':>9}")
    for name, B, m, t_np, t_nb in rows:
        print(f"{name:<16}{B:>7}{m:>3}{t_np * 1e3:>11.3f}{t_nb * 1e3:>11.3f}{t_np / t_nb:>9.2f}")


SWEEP = "from dlreduce import checks; r = checks.c2_correspondence(spot_checks=0); print(r.seconds, r.passed)"


def sweep():
    for label, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, DLREDUCE_NO_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", SWEEP], env=env, capture_output=True, text=True, check=True)
        seconds, ok = out.stdout.split()
        print(f"exhaustive C2 sweep with {label}: {float(seconds):.1f}s (passed={ok})")


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--sweep", action="store_true", help="also time the exhaustive sweep per backend")
    a = p.parse_args()
    if kernels.numba_impl is None:
        sys.exit("numba is not importable; nothing to compare")
    kernel_table(a.repeat)
    if a.sweep:
        sweep()
