"""Compiled kernels versus the numpy fallback on the training workload.

Times one parameter-shift Jacobian batch (2P+1 parameter rows x B samples)
for a few circuit sizes and checks that both backends agree.

    python benchmarks/bench_kernels.py [--repeat 5] [--threads 1]
"""
import argparse
import time

import numpy as np

from qinfoplane.qsim import backend

CASES = [
    # (qubits, reupload layers, variational layers, features, batch)
    (4, 3, 2, 3, 32),
    (4, 3, 2, 3, 640),
    (8, 2, 1, 8, 64),
    (12, 2, 1, 12, 16),
]


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args(argv)

    if not backend.compiled_available():
        print("compiled kernels are not built; only the fallback can be timed")
    backend.set_num_threads(args.threads)
    rng = np.random.default_rng(0)
    print(f"{'circuit':>16} {'rows':>6} {'batch':>6} {'python ms':>10} {'compiled ms':>12} "
          f"{'speedup':>8} {'max diff':>9}")
    for n, r, v, f, b in CASES:
        p = n * (r + v)
        layout = (n, r, v, list(range(f)))
        th = rng.uniform(0, 2 * np.pi, (2 * p + 1, p))
        x = rng.uniform(0, np.pi, (b, f))
        t_py, ref = _time(lambda: backend.expect_z(th, x, layout, 0, "python"), args.repeat)
        if backend.compiled_available():
            t_c, out = _time(lambda: backend.expect_z(th, x, layout, 0, "compiled"), args.repeat)
            diff = float(np.max(np.abs(out - ref)))
            print(f"{f'{n}q {r}+{v}L':>16} {2 * p + 1:6d} {b:6d} {1e3 * t_py:10.1f} "
                  f"{1e3 * t_c:12.1f} {t_py / t_c:8.2f} {diff:9.1e}")
        else:
            print(f"{f'{n}q {r}+{v}L':>16} {2 * p + 1:6d} {b:6d} {1e3 * t_py:10.1f} "
                  f"{'-':>12} {'-':>8} {'-':>9}")


if __name__ == "__main__":
    main()
