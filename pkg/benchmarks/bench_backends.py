"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_backends.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from chernricci.catalog import instantiate
from chernricci.kernels import numba_kernels, numpy_kernels


def cases():
    h = instantiate("d_4,1").structure
    c, J, g = np.array(h.bracket.c), np.array(h.J.J), np.array(h.g)
    rng = np.random.default_rng(0)
    m = rng.normal(size=(4, 4)) + 4 * np.eye(4)
    S = rng.normal(size=(8, 8))
    return {
        "jacobi_residual": (c,),
        "chern_form": (c, J),
        "act_gl": (c, m, np.linalg.inv(m)),
        "integrability_residual": (c, J),
        "delta": (c, m),
        "rk4_crf (1e3 steps)": (g, c, J, 1.0, 1000),
        "rk4_bracket_flow (1e3 steps)": (c, J, g, 1.0, 1000),
        "jacobi_eigh (8x8)": (S + S.T,),
    }


def bench(mod, name, args, repeat):
    fn = getattr(mod, name.split()[0])
    fn(*args)  # warm up, triggers compilation
    number = 20 if name.startswith("rk4") else 2000
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if numba_kernels is None:
        print("numba is not importable; only the numpy kernels can be timed")
    print(f"{'kernel':32s}{'numpy [us]':>14s}{'numba [us]':>14s}{'speedup':>10s}")
    for name, a in cases().items():
        t_np = bench(numpy_kernels, name, a, args.repeat) * 1e6
        if numba_kernels is None:
            print(f"{name:32s}{t_np:14.1f}{'-':>14s}{'-':>10s}")
            continue
        t_nb = bench(numba_kernels, name, a, args.repeat) * 1e6
        print(f"{name:32s}{t_np:14.1f}{t_nb:14.1f}{t_np / t_nb:10.1f}")


if __name__ == "__main__":
    main()
