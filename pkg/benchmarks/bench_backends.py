"""Benchmark the compiled kernels against the pure-Python fallback.

Both backend modules are imported directly, so the comparison ignores the
ALPHANORM_BACKEND selection and always times whichever of the two are
importable. Run with `python benchmarks/bench_backends.py`.
"""

import argparse
import time

import numpy as np

import alphanorm._kernels_py as kernels_py

try:
    import alphanorm._kernels as kernels_c
except ImportError:
    kernels_c = None


def best_of(repeat, fn, *args):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def scalar_loop(fn, xs):
    def run():
        for x in xs:
            fn(x)
    return run


def build_cases(n):
    xs = np.linspace(-6.0, 6.0, n)
    us = np.linspace(1e-6, 1.0 - 1e-6, n)
    xs_list = [float(x) for x in np.linspace(-6.0, 6.0, 2000)]
    us_list = [float(u) for u in np.linspace(1e-6, 1.0 - 1e-6, 2000)]
    chol = np.linalg.cholesky(
        np.array([[1.0, 0.5, 0.2], [0.5, 1.0, 0.5], [0.2, 0.5, 1.0]])
    )
    upper = np.array([0.3, -0.1, 1.2])

    def cases_for(k):
        return [
            (f"uniforms[{n}]", lambda: k.uniforms(42, 1, 0, n)),
            (f"std_normals[{n}]", lambda: k.std_normals(42, 1, 0, n)),
            (f"erfc_vec[{n}]", lambda: k.erfc_vec(xs)),
            (f"std_normal_cdf_vec[{n}]", lambda: k.std_normal_cdf_vec(xs)),
            (f"std_normal_quantile_vec[{n}]", lambda: k.std_normal_quantile_vec(us)),
            ("std_normal_cdf x2000", scalar_loop(k.std_normal_cdf, xs_list)),
            ("std_normal_quantile x2000", scalar_loop(k.std_normal_quantile, us_list)),
            ("bvn_cdf x2000", scalar_loop(lambda x: k.bvn_cdf(x, 0.3, 0.6), xs_list)),
            (
                "mvn_cdf_sov d=3 n=20000",
                lambda: k.mvn_cdf_sov(upper, chol.copy(), 11, 4, 0, 20_000),
            ),
        ]

    return cases_for


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=200_000,
                        help="batch size for vector kernels")
    parser.add_argument("--repeat", type=int, default=5,
                        help="take the best of this many timings")
    args = parser.parse_args()

    cases_for = build_cases(args.n)
    py_cases = cases_for(kernels_py)
    c_cases = cases_for(kernels_c) if kernels_c is not None else None

    if kernels_c is None:
        print("compiled backend not built; timing the python backend only")
    header = f"{'kernel':<28} {'python':>12} {'compiled':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for i, (label, py_fn) in enumerate(py_cases):
        t_py = best_of(args.repeat, py_fn)
        if c_cases is None:
            print(f"{label:<28} {t_py * 1e3:>10.3f}ms {'-':>12} {'-':>9}")
            continue
        t_c = best_of(args.repeat, c_cases[i][1])
        print(
            f"{label:<28} {t_py * 1e3:>10.3f}ms {t_c * 1e3:>10.3f}ms "
            f"{t_py / t_c:>8.1f}x"
        )


if __name__ == "__main__":
    main()
