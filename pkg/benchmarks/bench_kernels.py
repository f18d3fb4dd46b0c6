"""Compare the compiled and pure-Python generation kernels.

Usage: python benchmarks/bench_kernels.py [--dims 8 16 32 64] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from cspair import _kernels_py

try:
    from cspair import _kernels
except ImportError:
    _kernels = None


def case(d, seed=0):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((d, d))
    diag = np.exp(rng.uniform(-2, 2, d))
    outer = [rng.uniform(-1, 1, d) for _ in range(4)]
    inner = [rng.uniform(-1, 1, d) for _ in range(4)]
    return m, diag, outer, inner


def _values(out):
    # splitmix64_doubles returns (state, values)
    return np.asarray(out[1] if isinstance(out, tuple) else out)


def best_time(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dims", type=int, nargs="+", default=[8, 16, 32, 64])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _kernels is None:
        print("compiled kernels not built; only the python backend is timed")
    backends = [("python", _kernels_py)] + ([("compiled", _kernels)] if _kernels else [])
    print(f"{'kernel':<20}{'dim':>5}" + "".join(f"{name:>14}" for name, _ in backends) + f"{'speedup':>10}")
    for d in args.dims:
        m, diag, outer, inner = case(d)
        calls = {
            "splitmix64_doubles": lambda k: k.splitmix64_doubles(12345, 9 * d),
            "form_transform": lambda k: k.form_transform(diag, outer, inner),
            "conjugate": lambda k: k.conjugate(m, diag, outer, inner),
        }
        for name, call in calls.items():
            times = [best_time(lambda k=k: call(k), args.repeat) for _, k in backends]
            if len(times) == 2:
                assert np.array_equal(_values(call(_kernels_py)), _values(call(_kernels))), name
            speed = f"{times[0] / times[1]:>9.1f}x" if len(times) == 2 else ""
            print(f"{name:<20}{d:>5}" + "".join(f"{t * 1e6:>12.1f}us" for t in times) + speed)


if __name__ == "__main__":
    main()
