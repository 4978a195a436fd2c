"""Compare the compiled kernels with the numpy fallback.

Run from the repository root after building the extension:

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from symsector import _pykernels
from symsector.generators import random_symplectic
from symsector.sequences import Example69Spec

try:
    from symsector import _ckernels
except ImportError:
    _ckernels = None


def workloads():
    rng = np.random.default_rng(0)
    L = np.ascontiguousarray(random_symplectic(rng, 3, "strict").full)
    batch = rng.standard_normal((100_000, 6))
    w0 = np.abs(rng.standard_normal(6)) + 0.1
    n = np.arange(1, 10_001)
    maps = Example69Spec.build(a=np.eye(2), p=np.zeros((2, 2)), tau=1.0 / n).maps_array()
    probe = np.array([1.0, 0.0, 1.0, 0.0])
    return {
        "beta_sq_batch 1e5 x d=3": lambda k: k.beta_sq_batch(L, batch),
        "refine 100 sweeps d=3": lambda k: k.refine(L, w0, 100, 0.05),
        "propagate 1e4 steps d=2": lambda k: k.propagate(maps, probe),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = {"numpy": _pykernels}
    if _ckernels is not None:
        backends["cython"] = _ckernels
    else:
        print("compiled extension not built; timing the numpy kernels only")
    print(f"{'kernel':<28}" + "".join(f"{name:>12}" for name in backends) + f"{'speedup':>10}")
    for label, job in workloads().items():
        best = {}
        for name, mod in backends.items():
            best[name] = min(timeit.repeat(lambda: job(mod), number=1, repeat=args.repeat))
        row = f"{label:<28}" + "".join(f"{best[n] * 1e3:>10.2f}ms" for n in backends)
        if "cython" in best:
            row += f"{best['numpy'] / best['cython']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
