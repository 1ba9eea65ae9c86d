"""Compare the compiled and pure-Python propagation kernels.

Runs unit propagation on reified random formulas, the hot loop of the
differential checker, and reports the time per propagation for each kernel.

    python3 benchmarks/bench_propagate.py --formulas 200 --repeat 5
"""

import argparse
import time

from cnfreify import reify
from cnfreify import _upkernel_py
from cnfreify.testgen import GenConfig, SplitMix64, random_partial_assignment, \
    gen_random_cnf

try:
    from cnfreify import _upkernel
except ImportError:
    _upkernel = None


def workload(count, n, m, k, seed):
    rng = SplitMix64(seed)
    cases = []
    for _ in range(count):
        f = gen_random_cnf(GenConfig(rng.next(), n, m, k, True))
        psi, _ = reify(f)
        alphas = [()] + [random_partial_assignment(rng, n) for _ in range(5)]
        cases.append((psi, alphas))
    return cases


def time_kernel(cls, cases, repeat):
    best = float("inf")
    calls = 0
    for _ in range(repeat):
        calls = 0
        start = time.perf_counter()
        for psi, alphas in cases:
            prop = cls(psi.num_vars, psi.int_clauses)
            for alpha in alphas:
                prop.propagate(alpha)
                calls += 1
        best = min(best, time.perf_counter() - start)
    return best, calls


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--formulas", type=int, default=200)
    p.add_argument("--vars", type=int, default=10)
    p.add_argument("--clauses", type=int, default=30)
    p.add_argument("--width", type=int, default=4)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=1)
    args = p.parse_args()

    cases = workload(args.formulas, args.vars, args.clauses, args.width,
                     args.seed)
    size = sum(psi.num_clauses for psi, _ in cases) / len(cases)
    print(f"{len(cases)} reified formulas, mean {size:.0f} clauses")
    kernels = [("python", _upkernel_py.Propagator)]
    if _upkernel is not None:
        kernels.append(("cython", _upkernel.Propagator))
    else:
        print("compiled kernel not built; timing the fallback only")
    results = {}
    for name, cls in kernels:
        t, calls = time_kernel(cls, cases, args.repeat)
        results[name] = t
        print(f"{name:>7}: {t:.3f} s  ({1e6 * t / calls:.1f} us/propagation)")
    if len(results) == 2:
        print(f"speedup: {results['python'] / results['cython']:.1f}x")

    # both kernels must agree on every case
    if len(kernels) == 2:
        for psi, alphas in cases:
            a = kernels[0][1](psi.num_vars, psi.int_clauses)
            b = kernels[1][1](psi.num_vars, psi.int_clauses)
            for alpha in alphas:
                assert a.propagate(alpha) == b.propagate(alpha)


if __name__ == "__main__":
    main()
