"""Compare the numba and numpy implementations of the hot kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints one line per kernel and problem size with the best wall time of each
backend and the speedup. The numba timings exclude compilation.
"""
import argparse
import timeit

import numpy as np

from mcreduce import _kernels as K
from mcreduce.aggregation import aggregate
from mcreduce.core import MarkovChain
from mcreduce.partitions import canonicalize
from mcreduce.synthetic import random_regular_chain


def best_of(fn, repeat):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=number)) / number


def finite_n_cases(rng):
    for n_states, m, n in [(6, 2, 12), (8, 3, 9), (12, 4, 8), (20, 5, 7)]:
        X = random_regular_chain(n_states, rng)
        g = canonicalize([i % m for i in range(n_states)])
        Y = aggregate(X, g)
        args = (X.P, g.array, X.mu, Y.nu, Y.Q, m, n)
        yield f"finite_n_kld states={n_states} m={m} n={n}", args


def pair_cost_cases(rng):
    for k, n_states in [(20, 20), (100, 100), (200, 400)]:
        raw = 1.0 - rng.random((n_states, n_states))
        X = MarkovChain.from_matrix(raw, renormalize=True)
        labels = np.arange(n_states) % k
        C = np.zeros((k, n_states))
        np.add.at(C, labels, X.joint())
        h = K.row_entropy_terms_numpy(C)
        yield f"pair_costs classes={k} states={n_states}", (C, h)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if not K.HAVE_NUMBA:
        raise SystemExit("numba is unavailable or disabled; nothing to compare")

    rng = np.random.default_rng(0)
    rows = []
    for name, case in finite_n_cases(rng):
        a, _ = K.finite_n_kld_numpy(*case)
        b, _ = K.finite_n_kld_numba(*case)
        assert abs(a - b) <= 1e-12, (name, a, b)
        rows.append((name, best_of(lambda: K.finite_n_kld_numpy(*case), args.repeat),
                     best_of(lambda: K.finite_n_kld_numba(*case), args.repeat)))
    for name, case in pair_cost_cases(rng):
        K.pair_costs_numba(*case)
        rows.append((name, best_of(lambda: K.pair_costs_numpy(*case), args.repeat),
                     best_of(lambda: K.pair_costs_numba(*case), args.repeat)))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'numpy':>10}  {'numba':>10}  speedup")
    for name, t_np, t_nb in rows:
        print(f"{name:<{width}}  {t_np * 1e3:>8.3f}ms  {t_nb * 1e3:>8.3f}ms  {t_np / t_nb:6.1f}x")


if __name__ == "__main__":
    main()
