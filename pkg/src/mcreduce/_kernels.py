"""Hot numeric loops, compiled with numba when available.

Set ``MCREDUCE_DISABLE_NUMBA=1`` to force the pure-numpy implementations.
Both variants are always importable as ``*_numpy`` / ``*_numba`` so tests
and benchmarks can compare them; the unsuffixed names are the selected
backend.
"""
import math
import os

import numpy as np

_DISABLED = os.environ.get("MCREDUCE_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    if _DISABLED:
        raise ImportError
    from numba import config, njit, prange
    # probing an outdated TBB only produces a warning; prefer the others
    config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False
    prange = range

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f

BACKEND = "numba" if HAVE_NUMBA else "numpy"

_LOG2E = 1.0 / math.log(2.0)


# ---------------------------------------------------------------------------
# conditional-entropy terms for agglomerative merging
# ---------------------------------------------------------------------------
#
# A class is represented by its row of the class-to-state joint
# C[a, j] = sum_{i in a} mu_i P_ij. Its contribution to H(X_n | Y_{n-1}) is
#   h(C_a) = -sum_j C_aj log2(C_aj / w_a),   w_a = sum_j C_aj,
# and merging a with b costs h(C_a + C_b) - h(C_a) - h(C_b) >= 0.

def row_entropy_terms_numpy(C):
    w = C.sum(axis=1)
    out = np.zeros(C.shape[0])
    for a in range(C.shape[0]):
        row = C[a]
        nz = row > 0
        if w[a] > 0:
            out[a] = -np.sum(row[nz] * np.log2(row[nz] / w[a]))
    return out


def merge_costs_numpy(C, h, a):
    """Cost of merging row ``a`` with every row of ``C`` (``inf`` at ``a``)."""
    merged = C + C[a][None, :]
    w = merged.sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(merged > 0, merged * np.log2(merged / w[:, None]), 0.0)
    hm = -terms.sum(axis=1)
    cost = hm - h - h[a]
    cost[a] = np.inf
    return cost


def pair_costs_numpy(C, h):
    k = C.shape[0]
    out = np.full((k, k), np.inf)
    for a in range(k):
        out[a] = merge_costs_numpy(C, h, a)
    return out


@njit(cache=True)
def row_entropy_terms_numba(C):
    k, N = C.shape
    out = np.zeros(k)
    for a in range(k):
        w = 0.0
        for j in range(N):
            w += C[a, j]
        s = 0.0
        if w > 0:
            for j in range(N):
                c = C[a, j]
                if c > 0:
                    s -= c * math.log(c / w)
        out[a] = s * _LOG2E
    return out


@njit(cache=True)
def _pair_cost_numba(C, h, a, b):
    N = C.shape[1]
    w = 0.0
    for j in range(N):
        w += C[a, j] + C[b, j]
    s = 0.0
    if w > 0:
        for j in range(N):
            c = C[a, j] + C[b, j]
            if c > 0:
                s -= c * math.log(c / w)
    return s * _LOG2E - h[a] - h[b]


@njit(cache=True)
def merge_costs_numba(C, h, a):
    k = C.shape[0]
    out = np.empty(k)
    for b in range(k):
        out[b] = np.inf if b == a else _pair_cost_numba(C, h, a, b)
    return out


@njit(cache=True, parallel=True)
def pair_costs_numba(C, h):
    # each unordered pair once; entries are independent, so the result does
    # not depend on the thread schedule
    k = C.shape[0]
    out = np.empty((k, k))
    for a in prange(k):
        out[a, a] = np.inf
        for b in range(a + 1, k):
            c = _pair_cost_numba(C, h, a, b)
            out[a, b] = c
            out[b, a] = c
    return out


# ---------------------------------------------------------------------------
# exact divergence between a projected chain and its Markov aggregation over
# all length-n class sequences
# ---------------------------------------------------------------------------
#
# p(y_1..y_n) via forward recursion on the source chain restricted to the
# classes, q(y_1..y_n) = nu[y_1] prod Q[y_t, y_t+1]. Returns
# (sum p log2(p / q), bad) where bad >= 0 flags a sequence with p > 0 = q.

def finite_n_kld_numpy(P, labels, mu, nu, Q, m, n):
    N = P.shape[0]
    masks = np.zeros((m, N))
    masks[labels, np.arange(N)] = 1.0
    alpha = masks * mu[None, :]          # (m, N): one row per prefix
    q = nu.copy()
    last = np.arange(m)
    for _ in range(1, n):
        step = alpha @ P                 # (prefixes, N)
        alpha = (step[:, None, :] * masks[None, :, :]).reshape(-1, N)
        q = (q[:, None] * Q[last]).reshape(-1)
        last = np.tile(np.arange(m), len(last))
    p = alpha.sum(axis=1)
    pos = p > 0
    if np.any(pos & (q <= 0)):
        return 0.0, int(np.flatnonzero(pos & (q <= 0))[0])
    return float(np.sum(p[pos] * np.log2(p[pos] / q[pos]))), -1


@njit(cache=True)
def finite_n_kld_numba(P, labels, mu, nu, Q, m, n):
    N = P.shape[0]
    alpha = np.zeros((n, N))
    q = np.zeros(n)
    seq = np.zeros(n, dtype=np.int64)
    total = 0.0
    index = 0
    start = 0
    while True:
        for t in range(start, n):
            y = seq[t]
            if t == 0:
                for x in range(N):
                    alpha[0, x] = mu[x] if labels[x] == y else 0.0
                q[0] = nu[y]
            else:
                for x2 in range(N):
                    if labels[x2] == y:
                        s = 0.0
                        for x in range(N):
                            s += alpha[t - 1, x] * P[x, x2]
                        alpha[t, x2] = s
                    else:
                        alpha[t, x2] = 0.0
                q[t] = q[t - 1] * Q[seq[t - 1], y]
        p = 0.0
        for x in range(N):
            p += alpha[n - 1, x]
        if p > 0:
            if q[n - 1] <= 0:
                return 0.0, index
            total += p * math.log(p / q[n - 1])
        # advance the odometer; the leftmost changed digit restarts the recursion
        t = n - 1
        while t >= 0 and seq[t] == m - 1:
            seq[t] = 0
            t -= 1
        if t < 0:
            break
        seq[t] += 1
        start = t
        index += 1
    return total * _LOG2E, -1


if HAVE_NUMBA:
    row_entropy_terms = row_entropy_terms_numba
    merge_costs = merge_costs_numba
    pair_costs = pair_costs_numba
    finite_n_kld = finite_n_kld_numba
else:
    row_entropy_terms = row_entropy_terms_numpy
    merge_costs = merge_costs_numpy
    pair_costs = pair_costs_numpy
    finite_n_kld = finite_n_kld_numpy
