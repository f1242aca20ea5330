import os
import subprocess
import sys

import numpy as np
import pytest

from conftest import corpus
from mcreduce import _kernels as K
from mcreduce.aggregation import aggregate
from mcreduce.partitions import enumerate_partitions

needs_numba = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba backend disabled")


def _joint_rows(X, rng, k):
    J = X.joint()
    labels = rng.integers(0, k, X.n)
    C = np.zeros((k, X.n))
    np.add.at(C, labels, J)
    return C


@needs_numba
def test_entropy_and_merge_costs_agree():
    rng = np.random.default_rng(0)
    for X in corpus(20, 8, seed=30, n_min=3):
        C = _joint_rows(X, rng, 3)
        h_np = K.row_entropy_terms_numpy(C)
        h_nb = K.row_entropy_terms_numba(C)
        np.testing.assert_allclose(h_nb, h_np, rtol=0, atol=1e-14)
        costs_np = K.pair_costs_numpy(C, h_np)
        costs_nb = K.pair_costs_numba(C, h_np)
        off = ~np.eye(3, dtype=bool)
        np.testing.assert_allclose(costs_nb[off], costs_np[off], rtol=0, atol=1e-14)
        assert np.all(np.isinf(np.diag(costs_nb))) and np.all(np.isinf(np.diag(costs_np)))


@needs_numba
def test_finite_n_agree():
    for X in corpus(12, 6, seed=31, n_min=3):
        for g in list(enumerate_partitions(X.n, 2))[:4] + list(enumerate_partitions(X.n, 3))[:2]:
            Y = aggregate(X, g)
            args = (X.P, g.array, X.mu, Y.nu, Y.Q, g.m)
            for n in (2, 4, 6):
                a, bad_a = K.finite_n_kld_numpy(*args, n)
                b, bad_b = K.finite_n_kld_numba(*args, n)
                assert bad_a == bad_b == -1
                assert a == pytest.approx(b, abs=1e-13)


@needs_numba
def test_finite_n_flags_same_sequence():
    # class sequence (0, 0) has positive probability but Q[0, 0] = 0
    P = np.array([[0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.5, 0.5, 0.0]])
    labels = np.array([0, 0, 1])
    mu = np.full(3, 1 / 3)
    nu = np.array([2 / 3, 1 / 3])
    Q = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert K.finite_n_kld_numpy(P, labels, mu, nu, Q, 2, 3)[1] == K.finite_n_kld_numba(P, labels, mu, nu, Q, 2, 3)[1] >= 0


def test_env_flag_selects_numpy():
    env = dict(os.environ, MCREDUCE_DISABLE_NUMBA="1")
    code = "import mcreduce._kernels as K; print(K.BACKEND, K.finite_n_kld is K.finite_n_kld_numpy)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "True"]


def test_selected_backend_is_bound():
    expected = "numba" if K.HAVE_NUMBA else "numpy"
    assert K.BACKEND == expected
    assert K.pair_costs is getattr(K, f"pair_costs_{expected}")
