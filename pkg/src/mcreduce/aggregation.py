"""Optimal Markov aggregation of a partitioned chain and its liftings."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import MarkovChain, is_regular
from .errors import AggregationMismatch, ValidationError
from .partitions import Partition, build_U, build_V

LUMP_TOL = 1e-10
ZERO_MASS = 1e-300
AGGREGATE_MATCH = 1e-12


@dataclass(frozen=True, eq=False)
class AggregatedChain:
    """Best Markov model of the projected process on the class alphabet."""

    Q: np.ndarray
    nu: np.ndarray
    partition: Partition

    @property
    def m(self):
        return self.partition.m

    def is_regular(self):
        return is_regular(self.Q)


@dataclass(frozen=True, eq=False)
class LiftedChain:
    """A chain on the original alphabet that is lumpable to ``Q``."""

    P: np.ndarray
    method: str  # "pi_lift" or "p_lift"
    partition: Partition
    pi_used: np.ndarray | None = None


@dataclass(frozen=True)
class LumpabilityResult:
    lumpable: bool
    max_violation: float

    def __str__(self):
        return f"lumpable={'true' if self.lumpable else 'false'} max_violation={self.max_violation:.12g}"

    def __bool__(self):
        return self.lumpable


def _check_partition(n, g):
    if g.n != n:
        raise ValidationError(f"partition covers {g.n} states, chain has {n}")


def aggregate(X: MarkovChain, g: Partition) -> AggregatedChain:
    """Aggregate ``X`` through ``g``.

    ``Q[k, l]`` is the stationary probability of a transition from class k
    into class l divided by the stationary mass of class k, i.e.
    ``Q = U(mu) P V`` and ``nu = V^T mu``.
    """
    _check_partition(X.n, g)
    V = build_V(g)
    class_joint = V.T @ X.joint() @ V
    nu = V.T @ X.mu
    Q = class_joint / nu[:, None]
    # class_joint rows sum to nu up to rounding; restore exact stochasticity
    Q /= Q.sum(axis=1, keepdims=True)
    Q.setflags(write=False)
    nu.setflags(write=False)
    return AggregatedChain(Q, nu, g)


def lumpability_check(P, g: Partition, tol=LUMP_TOL) -> LumpabilityResult:
    """Strong lumpability test on ``R = P V``.

    For every class h and target class l the spread
    ``max R[i, l] - min R[i, l]`` over members i of h is measured; the chain
    is lumpable when the largest spread is at most ``tol``.
    """
    P = np.asarray(P)
    _check_partition(P.shape[0], g)
    R = P @ build_V(g)
    worst = 0.0
    for members in g.classes():
        block = R[members]
        worst = max(worst, float(np.max(block.max(axis=0) - block.min(axis=0))))
    return LumpabilityResult(worst <= tol, worst)


def pi_lift(Y: AggregatedChain, pi) -> LiftedChain:
    """Lift ``Y`` by splitting each class according to a positive ``pi``.

    ``P'[i, j] = pi[j] / sum(pi[class of j]) * Q[g(i), g(j)]``.
    """
    g = Y.partition
    U = build_U(g, pi)
    Pp = build_V(g) @ Y.Q @ U
    Pp /= Pp.sum(axis=1, keepdims=True)
    Pp.setflags(write=False)
    pi = np.array(pi, dtype=np.float64)
    pi.setflags(write=False)
    return LiftedChain(Pp, "pi_lift", g, pi)


def p_lift(X: MarkovChain, Y: AggregatedChain | None = None, g: Partition | None = None) -> LiftedChain:
    """Lift the aggregation of ``X`` using the within-class profile of ``P``.

    ``Phat[i, j] = P[i, j] / R[i, g(j)] * Q[g(i), g(j)]`` where
    ``R[i, l]`` is the mass row i sends into class l. If that mass is zero
    the block ``Q[g(i), g(j)]`` is spread uniformly over the target class.

    Either ``Y`` or ``g`` must be given. A supplied ``Y`` has to agree with
    :func:`aggregate` to within 1e-12, otherwise
    :class:`~mcreduce.errors.AggregationMismatch` is raised.
    """
    if Y is None and g is None:
        raise ValidationError("p_lift needs an aggregated chain or a partition")
    g = Y.partition if Y is not None else g
    expected = aggregate(X, g)
    if Y is not None and (
        Y.Q.shape != expected.Q.shape or np.max(np.abs(Y.Q - expected.Q)) > AGGREGATE_MATCH
    ):
        raise AggregationMismatch("supplied aggregation is not the optimal aggregation of X under g")
    Q = expected.Q

    P = X.P
    lab = g.array
    R = P @ build_V(g)
    Rj = R[:, lab]                      # R[i, g(j)]
    Qij = Q[lab][:, lab]                # Q[g(i), g(j)]
    structural = Rj <= ZERO_MASS
    with np.errstate(divide="ignore", invalid="ignore"):
        Phat = np.where(structural, Qij / g.sizes[lab][None, :], P / Rj * Qij)
    Phat /= Phat.sum(axis=1, keepdims=True)
    Phat.setflags(write=False)
    return LiftedChain(Phat, "p_lift", g)
