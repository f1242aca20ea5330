"""Information-theoretic functionals of chains and their partitions (bits)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .aggregation import LUMP_TOL, aggregate, lumpability_check, p_lift, pi_lift
from .core import MarkovChain
from .errors import AbsoluteContinuityViolation, TooManySequences, ValidationError
from .partitions import Partition, build_V

MAX_SEQUENCES = 10**6


def _neg_plogp(p):
    p = np.asarray(p, dtype=np.float64).ravel()
    nz = p[p > 0]
    return float(-np.sum(nz * np.log2(nz)))


def _gap(a, b):
    """``a - b`` for quantities known to satisfy ``a >= b``.

    Differences within a few ulps of the operands are cancellation noise
    and are reported as exactly zero.
    """
    d = a - b
    if d <= 16 * np.finfo(float).eps * max(abs(a), abs(b), 1.0):
        return 0.0
    return d


def entropy(p):
    """Shannon entropy in bits, with ``0 log 0 = 0``."""
    return max(_neg_plogp(p), 0.0)


def entropy_rate(X: MarkovChain):
    """``-sum mu_i P_ij log2 P_ij``, the conditional entropy of one step."""
    J = X.joint()
    mask = J > 0
    return max(float(-np.sum(J[mask] * np.log2(X.P[mask]))), 0.0)


def redundancy_rate(X: MarkovChain):
    """Entropy of the marginal minus the entropy rate."""
    return _gap(entropy(X.mu), entropy_rate(X))


def kldr_markov(X: MarkovChain, P_ref):
    """Divergence rate between ``X`` and the chain with kernel ``P_ref``.

    Raises :class:`AbsoluteContinuityViolation` if ``P_ref`` has a zero
    where ``X`` has a transition of positive stationary probability.
    """
    P_ref = np.asarray(P_ref, dtype=np.float64)
    if P_ref.shape != X.P.shape:
        raise ValidationError(f"reference kernel has shape {P_ref.shape}, expected {X.P.shape}")
    J = X.joint()
    support = J > 0
    bad = np.argwhere(support & (P_ref <= 0))
    if len(bad):
        raise AbsoluteContinuityViolation(int(bad[0][0]), int(bad[0][1]))
    value = float(np.sum(J[support] * np.log2(X.P[support] / P_ref[support])))
    # the divergence is nonnegative; anything below is rounding
    return max(value, 0.0)


@dataclass(frozen=True)
class RelevantLoss:
    loss: float
    cond_entropy: float


def _class_to_state_joint(X, g):
    """``C[k, j] = P(Y_{n-1} = k, X_n = j)``."""
    return build_V(g).T @ X.joint()


def relevant_loss_X(X: MarkovChain, g: Partition) -> RelevantLoss:
    """Information about ``X_n`` lost by observing ``g(X_{n-1})`` instead of ``X_{n-1}``.

    ``cond_entropy`` is ``H(X_n | Y_{n-1})`` and ``loss`` is that minus the
    entropy rate of ``X``.
    """
    C = _class_to_state_joint(X, g)
    cond = _neg_plogp(C) - entropy(C.sum(axis=1))
    return RelevantLoss(_gap(cond, entropy_rate(X)), cond)


def relevant_loss_Y(X: MarkovChain, g: Partition):
    """``H(Y_n | Y_{n-1}) - H(Y_n | X_{n-1})``.

    Equals the divergence rate between ``X`` and its P-lifting.
    """
    V = build_V(g)
    J = X.joint()
    state_to_class = J @ V
    class_joint = V.T @ state_to_class
    h_yy = _neg_plogp(class_joint) - entropy(class_joint.sum(axis=1))
    h_yx = _neg_plogp(state_to_class) - entropy(X.mu)
    return _gap(h_yy, h_yx)


def mu_lift_bound_identity(X: MarkovChain, g: Partition):
    """Redundancy rate of ``X`` minus that of its aggregation.

    Equals the divergence rate between ``X`` and its pi-lifting with
    ``pi = mu``.
    """
    Y = aggregate(X, g)
    class_joint = Y.nu[:, None] * Y.Q
    red_y = _gap(entropy(Y.nu), _neg_plogp(class_joint) - entropy(Y.nu))
    return _gap(redundancy_rate(X), red_y)


def kldr_p(X: MarkovChain, g: Partition):
    """Bound from the P-lifting, evaluated through :func:`kldr_markov`."""
    return kldr_markov(X, p_lift(X, g=g).P)


def kldr_mu(X: MarkovChain, g: Partition):
    """Bound from the pi-lifting with ``pi = mu``."""
    return kldr_markov(X, pi_lift(aggregate(X, g), X.mu).P)


def finite_n_projection_kld(X: MarkovChain, g: Partition, n: int):
    """Exact ``D(Y_1^n || Y'_1^n)`` between projection and aggregation.

    ``Y`` is the stationary projection of ``X`` through ``g`` and ``Y'`` the
    aggregated Markov chain started in ``nu``. All ``m**n`` class sequences
    are enumerated.
    """
    if n < 2:
        raise ValidationError("sequence length must be at least 2")
    m = g.m
    if m**n > MAX_SEQUENCES:
        raise TooManySequences(f"{m}**{n} sequences exceed the cap of {MAX_SEQUENCES}")
    Y = aggregate(X, g)
    value, bad = _kernels.finite_n_kld(
        np.ascontiguousarray(X.P), np.ascontiguousarray(g.array), np.ascontiguousarray(X.mu),
        np.ascontiguousarray(Y.nu), np.ascontiguousarray(Y.Q), m, n,
    )
    if bad >= 0:
        raise AbsoluteContinuityViolation(
            message=f"class sequence #{bad} has positive probability but zero model probability")
    return max(float(value), 0.0)


@dataclass(frozen=True)
class MetricReport:
    kldr_p: float
    kldr_mu: float
    loss_x: float
    loss_y: float
    h_rate: float
    lumpable: bool
    max_violation: float

    def lines(self):
        fmt = "{:.12g}".format
        return [
            f"kldr_p={fmt(self.kldr_p)}",
            f"kldr_mu={fmt(self.kldr_mu)}",
            f"loss_x={fmt(self.loss_x)}",
            f"loss_y={fmt(self.loss_y)}",
            f"h_rate={fmt(self.h_rate)}",
            f"lumpable={'true' if self.lumpable else 'false'}",
        ]


def evaluate(X: MarkovChain, g: Partition, tol=None) -> MetricReport:
    lump = lumpability_check(X.P, g, LUMP_TOL if tol is None else tol)
    return MetricReport(
        kldr_p=kldr_p(X, g),
        kldr_mu=kldr_mu(X, g),
        loss_x=relevant_loss_X(X, g).loss,
        loss_y=relevant_loss_Y(X, g),
        h_rate=entropy_rate(X),
        lumpable=lump.lumpable,
        max_violation=lump.max_violation,
    )
