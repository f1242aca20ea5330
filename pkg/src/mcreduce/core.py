"""Finite discrete-time Markov chains: validation, stationarity, regularity.

Matrices and distributions are plain ``float64`` numpy arrays marked
read-only once validated. Information quantities elsewhere in the package
are measured in bits.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    NegativeEntry,
    NotConverged,
    NotRegular,
    RowSumViolation,
    ValidationError,
    ZeroRow,
)

ROW_SUM_ACCEPT = 1e-6
ROW_SUM_INVARIANT = 1e-9
STATIONARY_TOL = 1e-12
STATIONARY_MAX_ITER = 100_000
STATIONARY_RESIDUAL = 1e-10

# Plain power iterations before switching to repeated squaring.
_SQUARE_AFTER = 64


def _frozen(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


def validate_stochastic(raw, renormalize=False):
    """Check that ``raw`` is a row-stochastic matrix and return a frozen copy.

    Parameters
    ----------
    raw : array_like, shape (n, n)
        Candidate transition matrix. All entries must be finite.
    renormalize : bool
        Divide each row by its sum instead of rejecting rows whose sum
        deviates from one by more than ``1e-6``.

    Returns
    -------
    ndarray
        Read-only copy whose rows sum to one.

    Raises
    ------
    NegativeEntry, RowSumViolation, ZeroRow, ValidationError
    """
    P = np.array(raw, dtype=np.float64)
    if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] < 1:
        raise ValidationError(f"expected a non-empty square matrix, got shape {P.shape}")
    if not np.all(np.isfinite(P)):
        raise ValidationError("matrix contains non-finite entries")
    neg = np.argwhere(P < 0)
    if len(neg):
        i, j = neg[0]
        raise NegativeEntry(int(i), int(j), float(P[i, j]))

    sums = P.sum(axis=1)
    if renormalize:
        zero = np.flatnonzero(sums == 0)
        if len(zero):
            raise ZeroRow(int(zero[0]))
        P /= sums[:, None]
    else:
        bad = np.flatnonzero(np.abs(sums - 1.0) > ROW_SUM_ACCEPT)
        if len(bad):
            raise RowSumViolation(int(bad[0]), float(sums[bad[0]]))
        # absorb admissible rounding so downstream invariants hold at 1e-9
        P /= sums[:, None]
    P.setflags(write=False)
    return P


def validate_distribution(raw, require_positive=False, name="distribution"):
    p = np.array(raw, dtype=np.float64)
    if p.ndim != 1 or p.size < 1:
        raise ValidationError(f"{name} must be a non-empty vector")
    if not np.all(np.isfinite(p)) or np.any(p < 0):
        raise ValidationError(f"{name} must have finite non-negative entries")
    if abs(p.sum() - 1.0) > ROW_SUM_INVARIANT:
        raise ValidationError(f"{name} sums to {p.sum()!r}, expected 1")
    if require_positive and p.min() <= 0:
        raise ValidationError(f"{name} must be strictly positive")
    p.setflags(write=False)
    return p


def is_strictly_positive(p):
    return bool(np.min(p) > 0)


def is_regular(P):
    """Return True iff ``P`` is primitive (irreducible and aperiodic).

    Works on the zero/nonzero pattern only. A nonnegative matrix is
    primitive iff its power ``(n-1)**2 + 1`` is entrywise positive
    (Wielandt); since positivity persists under further powers of a
    primitive pattern, repeated squaring past that exponent is equivalent.
    """
    B = (np.asarray(P) > 0).astype(np.int64)
    n = B.shape[0]
    k = (n - 1) ** 2 + 1
    power = 1
    while power < k:
        B = (B @ B > 0).astype(np.int64)
        power *= 2
    return bool(B.all())


def _iterate(A, mu, tol, budget):
    """Power iteration ``mu <- mu A``, squaring ``A`` when mixing is slow.

    Returns ``(mu, converged, iterations_used)``.
    """
    used = 0
    since_square = 0
    while used < budget:
        new = mu @ A
        new /= new.sum()
        used += 1
        since_square += 1
        if np.max(np.abs(new - mu)) < tol:
            return new, True, used
        mu = new
        if since_square >= _SQUARE_AFTER:
            A = A @ A
            A /= A.sum(axis=1, keepdims=True)
            since_square = 0
    return mu, False, used


def stationary_distribution(P, check_regular=False, tol=STATIONARY_TOL,
                            max_iter=STATIONARY_MAX_ITER):
    """Stationary distribution of a regular chain by power iteration.

    Slowly mixing chains are handled by squaring the iteration matrix every
    few dozen steps. If the plain iteration does not settle on a fixed point
    of ``P`` (periodic patterns), the lazy kernel ``(I + P) / 2`` is iterated
    instead; it has the same stationary vector and is aperiodic.

    Raises
    ------
    NotRegular
        ``check_regular`` is set and ``P`` is not primitive.
    NotConverged
        No fixed point with residual ``<= 1e-10`` within ``max_iter``.
    """
    P = np.asarray(P, dtype=np.float64)
    if check_regular and not is_regular(P):
        raise NotRegular("transition matrix is not regular (irreducible and aperiodic)")
    n = P.shape[0]
    start = np.full(n, 1.0 / n)

    budget = max_iter
    lazy = 0.5 * (P + np.eye(n))
    for A in (P, lazy):
        mu, converged, used = _iterate(A.copy(), start, tol, budget)
        budget -= used
        if converged and np.max(np.abs(mu @ P - mu)) <= STATIONARY_RESIDUAL:
            return _frozen(mu)
        if budget <= 0:
            break
    raise NotConverged(f"stationary distribution did not converge within {max_iter} iterations")


@dataclass(frozen=True, eq=False)
class MarkovChain:
    """A stationary DTMC: transition matrix, stationary vector, regularity flag."""

    P: np.ndarray
    mu: np.ndarray
    regular: bool

    @property
    def n(self):
        return self.P.shape[0]

    @classmethod
    def from_matrix(cls, raw, renormalize=False, require_regular=True):
        """Validate ``raw``, check regularity and solve for ``mu``."""
        P = validate_stochastic(raw, renormalize=renormalize)
        regular = is_regular(P)
        if require_regular and not regular:
            raise NotRegular("transition matrix is not regular (irreducible and aperiodic)")
        mu = stationary_distribution(P)
        return cls(P, mu, regular)

    def joint(self):
        """Stationary joint of two consecutive samples, ``mu_i P_ij``."""
        return self.mu[:, None] * self.P
