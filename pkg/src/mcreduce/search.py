"""Partition search: greedy agglomerative merging, exhaustive search, M-sweeps."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .aggregation import LUMP_TOL, lumpability_check
from .core import MarkovChain
from .errors import BadTarget, InvalidFixedSet, ValidationError
from .metrics import kldr_mu, kldr_p, relevant_loss_X
from .partitions import Partition, canonicalize, enumerate_partitions

CRITERIA = ("p_lift_kldr", "loss_x")
METHODS = ("aib", "exhaustive")

# Merge costs within this many bits of the minimum count as tied; the
# lexicographically smallest class pair then wins.
TIE_TOL = 1e-13


def _fixed_states(n, fixed):
    if fixed is None:
        return None
    F = sorted(set(int(s) for s in fixed))
    if not F:
        raise InvalidFixedSet("fixed set is empty")
    if F[0] < 0 or F[-1] >= n:
        raise InvalidFixedSet(f"fixed set references states outside 1..{n}")
    return F


def _initial_classes(n, F):
    if F is None:
        return [[i] for i in range(n)], -1
    Fset = set(F)
    classes = [list(F)] + [[i] for i in range(n) if i not in Fset]
    classes.sort(key=lambda c: c[0])
    fixed_index = next(k for k, c in enumerate(classes) if c[0] == F[0])
    return classes, fixed_index


def _to_partition(n, classes):
    labels = [0] * n
    for k, members in enumerate(classes):
        for s in members:
            labels[s] = k
    return Partition(tuple(labels))


def aib_levels(X: MarkovChain, fixed=None, fixed_frozen=True, stop_m=1):
    """Run agglomerative merging and return the partition at every level.

    Starts from singletons (with ``fixed`` pre-merged into one class) and
    repeatedly merges the pair of classes whose union increases
    ``H(X_n | Y_{n-1})`` the least. With ``fixed_frozen`` the fixed class
    never takes part in a merge.

    Returns
    -------
    list of Partition
        One partition per class count, from the starting count down to
        ``stop_m`` or to the smallest reachable count.
    """
    n = X.n
    F = _fixed_states(n, fixed)
    classes, fixed_index = _initial_classes(n, F)
    frozen = fixed_index if (F is not None and fixed_frozen) else -1

    J = X.joint()
    C = np.zeros((len(classes), n))
    for k, members in enumerate(classes):
        C[k] = J[members].sum(axis=0)
    h = _kernels.row_entropy_terms(C)
    costs = _kernels.pair_costs(C, h)
    if frozen >= 0:
        costs[frozen, :] = np.inf
        costs[:, frozen] = np.inf

    levels = [_to_partition(n, classes)]
    while len(classes) > stop_m:
        k = len(classes)
        upper = np.where(np.triu(np.ones((k, k), dtype=bool), 1), costs, np.inf)
        best = upper.min()
        if not np.isfinite(best):
            break
        a, b = np.argwhere(upper <= best + TIE_TOL)[0]

        C[a] += C[b]
        C = np.delete(C, b, axis=0)
        h = np.delete(h, b)
        h[a] = _kernels.row_entropy_terms(C[a:a + 1])[0]
        classes[a] = sorted(classes[a] + classes[b])
        del classes[b]
        costs = np.delete(np.delete(costs, b, axis=0), b, axis=1)
        if frozen > b:
            frozen -= 1
        row = _kernels.merge_costs(C, h, a)
        if frozen >= 0:
            row[frozen] = np.inf
        costs[a, :] = row
        costs[:, a] = row
        levels.append(_to_partition(n, classes))
    return levels


def _level_range(n, F, fixed_frozen):
    start = n if F is None else n - len(F) + 1
    if F is not None and fixed_frozen and len(F) < n:
        lowest = 2
    else:
        lowest = 1
    return start, lowest


def aib_greedy(X: MarkovChain, target_m, fixed=None, fixed_frozen=True) -> Partition:
    """Greedy agglomerative partition of ``X`` into ``target_m`` classes.

    Raises :class:`BadTarget` if ``target_m`` cannot be reached from the
    starting partition.
    """
    F = _fixed_states(X.n, fixed)
    start, lowest = _level_range(X.n, F, fixed_frozen)
    if not lowest <= target_m <= start:
        raise BadTarget(f"target {target_m} classes not reachable; valid range is {lowest}..{start}")
    levels = aib_levels(X, F, fixed_frozen, stop_m=target_m)
    return levels[start - target_m]


@dataclass(frozen=True)
class SearchResult:
    partition: Partition
    value: float


def criterion_value(X: MarkovChain, g: Partition, criterion):
    if criterion == "p_lift_kldr":
        return kldr_p(X, g)
    if criterion == "loss_x":
        return relevant_loss_X(X, g).loss
    raise ValidationError(f"unknown criterion {criterion!r}; expected one of {CRITERIA}")


def exhaustive_search(X: MarkovChain, m, criterion="p_lift_kldr", fixed=None) -> SearchResult:
    """Minimize ``criterion`` over every partition with ``m`` classes.

    Ties (within ``TIE_TOL``) go to the earliest partition in enumeration
    order.
    """
    if criterion not in CRITERIA:
        raise ValidationError(f"unknown criterion {criterion!r}; expected one of {CRITERIA}")
    F = _fixed_states(X.n, fixed)
    best = None
    for g in enumerate_partitions(X.n, m, F):
        value = criterion_value(X, g, criterion)
        if best is None or value < best.value - TIE_TOL:
            best = SearchResult(g, value)
    if best is None:
        raise BadTarget(f"no partition of {X.n} states into {m} classes satisfies the fixed-class constraint")
    return best


@dataclass(frozen=True)
class SweepRecord:
    m: int
    partition: Partition
    kldr_p: float
    kldr_mu: float
    loss_x: float
    lumpable: bool


def make_record(X: MarkovChain, g: Partition, tol=LUMP_TOL) -> SweepRecord:
    return SweepRecord(
        m=g.m,
        partition=g,
        kldr_p=kldr_p(X, g),
        kldr_mu=kldr_mu(X, g),
        loss_x=relevant_loss_X(X, g).loss,
        lumpable=lumpability_check(X.P, g, tol).lumpable,
    )


def sweep(X: MarkovChain, m_from, m_to, method="aib", fixed=None, fixed_frozen=True,
          criterion="p_lift_kldr", tol=LUMP_TOL):
    """Evaluate both lifting bounds for every class count from ``m_from`` down to ``m_to``.

    The aib sweep runs a single agglomeration, so its partitions are
    nested. The exhaustive sweep optimizes ``criterion`` separately for
    each class count (fixed sets are then always a single class).
    """
    if method not in METHODS:
        raise ValidationError(f"unknown method {method!r}; expected one of {METHODS}")
    if not 1 <= m_to <= m_from <= X.n:
        raise BadTarget(f"need 1 <= to <= from <= {X.n}, got from={m_from}, to={m_to}")
    F = _fixed_states(X.n, fixed)
    if method == "aib":
        start, lowest = _level_range(X.n, F, fixed_frozen)
        if m_from > start or m_to < lowest:
            raise BadTarget(f"class counts {m_to}..{m_from} not reachable; valid range is {lowest}..{start}")
        levels = aib_levels(X, F, fixed_frozen, stop_m=m_to)
        chosen = [g for g in levels if m_to <= g.m <= m_from]
    else:
        chosen = [exhaustive_search(X, m, criterion, F).partition for m in range(m_from, m_to - 1, -1)]
    return [make_record(X, g, tol) for g in chosen]


def local_minima(records, margin=1e-12):
    """Class counts whose kldr_p lies more than ``margin`` below both neighbours.

    The margin keeps rounding noise on (near-)lumpable plateaus from being
    reported as minima.
    """
    by_m = {r.m: r.kldr_p for r in records}
    return [m for m in sorted(by_m)
            if m - 1 in by_m and m + 1 in by_m
            and by_m[m] < by_m[m - 1] - margin and by_m[m] < by_m[m + 1] - margin]


SWEEP_HEADER = "m\tkldr_p\tkldr_mu\tloss_x\tlumpable\tpartition"


def format_sweep(records):
    lines = [SWEEP_HEADER]
    for r in records:
        lines.append("\t".join([
            str(r.m),
            f"{r.kldr_p:.12g}",
            f"{r.kldr_mu:.12g}",
            f"{r.loss_x:.12g}",
            "true" if r.lumpable else "false",
            ",".join(str(x) for x in r.partition.one_based()),
        ]))
    return "\n".join(lines) + "\n"


def parse_sweep(text):
    """Inverse of :func:`format_sweep` (values at their printed precision)."""
    rows = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    if not rows or rows[0] != SWEEP_HEADER:
        raise ValidationError("sweep table has an unexpected header")
    out = []
    for ln in rows[1:]:
        m, kp, km, lx, lump, part = ln.split("\t")
        g = canonicalize([int(x) for x in part.split(",")])
        out.append(SweepRecord(int(m), g, float(kp), float(km), float(lx), lump == "true"))
    return out
