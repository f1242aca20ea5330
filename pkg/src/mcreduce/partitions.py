"""Set partitions of a finite state space.

A :class:`Partition` stores 0-based class labels in canonical form: labels
appear in order of first occurrence, so ``labels[0] == 0`` and every new
label is one more than the largest seen so far (a restricted growth string).
Text input and output use 1-based labels.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import EmptyClass, InvalidFixedSet, NonPositivePi, TooLarge, ValidationError

MAX_ENUMERATION_N = 14


@dataclass(frozen=True)
class Partition:
    labels: tuple

    def __post_init__(self):
        seen = -1
        for lab in self.labels:
            if lab > seen + 1 or lab < 0:
                raise ValidationError(f"labels {self.labels} are not in canonical form")
            seen = max(seen, lab)
        if not self.labels:
            raise ValidationError("partition of an empty set")

    @property
    def n(self):
        return len(self.labels)

    @cached_property
    def m(self):
        return max(self.labels) + 1

    @cached_property
    def array(self):
        a = np.array(self.labels, dtype=np.int64)
        a.setflags(write=False)
        return a

    @cached_property
    def sizes(self):
        return np.bincount(self.array, minlength=self.m)

    def classes(self):
        """Member lists per class, in canonical class order."""
        out = [[] for _ in range(self.m)]
        for state, lab in enumerate(self.labels):
            out[lab].append(state)
        return out

    def one_based(self):
        return [lab + 1 for lab in self.labels]

    def __str__(self):
        return " ".join(str(x) for x in self.one_based())

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)))

    @classmethod
    def single(cls, n):
        return cls((0,) * n)

    @classmethod
    def from_classes(cls, classes, n=None):
        """Build from an iterable of 0-based state collections."""
        classes = [sorted(c) for c in classes]
        if n is None:
            n = sum(len(c) for c in classes)
        raw = [-1] * n
        for k, members in enumerate(classes):
            if not members:
                raise EmptyClass(f"class {k + 1} has no members")
            for s in members:
                if not 0 <= s < n or raw[s] != -1:
                    raise ValidationError(f"state {s + 1} is out of range or assigned twice")
                raw[s] = k
        if -1 in raw:
            raise ValidationError(f"state {raw.index(-1) + 1} is not assigned to any class")
        return canonicalize(raw)


def canonicalize(raw_assignment, m=None):
    """Relabel classes by order of first occurrence.

    ``raw_assignment`` may use any hashable labels. When ``m`` is given the
    labels must be integers in ``1..m`` and each of them must be used.

    >>> canonicalize([3, 1, 3, 1]).one_based()
    [1, 2, 1, 2]
    """
    raw = list(raw_assignment)
    if not raw:
        raise ValidationError("empty assignment")
    if m is not None:
        for lab in raw:
            if not (isinstance(lab, (int, np.integer)) and 1 <= lab <= m):
                raise ValidationError(f"label {lab!r} outside 1..{m}")
        missing = sorted(set(range(1, m + 1)) - set(int(x) for x in raw))
        if missing:
            raise EmptyClass(f"class label {missing[0]} has no members")
    mapping = {}
    out = []
    for lab in raw:
        key = int(lab) if isinstance(lab, np.integer) else lab
        if key not in mapping:
            mapping[key] = len(mapping)
        out.append(mapping[key])
    return Partition(tuple(out))


def build_V(g):
    """``n x m`` zero/one membership matrix, ``V[i, j] = 1`` iff state i is in class j."""
    V = np.zeros((g.n, g.m))
    V[np.arange(g.n), g.array] = 1.0
    return V


def build_U(g, pi):
    """``m x n`` matrix splitting each class according to ``pi``.

    ``U[k, j] = pi[j] / sum(pi[class k])`` for members j of class k and zero
    elsewhere, so that ``U @ V`` is the identity.
    """
    pi = np.asarray(pi, dtype=np.float64)
    if pi.shape != (g.n,):
        raise ValidationError(f"pi has shape {pi.shape}, expected ({g.n},)")
    if np.any(pi <= 0):
        raise NonPositivePi("pi must be strictly positive")
    mass = np.bincount(g.array, weights=pi, minlength=g.m)
    U = np.zeros((g.m, g.n))
    U[g.array, np.arange(g.n)] = pi / mass[g.array]
    return U


def _check_fixed(n, fixed):
    F = sorted(set(int(s) for s in fixed))
    if not F:
        raise InvalidFixedSet("fixed set is empty")
    if F[0] < 0 or F[-1] >= n:
        raise InvalidFixedSet(f"fixed set references states outside 1..{n}")
    return F


def enumerate_partitions(n, m, fixed=None):
    """Yield every partition of ``n`` states into exactly ``m`` classes.

    Partitions come out in lexicographic order of their restricted growth
    strings. With ``fixed`` (0-based state indices) only partitions in
    which the fixed set forms one complete class on its own are produced.
    """
    if n > MAX_ENUMERATION_N:
        raise TooLarge(f"enumeration is capped at n = {MAX_ENUMERATION_N}, got {n}")
    if not 1 <= m <= n:
        raise ValidationError(f"need 1 <= m <= n, got m={m}, n={n}")
    in_fixed = [False] * n
    if fixed is not None:
        for s in _check_fixed(n, fixed):
            in_fixed[s] = True
    n_free_after = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        n_free_after[i] = n_free_after[i + 1] + (not in_fixed[i])
    has_fixed = fixed is not None

    labels = [0] * n

    def rec(i, used, fixed_label):
        # feasibility: at most one new class per remaining non-fixed state,
        # plus one if the fixed class has not been opened yet
        room = n_free_after[i] + (1 if has_fixed and fixed_label < 0 else 0)
        if used > m or used + room < m:
            return
        if i == n:
            yield Partition(tuple(labels))
            return
        if in_fixed[i]:
            if fixed_label >= 0:
                labels[i] = fixed_label
                yield from rec(i + 1, used, fixed_label)
            else:
                labels[i] = used
                yield from rec(i + 1, used + 1, used)
            return
        for lab in range(used + 1):
            if lab == fixed_label:
                continue
            labels[i] = lab
            yield from rec(i + 1, max(used, lab + 1), fixed_label)

    yield from rec(0, 0, -1)


def stirling2(n, m):
    """Stirling number of the second kind by the standard recurrence."""
    table = [[0] * (m + 1) for _ in range(n + 1)]
    table[0][0] = 1
    for i in range(1, n + 1):
        for j in range(1, min(i, m) + 1):
            table[i][j] = j * table[i - 1][j] + table[i - 1][j - 1]
    return table[n][m]
