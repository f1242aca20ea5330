"""Plain-text formats for matrices, partitions and fixed state sets.

All formats ignore blank lines and lines starting with ``#``.

Matrix: the first data line is ``n``; then ``n`` lines of ``n`` numbers
separated by spaces or tabs. Written with 17 significant digits.

Partition: one line of ``n`` integer class labels (1-based, any labeling;
canonicalized on read).

Fixed set: 1-based state indices, whitespace separated, any number of lines.
"""
from __future__ import annotations

import numpy as np

from .errors import ParseError
from .partitions import canonicalize


def _data_lines(text):
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            yield lineno, stripped


def parse_matrix(text):
    lines = list(_data_lines(text))
    if not lines:
        raise ParseError("matrix file has no data")
    lineno, first = lines[0]
    try:
        n = int(first)
    except ValueError:
        raise ParseError(f"line {lineno}: expected the dimension, got {first!r}") from None
    if n < 1:
        raise ParseError(f"line {lineno}: dimension must be positive")
    rows = lines[1:]
    if len(rows) != n:
        raise ParseError(f"expected {n} matrix rows, found {len(rows)}")
    out = np.empty((n, n))
    for i, (lineno, row) in enumerate(rows):
        fields = row.split()
        if len(fields) != n:
            raise ParseError(f"line {lineno}: expected {n} entries, found {len(fields)}")
        try:
            out[i] = [float(x) for x in fields]
        except ValueError:
            raise ParseError(f"line {lineno}: non-numeric entry") from None
    return out


def format_matrix(P, comment=None):
    P = np.asarray(P, dtype=np.float64)
    lines = []
    if comment:
        lines += [f"# {c}" for c in comment.splitlines()]
    lines.append(str(P.shape[0]))
    lines += [" ".join(f"{x:.17g}" for x in row) for row in P]
    return "\n".join(lines) + "\n"


def parse_partition(text, n=None):
    lines = list(_data_lines(text))
    if len(lines) != 1:
        raise ParseError(f"partition file must have exactly one data line, found {len(lines)}")
    lineno, line = lines[0]
    try:
        labels = [int(x) for x in line.split()]
    except ValueError:
        raise ParseError(f"line {lineno}: labels must be integers") from None
    if n is not None and len(labels) != n:
        raise ParseError(f"partition has {len(labels)} labels, expected {n}")
    return canonicalize(labels)


def format_partition(g, comment=None):
    lines = [f"# {c}" for c in comment.splitlines()] if comment else []
    lines.append(str(g))
    return "\n".join(lines) + "\n"


def parse_fixed(text, n=None):
    """Return sorted 0-based state indices."""
    states = []
    for lineno, line in _data_lines(text):
        for tok in line.split():
            try:
                s = int(tok)
            except ValueError:
                raise ParseError(f"line {lineno}: {tok!r} is not a state index") from None
            if s < 1 or (n is not None and s > n):
                raise ParseError(f"line {lineno}: state {s} out of range")
            states.append(s - 1)
    if not states:
        raise ParseError("fixed set file lists no states")
    return sorted(set(states))


def format_fixed(states, comment=None):
    lines = [f"# {c}" for c in comment.splitlines()] if comment else []
    lines.append(" ".join(str(s + 1) for s in sorted(states)))
    return "\n".join(lines) + "\n"
