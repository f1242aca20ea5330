"""Reaction networks under mass-action kinetics and their uniformized DTMCs."""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from math import comb

import numpy as np

from .core import validate_stochastic
from .errors import (
    LambdaTooSmall,
    ParseError,
    StateSpaceExceeded,
    TargetNotInStateList,
    ValidationError,
)

DEFAULT_CAP = 100_000


@dataclass(frozen=True)
class Reaction:
    consumed: tuple
    produced: tuple
    rate: float

    @property
    def change(self):
        return tuple(b - a for a, b in zip(self.consumed, self.produced))


@dataclass(frozen=True)
class ReactionNetwork:
    species: tuple
    reactions: tuple
    initial_state: tuple

    def __post_init__(self):
        if len(set(self.species)) != len(self.species):
            raise ValidationError("species names must be unique")
        k = len(self.species)
        if len(self.initial_state) != k:
            raise ValidationError("initial state needs one count per species")
        if any(c < 0 for c in self.initial_state):
            raise ValidationError("initial counts must be non-negative")
        for r in self.reactions:
            if len(r.consumed) != k or len(r.produced) != k:
                raise ValidationError("reaction stoichiometry needs one entry per species")
            if any(c < 0 for c in r.consumed + r.produced):
                raise ValidationError("stoichiometric coefficients must be non-negative")
            if not r.rate > 0:
                raise ValidationError(f"rate constant must be positive, got {r.rate}")

    def index(self, name):
        try:
            return self.species.index(name)
        except ValueError:
            raise ValidationError(f"unknown species {name!r}") from None


def propensity(network: ReactionNetwork, state, k):
    """Mass-action propensity ``c_k * prod_i C(x_i, nu_ik)`` of reaction k."""
    r = network.reactions[k]
    factor = 1
    for x, nu in zip(state, r.consumed):
        if x < nu:
            return 0.0
        factor *= comb(x, nu)
    return r.rate * float(factor)


def enumerate_reachable(network: ReactionNetwork, cap=DEFAULT_CAP):
    """Breadth-first closure of the initial state under firing reactions.

    States are listed in discovery order; neighbours are expanded in
    reaction order.
    """
    if cap < 1:
        raise ValidationError("cap must be at least 1")
    start = tuple(network.initial_state)
    seen = {start: 0}
    states = [start]
    frontier = deque([start])
    changes = [r.change for r in network.reactions]
    while frontier:
        x = frontier.popleft()
        for k, gamma in enumerate(changes):
            if propensity(network, x, k) <= 0:
                continue
            y = tuple(a + b for a, b in zip(x, gamma))
            if y not in seen:
                if len(states) >= cap:
                    raise StateSpaceExceeded(cap)
                seen[y] = len(states)
                states.append(y)
                frontier.append(y)
    return states


@dataclass(frozen=True, eq=False)
class Generator:
    states: tuple
    R: np.ndarray


def build_generator(network: ReactionNetwork, states) -> Generator:
    """Rate matrix over ``states``; rates of reactions with equal change vectors add up."""
    states = [tuple(s) for s in states]
    index = {s: i for i, s in enumerate(states)}
    n = len(states)
    R = np.zeros((n, n))
    for i, x in enumerate(states):
        for k, r in enumerate(network.reactions):
            a = propensity(network, x, k)
            if a <= 0:
                continue
            y = tuple(p + q for p, q in zip(x, r.change))
            if y == x:
                continue
            j = index.get(y)
            if j is None:
                raise TargetNotInStateList(f"state {y} reachable from {x} is missing from the state list")
            R[i, j] += a
    R[np.diag_indices(n)] = -R.sum(axis=1)
    R.setflags(write=False)
    return Generator(tuple(states), R)


def uniformize(G: Generator, lam=None):
    """Subordinated DTMC ``P = R / lam + I``.

    The default constant is ``max |R_ii| + 1``, which keeps every diagonal
    entry of ``P`` positive.

    Returns
    -------
    P : ndarray
    lam : float
    """
    top = float(np.max(np.abs(np.diag(G.R)))) if G.R.size else 0.0
    if lam is None:
        lam = top + 1.0
    elif not lam > 0 or lam < top:
        raise LambdaTooSmall(f"uniformization constant {lam} is below max |R_ii| = {top}")
    P = G.R / lam + np.eye(len(G.states))
    P = np.clip(P, 0.0, None)
    return validate_stochastic(P, renormalize=True), lam


def gene_expression_network(n_p, c1=0.01, c2=0.01, c3=1.0, c4=0.1) -> ReactionNetwork:
    """Gene switching on/off with protein synthesis from a finite pool.

    Species ``G0, G1, P0, P``; reactions ``G0 -> G1`` (c1), ``G1 -> G0``
    (c2), ``G1 + P0 -> G1 + P`` (c3) and ``P -> P0`` (c4). Starts with the
    gene on and all ``n_p`` proteins synthesized.
    """
    species = ("G0", "G1", "P0", "P")

    def vec(**kw):
        return tuple(kw.get(s, 0) for s in species)

    reactions = (
        Reaction(vec(G0=1), vec(G1=1), c1),
        Reaction(vec(G1=1), vec(G0=1), c2),
        Reaction(vec(G1=1, P0=1), vec(G1=1, P=1), c3),
        Reaction(vec(P=1), vec(P0=1), c4),
    )
    return ReactionNetwork(species, reactions, vec(G1=1, P=n_p))


# -- text format ------------------------------------------------------------

_TERM = re.compile(r"^(?:(\d+)\s*\*\s*)?([A-Za-z_][A-Za-z0-9_]*)$")
_SECTIONS = ("SPECIES", "INIT", "REACTIONS")


def _parse_side(text, species, lineno):
    counts = [0] * len(species)
    text = text.strip()
    if text == "0":
        return tuple(counts)
    for term in text.split("+"):
        term = term.strip()
        mt = _TERM.match(term)
        if not mt:
            raise ParseError(f"line {lineno}: cannot parse term {term!r}")
        coeff = int(mt.group(1)) if mt.group(1) else 1
        name = mt.group(2)
        if name not in species:
            raise ParseError(f"line {lineno}: unknown species {name!r}")
        counts[species.index(name)] += coeff
    return tuple(counts)


def parse_network(text) -> ReactionNetwork:
    """Parse the ``SPECIES`` / ``INIT`` / ``REACTIONS`` text format.

    Example::

        SPECIES
        G0 G1 P0 P
        INIT
        G1 = 1
        P = 10
        REACTIONS
        G0 -> G1 @ 0.01
        G1 + P0 -> G1 + P @ 1
        2*A -> B @ 0.5
        0 -> A @ 2
    """
    section = None
    species = []
    init = {}
    raw_reactions = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line in _SECTIONS:
            section = line
            continue
        if section == "SPECIES":
            species.extend(line.split())
        elif section == "INIT":
            name, sep, value = line.partition("=")
            if not sep:
                raise ParseError(f"line {lineno}: expected 'name = integer'")
            try:
                init[name.strip()] = int(value.strip())
            except ValueError:
                raise ParseError(f"line {lineno}: {value.strip()!r} is not an integer") from None
        elif section == "REACTIONS":
            raw_reactions.append((lineno, line))
        else:
            raise ParseError(f"line {lineno}: data outside of a section")
    species = tuple(species)
    if not species:
        raise ParseError("no species declared")
    for name in init:
        if name not in species:
            raise ParseError(f"INIT references unknown species {name!r}")
    reactions = []
    for lineno, line in raw_reactions:
        body, at, rate = line.rpartition("@")
        if not at or "->" not in body:
            raise ParseError(f"line {lineno}: expected 'lhs -> rhs @ rate'")
        lhs, _, rhs = body.partition("->")
        try:
            c = float(rate)
        except ValueError:
            raise ParseError(f"line {lineno}: bad rate {rate.strip()!r}") from None
        reactions.append(Reaction(_parse_side(lhs, species, lineno), _parse_side(rhs, species, lineno), c))
    state = tuple(init.get(s, 0) for s in species)
    return ReactionNetwork(species, tuple(reactions), state)


def format_network(network: ReactionNetwork):
    def side(counts):
        terms = [(f"{c}*{s}" if c > 1 else s) for s, c in zip(network.species, counts) if c]
        return " + ".join(terms) if terms else "0"

    lines = ["SPECIES", " ".join(network.species), "INIT"]
    lines += [f"{s} = {c}" for s, c in zip(network.species, network.initial_state)]
    lines.append("REACTIONS")
    lines += [f"{side(r.consumed)} -> {side(r.produced)} @ {r.rate!r}" for r in network.reactions]
    return "\n".join(lines) + "\n"


def format_legend(network: ReactionNetwork, states):
    out = []
    for i, x in enumerate(states, 1):
        counts = ",".join(f"{s}={c}" for s, c in zip(network.species, x))
        out.append(f"{i}\t{counts}")
    return "\n".join(out) + "\n"


_PRED = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(>=|<=|==|!=|>|<)\s*(-?\d+)\s*$")
_OPS = {
    ">": np.greater, ">=": np.greater_equal, "<": np.less,
    "<=": np.less_equal, "==": np.equal, "!=": np.not_equal,
}


def select_states(network: ReactionNetwork, states, predicate):
    """0-based indices of states satisfying ``predicate``.

    ``predicate`` is ``NAME OP INT`` with OP one of ``> >= < <= == !=``, or
    the alias ``gene-on`` for ``G1>0``.
    """
    if predicate.strip() == "gene-on":
        predicate = "G1>0"
    mt = _PRED.match(predicate)
    if not mt:
        raise ValidationError(f"cannot parse predicate {predicate!r}")
    name, op, value = mt.groups()
    col = network.index(name)
    counts = np.array([s[col] for s in states])
    return [int(i) for i in np.flatnonzero(_OPS[op](counts, int(value)))]
