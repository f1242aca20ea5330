"""Command-line interface.

Exit codes: 0 success, 1 computation error, 2 input validation error,
3 resource cap exceeded.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import ctmc
from .aggregation import LUMP_TOL, aggregate, lumpability_check, p_lift, pi_lift
from .core import MarkovChain, stationary_distribution, validate_stochastic
from .errors import MCReduceError, ValidationError
from .io import (
    format_fixed,
    format_matrix,
    format_partition,
    parse_fixed,
    parse_matrix,
    parse_partition,
)
from .metrics import evaluate, relevant_loss_X
from .search import (
    CRITERIA,
    METHODS,
    aib_greedy,
    exhaustive_search,
    format_sweep,
    local_minima,
    sweep,
)

log = logging.getLogger("mcreduce")


def _fmt(x):
    return f"{x:.12g}"


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise ValidationError(f"cannot write {path}: {exc.strerror}") from None


def _positive(kind):
    def conv(s):
        v = kind(s)
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {s}")
        return v
    return conv


def _load_chain(path):
    return MarkovChain.from_matrix(parse_matrix(_read(path)))


def _load_fixed(args, n):
    if getattr(args, "fixed", None) is None:
        return None
    return parse_fixed(_read(args.fixed), n)


# -- subcommands --------------------------------------------------------------

def cmd_stationary(args):
    P = validate_stochastic(parse_matrix(_read(args.matrix)))
    mu = stationary_distribution(P, check_regular=True)
    print(" ".join(_fmt(x) for x in mu))


def cmd_evaluate(args):
    X = _load_chain(args.matrix)
    g = parse_partition(_read(args.partition), X.n)
    report = evaluate(X, g, args.tol)
    Y = aggregate(X, g)
    lines = report.lines()
    lines.append(f"max_violation={_fmt(report.max_violation)}")
    lines.append("nu=" + " ".join(_fmt(x) for x in Y.nu))
    for k, row in enumerate(Y.Q, 1):
        lines.append(f"Q[{k}]=" + " ".join(_fmt(x) for x in row))
    print("\n".join(lines))
    if args.emit_lifts:
        prefix = args.emit_lifts
        _write(f"{prefix}.plift", format_matrix(p_lift(X, Y).P, "P-lifting"))
        _write(f"{prefix}.mulift", format_matrix(pi_lift(Y, X.mu).P, "pi-lifting, pi = mu"))
        _write(f"{prefix}.Q", format_matrix(Y.Q, "optimal aggregation"))


def cmd_lift(args):
    X = _load_chain(args.matrix)
    g = parse_partition(_read(args.partition), X.n)
    Y = aggregate(X, g)
    if args.lifting == "p":
        lifted = p_lift(X, Y)
    else:
        lifted = pi_lift(Y, X.mu)
    _write(args.out, format_matrix(lifted.P, f"{lifted.method} of partition {g}"))


def cmd_lumpcheck(args):
    P = validate_stochastic(parse_matrix(_read(args.matrix)))
    g = parse_partition(_read(args.partition), P.shape[0])
    print(lumpability_check(P, g, args.tol))


def cmd_search(args):
    X = _load_chain(args.matrix)
    fixed = _load_fixed(args, X.n)
    if args.method == "aib":
        g = aib_greedy(X, args.M, fixed, fixed_frozen=args.fixed_frozen)
        criterion, value = "loss_x", relevant_loss_X(X, g).loss
    else:
        result = exhaustive_search(X, args.M, args.criterion, fixed)
        g, criterion, value = result.partition, args.criterion, result.value
    print(f"partition={g}")
    print(f"criterion={criterion}")
    print(f"value={_fmt(value)}")
    if args.out:
        _write(args.out, format_partition(g, f"{args.method} {criterion}={_fmt(value)}"))


def cmd_sweep(args):
    X = _load_chain(args.matrix)
    fixed = _load_fixed(args, X.n)
    m_from = X.n if args.m_from is None else args.m_from
    if fixed is not None and args.method == "aib" and args.m_from is None:
        m_from = X.n - len(fixed) + 1
    records = sweep(X, m_from, args.m_to, args.method, fixed, args.fixed_frozen,
                    args.criterion, args.tol)
    _write(args.out, format_sweep(records))
    minima = local_minima(records)
    print("local_minima=" + ",".join(str(m) for m in minima), file=sys.stderr)


def cmd_ctmc(args):
    network = ctmc.parse_network(_read(args.network))
    states = ctmc.enumerate_reachable(network, args.cap)
    G = ctmc.build_generator(network, states)
    P, lam = ctmc.uniformize(G, args.lambda_)
    prefix = args.out
    _write(f"{prefix}.matrix",
           format_matrix(P, f"uniformized generator, lambda={lam!r}, {len(states)} states"))
    _write(f"{prefix}.legend", ctmc.format_legend(network, states))
    print(f"states={len(states)}")
    print(f"lambda={_fmt(lam)}")
    if args.fixed_predicate:
        chosen = ctmc.select_states(network, states, args.fixed_predicate)
        if not chosen:
            raise ValidationError(f"predicate {args.fixed_predicate!r} selects no state")
        _write(f"{prefix}.fixed", format_fixed(chosen, f"states with {args.fixed_predicate}"))
        print(f"fixed={len(chosen)}")


# -- parser ---------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="mcreduce",
        description="Aggregate Markov chains by minimizing divergence-rate bounds.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    tol = argparse.ArgumentParser(add_help=False)
    tol.add_argument("--tol", type=_positive(float), default=LUMP_TOL,
                     help="lumpability tolerance (default %(default)g)")

    fixed = argparse.ArgumentParser(add_help=False)
    fixed.add_argument("--fixed", metavar="FILE", help="states (1-based) forming one fixed class")
    fixed.add_argument("--fixed-frozen", action=argparse.BooleanOptionalAction, default=True,
                       help="keep the fixed class out of aib merges (default on)")

    p = sub.add_parser("stationary", help="print the stationary distribution")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_stationary)

    p = sub.add_parser("evaluate", parents=[tol], help="report bounds for one partition")
    p.add_argument("matrix")
    p.add_argument("partition")
    p.add_argument("--emit-lifts", metavar="PREFIX",
                   help="write PREFIX.plift, PREFIX.mulift and PREFIX.Q")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("lift", help="write a lifted transition matrix")
    p.add_argument("matrix")
    p.add_argument("partition")
    p.add_argument("--lifting", choices=("p", "mu"), default="p")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("lumpcheck", parents=[tol], help="strong lumpability test")
    p.add_argument("matrix")
    p.add_argument("partition")
    p.set_defaults(func=cmd_lumpcheck)

    p = sub.add_parser("search", parents=[fixed], help="find a partition with M classes")
    p.add_argument("matrix")
    p.add_argument("-M", type=int, required=True)
    p.add_argument("--method", choices=METHODS, default="aib")
    p.add_argument("--criterion", choices=CRITERIA, default="p_lift_kldr",
                   help="objective of the exhaustive search")
    p.add_argument("--out", metavar="FILE", help="write the partition file here")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("sweep", parents=[tol, fixed], help="bounds for a range of class counts")
    p.add_argument("matrix")
    p.add_argument("--from", dest="m_from", type=int)
    p.add_argument("--to", dest="m_to", type=int, default=1)
    p.add_argument("--method", choices=METHODS, default="aib")
    p.add_argument("--criterion", choices=CRITERIA, default="p_lift_kldr")
    p.add_argument("--out", metavar="FILE", help="TSV output (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("ctmc", help="uniformize a reaction network")
    p.add_argument("network")
    p.add_argument("--out", metavar="PREFIX", required=True,
                   help="writes PREFIX.matrix, PREFIX.legend and PREFIX.fixed")
    p.add_argument("--lambda", dest="lambda_", type=_positive(float))
    p.add_argument("--cap", type=_positive(int), default=ctmc.DEFAULT_CAP)
    p.add_argument("--fixed-predicate", metavar="EXPR",
                   help="write PREFIX.fixed with the states matching e.g. 'P>9' or 'gene-on'")
    p.set_defaults(func=cmd_ctmc)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except MCReduceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except np.linalg.LinAlgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
