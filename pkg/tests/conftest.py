from pathlib import Path

import numpy as np
import pytest

import oracles
from mcreduce.core import MarkovChain

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def ex1():
    return MarkovChain.from_matrix(oracles.EXAMPLE1)


@pytest.fixture
def ex3():
    return MarkovChain.from_matrix(oracles.EXAMPLE3)


@pytest.fixture
def ex4():
    return MarkovChain.from_matrix(oracles.EXAMPLE4)


def corpus(count, n_max, seed, n_min=2):
    """Seeded dense regular chains with sizes cycling through n_min..n_max."""
    rng = np.random.default_rng(seed)
    sizes = range(n_min, n_max + 1)
    return [MarkovChain.from_matrix(oracles.random_regular(sizes[k % len(sizes)], rng))
            for k in range(count)]


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[num])
