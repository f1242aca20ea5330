"""Seeded test chains."""
import numpy as np

from .core import MarkovChain

# share of the cross-block mass sent 1, 2 and 3 blocks ahead on a ring of four
RING_PROFILE = (0.5, 0.3, 0.2)


def random_regular_chain(n, rng):
    """Dense chain with uniform(0, 1] entries, rows normalized."""
    raw = 1.0 - rng.random((n, n))
    return MarkovChain.from_matrix(raw, renormalize=True)


def random_sparse_chain(n, rng, density=0.5):
    """Regular chain with structural zeros; resamples until primitive."""
    while True:
        raw = (1.0 - rng.random((n, n))) * (rng.random((n, n)) < density)
        if np.all(raw.sum(axis=1) > 0):
            try:
                return MarkovChain.from_matrix(raw, renormalize=True)
            except ArithmeticError:
                continue


def block_chain(blocks=4, size=5, within=0.95, profile=RING_PROFILE, seed=0):
    """Nearly decomposable chain made of equally sized blocks.

    Each state keeps ``within`` inside its own block, split uniformly. The
    remaining mass goes to the other blocks by ring distance according to
    ``profile``, and inside each target block it is split by Dirichlet(1)
    weights drawn per source state. The block partition is then exactly
    lumpable while neither its refinements nor its coarsenings are.
    """
    if len(profile) != blocks - 1:
        raise ValueError("profile needs one weight per other block")
    rng = np.random.default_rng(seed)
    profile = np.asarray(profile, dtype=np.float64) / np.sum(profile)
    n = blocks * size
    P = np.zeros((n, n))
    for i in range(n):
        b = i // size
        P[i, b * size:(b + 1) * size] = within / size
        for d in range(1, blocks):
            t = (b + d) % blocks
            P[i, t * size:(t + 1) * size] = (1 - within) * profile[d - 1] * rng.dirichlet(np.ones(size))
    return MarkovChain.from_matrix(P, renormalize=True)
