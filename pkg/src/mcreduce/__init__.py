"""State-space reduction of Markov chains by information-theoretic aggregation."""
from ._kernels import BACKEND
from .aggregation import (
    AggregatedChain,
    LiftedChain,
    LumpabilityResult,
    aggregate,
    lumpability_check,
    p_lift,
    pi_lift,
)
from .core import MarkovChain, is_regular, stationary_distribution, validate_stochastic
from .metrics import (
    entropy,
    entropy_rate,
    evaluate,
    finite_n_projection_kld,
    kldr_markov,
    kldr_mu,
    kldr_p,
    mu_lift_bound_identity,
    redundancy_rate,
    relevant_loss_X,
    relevant_loss_Y,
)
from .partitions import Partition, build_U, build_V, canonicalize, enumerate_partitions
from .search import SweepRecord, aib_greedy, aib_levels, exhaustive_search, local_minima, sweep

__version__ = "0.1.0"
