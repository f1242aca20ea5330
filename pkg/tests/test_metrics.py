import numpy as np
import pytest

import oracles
from conftest import corpus
from mcreduce.aggregation import aggregate, lumpability_check, p_lift
from mcreduce.core import MarkovChain
from mcreduce.errors import AbsoluteContinuityViolation, TooManySequences, ValidationError
from mcreduce.metrics import (
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
from mcreduce.partitions import Partition, canonicalize, enumerate_partitions

# direct-summation oracles, frozen
H_MU_EX1 = 1.567342194645896
H_RATE_EX3 = 0.5455180135542027

G12_3 = canonicalize([1, 1, 2])
G13_2 = canonicalize([1, 2, 1])
G1_23 = canonicalize([1, 2, 2])


class TestEntropy:
    def test_coin(self):
        assert entropy([0.5, 0.5]) == 1.0

    def test_degenerate(self):
        assert entropy([1.0, 0.0, 0.0]) == 0.0

    def test_example1_mu(self, ex1):
        assert entropy(ex1.mu) == pytest.approx(H_MU_EX1, abs=1e-12)
        assert entropy(ex1.mu) == pytest.approx(oracles.entropy_sum(ex1.mu), abs=1e-12)

    def test_rate_identity_matrix(self):
        X = MarkovChain.from_matrix(np.eye(2), require_regular=False)
        assert entropy_rate(X) == 0.0

    def test_rate_fair_coin(self):
        assert entropy_rate(MarkovChain.from_matrix(np.full((2, 2), 0.5))) == 1.0

    def test_rate_example3(self, ex3):
        assert entropy_rate(ex3) == pytest.approx(H_RATE_EX3, abs=1e-12)
        assert entropy_rate(ex3) == pytest.approx(oracles.entropy_rate_sum(ex3.P, ex3.mu), abs=1e-12)

    def test_redundancy_of_iid(self):
        assert redundancy_rate(MarkovChain.from_matrix(np.full((3, 3), 1 / 3))) == 0.0


class TestKLDR:
    def test_example4_p_lift(self, ex4):
        assert kldr_markov(ex4, p_lift(ex4, g=G1_23).P) == pytest.approx(0.347, abs=1e-3)

    def test_self(self, ex1):
        assert kldr_markov(ex1, ex1.P) == 0.0

    def test_table1_best_partition(self, ex1):
        assert kldr_p(ex1, G1_23) == pytest.approx(0.001, abs=1e-3)
        assert kldr_mu(ex1, G1_23) == pytest.approx(0.037, abs=1e-3)

    def test_against_oracle(self, ex1):
        for g in (G12_3, G13_2, G1_23):
            ref = p_lift(ex1, g=g).P
            assert kldr_markov(ex1, ref) == pytest.approx(oracles.kldr_sum(ex1.P, ex1.mu, ref), abs=1e-12)

    def test_absolute_continuity(self, ex1):
        ref = ex1.P.copy()
        ref[1] = [0.0, 0.5, 0.5]
        with pytest.raises(AbsoluteContinuityViolation) as err:
            kldr_markov(ex1, ref)
        assert (err.value.row, err.value.col) == (1, 0)

    def test_zero_source_entry_ignored(self, ex3):
        ref = ex3.P.copy()
        ref[2] = [0.9, 0.0, 0.1]
        with pytest.raises(AbsoluteContinuityViolation):
            kldr_markov(ex3, ref)
        ref[2] = [0.9, 0.1, 0.0]
        assert np.isfinite(kldr_markov(ex3, ref))

    def test_shape(self, ex1):
        with pytest.raises(ValidationError):
            kldr_markov(ex1, np.eye(2))


class TestRelevantLoss:
    def test_example3_conditional_entropies(self, ex3):
        assert relevant_loss_X(ex3, G12_3).cond_entropy == pytest.approx(1.19, abs=0.005)
        others = sorted(relevant_loss_X(ex3, g).cond_entropy for g in (G13_2, G1_23))
        assert others == pytest.approx([0.55, 0.69], abs=0.005)

    def test_against_oracle(self, ex1):
        for g in (G12_3, G13_2, G1_23):
            r = relevant_loss_X(ex1, g)
            assert r.cond_entropy == pytest.approx(oracles.cond_entropy_x_given_y(ex1.P, ex1.mu, g.labels), abs=1e-12)
            assert r.loss == pytest.approx(r.cond_entropy - entropy_rate(ex1), abs=1e-12)

    def test_identity(self, ex1):
        assert relevant_loss_X(ex1, Partition.identity(3)).loss == 0.0
        assert relevant_loss_Y(ex1, Partition.identity(3)) == 0.0

    def test_loss_y_examples(self, ex1, ex3):
        assert relevant_loss_Y(ex3, G12_3) == pytest.approx(0.0, abs=1e-12)
        assert relevant_loss_Y(ex1, G1_23) == pytest.approx(0.001, abs=1e-3)

    def test_mu_lift_identity_examples(self, ex1):
        assert mu_lift_bound_identity(ex1, G1_23) == pytest.approx(0.037, abs=1e-3)
        assert mu_lift_bound_identity(ex1, G12_3) == pytest.approx(0.823, abs=1e-3)
        assert mu_lift_bound_identity(ex1, Partition.identity(3)) == 0.0


def test_identities_and_orderings_on_corpus():
    for X in corpus(40, 6, seed=13):
        for m in range(1, min(4, X.n) + 1):
            for g in enumerate_partitions(X.n, m):
                kp, km = kldr_p(X, g), kldr_mu(X, g)
                ly, lx = relevant_loss_Y(X, g), relevant_loss_X(X, g).loss
                assert abs(ly - kp) <= 1e-10
                assert abs(mu_lift_bound_identity(X, g) - km) <= 1e-10
                assert kp <= km + 1e-12
                assert ly <= lx + 1e-12
                assert lx <= km + 1e-12
                if lumpability_check(X.P, g, 1e-12).lumpable:
                    assert kp <= 1e-10


class TestFiniteN:
    def test_lumpable_is_zero(self, ex3):
        for n in (2, 4, 7):
            assert finite_n_projection_kld(ex3, G12_3, n) == pytest.approx(0.0, abs=1e-12)

    def test_example1_certificate(self, ex1):
        assert finite_n_projection_kld(ex1, G1_23, 8) <= 7 * kldr_p(ex1, G1_23) + 1e-9

    def test_example4_weakly_lumpable(self, ex4):
        for n in range(2, 9):
            assert finite_n_projection_kld(ex4, G1_23, n) <= 1e-10
        assert kldr_p(ex4, G1_23) > 0.3

    def test_against_path_oracle(self):
        for X in corpus(8, 4, seed=17, n_min=3):
            for g in enumerate_partitions(X.n, 2):
                Y = aggregate(X, g)
                for n in (2, 3, 5):
                    ref = oracles.projected_sequence_kld(X.P, X.mu, g.labels, Y.Q, Y.nu, n)
                    assert finite_n_projection_kld(X, g, n) == pytest.approx(ref, abs=1e-12)

    def test_pairs_are_reproduced(self, ex1):
        # nu and Q match the stationary pair statistics of Y by construction
        for g in (G12_3, G13_2, G1_23):
            assert finite_n_projection_kld(ex1, g, 2) == pytest.approx(0.0, abs=1e-12)

    def test_caps(self, ex1):
        with pytest.raises(TooManySequences):
            finite_n_projection_kld(ex1, G1_23, 20)
        with pytest.raises(ValidationError):
            finite_n_projection_kld(ex1, G1_23, 1)


def test_evaluate_report(ex4):
    rep = evaluate(ex4, G1_23)
    assert rep.kldr_p == pytest.approx(0.347, abs=1e-3)
    assert not rep.lumpable
    lines = rep.lines()
    assert [ln.split("=")[0] for ln in lines] == ["kldr_p", "kldr_mu", "loss_x", "loss_y", "h_rate", "lumpable"]
    assert lines[-1] == "lumpable=false"


def test_evaluate_identity_all_zero(ex1):
    rep = evaluate(ex1, Partition.identity(3))
    assert (rep.kldr_p, rep.kldr_mu, rep.loss_x, rep.loss_y) == (0.0, 0.0, 0.0, 0.0)
    assert rep.lumpable
