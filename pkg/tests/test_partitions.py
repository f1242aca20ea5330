import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from mcreduce.errors import EmptyClass, InvalidFixedSet, NonPositivePi, TooLarge, ValidationError
from mcreduce.partitions import (
    Partition,
    build_U,
    build_V,
    canonicalize,
    enumerate_partitions,
    stirling2,
)

MU_EX1 = np.array([0.3470790378006854, 0.38831615120275037, 0.2646048109965644])


@pytest.mark.parametrize("raw,expected", [
    ([2, 2, 1], [1, 1, 2]),
    ([1, 2, 3], [1, 2, 3]),
    ([3, 1, 3, 1], [1, 2, 1, 2]),
    (["b", "a", "b"], [1, 2, 1]),
])
def test_canonicalize(raw, expected):
    assert canonicalize(raw).one_based() == expected


def test_canonicalize_with_m():
    assert canonicalize([2, 1, 2], m=2).one_based() == [1, 2, 1]
    with pytest.raises(EmptyClass):
        canonicalize([1, 3, 1], m=3)
    with pytest.raises(ValidationError):
        canonicalize([1, 4], m=3)


@settings(max_examples=1000, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=1, max_size=12))
def test_canonicalize_idempotent(raw):
    g = canonicalize(raw)
    assert canonicalize(g.labels) == g
    # same blocks as the input
    assert all((raw[i] == raw[j]) == (g.labels[i] == g.labels[j])
               for i in range(len(raw)) for j in range(len(raw)))


def test_partition_rejects_noncanonical():
    with pytest.raises(ValidationError):
        Partition((1, 0))
    with pytest.raises(ValidationError):
        Partition((0, 2))


def test_partition_helpers():
    g = canonicalize([1, 2, 2, 1])
    assert g.m == 2 and g.n == 4
    assert g.classes() == [[0, 3], [1, 2]]
    assert list(g.sizes) == [2, 2]
    assert str(g) == "1 2 2 1"
    assert Partition.identity(3).labels == (0, 1, 2)
    assert Partition.single(3).labels == (0, 0, 0)
    assert Partition.from_classes([[2], [0, 1]]).one_based() == [1, 1, 2]


class TestLiftingMatrices:
    def test_V_examples(self):
        np.testing.assert_array_equal(build_V(canonicalize([1, 1, 2])), [[1, 0], [1, 0], [0, 1]])
        np.testing.assert_array_equal(build_V(Partition.identity(3)), np.eye(3))
        np.testing.assert_array_equal(build_V(canonicalize([1, 2, 2])), [[1, 0], [0, 1], [0, 1]])

    def test_U_equal_mass(self):
        U = build_U(canonicalize([1, 1, 2]), [0.25, 0.25, 0.5])
        np.testing.assert_allclose(U, [[0.5, 0.5, 0], [0, 0, 1]])

    def test_U_identity(self):
        np.testing.assert_allclose(build_U(Partition.identity(3), [0.2, 0.3, 0.5]), np.eye(3))

    def test_U_example1_mu(self):
        U = build_U(canonicalize([1, 2, 2]), MU_EX1)
        # 0.388 / 0.653 and 0.265 / 0.653 from the printed stationary vector
        np.testing.assert_allclose(U[1], [0, 0.5947368421052631, 0.4052631578947368], atol=1e-12)
        np.testing.assert_allclose(U[1, 1:], [0.388 / 0.653, 0.265 / 0.653], atol=1e-3)

    def test_U_rejects_nonpositive(self):
        with pytest.raises(NonPositivePi):
            build_U(canonicalize([1, 2]), [1.0, 0.0])

    def test_UV_identity_over_enumeration(self):
        rng = np.random.default_rng(0)
        for n in range(1, 7):
            for m in range(1, n + 1):
                for g in enumerate_partitions(n, m):
                    pi = 1.0 - rng.random(n)
                    pi /= pi.sum()
                    assert np.max(np.abs(build_U(g, pi) @ build_V(g) - np.eye(m))) <= 1e-12


class TestEnumeration:
    def test_n3_m2_order(self):
        got = [g.one_based() for g in enumerate_partitions(3, 2)]
        assert got == [[1, 1, 2], [1, 2, 1], [1, 2, 2]]

    def test_n4_m2_brute_force(self):
        got = [g.labels for g in enumerate_partitions(4, 2)]
        assert got == oracles.all_partitions(4, 2)
        assert len(got) == 7

    def test_counts_match_stirling_recurrence(self):
        for n in range(1, 11):
            for m in range(1, n + 1):
                assert sum(1 for _ in enumerate_partitions(n, m)) == stirling2(n, m)

    def test_stirling_values(self):
        assert [stirling2(5, m) for m in range(1, 6)] == [1, 15, 25, 10, 1]

    def test_brute_force_small(self):
        for n in range(1, 7):
            for m in range(1, n + 1):
                assert [g.labels for g in enumerate_partitions(n, m)] == oracles.all_partitions(n, m)

    def test_fixed_single(self):
        assert [g.one_based() for g in enumerate_partitions(3, 2, fixed=[2])] == [[1, 1, 2]]

    def test_fixed_is_exactly_one_class(self):
        F = {1, 3}
        for n, m in [(5, 2), (5, 3), (6, 3)]:
            got = list(enumerate_partitions(n, m, fixed=sorted(F)))
            expected = [g for g in enumerate_partitions(n, m)
                        if any(set(c) == F for c in g.classes())]
            assert got == expected

    def test_fixed_everything(self):
        assert [g.labels for g in enumerate_partitions(3, 1, fixed=[0, 1, 2])] == [(0, 0, 0)]
        assert list(enumerate_partitions(3, 2, fixed=[0, 1, 2])) == []

    def test_too_large(self):
        with pytest.raises(TooLarge):
            next(enumerate_partitions(15, 2))

    def test_bad_fixed(self):
        with pytest.raises(InvalidFixedSet):
            list(enumerate_partitions(3, 2, fixed=[5]))
        with pytest.raises(InvalidFixedSet):
            list(enumerate_partitions(3, 2, fixed=[]))

    def test_bad_m(self):
        with pytest.raises(ValidationError):
            list(enumerate_partitions(3, 4))
