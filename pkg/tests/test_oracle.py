import random
from fractions import Fraction

import pytest

from entropy_lab import (
    Cardinality,
    Rational,
    TorsionSum,
    partial_trajectory,
    power,
    quotient_index,
    right_shift,
    subgroup,
    subgroup_sum,
)
from entropy_lab.errors import ContainmentError, EnumerationCapError, RationalAmbientError
from entropy_lab.oracle import (
    CyclicRational,
    cyclic_from_subgroup,
    cyclic_sum,
    enumerate_subgroup,
    index_by_enumeration,
)

Z2 = TorsionSum(2)
FIN = Cardinality.finite


def test_enumerate_zero_subgroup():
    z = subgroup(Z2, [])
    got = enumerate_subgroup(z)
    assert got.elements == frozenset({Z2.zero()})
    assert not got.capped


def test_enumerate_two_coordinates():
    hp = subgroup(Z2, [Z2.basis_element(0), Z2.basis_element(1)])
    got = enumerate_subgroup(hp)
    assert len(got.elements) == 4


def test_enumerate_diagonal_generators():
    h = subgroup(
        Z2,
        [Z2.element({0: 1, 1: 1}), Z2.element({1: 1, 2: 1})],
    )
    got = enumerate_subgroup(h)
    e = Z2.element
    assert got.elements == frozenset(
        {Z2.zero(), e({0: 1, 1: 1}), e({1: 1, 2: 1}), e({0: 1, 2: 1})}
    )


def test_enumerate_cap_reports():
    big = subgroup(TorsionSum(3), [TorsionSum(3).element({i: 1}) for i in range(6)])
    got = enumerate_subgroup(big, cap=100)
    assert got.capped
    assert len(got.elements) >= 100


def test_enumerate_rejects_rational():
    q = Rational(1)
    with pytest.raises(RationalAmbientError):
        enumerate_subgroup(subgroup(q, [q.element([1])]))


def test_index_by_enumeration_reflexive():
    h = subgroup(Z2, [Z2.element({0: 1, 2: 1})])
    assert index_by_enumeration(h, h) == FIN(1)


def test_index_by_enumeration_on_double_shift_trajectory():
    beta2 = power(right_shift(Z2), 2)
    hp = subgroup(Z2, [Z2.basis_element(0), Z2.basis_element(1)])
    t2 = partial_trajectory(beta2, hp, 2)
    assert index_by_enumeration(t2, hp) == FIN(4)


def test_index_by_enumeration_checks_containment():
    h = subgroup(Z2, [Z2.basis_element(0)])
    k = subgroup(Z2, [Z2.basis_element(1)])
    with pytest.raises(ContainmentError):
        index_by_enumeration(k, h)


def test_index_by_enumeration_cap_error():
    amb = TorsionSum(3)
    gens = [amb.element({i: 1}) for i in range(8)]
    big = subgroup(amb, gens)
    small = subgroup(amb, gens[:1])
    with pytest.raises(EnumerationCapError):
        index_by_enumeration(big, small, cap=100)


def test_random_pairs_match_quotient_index_mod_6():
    rng = random.Random(99)
    amb = TorsionSum(6)
    for _ in range(25):
        gens_h = [
            amb.element({rng.randrange(3): rng.randrange(1, 6)})
            for _ in range(rng.randint(1, 2))
        ]
        gens_extra = [
            amb.element({rng.randrange(3): rng.randrange(1, 6)})
            for _ in range(rng.randint(1, 2))
        ]
        h = subgroup(amb, gens_h)
        k = subgroup_sum(h, subgroup(amb, gens_extra))
        assert index_by_enumeration(k, h) == quotient_index(k, h)


def test_cyclic_identity_element():
    g = CyclicRational(Fraction(5, 3))
    assert cyclic_sum(g, CyclicRational(Fraction(0))).generator == Fraction(5, 3)


def test_cyclic_sum_examples():
    assert cyclic_sum(
        CyclicRational(Fraction(1)), CyclicRational(Fraction(3, 2))
    ).generator == Fraction(1, 2)
    assert cyclic_sum(
        CyclicRational(Fraction(1, 2)), CyclicRational(Fraction(9, 4))
    ).generator == Fraction(1, 4)


def test_cyclic_normalizes_sign_and_rejects_floats():
    assert CyclicRational(Fraction(-2, 3)).generator == Fraction(2, 3)
    with pytest.raises(TypeError):
        CyclicRational(0.5)


def test_cyclic_from_subgroup_round_trip():
    q = Rational(1)
    h = subgroup(q, [q.element([Fraction(3, 4)]), q.element([Fraction(1, 2)])])
    got = cyclic_from_subgroup(h)
    want = cyclic_sum(CyclicRational(Fraction(3, 4)), CyclicRational(Fraction(1, 2)))
    assert got.generator == want.generator == Fraction(1, 4)
    assert cyclic_from_subgroup(subgroup(q, [])).generator == 0


def test_cyclic_from_subgroup_requires_rank_one():
    q2 = Rational(2)
    h = subgroup(q2, [q2.element([1, 0]), q2.element([0, 1])])
    with pytest.raises(RationalAmbientError):
        cyclic_from_subgroup(h)
