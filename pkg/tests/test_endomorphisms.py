from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from entropy_lab import (
    MatrixEndo,
    Rational,
    StencilEndo,
    TorsionSum,
    apply,
    identity_endo,
    image,
    left_shift,
    multiplication,
    power,
    right_shift,
    subgroup,
    subgroup_sum,
)
from entropy_lab.errors import AmbientMismatchError
from entropy_lab.linalg import RatMatrix

Z2 = TorsionSum(2)
Q = Rational(1)


# -- apply -----------------------------------------------------------------


def test_identity_stencil_fixes_everything():
    ident = StencilEndo(Z2, [(0, 1)])
    x = Z2.element({0: 1, 3: 1})
    assert apply(ident, x) == x


def test_right_shift_moves_basis():
    beta = right_shift(Z2)
    assert apply(beta, Z2.basis_element(0)) == Z2.basis_element(1)


def test_double_shift_via_power():
    beta = right_shift(Z2)
    assert apply(power(beta, 2), Z2.basis_element(0)) == Z2.basis_element(2)


def test_left_shift_discards_coordinate_zero():
    lam = left_shift(Z2)
    assert apply(lam, Z2.basis_element(0)).is_zero
    assert apply(lam, Z2.basis_element(3)) == Z2.basis_element(2)


def test_matrix_endo_applies_fractions():
    f = multiplication(Q, Fraction(3, 2))
    assert apply(f, Q.element([2])).data == (Fraction(3),)
    assert apply(f, Q.element([Fraction(1, 3)])).data == (Fraction(1, 2),)


def test_apply_rejects_foreign_ambient():
    beta = right_shift(Z2)
    with pytest.raises(AmbientMismatchError):
        apply(beta, Q.element([1]))


# -- image -----------------------------------------------------------------


def test_image_under_identity():
    h = subgroup(Z2, [Z2.element({0: 1, 1: 1})])
    assert image(identity_endo(Z2), h) == h


def test_image_of_singleton_under_shift():
    beta = right_shift(Z2)
    h = subgroup(Z2, [Z2.basis_element(0)])
    assert image(beta, h) == subgroup(Z2, [Z2.basis_element(1)])


def test_image_of_integers_under_multiplication():
    f = multiplication(Q, Fraction(3, 2))
    h = subgroup(Q, [Q.element([1])])
    got = image(f, h)
    assert got == subgroup(Q, [Q.element([Fraction(3, 2)])])
    assert got.basis == ((3,),) and got.den == 2


def test_image_rejects_foreign_ambient():
    with pytest.raises(AmbientMismatchError):
        image(right_shift(Z2), subgroup(Q, [Q.element([1])]))


# -- power -----------------------------------------------------------------


def test_power_one_is_the_map_itself():
    beta = right_shift(Z2)
    p = power(beta, 1)
    for i in range(5):
        x = Z2.basis_element(i)
        assert apply(p, x) == apply(beta, x)


def test_power_validates_exponent():
    with pytest.raises(ValueError):
        power(right_shift(Z2), 0)


def test_power_of_power_composes_exponents():
    beta = right_shift(Z2)
    p = power(power(beta, 2), 3)
    assert p.exponent == 6
    assert apply(p, Z2.basis_element(0)) == Z2.basis_element(6)


def test_multiplication_cubed():
    f = multiplication(Q, Fraction(3, 2))
    assert apply(power(f, 3), Q.element([1])).data == (Fraction(27, 8),)


# -- construction validation ---------------------------------------------------


def test_stencil_rejects_bad_taps():
    with pytest.raises(ValueError):
        StencilEndo(Z2, [])
    with pytest.raises(ValueError):
        StencilEndo(Z2, [(0, 1), (0, 1)])
    with pytest.raises(ValueError):
        StencilEndo(Z2, [(1, 2)])  # zero mod 2
    with pytest.raises(AmbientMismatchError):
        StencilEndo(Q, [(0, 1)])


def test_matrix_endo_rejects_bad_shape():
    with pytest.raises(ValueError):
        MatrixEndo(Rational(2), RatMatrix(1, 2, [Fraction(1), Fraction(0)]))
    with pytest.raises(AmbientMismatchError):
        MatrixEndo(Z2, RatMatrix(1, 1, [Fraction(1)]))
    with pytest.raises(TypeError):
        multiplication(Q, 1.5)


# -- algebraic laws -----------------------------------------------------------

torsion_elements = st.dictionaries(
    st.integers(min_value=0, max_value=5), st.integers(min_value=1, max_value=5), max_size=3
).map(lambda d: TorsionSum(6).element({i: r % 6 for i, r in d.items() if r % 6}))


@st.composite
def stencils_mod_6(draw):
    amb = TorsionSum(6)
    n_taps = draw(st.integers(min_value=1, max_value=3))
    offsets = draw(
        st.lists(
            st.integers(min_value=-2, max_value=2), min_size=n_taps, max_size=n_taps, unique=True
        )
    )
    return StencilEndo(amb, [(o, draw(st.integers(min_value=1, max_value=5))) for o in offsets])


@given(stencils_mod_6(), torsion_elements, torsion_elements)
def test_additivity(f, x, y):
    assert apply(f, x + y) == apply(f, x) + apply(f, y)


@given(stencils_mod_6(), torsion_elements, torsion_elements)
def test_image_commutes_with_sum(f, x, y):
    amb = TorsionSum(6)
    h = subgroup(amb, [x])
    k = subgroup(amb, [y])
    assert image(f, subgroup_sum(h, k)) == subgroup_sum(image(f, h), image(f, k))


@given(
    stencils_mod_6(),
    torsion_elements,
    st.integers(min_value=1, max_value=3),
    st.integers(min_value=1, max_value=3),
)
def test_power_addition_law(f, x, a, b):
    via_sum = apply(power(f, a + b), x)
    chained = apply(power(f, a), apply(power(f, b), x))
    assert via_sum == chained
