"""Tests for omega_nil.intlinalg against hand computations and sympy oracles."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, Symbol, primerange

from omega_nil.errors import AlgebraError, PreconditionError
from omega_nil.intlinalg import (
    IntMatrix,
    IntPoly,
    ModPoly,
    char_poly,
    cyclotomic_product_check,
    incidence_matrix,
    is_nilpotent,
    is_primitive_matrix,
    poly_gcd,
    pseudodeterminant,
    rank_mod_p,
    reciprocal_poly,
    reduce_mod_p,
    xi_pair,
)
from omega_nil.words import Alphabet, FreeGroupEndo, MonoidHom, Substitution, compose

small_square = st.integers(min_value=1, max_value=4).flatmap(
    lambda n: st.lists(
        st.lists(st.integers(min_value=-3, max_value=3), min_size=n, max_size=n),
        min_size=n,
        max_size=n,
    )
)

wide_square = st.integers(min_value=1, max_value=6).flatmap(
    lambda n: st.lists(
        st.lists(st.integers(min_value=-9, max_value=9), min_size=n, max_size=n),
        min_size=n,
        max_size=n,
    )
)


def substitutions(n: int) -> st.SearchStrategy[Substitution]:
    image = st.lists(st.integers(min_value=0, max_value=n - 1), min_size=1, max_size=4)
    return st.lists(image, min_size=n, max_size=n).map(Substitution.from_images)


substitution_pairs = st.integers(min_value=1, max_value=4).flatmap(
    lambda n: st.tuples(substitutions(n), substitutions(n))
)

SMALL_PRIMES = list(primerange(2, 98))


def poly(*coeffs: int) -> IntPoly:
    """Polynomial from descending coefficients, as usually written."""
    return IntPoly(tuple(reversed(coeffs)))


# === Tests for IntPoly ===


def test_zero_polynomial_degree() -> None:
    assert IntPoly().degree == -1
    assert IntPoly((0, 0)).is_zero


def test_polynomial_strips_leading_zeros() -> None:
    assert IntPoly((1, 2, 0, 0)).coeffs == (1, 2)


def test_polynomial_factored_rendering() -> None:
    assert poly(4, -5, 1).factored() == "(x - 1)*(4*x - 1)"


def test_exact_div_failure() -> None:
    with pytest.raises(AlgebraError, match="does not divide"):
        poly(1, 0, 1).exact_div(poly(1, -1))


def test_primitive_part_is_positive() -> None:
    assert poly(-4, 2).primitive_part() == poly(2, -1)


# === Tests for incidence_matrix ===


def test_incidence_matrix_negative(negative: Substitution) -> None:
    assert incidence_matrix(negative).to_lists() == [[1, 0, 2], [1, 2, 0], [1, 1, 1]]


def test_incidence_matrix_uses_exponent_sums(psi: FreeGroupEndo) -> None:
    assert incidence_matrix(psi).to_lists() == [[0, 1], [0, 0]]


def test_incidence_matrix_of_monoid_hom() -> None:
    theta = MonoidHom(Alphabet(3), Alphabet(2), ((0, 1, 1), (1,), (0, 0)))
    m = incidence_matrix(theta)
    assert (m.rows, m.cols) == (2, 3)
    assert m.to_lists() == [[1, 0, 2], [2, 1, 0]]


# === Tests for char_poly and reciprocal_poly ===


def test_char_poly_all_ones() -> None:
    assert char_poly(IntMatrix.from_rows([[1, 1], [1, 1]])) == poly(1, -2, 0)


def test_char_poly_of_empty_matrix() -> None:
    assert char_poly(IntMatrix(0, 0)) == IntPoly.one()


def test_char_poly_rejects_non_square() -> None:
    with pytest.raises(PreconditionError, match="square"):
        char_poly(IntMatrix.from_rows([[1, 2, 3]]))


@given(small_square)
@settings(max_examples=40, deadline=None)
def test_char_poly_matches_sympy(rows: list[list[int]]) -> None:
    x = Symbol("x")
    expected = Matrix(rows).charpoly(x).all_coeffs()
    assert char_poly(IntMatrix.from_rows(rows)) == poly(*[int(c) for c in expected])


def test_reciprocal_of_thue_morse_polynomial() -> None:
    assert reciprocal_poly(poly(1, -2, 0)) == poly(-2, 1)


def test_reciprocal_of_negative_polynomial() -> None:
    # x(x - 1)(x - 3) -> (3x - 1)(x - 1)
    assert reciprocal_poly(poly(1, -4, 3, 0)) == poly(3, -4, 1)


def test_reciprocal_of_nonzero_constant() -> None:
    assert reciprocal_poly(poly(5)) == poly(5)


def test_reciprocal_rejects_zero() -> None:
    with pytest.raises(PreconditionError):
        reciprocal_poly(IntPoly())


# === Tests for reduce_mod_p and rank_mod_p ===


def test_reduce_polynomial_mod_two() -> None:
    reduced = reduce_mod_p(poly(4, -5, 1), 2)
    assert isinstance(reduced, ModPoly)
    assert reduced.coeffs == (1, 1)


def test_reduce_polynomial_to_constant() -> None:
    reduced = reduce_mod_p(poly(3, -1), 3)
    assert isinstance(reduced, ModPoly)
    assert reduced.coeffs == (2,)
    assert reduced.degree == 0


def test_reduce_matrix_mod_p() -> None:
    reduced = reduce_mod_p(IntMatrix.from_rows([[3, -1], [4, 5]]), 3)
    assert [[int(x) for x in row] for row in reduced.to_list()] == [[0, 2], [1, 2]]


def test_reduce_rejects_composite_modulus() -> None:
    with pytest.raises(PreconditionError, match="not prime"):
        reduce_mod_p(poly(1, 1), 4)


def test_rank_mod_p() -> None:
    m = IntMatrix.from_rows([[1, 3], [1, 1]])
    assert rank_mod_p(m, 2) == 1
    assert rank_mod_p(m, 3) == 2
    assert rank_mod_p(m @ m, 2) == 0


# === Tests for pseudodeterminant ===


def test_pseudodeterminant_tedious(tedious: Substitution) -> None:
    assert pseudodeterminant(incidence_matrix(tedious)) == -8


def test_pseudodeterminant_thue_morse(thue_morse: Substitution) -> None:
    assert pseudodeterminant(incidence_matrix(thue_morse)) == 2


def test_pseudodeterminant_of_nilpotent_is_one(psi: FreeGroupEndo) -> None:
    assert pseudodeterminant(incidence_matrix(psi)) == 1


@given(small_square)
@settings(max_examples=40, deadline=None)
def test_pseudodeterminant_equals_det_when_invertible(rows: list[list[int]]) -> None:
    det = int(Matrix(rows).det(method="laplace"))
    if det != 0:
        assert pseudodeterminant(IntMatrix.from_rows(rows)) == det


# === Tests for is_nilpotent and is_primitive_matrix ===


def test_strictly_upper_triangular_is_nilpotent() -> None:
    assert is_nilpotent(IntMatrix.from_rows([[0, 1, 5], [0, 0, 2], [0, 0, 0]]))


def test_identity_is_not_nilpotent() -> None:
    assert not is_nilpotent(IntMatrix.identity(2))


def test_primitive_substitution_matrices(
    thue_morse: Substitution, tedious: Substitution
) -> None:
    assert is_primitive_matrix(incidence_matrix(thue_morse))
    assert is_primitive_matrix(incidence_matrix(tedious))


def test_permutation_matrix_is_not_primitive() -> None:
    assert not is_primitive_matrix(IntMatrix.from_rows([[0, 1], [1, 0]]))


def test_primitive_needs_a_power() -> None:
    # 0 -> 1, 1 -> 01
    assert is_primitive_matrix(IntMatrix.from_rows([[0, 1], [1, 1]]))


def test_primitive_rejects_negative_entries() -> None:
    with pytest.raises(PreconditionError, match="non-negative"):
        is_primitive_matrix(IntMatrix.from_rows([[1, -1], [1, 1]]))


@given(small_square)
@settings(max_examples=40, deadline=None)
def test_matrix_power_matches_repeated_product(rows: list[list[int]]) -> None:
    m = IntMatrix.from_rows(rows)
    assert m**3 == m @ m @ m
    assert m**0 == IntMatrix.identity(m.rows)


# === Tests for poly_gcd ===


def test_gcd_with_common_factor() -> None:
    assert poly_gcd(poly(4, -5, 1), poly(-4, 1)) == poly(4, -1)


def test_gcd_of_coprime_polynomials() -> None:
    assert poly_gcd(poly(1, -3, 1), poly(1, 1)) == IntPoly.one()


def test_gcd_keeps_common_content() -> None:
    assert poly_gcd(poly(2, 2), poly(4, -4)) == poly(2)


def test_gcd_with_zero() -> None:
    assert poly_gcd(IntPoly(), poly(-1, 3)) == poly(1, -3)


# === Tests for cyclotomic_product_check ===


@pytest.mark.parametrize(
    ("xi", "expected"),
    [
        (poly(1, -1), True),
        (poly(1, -6, 15, -20, 15, -6, 1), True),
        (poly(1, 1, 1), True),
        (poly(-1, 0, 1), True),
        (poly(1, -3, 1), False),
        (poly(2, -2), False),
        (poly(1), True),
    ],
)
def test_cyclotomic_product_check(xi: IntPoly, expected: bool) -> None:
    assert cyclotomic_product_check(xi) is expected


# === Tests for xi_pair ===


def test_xi_pair_thue_morse() -> None:
    # reciprocal polynomial of the square of Thue-Morse
    assert xi_pair(poly(-4, 1), poly(4, -5, 1)) == (poly(1, -1), IntPoly.one())


def test_xi_pair_negative() -> None:
    assert xi_pair(poly(3, -4, 1), poly(3, -1)) == (IntPoly.one(), poly(1, -1))


def test_xi_pair_cyclo() -> None:
    a = poly(-1, 4, -4, 1)
    b = poly(1, -2, -2, 1)
    assert xi_pair(a, b) == (poly(1, 1), poly(1, -1))


def test_xi_pair_rejects_non_cyclotomic_quotient() -> None:
    with pytest.raises(AlgebraError, match="cyclotomic"):
        xi_pair(poly(-2, 1), poly(4, -5, 1))


# === Property tests ===


@given(wide_square)
@settings(max_examples=200, deadline=None)
def test_dimension_formula_matches_rank_of_top_power(rows: list[list[int]]) -> None:
    m = IntMatrix.from_rows(rows)
    d = m.rows
    chi = char_poly(m)
    rev = reciprocal_poly(chi)
    top = m**d
    for p in SMALL_PRIMES:
        chi_p = reduce_mod_p(chi, p)
        rev_p = reduce_mod_p(rev, p)
        assert isinstance(chi_p, ModPoly)
        assert isinstance(rev_p, ModPoly)
        dimension = d - chi_p.trailing_zeros()
        assert dimension == rank_mod_p(top, p)
        assert dimension == max(rev_p.degree, 0)


@given(substitution_pairs)
@settings(max_examples=100, deadline=None)
def test_incidence_matrix_is_functorial(pair: tuple[Substitution, Substitution]) -> None:
    f, g = pair
    assert incidence_matrix(compose(f, g)) == incidence_matrix(f) @ incidence_matrix(g)


@given(
    st.integers(min_value=-9, max_value=9).filter(bool),
    st.lists(st.integers(min_value=-9, max_value=9), max_size=6),
)
def test_reciprocal_is_an_involution(constant: int, rest: list[int]) -> None:
    xi = IntPoly((constant, *rest))
    assert reciprocal_poly(reciprocal_poly(xi)) == xi


@given(small_square)
@settings(max_examples=50, deadline=None)
def test_pseudodeterminant_of_powers(rows: list[list[int]]) -> None:
    m = IntMatrix.from_rows(rows)
    pdet = pseudodeterminant(m)
    for n in range(1, 5):
        assert abs(pseudodeterminant(m**n)) == abs(pdet) ** n
