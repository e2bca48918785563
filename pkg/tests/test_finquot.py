"""Tests for omega_nil.finquot: fields, groups, the action on H^A and quotient search."""

from pathlib import Path

import pluggy
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pytest_mock import MockerFixture
from sympy.combinatorics import Permutation

from omega_nil.errors import AlgebraError, GroupSpecError, PreconditionError
from omega_nil.finquot import (
    SL2,
    Exhausted,
    FiniteGroup,
    NotFound,
    PermGroup,
    QuotientCertificate,
    action_step,
    certificate_check,
    parse_group_spec,
    quotient_search,
    sl2_over_gf2n,
)
from omega_nil.finquot._hookspec import hookimpl
from omega_nil.finquot.action import act
from omega_nil.finquot.fields import GF2n, gf2n
from omega_nil.finquot.groups import Element, Matrix2
from omega_nil.finquot.plugin import plugin_manager
from omega_nil.returns import Connection, return_substitution
from omega_nil.words import FreeGroupEndo, Substitution, compose, parse_endomorphism

G = 2  # the class of x in GF(4)
SL2_F4 = sl2_over_gf2n(2)
U = SL2_F4.matrix(1, 1, 1, 0)
V = SL2_F4.matrix(0, 1, 1, G)
F4_ELEMENTS = list(SL2_F4.elements())
PSI = parse_endomorphism("0 -> 0 1 0' 1'\n1 -> 0")
TAU = FreeGroupEndo.from_substitution(Substitution.from_images([(0, 1), (1, 0)]))


def negative_presentation(negative: Substitution) -> FreeGroupEndo:
    data = return_substitution(negative, Connection((0,), (1,), 1))
    assert data.derived is not None
    return FreeGroupEndo.from_substitution(data.derived)


# === Tests for GF(2^n) ===


@pytest.mark.parametrize("n", range(1, 13))
def test_field_sizes(n: int) -> None:
    field = gf2n(n)
    assert field.size == 2**n
    assert field.pow(field.generator, field.size - 1) == 1


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_field_inverses(n: int) -> None:
    field = gf2n(n)
    assert all(field.mul(a, field.inv(a)) == 1 for a in range(1, field.size))


@given(st.integers(min_value=0, max_value=255), st.integers(min_value=0, max_value=255),
       st.integers(min_value=0, max_value=255))
def test_field_distributes(a: int, b: int, c: int) -> None:
    field = gf2n(8)
    assert field.mul(a, field.add(b, c)) == field.add(field.mul(a, b), field.mul(a, c))


def test_field_polynomial_rendering() -> None:
    assert gf2n(2).polynomial_str() == "x^2 + x + 1"


def test_field_rejects_large_degree() -> None:
    with pytest.raises(PreconditionError, match="1 <= n <= 12"):
        GF2n(13)


def test_zero_has_no_inverse() -> None:
    with pytest.raises(ZeroDivisionError):
        gf2n(3).inv(0)


# === Tests for SL2 ===


@pytest.mark.parametrize(("n", "order"), [(1, 6), (2, 60), (3, 504)])
def test_sl2_enumeration(n: int, order: int) -> None:
    group = sl2_over_gf2n(n)
    elements = list(group.elements())
    assert group.order == order
    assert len(set(elements)) == order
    assert all(group.matrix(*x) == x for x in elements)


def test_sl2_rejects_singular_matrix() -> None:
    with pytest.raises(PreconditionError, match="determinant"):
        SL2_F4.matrix(1, 1, 1, 1)


def test_sl2_inverse() -> None:
    assert all(SL2_F4.mul(x, SL2_F4.inv(x)) == SL2_F4.identity for x in F4_ELEMENTS)


def test_sl2_element_orders_match_iteration() -> None:
    orders = {SL2_F4.element_order(x) for x in F4_ELEMENTS}
    assert orders == {1, 2, 3, 5}
    assert all(
        SL2_F4.element_order(x) == FiniteGroup.element_order(SL2_F4, x) for x in F4_ELEMENTS
    )


@pytest.mark.parametrize("n", [1, 3])
def test_sl2_orders_by_trace_match_iteration(n: int) -> None:
    group = sl2_over_gf2n(n)
    assert all(
        group.element_order(x) == FiniteGroup.element_order(group, x)
        for x in group.elements()
    )


def test_sl2_name_and_description() -> None:
    assert SL2_F4.name == "SL2(F_4)"
    assert SL2_F4.describe(V) == [[0, 1], [1, 2]]


def test_generated_order() -> None:
    assert SL2_F4.generated_order([U, V]) == 60
    assert SL2_F4.generated_order([U]) == 3
    assert SL2_F4.generated_order([]) == 1


def test_generated_order_gives_up_past_closure_limit(isolated_config: Path) -> None:
    isolated_config.write_text("closure_limit: 10\n")
    assert SL2_F4.generated_order([U, V]) is None


def test_seed_elements_by_decreasing_order() -> None:
    seeds = SL2_F4.seed_elements()
    orders = [SL2_F4.element_order(x) for x in seeds]
    assert len(seeds) == 60
    assert orders == sorted(orders, reverse=True)


def test_seed_prefix_is_ranked_over_the_whole_group() -> None:
    seeds = SL2_F4.seed_elements(7)
    assert len(seeds) == 7
    assert {SL2_F4.element_order(x) for x in seeds} == {5}


def test_seed_ranking_stops_at_closure_limit(isolated_config: Path) -> None:
    isolated_config.write_text("closure_limit: 10\n")
    assert SL2_F4.seed_elements() == sorted(
        F4_ELEMENTS[:10], key=lambda x: -SL2_F4.element_order(x)
    )


class _LopsidedSL2(SL2):
    def mul(self, x: Element, y: Element) -> Matrix2:
        return super().mul(super().mul(x, y), y)


class _SelfInversePerms(PermGroup):
    def inv(self, a: Element) -> Permutation:
        return a  # type: ignore[return-value]


def test_broken_multiplication_is_rejected() -> None:
    with pytest.raises(AlgebraError, match="identity law"):
        _LopsidedSL2(2)


def test_broken_inverse_is_rejected() -> None:
    with pytest.raises(AlgebraError, match="bad inverse"):
        _SelfInversePerms([Permutation([[0, 1, 2]], size=3)], 3, "perm:(0 1 2)")


# === Tests for the action on H^A ===


def test_psi_action_step(psi: FreeGroupEndo) -> None:
    commutator = SL2_F4.mul(
        SL2_F4.mul(U, V), SL2_F4.mul(SL2_F4.inv(U), SL2_F4.inv(V))
    )
    assert action_step(psi, (U, V), SL2_F4) == (commutator, U)


def test_psi_square_conjugates_by_w(psi: FreeGroupEndo) -> None:
    # w = [[g, 1], [0, 1]] has determinant g; conjugate by hand
    f = SL2_F4.field
    g_inv = f.inv(G)
    w = (G, 1, 0, 1)
    w_inv = (g_inv, g_inv, 0, 1)

    def conj(x: tuple[int, int, int, int]) -> object:
        return SL2_F4.mul(SL2_F4.mul(w, x), w_inv)

    assert act(psi, (U, V), SL2_F4, 2) == (conj(U), conj(V))


def test_action_rejects_wrong_arity(psi: FreeGroupEndo) -> None:
    with pytest.raises(PreconditionError, match="entries"):
        action_step(psi, (U,), SL2_F4)


@given(st.sampled_from(F4_ELEMENTS), st.sampled_from(F4_ELEMENTS))
@settings(max_examples=30)
def test_action_is_a_right_action(x: object, y: object) -> None:
    t = (x, y)
    assert action_step(compose(PSI, TAU), t, SL2_F4) == action_step(
        TAU, action_step(PSI, t, SL2_F4), SL2_F4
    )


# === Tests for certificate_check ===


def test_psi_certificate_over_f4(psi: FreeGroupEndo) -> None:
    assert certificate_check(psi, QuotientCertificate((U, V), 6, 60), SL2_F4)


def test_certificate_needs_the_period(psi: FreeGroupEndo) -> None:
    assert not certificate_check(psi, QuotientCertificate((U, V), 2, 60), SL2_F4)
    assert not certificate_check(psi, QuotientCertificate((U, V), 0, 60), SL2_F4)


def test_certificate_needs_generation(psi: FreeGroupEndo) -> None:
    e = SL2_F4.identity
    assert not certificate_check(psi, QuotientCertificate((e, e), 1, 1), SL2_F4)


# === Tests for quotient_search ===


def test_search_finds_sl2_f4(psi: FreeGroupEndo) -> None:
    result = quotient_search(psi, SL2_F4)
    assert isinstance(result, QuotientCertificate)
    assert result.generated_order == 60
    assert certificate_check(psi, result, SL2_F4)


def test_perfect_presentation_has_no_cyclic_quotient(psi: FreeGroupEndo) -> None:
    assert quotient_search(psi, parse_group_spec("perm:(0 1)")) == Exhausted(4)


@pytest.mark.parametrize(
    "spec", ["perm:(0 1 2)", "perm:(0 1),(2 3)", "perm:(0 1 2 3)", "perm:(0 1 2 3 4)"]
)
def test_perfect_presentation_has_no_abelian_quotient(psi: FreeGroupEndo, spec: str) -> None:
    group = parse_group_spec(spec)
    assert quotient_search(psi, group) == Exhausted(group.order**2)


def test_search_finds_abelian_quotient(negative: Substitution) -> None:
    z2 = parse_group_spec("perm:(0 1)")
    e = negative_presentation(negative)
    result = quotient_search(e, z2)
    assert isinstance(result, QuotientCertificate)
    assert result.period == 1
    assert certificate_check(e, result, z2)


def test_trivial_three_sylow_rules_out_z3(negative: Substitution) -> None:
    z3 = parse_group_spec("perm:(0 1 2)")
    assert isinstance(quotient_search(negative_presentation(negative), z3), Exhausted)


def test_search_stops_at_budget(psi: FreeGroupEndo) -> None:
    result = quotient_search(psi, SL2_F4, budget=1, exhaustive=False)
    assert isinstance(result, NotFound)
    assert result.budget == 1


def test_large_space_is_not_exhaustive(psi: FreeGroupEndo, isolated_config: Path) -> None:
    isolated_config.write_text("exhaustive_threshold: 1\n")
    assert isinstance(quotient_search(psi, parse_group_spec("perm:(0 1)")), NotFound)


@pytest.mark.slow
def test_search_finds_sl2_f8(psi: FreeGroupEndo) -> None:
    group = sl2_over_gf2n(3)
    result = quotient_search(psi, group, exhaustive=True)
    assert isinstance(result, QuotientCertificate)
    assert certificate_check(psi, result, group)


# === Tests for group specs and providers ===


def test_parse_sl2_spec() -> None:
    group = parse_group_spec("sl2:3")
    assert isinstance(group, SL2)
    assert group.order == 504


def test_parse_perm_spec() -> None:
    group = parse_group_spec("perm:(0 1 2),(0 1)")
    assert isinstance(group, PermGroup)
    assert group.order == 6
    assert group.describe(group.identity) == "()"


@pytest.mark.parametrize(
    "spec", ["sl2:x", "sl2:13", "perm:(0 0)", "perm:abc", "dihedral:4"]
)
def test_bad_group_specs(spec: str) -> None:
    with pytest.raises(GroupSpecError):
        parse_group_spec(spec)


class _CyclicProvider:
    @hookimpl
    def fq_parse_group(self, spec: str) -> FiniteGroup | None:
        if spec != "cyclic:3":
            return None
        return parse_group_spec("perm:(0 1 2)")


def test_third_party_provider(mocker: MockerFixture) -> None:
    pm = plugin_manager()
    pm.register(_CyclicProvider(), name="cyclic")
    mocker.patch("omega_nil.finquot.plugin.plugin_manager", return_value=pm)
    assert parse_group_spec("cyclic:3").order == 3


def test_builtin_providers_registered() -> None:
    pm = plugin_manager()
    assert isinstance(pm, pluggy.PluginManager)
    assert pm.get_plugin("sl2") is not None
    assert pm.get_plugin("perm") is not None
