"""Pronilpotent quotients and freeness tests from incidence matrices.

Every quantity here is read off the reciprocal characteristic polynomial of an
incidence matrix and its reductions modulo the primes dividing the
pseudodeterminant; the degree can only drop at those primes.
"""

import logging
from dataclasses import dataclass, field
from itertools import permutations

from sympy import factorint

from omega_nil.errors import AlgebraError, PreconditionError
from omega_nil.intlinalg import (
    IntMatrix,
    IntPoly,
    ModPoly,
    char_poly,
    incidence_matrix,
    is_nilpotent,
    pseudodeterminant,
    rank_mod_p,
    reciprocal_poly,
    reduce_mod_p,
    xi_pair,
)
from omega_nil.returns import (
    Connection,
    ReturnData,
    find_connections,
    return_substitution,
)
from omega_nil.shiftlang import (
    Periodic,
    classify_periodicity,
    is_primitive_substitution,
    structural_flags,
)
from omega_nil.words import Alphabet, FreeGroupEndo, Substitution, format_word

logger = logging.getLogger(__name__)

PERIODIC_CLASSIFICATION = "free profinite of rank 1"

Endomorphism = Substitution | FreeGroupEndo


def _rev_char_poly(m: IntMatrix) -> IntPoly:
    return reciprocal_poly(char_poly(m))


def _matrix_dimension_p(m: IntMatrix, p: int) -> int:
    chi_p = reduce_mod_p(char_poly(m), p)
    assert isinstance(chi_p, ModPoly)
    dimension = m.rows - chi_p.trailing_zeros()
    oracle = rank_mod_p(m**m.rows, p)
    if dimension != oracle:
        raise AlgebraError(
            f"Dimension formula gives {dimension} at p={p}, rank of M^d gives {oracle}"
        )
    return dimension


def dimension_p(e: Endomorphism, p: int) -> int:
    """Degree of the reciprocal characteristic polynomial of ``e`` modulo ``p``.

    Equal to the rank over Z/pZ of ``M^d``, which is checked.
    """
    return _matrix_dimension_p(incidence_matrix(e), p)


def _primes_of(n: int) -> list[int]:
    return sorted(factorint(abs(n))) if abs(n) > 1 else []


def _rank_phrase(rank: int) -> str:
    if rank == 0:
        return "trivial"
    if rank == 1:
        return "cyclic"
    return f"{rank}-generated"


@dataclass(frozen=True)
class PronilDescriptor:
    """The maximal pronilpotent quotient as a product of free pro-p groups.

    ``overrides`` maps the primes where the pro-p rank differs from
    ``generic_rank``; every such prime divides ``pdet``.
    """

    generic_rank: int
    overrides: dict[int, int] = field(default_factory=dict)
    source: str = "direct"
    pdet: int = 1

    def rank_at(self, p: int) -> int:
        return self.overrides.get(p, self.generic_rank)

    def pi_description(self) -> str:
        """The set of primes carrying the generic rank."""
        if not self.overrides:
            return "all primes"
        return "primes ≠ " + ", ".join(str(p) for p in sorted(self.overrides))

    def classification(self) -> str:
        d = self.generic_rank
        if d == 0 and not self.overrides:
            return "trivial"
        if not self.overrides:
            return f"free pronilpotent of rank {d}"
        if all(rank == 0 for rank in self.overrides.values()):
            return f"free pro-G_{{nil,π}} of rank {d}, π = {self.pi_description()}"
        return "not relatively free as pronilpotent group"

    def quotient_criterion(self) -> str:
        """When a pronilpotent group is a continuous quotient."""
        parts = [
            f"its {p}-Sylow subgroup is {_rank_phrase(rank)}"
            for p, rank in sorted(self.overrides.items())
        ]
        others = "all other" if self.overrides else "all"
        parts.append(f"{others} Sylow subgroups are {_rank_phrase(self.generic_rank)}")
        return "A pronilpotent group is a quotient iff " + ", ".join(parts)

    def procyclic_quotients(self) -> str:
        """Which groups of p-adic integers are quotients."""
        if self.generic_rank == 0:
            return "none (perfect)"
        excluded = sorted(p for p, rank in self.overrides.items() if rank == 0)
        if not excluded:
            return "Z_p for every prime p"
        return "Z_p for every prime p ≠ " + ", ".join(map(str, excluded))


def _descriptor_of(m: IntMatrix, source: str) -> PronilDescriptor:
    generic = _rev_char_poly(m).degree
    pdet = pseudodeterminant(m)
    overrides = {}
    for p in _primes_of(pdet):
        rank = _matrix_dimension_p(m, p)
        if rank != generic:
            overrides[p] = rank
    logger.debug("descriptor from %s: generic %d, overrides %s", source, generic, overrides)
    return PronilDescriptor(generic, overrides, source, pdet)


def pronil_descriptor(
    e: Endomorphism, source: str = "direct", *, presented: bool = False
) -> PronilDescriptor:
    """Describe the maximal pronilpotent quotient of the group presented by ``e``.

    A substitution must be primitive, aperiodic and proper unless ``presented``
    says it is already a return substitution (see :func:`presentation_endomorphism`).
    Free-group endomorphisms are taken as given.

    Raises:
        PreconditionError: If a substitution does not ω-present its group.
    """
    if isinstance(e, Substitution) and not presented:
        _require_aperiodic(e)
        if not structural_flags(e).proper:
            raise PreconditionError(
                "Substitution is not proper; use one of its return substitutions"
            )
    return _descriptor_of(incidence_matrix(e), source)


def perfectness_test(e: Endomorphism) -> bool:
    return is_nilpotent(incidence_matrix(e))


@dataclass(frozen=True)
class Presentation:
    endomorphism: Substitution
    source: str
    returns: ReturnData | None = None


def _require_aperiodic(s: Substitution) -> None:
    if not is_primitive_substitution(s):
        raise PreconditionError("Substitution is not primitive")
    if isinstance(classify_periodicity(s), Periodic):
        raise PreconditionError(
            f"Substitution is periodic; its group is {PERIODIC_CLASSIFICATION}"
        )


def presentation_endomorphism(
    s: Substitution, connection: Connection | None = None
) -> Presentation:
    """Pick an endomorphism ω-presenting the Schützenberger group of ``s``.

    Proper substitutions present their own group unless a connection is
    given; otherwise the return substitution of ``connection`` (or of the
    first connection found) is used.
    """
    _require_aperiodic(s)
    if connection is None and structural_flags(s).proper:
        return Presentation(s, "direct (proper substitution)")
    if connection is None:
        connections = find_connections(s)
        if not connections:
            raise PreconditionError("No connection found; raise max_connection_length")
        connection = connections[0]
    data = return_substitution(s, connection)
    assert data.derived is not None
    return Presentation(data.derived, _source_label(connection, s.alphabet), data)


def _source_label(c: Connection, alphabet: Alphabet) -> str:
    u, v = format_word(c.u, alphabet), format_word(c.v, alphabet)
    return f"return substitution at ({u}, {v})"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a necessary-condition test; ``witness`` re-verifies it."""

    established: bool
    witness: tuple[int, ...] = ()
    applicable: bool = True

    def label(self) -> str:
        if not self.applicable:
            return "n/a"
        return "established" if self.established else "inconclusive"


@dataclass(frozen=True)
class FreenessReport:
    perfect: bool
    not_absolutely_free: Verdict
    not_relatively_free: Verdict
    weak_test: Verdict
    constant_length: Verdict
    descriptor: PronilDescriptor


def _relative_witness(m: IntMatrix) -> Verdict:
    generic = _rev_char_poly(m).degree
    for p in _primes_of(pseudodeterminant(m)):
        if 0 < _matrix_dimension_p(m, p) < generic:
            return Verdict(True, (p,))
    return Verdict(False)


def _weak_witness(m: IntMatrix) -> Verdict:
    generic = _rev_char_poly(m).degree
    degrees = {p: _matrix_dimension_p(m, p) for p in _primes_of(pseudodeterminant(m))}
    for p1, p2 in permutations(sorted(degrees), 2):
        if degrees[p1] < degrees[p2] < generic:
            return Verdict(True, (p1, p2))
    return Verdict(False)


def freeness_report(
    s: Substitution,
    c: Connection | None = None,
    presentation: Presentation | None = None,
) -> FreenessReport:
    """Run the absolute, relative, weak and constant-length freeness tests.

    The relative test and the descriptor use ``presentation`` when given,
    else :func:`presentation_endomorphism` of ``s`` and ``c``.

    Raises:
        PreconditionError: If ``s`` is not primitive or is periodic.
    """
    if presentation is None:
        presentation = presentation_endomorphism(s, c)
    m_s = incidence_matrix(s)
    m_presentation = incidence_matrix(presentation.endomorphism)
    pdet = pseudodeterminant(m_s)

    absolute = Verdict(abs(pdet) != 1, (pdet,) if abs(pdet) != 1 else ())
    length = structural_flags(s).constant_length
    constant = (
        Verdict(True, (length,)) if length is not None else Verdict(False, applicable=False)
    )
    return FreenessReport(
        perfect=is_nilpotent(m_presentation),
        not_absolutely_free=absolute,
        not_relatively_free=_relative_witness(m_presentation),
        weak_test=_weak_witness(m_s),
        constant_length=constant,
        descriptor=_descriptor_of(m_presentation, presentation.source),
    )


def m_phi(s: Substitution, c: Connection, returns: ReturnData | None = None) -> int:
    """Degree difference of the reciprocal polynomials of return substitution and ``s``.

    The same difference must hold modulo every prime dividing either
    pseudodeterminant, and must equal ``deg ξ₁ - deg ξ₂``.

    Raises:
        AlgebraError: If the prime-wise or ξ-pair checks disagree.
    """
    _require_aperiodic(s)
    data = returns or return_substitution(s, c)
    assert data.derived is not None
    m_s = incidence_matrix(s)
    m_ret = incidence_matrix(data.derived)
    rev_s, rev_ret = _rev_char_poly(m_s), _rev_char_poly(m_ret)
    difference = rev_ret.degree - rev_s.degree

    primes = set(_primes_of(pseudodeterminant(m_s))) | set(
        _primes_of(pseudodeterminant(m_ret))
    )
    for p in sorted(primes):
        local = _matrix_dimension_p(m_ret, p) - _matrix_dimension_p(m_s, p)
        if local != difference:
            raise AlgebraError(f"m_phi is {difference} but {local} at p={p}")

    rev_power = _rev_char_poly(m_s**c.order)
    xi1, xi2 = xi_pair(rev_power, rev_ret)
    if xi1.degree - xi2.degree != difference - (rev_power.degree - rev_s.degree):
        raise AlgebraError(f"deg ξ₁ - deg ξ₂ disagrees with m_phi = {difference}")
    return difference


@dataclass(frozen=True)
class FlowInvariants:
    """Generic degree plus the degree at each prime dividing the pseudodeterminant."""

    generic_degree: int
    prime_degrees: tuple[tuple[int, int], ...]
    pdet_primes: frozenset[int]

    def degree_at(self, p: int) -> int:
        return dict(self.prime_degrees).get(p, self.generic_degree)


def flow_invariants(
    s: Substitution, c: Connection, returns: ReturnData | None = None
) -> FlowInvariants:
    """Flow-equivalence invariants read off the return substitution of ``c``."""
    _require_aperiodic(s)
    data = returns or return_substitution(s, c)
    assert data.derived is not None
    m_ret = incidence_matrix(data.derived)
    generic = _rev_char_poly(m_ret).degree
    primes = _primes_of(pseudodeterminant(m_ret))
    degrees = tuple((p, _matrix_dimension_p(m_ret, p)) for p in primes)
    return FlowInvariants(generic, degrees, frozenset(primes))
