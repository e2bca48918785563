"""The right action of free-group endomorphisms on ``H^A`` and quotient search.

A tuple ``t`` assigns a group element to each letter. ``t^e`` sends ``a`` to
the evaluation of ``e(a)`` under ``t``; this is a right action, so
``t^(e1∘e2) = (t^e1)^e2``. ``H`` is a continuous quotient of the group
presented by ``e`` iff some tuple whose entries generate ``H`` satisfies
``t^(eᵏ) = t`` for some ``k >= 1``.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass
from itertools import product

from omega_nil import config
from omega_nil.errors import PreconditionError
from omega_nil.finquot.groups import Element, FiniteGroup
from omega_nil.words import FreeGroupEndo, GroupWord

logger = logging.getLogger(__name__)

GroupTuple = tuple[Element, ...]


@dataclass(frozen=True)
class QuotientCertificate:
    """``t^(eᵏ) = t`` with ``{t(a)}`` generating a subgroup of ``generated_order``."""

    tuple_: GroupTuple
    period: int
    generated_order: int


@dataclass(frozen=True)
class NotFound:
    budget: int
    steps: int


@dataclass(frozen=True)
class Exhausted:
    tuples_examined: int


SearchResult = QuotientCertificate | NotFound | Exhausted


def evaluate(word: GroupWord, t: GroupTuple, group: FiniteGroup) -> Element:
    result = group.identity
    for letter, exponent in word.letters:
        factor = t[letter] if exponent == 1 else group.inv(t[letter])
        result = group.mul(result, factor)
    return result


def action_step(e: FreeGroupEndo, t: GroupTuple, group: FiniteGroup) -> GroupTuple:
    """Return ``t^e``."""
    if len(t) != e.alphabet.size:
        raise PreconditionError(
            f"Tuple has {len(t)} entries for {e.alphabet.size} letters"
        )
    return tuple(evaluate(image, t, group) for image in e.images)


def act(e: FreeGroupEndo, t: GroupTuple, group: FiniteGroup, k: int) -> GroupTuple:
    for _ in range(k):
        t = action_step(e, t, group)
    return t


def certificate_check(e: FreeGroupEndo, c: QuotientCertificate, group: FiniteGroup) -> bool:
    """Whether ``c`` proves ``group`` is a continuous quotient."""
    if c.period < 1 or act(e, c.tuple_, group, c.period) != c.tuple_:
        return False
    return group.generated_order(c.tuple_) == group.order


def _brent(f: Callable[[GroupTuple], GroupTuple], start: GroupTuple) -> tuple[GroupTuple, int, int]:
    """Return a point on the eventual cycle of ``start``, the cycle length and steps used."""
    power = lam = 1
    tortoise, hare = start, f(start)
    steps = 1
    while tortoise != hare:
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = f(hare)
        lam += 1
        steps += 1
    return hare, lam, steps


def quotient_search(
    e: FreeGroupEndo,
    group: FiniteGroup,
    budget: int | None = None,
    exhaustive: bool | None = None,
) -> SearchResult:
    """Look for a periodic generating tuple in ``group^A``.

    Seeds are tuples of elements ordered by decreasing element order. The
    search is exhaustive when asked for, or when ``|H|^|A|`` is at most the
    configured threshold; only then can it answer :class:`Exhausted`.
    Otherwise it stops with :class:`NotFound` once ``budget`` steps (seeds
    examined plus action applications) are spent.
    """
    letters = e.alphabet.size
    space = group.order**letters
    if exhaustive is None:
        exhaustive = space <= config.get_exhaustive_threshold()
    if budget is None:
        budget = config.get_search_budget()

    def step(t: GroupTuple) -> GroupTuple:
        return action_step(e, t, group)

    pool = None if exhaustive else max(1, round(budget ** (1 / letters)))
    seeds = group.seed_elements(pool)
    if len(seeds) < group.order:
        exhaustive = False
    generation: dict[frozenset[Element], int | None] = {}

    def generated(t: GroupTuple) -> int | None:
        key = frozenset(t)
        if key not in generation:
            generation[key] = group.generated_order(key)
        return generation[key]

    resolved: set[GroupTuple] = set()
    steps = examined = 0
    for seed in product(seeds, repeat=letters):
        if seed in resolved:
            continue
        if not exhaustive and steps > budget:
            return NotFound(budget, steps)
        examined += 1
        steps += 1
        if generated(seed) is None:
            exhaustive = False
        if generated(seed) != group.order:
            # Subgroups only shrink along an orbit.
            resolved.add(seed)
            continue
        point, period, used = _brent(step, seed)
        steps += used
        order = generated(point)
        if order == group.order:
            logger.debug("certificate after %d steps, period %d", steps, period)
            return QuotientCertificate(point, period, order)
        x = seed
        while x not in resolved:
            resolved.add(x)
            x = step(x)
            steps += 1
    if exhaustive:
        logger.debug("exhausted %d tuples of %d", examined, space)
        return Exhausted(space)
    return NotFound(budget, steps)
