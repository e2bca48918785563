"""Connections, return words and return substitutions.

Words are handled as strings of code points so that powers of the
substitution can be applied with :meth:`str.translate` and occurrences found
with :meth:`str.find`.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass
from itertools import pairwise
from math import lcm

from omega_nil import config
from omega_nil.errors import AlgebraError, PreconditionError, RayLimitExceeded
from omega_nil.intlinalg import incidence_matrix
from omega_nil.shiftlang import factors_up_to, is_primitive_substitution
from omega_nil.words import (
    Alphabet,
    MonoidHom,
    Substitution,
    Word,
    text_to_word,
    word_to_text,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Connection:
    """A pair ``(u, v)`` with ``uv`` a factor, ``φⁿ(u) ∈ A*u`` and ``φⁿ(v) ∈ vA*``.

    ``order`` is the least such ``n``.
    """

    u: Word
    v: Word
    order: int


@dataclass(frozen=True)
class ReturnData:
    connection: Connection
    returns: tuple[Word, ...]
    theta: MonoidHom
    derived: Substitution | None = None


def middle_letters(c: Connection) -> tuple[int, int]:
    """The last letter of ``u`` and the first letter of ``v``.

    Connections with the same middle letters have return substitutions with
    the same reciprocal characteristic polynomial.
    """
    return c.u[-1], c.v[0]


def _orbit_period(start: Word, step: Callable[[Word], Word]) -> int | None:
    seen = {start}
    current = start
    k = 0
    while True:
        current = step(current)
        k += 1
        if current == start:
            return k
        if current in seen:
            return None
        seen.add(current)


def _periods(s: Substitution, u: Word, v: Word) -> tuple[int | None, int | None]:
    m, k = len(u), len(v)
    suffix = _orbit_period(u, lambda x: s(x)[-m:])
    prefix = _orbit_period(v, lambda x: s(x)[:k])
    return suffix, prefix


def connection_order(s: Substitution, u: Word, v: Word) -> int | None:
    """Return the order of ``(u, v)``, or ``None`` if it is not a connection."""
    if not u or not v:
        return None
    s.alphabet.check_word(u + v)
    if u + v not in factors_up_to(s, len(u) + len(v)):
        return None
    suffix, prefix = _periods(s, u, v)
    if suffix is None or prefix is None:
        return None
    return lcm(suffix, prefix)


def find_connections(s: Substitution, max_word_len: int | None = None) -> list[Connection]:
    """Every connection with ``|u|, |v| <= max_word_len``.

    Sorted by ``|u| + |v|``, then ``u``, then ``v``. ``max_word_len`` defaults
    to the configured ``max_connection_length``.
    """
    if max_word_len is None:
        max_word_len = config.get_max_connection_length()
    if max_word_len < 1:
        raise PreconditionError(f"max_word_len must be positive, got {max_word_len}")
    if not is_primitive_substitution(s):
        raise PreconditionError("Substitution is not primitive")

    factors = factors_up_to(s, 2 * max_word_len)
    found = []
    for lu in range(1, max_word_len + 1):
        for lv in range(1, max_word_len + 1):
            for u in factors.of_length(lu):
                for v in factors.of_length(lv):
                    if u + v not in factors:
                        continue
                    suffix, prefix = _periods(s, u, v)
                    if suffix is not None and prefix is not None:
                        found.append(Connection(u, v, lcm(suffix, prefix)))
    found.sort(key=lambda c: (len(c.u) + len(c.v), c.u, c.v))
    logger.debug("found %d connections up to length %d", len(found), max_word_len)
    return found


def _validate(s: Substitution, c: Connection) -> None:
    if not is_primitive_substitution(s):
        raise PreconditionError("Substitution is not primitive")
    order = connection_order(s, c.u, c.v)
    if order != c.order:
        raise PreconditionError(
            f"({c.u}, {c.v}) with order {c.order} is not a connection "
            f"(computed order: {order})"
        )


def _power_table(s: Substitution, n: int, limit: int) -> dict[int, str]:
    base = {a: word_to_text(image) for a, image in enumerate(s.images)}
    table = {a: chr(a) for a in s.alphabet.letters}
    for _ in range(n):
        table = {a: text.translate(base) for a, text in table.items()}
        if any(len(text) > limit for text in table.values()):
            raise RayLimitExceeded(f"Letter images exceed {limit} symbols")
    return table


def _occurrences(text: str, pattern: str) -> list[int]:
    positions = []
    pos = text.find(pattern)
    while pos != -1:
        positions.append(pos)
        pos = text.find(pattern, pos + 1)
    return positions


def _first_return(u: str, v: str, table: dict[int, str], limit: int) -> str:
    """The first return word along the ray ``u·ψ^∞(v)``."""
    uv = u + v
    tail = v
    while True:
        ray = u + tail
        j = ray.find(uv, 1)
        if j != -1:
            return ray[len(u) : j + len(u)]
        grown = tail.translate(table)
        if len(grown) <= len(tail):
            raise AlgebraError("The ray u·ψ^∞(v) does not grow")
        if len(grown) > limit:
            raise RayLimitExceeded(f"Ray prefix exceeds {limit} symbols")
        tail = grown


def _decompose(text: str, uv: str, len_u: int) -> list[str]:
    positions = _occurrences(text, uv)
    if not positions or positions[0] != 0 or positions[-1] != len(text) - len(uv):
        raise AlgebraError("Image does not start and end with an occurrence of uv")
    return [text[p + len_u : q + len_u] for p, q in pairwise(positions)]


def _return_system(s: Substitution, c: Connection) -> tuple[list[str], list[list[int]]]:
    """Return words in fixed-point order and the induced images."""
    limit = config.get_ray_symbol_limit()
    table = _power_table(s, c.order, limit)
    lengths = {a: len(text) for a, text in table.items()}
    u, v = word_to_text(c.u), word_to_text(c.v)
    uv = u + v

    first = _first_return(u, v, table, limit)
    ids = {first: 0}
    words = [first]
    images: list[list[int]] = []
    while len(images) < len(words):
        r = words[len(images)]
        size = len(uv) + sum(lengths[ord(ch)] for ch in r)
        if size > limit:
            raise RayLimitExceeded(f"Image of a return word has {size} symbols (limit {limit})")
        image = []
        for segment in _decompose(u + r.translate(table) + v, uv, len(u)):
            if segment not in ids:
                ids[segment] = len(words)
                words.append(segment)
            image.append(ids[segment])
        images.append(image)

    order = _fixed_point_order(images)
    rank = {old: new for new, old in enumerate(order)}
    returns = [words[old] for old in order]
    derived = [[rank[x] for x in images[old]] for old in order]
    logger.debug(
        "%d return words to (%s, %s), lengths %d..%d",
        len(returns),
        c.u,
        c.v,
        min(map(len, returns)),
        max(map(len, returns)),
    )
    return returns, derived


def _fixed_point_order(images: list[list[int]]) -> list[int]:
    """Letters in order of first appearance in the fixed point starting with 0."""
    sequence = list(images[0])
    if not sequence or sequence[0] != 0:
        raise AlgebraError("Image of the first return word does not start with it")
    order = list(dict.fromkeys(sequence))
    seen = set(order)
    i = 1
    while len(order) < len(images):
        if i >= len(sequence):
            raise AlgebraError("Fixed point misses some return words")
        for x in images[sequence[i]]:
            if x not in seen:
                seen.add(x)
                order.append(x)
        sequence.extend(images[sequence[i]])
        i += 1
    return order


def _return_data(s: Substitution, c: Connection, derived: list[list[int]], returns: list[str]) -> ReturnData:
    derived_alphabet = Alphabet(len(returns))
    theta = MonoidHom(derived_alphabet, s.alphabet, tuple(text_to_word(r) for r in returns))
    return ReturnData(
        connection=c,
        returns=theta.images,
        theta=theta,
        derived=Substitution(derived_alphabet, tuple(tuple(im) for im in derived)),
    )


def return_words(s: Substitution, c: Connection) -> ReturnData:
    """The return words to ``c``, ordered by leftmost occurrence in ``u·φ^{nl}(v)``.

    The returned data carries ``theta`` but no derived substitution.

    Raises:
        PreconditionError: If ``c`` is not a connection of ``s``.
    """
    _validate(s, c)
    returns, derived = _return_system(s, c)
    data = _return_data(s, c, derived, returns)
    return ReturnData(c, data.returns, data.theta)


def return_substitution(s: Substitution, c: Connection) -> ReturnData:
    """The return substitution ``σ`` defined by ``φⁿ∘θ = θ∘σ``.

    Raises:
        PreconditionError: If ``c`` is not a connection of ``s``.
        AlgebraError: If the conjugacy, matrix intertwining or primitivity
            check fails.
    """
    _validate(s, c)
    returns, derived = _return_system(s, c)
    data = _return_data(s, c, derived, returns)
    assert data.derived is not None

    table = _power_table(s, c.order, config.get_ray_symbol_limit())
    for i, r in enumerate(returns):
        if r.translate(table) != "".join(returns[x] for x in derived[i]):
            raise AlgebraError(f"φⁿ(θ({i})) != θ(σ({i}))")
    m_theta = incidence_matrix(data.theta)
    if (incidence_matrix(s) ** c.order) @ m_theta != m_theta @ incidence_matrix(data.derived):
        raise AlgebraError("Incidence matrices do not intertwine")
    if not is_primitive_substitution(data.derived):
        raise AlgebraError("Return substitution is not primitive")
    return data


def scan_return_words(s: Substitution, c: Connection, l: int) -> tuple[Word, ...]:
    """Return words read off the materialized word ``u·φ^{nl}(v)``.

    Only the return words occurring in that finite word are listed, in order
    of first occurrence.
    """
    if l < 1:
        raise PreconditionError(f"l must be positive, got {l}")
    _validate(s, c)
    limit = config.get_ray_symbol_limit()
    table = _power_table(s, c.order, limit)
    u, v = word_to_text(c.u), word_to_text(c.v)
    tail = v
    for _ in range(l):
        tail = tail.translate(table)
        if len(tail) > limit:
            raise RayLimitExceeded(f"u·φ^(nl)(v) exceeds {limit} symbols")
    text = u + tail
    positions = _occurrences(text, u + v)
    found = dict.fromkeys(text[p + len(u) : q + len(u)] for p, q in pairwise(positions))
    return tuple(text_to_word(r) for r in found)
