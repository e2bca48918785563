"""The factor language of a primitive substitution.

Factor sets are computed exactly: the length-``n`` factors of the language are
the closure, under taking length-``n`` factors of images, of the length-``n``
factors of one long iterate ``φᵏ(a)``.
"""

import logging
from dataclasses import dataclass

from omega_nil import config
from omega_nil.errors import PreconditionError, RayLimitExceeded
from omega_nil.intlinalg import incidence_matrix, is_primitive_matrix
from omega_nil.words import Substitution, Word, text_to_word, word_to_text

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FactorSet:
    """All factors of length ``1..max_length`` of a substitution language."""

    max_length: int
    factors: frozenset[Word]

    def __contains__(self, word: object) -> bool:
        return word in self.factors

    def __len__(self) -> int:
        return len(self.factors)

    def of_length(self, k: int) -> list[Word]:
        """Length-``k`` factors in lexicographic order."""
        return sorted(w for w in self.factors if len(w) == k)


@dataclass(frozen=True)
class Periodic:
    period: Word


@dataclass(frozen=True)
class Aperiodic:
    pass


@dataclass(frozen=True)
class Unknown:
    bound: int


PeriodicityVerdict = Periodic | Aperiodic | Unknown


@dataclass(frozen=True)
class StructuralFlags:
    proper: bool
    constant_length: int | None


def is_primitive_substitution(s: Substitution) -> bool:
    return is_primitive_matrix(incidence_matrix(s))


def _require_primitive(s: Substitution) -> None:
    if not is_primitive_substitution(s):
        raise PreconditionError("Substitution is not primitive")


def _translation_table(s: Substitution) -> dict[int, str]:
    return {a: word_to_text(image) for a, image in enumerate(s.images)}


def _windows(text: str, n: int) -> set[str]:
    return {text[i : i + n] for i in range(len(text) - n + 1)}


def _factors_of_length(s: Substitution, n: int) -> set[str]:
    table = _translation_table(s)
    limit = config.get_ray_symbol_limit()
    seed = chr(0)
    while len(seed) < n:
        seed = seed.translate(table)
        if len(seed) > limit:
            raise RayLimitExceeded(f"Seed iterate exceeds {limit} symbols")

    found = _windows(seed, n)
    pending = list(found)
    while pending:
        image = pending.pop().translate(table)
        for factor in _windows(image, n):
            if factor not in found:
                found.add(factor)
                pending.append(factor)
    return found


def factors_up_to(s: Substitution, n: int) -> FactorSet:
    """Return every factor of length at most ``n`` of the language of ``s``.

    Raises:
        PreconditionError: If ``s`` is not primitive or ``n < 1``.
    """
    if n < 1:
        raise PreconditionError(f"Factor length must be positive, got {n}")
    _require_primitive(s)
    if s.alphabet.size == 1:
        return FactorSet(n, frozenset((0,) * k for k in range(1, n + 1)))

    longest = _factors_of_length(s, n)
    factors = {text_to_word(f[:k]) for f in longest for k in range(1, n + 1)}
    logger.debug("%d factors of length <= %d", len(factors), n)
    return FactorSet(n, frozenset(factors))


def complexity(s: Substitution, n: int) -> int:
    """Number of length-``n`` factors."""
    if n < 1:
        raise PreconditionError(f"Factor length must be positive, got {n}")
    _require_primitive(s)
    if s.alphabet.size == 1:
        return 1
    return len(_factors_of_length(s, n))


def default_periodicity_bound(s: Substitution) -> int:
    longest = s.max_image_length
    return s.alphabet.size * longest * longest + longest


def classify_periodicity(s: Substitution, bound: int | None = None) -> PeriodicityVerdict:
    """Decide periodicity by the Morse–Hedlund criterion ``p(n) <= n``.

    Complexities are scanned up to ``bound`` (the configured bound, else the
    default ``|A|·L² + L`` with ``L`` the longest image). The scan is decisive
    at or above the default; a lower bound may yield :class:`Unknown`.
    """
    _require_primitive(s)
    if s.alphabet.size == 1:
        return Periodic((0,))
    default = default_periodicity_bound(s)
    if bound is None:
        bound = config.get_periodicity_bound() or default

    factors = factors_up_to(s, bound)
    counts = [0] * (bound + 1)
    for w in factors.factors:
        counts[len(w)] += 1
    for n in range(1, bound + 1):
        if counts[n] <= n:
            q = counts[bound]
            period = factors.of_length(q)[0]
            logger.debug("periodic with period length %d (p(%d) = %d)", q, n, counts[n])
            return Periodic(period)
    if bound < default:
        return Unknown(bound)
    return Aperiodic()


def _merges(images: tuple[Word, ...], pick: int, steps: int) -> bool:
    letters = set(range(len(images)))
    for _ in range(steps):
        letters = {images[a][pick] for a in letters}
        if len(letters) == 1:
            return True
    return False


def structural_flags(s: Substitution) -> StructuralFlags:
    """Report properness and constant length.

    ``s`` is proper when some power sends every letter to a word with a common
    first letter and a common last letter.
    """
    steps = 2 * s.alphabet.size
    proper = _merges(s.images, 0, steps) and _merges(s.images, -1, steps)
    lengths = {len(image) for image in s.images}
    return StructuralFlags(proper, lengths.pop() if len(lengths) == 1 else None)
