"""Alphabets, words, substitutions and free-group words.

Letters are dense indices ``0..size-1``; display names are metadata used only
when parsing and rendering. All values are immutable.
"""

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import chain

from omega_nil.errors import ParseError, PreconditionError

Word = tuple[int, ...]
SignedLetter = tuple[int, int]

_RULE_RE = re.compile(r"^(?P<lhs>.*?)->(?P<rhs>.*)$")
_SYMBOL_RE = re.compile(r"\s*(?:`(?P<name>[^`]+)`|(?P<char>[^\s`']))(?P<inv>'?)")


@dataclass(frozen=True)
class Alphabet:
    """A finite alphabet ``0..size-1`` with optional display names."""

    size: int
    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.size < 1:
            raise PreconditionError(f"Alphabet size must be positive, got {self.size}")
        if not self.names:
            object.__setattr__(self, "names", tuple(str(i) for i in range(self.size)))
        if len(self.names) != self.size:
            raise PreconditionError(
                f"Expected {self.size} display names, got {len(self.names)}"
            )
        if len(set(self.names)) != self.size:
            raise PreconditionError(f"Display names must be unique: {self.names}")

    @property
    def letters(self) -> range:
        return range(self.size)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def check_word(self, word: Iterable[int]) -> None:
        for letter in word:
            if not 0 <= letter < self.size:
                raise PreconditionError(
                    f"Letter {letter} outside alphabet of size {self.size}"
                )


@dataclass(frozen=True)
class Substitution:
    """An endomorphism of the free monoid sending every letter to a non-empty word."""

    alphabet: Alphabet
    images: tuple[Word, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.alphabet.size:
            raise PreconditionError(
                f"Expected {self.alphabet.size} images, got {len(self.images)}"
            )
        for letter, image in enumerate(self.images):
            if not image:
                raise PreconditionError(
                    f"Image of '{self.alphabet.names[letter]}' is empty"
                )
            self.alphabet.check_word(image)

    @classmethod
    def from_images(cls, images: Sequence[Sequence[int]]) -> "Substitution":
        """Build a substitution over ``0..len(images)-1`` with default names."""
        return cls(Alphabet(len(images)), tuple(tuple(image) for image in images))

    def __call__(self, word: Word) -> Word:
        return tuple(chain.from_iterable(self.images[a] for a in word))

    @property
    def max_image_length(self) -> int:
        return max(len(image) for image in self.images)

    @property
    def min_image_length(self) -> int:
        return min(len(image) for image in self.images)


@dataclass(frozen=True)
class MonoidHom:
    """A homomorphism ``B* -> A*`` between free monoids, e.g. a coding morphism."""

    source: Alphabet
    target: Alphabet
    images: tuple[Word, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.source.size:
            raise PreconditionError(
                f"Expected {self.source.size} images, got {len(self.images)}"
            )
        for image in self.images:
            self.target.check_word(image)

    def __call__(self, word: Word) -> Word:
        return tuple(chain.from_iterable(self.images[b] for b in word))


def _free_reduce(letters: Iterable[SignedLetter]) -> tuple[SignedLetter, ...]:
    stack: list[SignedLetter] = []
    for letter, exponent in letters:
        if exponent not in (1, -1):
            raise PreconditionError(f"Exponent must be +1 or -1, got {exponent}")
        if stack and stack[-1] == (letter, -exponent):
            stack.pop()
        else:
            stack.append((letter, exponent))
    return tuple(stack)


@dataclass(frozen=True)
class GroupWord:
    """A freely reduced element of the free group, as signed letters."""

    letters: tuple[SignedLetter, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", _free_reduce(self.letters))

    @classmethod
    def from_word(cls, word: Word) -> "GroupWord":
        return cls(tuple((a, 1) for a in word))

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple((a, -e) for a, e in reversed(self.letters)))


@dataclass(frozen=True)
class FreeGroupEndo:
    """An endomorphism of the free group over ``alphabet``."""

    alphabet: Alphabet
    images: tuple[GroupWord, ...] = field(default=())

    def __post_init__(self) -> None:
        if len(self.images) != self.alphabet.size:
            raise PreconditionError(
                f"Expected {self.alphabet.size} images, got {len(self.images)}"
            )
        for image in self.images:
            self.alphabet.check_word(a for a, _ in image.letters)

    @classmethod
    def from_substitution(cls, s: Substitution) -> "FreeGroupEndo":
        """View a substitution as an endomorphism of the free group."""
        return cls(s.alphabet, tuple(GroupWord.from_word(im) for im in s.images))

    @classmethod
    def identity(cls, alphabet: Alphabet) -> "FreeGroupEndo":
        return cls(alphabet, tuple(GroupWord(((a, 1),)) for a in alphabet.letters))

    def __call__(self, word: GroupWord) -> GroupWord:
        out: list[SignedLetter] = []
        for letter, exponent in word.letters:
            image = self.images[letter]
            out.extend(image.letters if exponent == 1 else image.inverse().letters)
        return GroupWord(tuple(out))


# ── Parsing and rendering ───────────────────────────────────────────


def _tokenize(
    text: str, lineno: int, *, allow_inverse: bool
) -> list[tuple[str, int]]:
    tokens: list[tuple[str, int]] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _SYMBOL_RE.match(text, pos)
        if match is None:
            raise ParseError(f"Cannot read symbol at '{text[pos:]}' on line {lineno}")
        symbol = match.group("name") or match.group("char")
        if match.group("inv") and not allow_inverse:
            raise ParseError(
                f"Inverse marker after '{symbol}' on line {lineno} "
                "is only allowed in free-group endomorphisms"
            )
        tokens.append((symbol, -1 if match.group("inv") else 1))
        pos = match.end()
    return tokens


def _strip_comment(line: str) -> str:
    """Drop a ``#`` comment; a ``#`` inside backticks is part of a name."""
    quoted = False
    for i, ch in enumerate(line):
        if ch == "`":
            quoted = not quoted
        elif ch == "#" and not quoted:
            return line[:i]
    return line


def _parse_rules(
    text: str, *, allow_inverse: bool
) -> tuple[Alphabet, list[list[tuple[int, int]]]]:
    lhs_names: list[str] = []
    raw_images: list[tuple[int, list[tuple[str, int]]]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = _strip_comment(line)
        if not line.strip():
            continue
        match = _RULE_RE.match(line)
        if match is None:
            raise ParseError(f"Expected '<symbol> -> <symbols>' on line {lineno}")
        lhs = _tokenize(match.group("lhs"), lineno, allow_inverse=False)
        if len(lhs) != 1:
            raise ParseError(
                f"Left-hand side on line {lineno} must be a single symbol"
            )
        name = lhs[0][0]
        if name in lhs_names:
            raise ParseError(f"Duplicate left-hand side '{name}' on line {lineno}")
        lhs_names.append(name)
        raw_images.append(
            (lineno, _tokenize(match.group("rhs"), lineno, allow_inverse=allow_inverse))
        )
    if not lhs_names:
        raise ParseError("No rules found")

    alphabet = Alphabet(len(lhs_names), tuple(lhs_names))
    images: list[list[tuple[int, int]]] = []
    for lineno, tokens in raw_images:
        image = []
        for symbol, exponent in tokens:
            if symbol not in lhs_names:
                raise ParseError(
                    f"Unknown symbol '{symbol}' on right-hand side of line {lineno}"
                )
            image.append((alphabet.index(symbol), exponent))
        images.append(image)
    return alphabet, images


def parse_substitution(text: str) -> Substitution:
    """Parse ``<symbol> -> <symbols>`` rules into a substitution.

    Letters are numbered in first-appearance order of left-hand sides.

    Raises:
        ParseError: On duplicate left-hand sides, empty images or unknown
            right-hand-side symbols.
    """
    alphabet, images = _parse_rules(text, allow_inverse=False)
    for letter, image in enumerate(images):
        if not image:
            raise ParseError(f"Empty image for '{alphabet.names[letter]}'")
    return Substitution(alphabet, tuple(tuple(a for a, _ in im) for im in images))


def parse_endomorphism(text: str) -> FreeGroupEndo:
    """Parse free-group rules where a ``'`` suffix marks a formal inverse."""
    alphabet, images = _parse_rules(text, allow_inverse=True)
    return FreeGroupEndo(alphabet, tuple(GroupWord(tuple(im)) for im in images))


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """Read a positive word written with the display names of ``alphabet``."""
    word = []
    for symbol, _ in _tokenize(text, 1, allow_inverse=False):
        if symbol not in alphabet.names:
            raise ParseError(f"Unknown symbol '{symbol}' in word '{text}'")
        word.append(alphabet.index(symbol))
    return tuple(word)


def _symbol(name: str) -> str:
    return name if len(name) == 1 and name not in "`'#" else f"`{name}`"


def format_word(word: Word, alphabet: Alphabet) -> str:
    return "".join(_symbol(alphabet.names[a]) for a in word)


def format_group_word(word: GroupWord, alphabet: Alphabet) -> str:
    return " ".join(
        _symbol(alphabet.names[a]) + ("'" if e == -1 else "") for a, e in word.letters
    )


def format_substitution(s: Substitution) -> str:
    """Render ``s`` in the rule format; the output re-parses to ``s``."""
    names = s.alphabet.names
    return "\n".join(
        f"{_symbol(names[a])} -> {format_word(image, s.alphabet)}"
        for a, image in enumerate(s.images)
    )


def format_endomorphism(e: FreeGroupEndo) -> str:
    names = e.alphabet.names
    return "\n".join(
        f"{_symbol(names[a])} -> {format_group_word(image, e.alphabet)}".rstrip()
        for a, image in enumerate(e.images)
    )


# ── Word operations ─────────────────────────────────────────────────


def word_to_text(word: Iterable[int]) -> str:
    """Encode a word as a string of code points, one per letter."""
    return "".join(map(chr, word))


def text_to_word(text: str) -> Word:
    return tuple(map(ord, text))


def apply_substitution(s: Substitution, w: Word, n: int) -> Word:
    """Return ``s`` applied ``n`` times to ``w``."""
    if n < 0:
        raise PreconditionError(f"Repetition count must be non-negative, got {n}")
    s.alphabet.check_word(w)
    for _ in range(n):
        w = s(w)
    return w


def count_occurrences(w: Word, z: Word) -> int:
    """Count the (possibly overlapping) occurrences of ``z`` in ``w``."""
    if not z:
        raise PreconditionError("Cannot count occurrences of the empty word")
    haystack, needle = word_to_text(w), word_to_text(z)
    count = 0
    pos = haystack.find(needle)
    while pos != -1:
        count += 1
        pos = haystack.find(needle, pos + 1)
    return count


def reduce_group_word(raw: Iterable[SignedLetter]) -> GroupWord:
    return GroupWord(tuple(raw))


def apply_endomorphism(e: FreeGroupEndo, w: GroupWord, n: int) -> GroupWord:
    """Return the reduced image of ``w`` under ``n`` applications of ``e``."""
    if n < 0:
        raise PreconditionError(f"Repetition count must be non-negative, got {n}")
    for _ in range(n):
        w = e(w)
    return w


def exponent_sum(w: GroupWord | Word, a: int) -> int:
    """Sum of the exponents of letter ``a`` in ``w``."""
    if isinstance(w, GroupWord):
        return sum(e for letter, e in w.letters if letter == a)
    return sum(1 for letter in w if letter == a)


def compose[T: (Substitution, MonoidHom, FreeGroupEndo)](f: T, g: T) -> T:
    """Return ``f ∘ g``, i.e. ``a ↦ f(g(a))``."""
    if isinstance(f, Substitution) and isinstance(g, Substitution):
        if f.alphabet != g.alphabet:
            raise PreconditionError("Substitutions act on different alphabets")
        return Substitution(f.alphabet, tuple(f(image) for image in g.images))
    if isinstance(f, MonoidHom) and isinstance(g, MonoidHom):
        if g.target != f.source:
            raise PreconditionError("Homomorphisms are not composable")
        return MonoidHom(g.source, f.target, tuple(f(image) for image in g.images))
    if isinstance(f, FreeGroupEndo) and isinstance(g, FreeGroupEndo):
        if f.alphabet != g.alphabet:
            raise PreconditionError("Endomorphisms act on different alphabets")
        return FreeGroupEndo(f.alphabet, tuple(f(image) for image in g.images))
    raise PreconditionError(
        f"Cannot compose {type(f).__name__} with {type(g).__name__}"
    )


def power(s: Substitution, k: int) -> Substitution:
    """Return the ``k``-fold composite of ``s`` (``k >= 1``)."""
    if k < 1:
        raise PreconditionError(f"Power must be positive, got {k}")
    result = s
    for _ in range(k - 1):
        result = compose(s, result)
    return result
