"""Finite groups with opaque, hashable elements."""

import logging
from abc import ABC, abstractmethod
from collections.abc import Hashable, Iterable, Iterator, Sequence
from itertools import islice, product

from sympy import divisors
from sympy.combinatorics import Permutation, PermutationGroup

from omega_nil import config
from omega_nil.errors import AlgebraError, PreconditionError
from omega_nil.finquot.fields import GF2n, gf2n

logger = logging.getLogger(__name__)

Element = Hashable


class FiniteGroup(ABC):
    """A finite group given by multiplication and inversion on its elements."""

    name: str

    @property
    @abstractmethod
    def identity(self) -> Element: ...

    @property
    @abstractmethod
    def order(self) -> int: ...

    @abstractmethod
    def mul(self, a: Element, b: Element) -> Element: ...

    @abstractmethod
    def inv(self, a: Element) -> Element: ...

    @abstractmethod
    def elements(self) -> Iterator[Element]:
        """Enumerate the group in a fixed order."""

    @abstractmethod
    def describe(self, a: Element) -> object:
        """A JSON-friendly rendering of ``a``."""

    def element_order(self, a: Element) -> int:
        k, power = 1, a
        while power != self.identity:
            power = self.mul(power, a)
            k += 1
        return k

    def generated_order(self, generators: Iterable[Element]) -> int | None:
        """Order of the subgroup generated by ``generators``.

        Returns ``None`` when the subgroup outgrows the configured closure
        limit before it is complete.
        """
        gens = list(dict.fromkeys(generators))
        limit = config.get_closure_limit()
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            if len(seen) == self.order:
                return self.order
            if len(seen) > limit:
                logger.debug("closure passed %d elements; giving up", limit)
                return None
            frontier = nxt
        return len(seen)

    def power(self, a: Element, k: int) -> Element:
        result, base = self.identity, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def seed_elements(self, limit: int | None = None) -> list[Element]:
        """Up to ``limit`` elements by decreasing order, ties in enumeration order.

        The whole group is ranked when its order is within the configured
        closure limit; a larger group ranks only that many elements from the
        start of its enumeration.
        """
        pool = list(islice(self.elements(), config.get_closure_limit()))
        orders = {a: self.element_order(a) for a in pool}
        ranked = sorted(pool, key=lambda a: -orders[a])
        return ranked if limit is None else ranked[:limit]

    def _spot_check(self, sample: Sequence[Element]) -> None:
        """Check identity, inverses and associativity on ``sample``.

        Raises:
            AlgebraError: If an axiom fails on the sample.
        """
        e = self.identity
        for a in sample:
            if self.mul(a, e) != a or self.mul(e, a) != a:
                raise AlgebraError(f"{self.name}: identity law fails at {self.describe(a)}")
            if self.mul(a, self.inv(a)) != e:
                raise AlgebraError(f"{self.name}: bad inverse of {self.describe(a)}")
        for a, b, c in product(sample, repeat=3):
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                raise AlgebraError(
                    f"{self.name}: multiplication is not associative at "
                    f"{self.describe(a)}, {self.describe(b)}, {self.describe(c)}"
                )


Matrix2 = tuple[int, int, int, int]


class SL2(FiniteGroup):
    """SL₂ over GF(2ⁿ); elements are ``(a, b, c, d)`` for ``[[a, b], [c, d]]``."""

    def __init__(self, n: int) -> None:
        self.field: GF2n = gf2n(n)
        self.n = n
        self.name = f"SL2(F_{1 << n})"
        self._orders_by_trace: dict[int, int] = {}
        self._spot_check(list(islice(self.elements(), 12)))

    @property
    def identity(self) -> Matrix2:
        return (1, 0, 0, 1)

    @property
    def order(self) -> int:
        q = self.field.size
        return q * (q * q - 1)

    def matrix(self, a: int, b: int, c: int, d: int) -> Matrix2:
        f = self.field
        if f.add(f.mul(a, d), f.mul(b, c)) != 1:
            raise PreconditionError(f"[[{a}, {b}], [{c}, {d}]] has determinant != 1")
        return (a, b, c, d)

    def mul(self, x: Element, y: Element) -> Matrix2:
        a, b, c, d = x  # type: ignore[misc]
        e, f_, g, h = y  # type: ignore[misc]
        m, add = self.field.mul, self.field.add
        return (
            add(m(a, e), m(b, g)),
            add(m(a, f_), m(b, h)),
            add(m(c, e), m(d, g)),
            add(m(c, f_), m(d, h)),
        )

    def inv(self, x: Element) -> Matrix2:
        a, b, c, d = x  # type: ignore[misc]
        return (d, b, c, a)

    def element_order(self, x: Element) -> int:
        # Away from trace 0 the eigenvalues are distinct, so the order depends
        # only on the trace. Orders divide 2(q - 1)(q + 1).
        a, _, _, d = x  # type: ignore[misc]
        trace = self.field.add(a, d)
        if not trace:
            return 1 if x == self.identity else 2
        if trace not in self._orders_by_trace:
            self._orders_by_trace[trace] = self._power_order(x)
        return self._orders_by_trace[trace]

    def _power_order(self, x: Element) -> int:
        q = self.field.size
        for k in divisors(2 * (q * q - 1)):
            if self.power(x, k) == self.identity:
                return int(k)
        raise AssertionError(f"{x} has no order dividing {2 * (q * q - 1)}")

    def elements(self) -> Iterator[Matrix2]:
        f = self.field
        for a in f.elements:
            for b in f.elements:
                for c in f.elements:
                    if a:
                        yield (a, b, c, f.mul(f.add(1, f.mul(b, c)), f.inv(a)))
                    elif b and f.mul(b, c) == 1:
                        for d in f.elements:
                            yield (a, b, c, d)

    def describe(self, x: Element) -> list[list[int]]:
        a, b, c, d = x  # type: ignore[misc]
        return [[a, b], [c, d]]


class PermGroup(FiniteGroup):
    """A permutation group generated by cycle-notation generators."""

    def __init__(self, generators: Sequence[Permutation], degree: int, name: str) -> None:
        self.degree = degree
        self.name = name
        self._identity = Permutation(list(range(degree)))
        self.group = PermutationGroup(list(generators) or [self._identity])
        gens = list(generators)
        products = [self.mul(a, b) for a in gens for b in gens]
        self._spot_check(list(dict.fromkeys([self._identity, *gens, *products])))

    @property
    def identity(self) -> Permutation:
        return self._identity

    @property
    def order(self) -> int:
        return int(self.group.order())

    def mul(self, a: Element, b: Element) -> Permutation:
        return a * b  # type: ignore[operator]

    def inv(self, a: Element) -> Permutation:
        return ~a  # type: ignore[operator]

    def elements(self) -> Iterator[Permutation]:
        return iter(sorted(self.group.generate(), key=lambda p: p.array_form))

    def element_order(self, a: Element) -> int:
        return int(a.order())  # type: ignore[attr-defined]

    def generated_order(self, generators: Iterable[Element]) -> int | None:
        gens = list(generators) or [self._identity]
        return int(PermutationGroup(gens).order())

    def describe(self, a: Element) -> str:
        cycles = a.cyclic_form  # type: ignore[attr-defined]
        return "".join("(" + " ".join(map(str, cycle)) + ")" for cycle in cycles) or "()"


def sl2_over_gf2n(n: int) -> SL2:
    """SL₂(F_{2ⁿ}) for ``1 <= n <= 12``."""
    return SL2(n)
