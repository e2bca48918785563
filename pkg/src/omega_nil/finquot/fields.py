"""GF(2ⁿ) for 1 <= n <= 12 over the Conway polynomials.

Elements are integers whose bit ``i`` is the coefficient of ``x^i``. The class
of ``x`` is a primitive element, so multiplication runs on log/exp tables.
"""

from functools import cache

from omega_nil.errors import AlgebraError, PreconditionError

# Coefficients c0..cn of the Conway polynomial of degree n over GF(2).
CONWAY_POLYNOMIALS: dict[int, tuple[int, ...]] = {
    1: (1, 1),
    2: (1, 1, 1),
    3: (1, 1, 0, 1),
    4: (1, 1, 0, 0, 1),
    5: (1, 0, 1, 0, 0, 1),
    6: (1, 1, 0, 1, 1, 0, 1),
    7: (1, 1, 0, 0, 0, 0, 0, 1),
    8: (1, 0, 1, 1, 1, 0, 0, 0, 1),
    9: (1, 0, 0, 0, 1, 0, 0, 0, 0, 1),
    10: (1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1),
    11: (1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    12: (1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1),
}


class GF2n:
    """The field with ``2**n`` elements."""

    def __init__(self, n: int) -> None:
        if n not in CONWAY_POLYNOMIALS:
            raise PreconditionError(f"GF(2^n) is available for 1 <= n <= 12, got n={n}")
        self.n = n
        self.size = 1 << n
        self.polynomial = CONWAY_POLYNOMIALS[n]
        self.modulus = sum(c << i for i, c in enumerate(self.polynomial))

        units = self.size - 1
        self._exp = [0] * (2 * units)
        self._log = [0] * self.size
        value = 1
        for i in range(units):
            self._exp[i] = self._exp[i + units] = value
            self._log[value] = i
            value <<= 1
            if value & self.size:
                value ^= self.modulus
        if value != 1 or len({self._exp[i] for i in range(units)}) != units:
            raise AlgebraError(f"x is not primitive modulo the degree-{n} polynomial")

    @property
    def generator(self) -> int:
        """The class of ``x`` (equal to 1 when ``n == 1``)."""
        return self._exp[1] if self.size > 2 else 1

    @property
    def elements(self) -> range:
        return range(self.size)

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF(2^n)")
        return self._exp[(self.size - 1 - self._log[a]) % (self.size - 1)]

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            return 0 if k else 1
        return self._exp[(self._log[a] * k) % (self.size - 1)]

    def polynomial_str(self) -> str:
        terms = [
            "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            for i, c in reversed(list(enumerate(self.polynomial)))
            if c
        ]
        return " + ".join(terms)


@cache
def gf2n(n: int) -> GF2n:
    return GF2n(n)
