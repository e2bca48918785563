"""Exact integer matrices and polynomials.

Arithmetic runs through sympy's ``DomainMatrix`` and ``Poly`` over ``ZZ`` and
``GF(p)``; values exchanged with the rest of the package are the small frozen
wrappers below.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from math import gcd

from sympy import GF, ZZ, Poly, Symbol, factor, isprime, totient
from sympy.polys.matrices import DomainMatrix
from sympy.polys.polyerrors import ExactQuotientFailed

from omega_nil.errors import AlgebraError, PreconditionError
from omega_nil.words import FreeGroupEndo, MonoidHom, Substitution, exponent_sum

logger = logging.getLogger(__name__)

X = Symbol("x")


def _strip(coeffs: Sequence[int]) -> tuple[int, ...]:
    out = [int(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class IntPoly:
    """A polynomial over the integers, coefficients in ascending degree.

    The zero polynomial has no coefficients and degree ``-1``.
    """

    coeffs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _strip(self.coeffs))

    @classmethod
    def from_sympy(cls, poly: Poly) -> "IntPoly":
        return cls(tuple(reversed([int(c) for c in poly.all_coeffs()])))

    @classmethod
    def one(cls) -> "IntPoly":
        return cls((1,))

    def to_sympy(self) -> Poly:
        return Poly(list(reversed(self.coeffs)) or [0], X, domain=ZZ)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading_coefficient(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def content(self) -> int:
        result = 0
        for c in self.coeffs:
            result = gcd(result, c)
        return result

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        return IntPoly.from_sympy(self.to_sympy() * other.to_sympy())

    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple(-c for c in self.coeffs))

    def exact_div(self, other: "IntPoly") -> "IntPoly":
        """Quotient in Z[x]; raises :class:`AlgebraError` if not exact."""
        try:
            return IntPoly.from_sympy(self.to_sympy().exquo(other.to_sympy()))
        except ExactQuotientFailed as e:
            raise AlgebraError(f"{other} does not divide {self}") from e

    def positive(self) -> "IntPoly":
        """Return ``±self`` with a non-negative leading coefficient."""
        return -self if self.leading_coefficient < 0 else self

    def primitive_part(self) -> "IntPoly":
        if self.is_zero:
            return self
        c = self.content
        return IntPoly(tuple(x // c for x in self.coeffs)).positive()

    def __str__(self) -> str:
        return str(self.to_sympy().as_expr())

    def factored(self) -> str:
        """Render as a product of irreducible factors over the integers."""
        return str(factor(self.to_sympy().as_expr()))


@dataclass(frozen=True)
class ModPoly:
    """A polynomial over Z/pZ with canonical residues, ascending degree."""

    p: int
    coeffs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        _check_prime(self.p)
        object.__setattr__(self, "coeffs", _strip([c % self.p for c in self.coeffs]))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def trailing_zeros(self) -> int:
        """Multiplicity of 0 as a root (0 for the zero polynomial)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return 0

    def __str__(self) -> str:
        poly = Poly(list(reversed(self.coeffs)) or [0], X, domain=GF(self.p))
        return f"{poly.as_expr()} (mod {self.p})"


@dataclass(frozen=True)
class IntMatrix:
    """A dense integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise PreconditionError(f"Negative shape {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise PreconditionError(
                f"Expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        width = len(rows[0]) if rows else (cols or 0)
        if any(len(row) != width for row in rows):
            raise PreconditionError("Ragged rows")
        return cls(len(rows), width, tuple(int(x) for row in rows for x in row))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def from_domain(cls, dm: DomainMatrix) -> "IntMatrix":
        rows, cols = dm.shape
        return cls(rows, cols, tuple(int(x) for row in dm.to_list() for x in row))

    def to_domain(self) -> DomainMatrix:
        if not self.rows:
            return DomainMatrix([], (0, self.cols), ZZ)
        return DomainMatrix.from_list(self.to_lists(), ZZ)

    def to_lists(self) -> list[list[int]]:
        return [list(self.entries[i * self.cols : (i + 1) * self.cols]) for i in range(self.rows)]

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        return self.entries[i * self.cols + j]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def is_zero(self) -> bool:
        return not any(self.entries)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise PreconditionError(
                f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        if not (self.rows and self.cols and other.cols):
            return IntMatrix.zero(self.rows, other.cols)
        return IntMatrix.from_domain(self.to_domain() * other.to_domain())

    def __pow__(self, k: int) -> "IntMatrix":
        _require_square(self)
        if k < 0:
            raise PreconditionError(f"Negative matrix power {k}")
        if k == 0 or not self.rows:
            return IntMatrix.identity(self.rows)
        return IntMatrix.from_domain(self.to_domain() ** k)

    def __str__(self) -> str:
        if not self.rows or not self.cols:
            return f"[] ({self.rows}x{self.cols})"
        width = max(len(str(x)) for x in self.entries)
        return "\n".join(
            "[" + " ".join(str(x).rjust(width) for x in row) + "]" for row in self.to_lists()
        )


def _check_prime(p: int) -> None:
    if not isprime(p):
        raise PreconditionError(f"Modulus {p} is not prime")


def _require_square(m: IntMatrix) -> None:
    if not m.is_square:
        raise PreconditionError(f"Expected a square matrix, got {m.rows}x{m.cols}")


# ── Operations ──────────────────────────────────────────────────────


def incidence_matrix(m: Substitution | FreeGroupEndo | MonoidHom) -> IntMatrix:
    """Entry ``(a, b)`` is the exponent sum of ``a`` in the image of ``b``."""
    if isinstance(m, MonoidHom):
        rows, cols = m.target.size, m.source.size
        images: Sequence = m.images
    else:
        rows = cols = m.alphabet.size
        images = m.images
    return IntMatrix(
        rows,
        cols,
        tuple(exponent_sum(images[b], a) for a in range(rows) for b in range(cols)),
    )


def char_poly(m: IntMatrix) -> IntPoly:
    """Return ``det(x - M)``; the empty matrix has characteristic polynomial 1."""
    _require_square(m)
    if not m.rows:
        return IntPoly.one()
    return IntPoly(tuple(reversed([int(c) for c in m.to_domain().charpoly()])))


def reciprocal_poly(xi: IntPoly) -> IntPoly:
    """Return ``x^n xi(1/x)`` with ``n = deg xi``."""
    if xi.is_zero:
        raise PreconditionError("The zero polynomial has no reciprocal")
    return IntPoly(tuple(reversed(xi.coeffs)))


def reduce_mod_p[T: (IntPoly, IntMatrix)](value: T, p: int) -> ModPoly | DomainMatrix:
    """Reduce coefficients or entries to canonical residues modulo ``p``."""
    _check_prime(p)
    if isinstance(value, IntPoly):
        return ModPoly(p, value.coeffs)
    field = GF(p, symmetric=False)
    if not value.rows:
        return DomainMatrix([], (0, value.cols), field)
    return DomainMatrix.from_list(
        [[field(x % p) for x in row] for row in value.to_lists()], field
    )


def rank_mod_p(m: IntMatrix, p: int) -> int:
    if not m.rows or not m.cols:
        _check_prime(p)
        return 0
    reduced = reduce_mod_p(m, p)
    assert isinstance(reduced, DomainMatrix)
    return int(reduced.rank())


def pseudodeterminant(m: IntMatrix) -> int:
    """Product of the non-zero eigenvalues of ``m`` counted with multiplicity.

    Computed as ``lc(chi^rev) * (-1)**deg(chi^rev)``; a nilpotent matrix has
    pseudodeterminant 1.
    """
    rev = reciprocal_poly(char_poly(m))
    return rev.leading_coefficient * (-1) ** rev.degree


def is_nilpotent(m: IntMatrix) -> bool:
    _require_square(m)
    return (m**m.rows).is_zero


def _clip(m: IntMatrix) -> IntMatrix:
    return IntMatrix(m.rows, m.cols, tuple(int(x > 0) for x in m.entries))


def is_primitive_matrix(m: IntMatrix) -> bool:
    """Whether some power of the non-negative matrix ``m`` is strictly positive.

    The power is taken at the Wielandt bound on the 0/1 support pattern.
    """
    _require_square(m)
    if any(x < 0 for x in m.entries):
        raise PreconditionError("Primitivity is defined for non-negative matrices")
    d = m.rows
    if not d:
        return False
    k = 1 if d == 1 else d * d - 2 * d + 2
    base, result = _clip(m), None
    while k:
        if k & 1:
            result = base if result is None else _clip(result @ base)
        k >>= 1
        if k:
            base = _clip(base @ base)
    assert result is not None
    return all(result.entries)


def poly_gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """Greatest common divisor in Z[x], with a positive leading coefficient.

    Contents and primitive parts are handled separately; the primitive gcd is
    the last member of the subresultant sequence.
    """
    if a.is_zero:
        return b.positive()
    if b.is_zero:
        return a.positive()
    content = gcd(a.content, b.content)
    pa, pb = a.primitive_part(), b.primitive_part()
    if pa.degree < pb.degree:
        pa, pb = pb, pa
    prs = pa.to_sympy().subresultants(pb.to_sympy())
    last = IntPoly.from_sympy(prs[-1]).primitive_part()
    return IntPoly(tuple(content * c for c in last.coeffs))


def cyclotomic_product_check(xi: IntPoly) -> bool:
    """Whether ``±xi`` is a product of cyclotomic polynomials."""
    if xi.is_zero:
        raise PreconditionError("The zero polynomial is not a cyclotomic product")
    if xi.content != 1:
        return False
    residual = xi.positive()
    d = residual.degree
    for n in range(1, 2 * d * d + 3):
        if residual.degree == 0:
            break
        if totient(n) > d:
            continue
        x_n_minus_one = IntPoly((-1,) + (0,) * (n - 1) + (1,))
        while residual.degree > 0:
            g = poly_gcd(residual, x_n_minus_one)
            if g.degree == 0:
                break
            residual = residual.exact_div(g)
    return residual.degree == 0 and abs(residual.leading_coefficient) == 1


def xi_pair(a: IntPoly, b: IntPoly) -> tuple[IntPoly, IntPoly]:
    """Coprime cyclotomic products ``(xi1, xi2)`` with ``xi1 * a = ±xi2 * b``.

    ``a`` is the reciprocal characteristic polynomial of the presentation's
    power and ``b`` that of the return substitution.

    Raises:
        AlgebraError: If the quotients are not coprime cyclotomic products.
    """
    if a.is_zero or b.is_zero:
        raise PreconditionError("xi_pair needs non-zero polynomials")
    g = poly_gcd(a, b).primitive_part()
    xi1 = b.exact_div(g).positive()
    xi2 = a.exact_div(g).positive()
    lhs, rhs = xi1 * a, xi2 * b
    if lhs != rhs and lhs != -rhs:
        raise AlgebraError(f"xi1*a != ±xi2*b for xi1={xi1}, xi2={xi2}")
    if poly_gcd(xi1, xi2).degree > 0:
        raise AlgebraError(f"{xi1} and {xi2} are not coprime")
    for xi in (xi1, xi2):
        if not cyclotomic_product_check(xi):
            raise AlgebraError(f"{xi.factored()} is not a product of cyclotomic polynomials")
    logger.debug("xi pair for a=%s, b=%s: (%s, %s)", a, b, xi1, xi2)
    return xi1, xi2
