"""
Dense and factored polynomials over the rationals, and their evaluation at matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from .exceptions import DimensionMismatchError, InputValidationError
from .matrix import RatMatrix
from .rational import format_rational, to_rational

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from .rational import RationalLike

_ZERO = Fraction(0)


def _strip(coeffs: Iterable[Fraction]) -> tuple[Fraction, ...]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True, slots=True)
class DensePoly:
    """Polynomial with coeffs[i] the coefficient of x**i; trailing zeros are stripped."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        stripped = _strip(self.coeffs)
        if stripped != self.coeffs:
            object.__setattr__(self, "coeffs", stripped)

    @classmethod
    def of(cls, *coeffs: RationalLike) -> DensePoly:
        """Build from coefficients in ascending degree order."""
        return cls(tuple(to_rational(c) for c in coeffs))

    @classmethod
    def constant(cls, c: RationalLike) -> DensePoly:
        return cls.of(c)

    @classmethod
    def monomial(cls, degree: int, c: RationalLike = 1) -> DensePoly:
        return cls((_ZERO,) * degree + (to_rational(c),))

    @property
    def degree(self) -> int | None:
        """Degree, or None for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int) -> Fraction:
        return self.coeffs[i] if i < len(self.coeffs) else _ZERO

    def __add__(self, other: DensePoly) -> DensePoly:
        n = max(len(self.coeffs), len(other.coeffs))
        return DensePoly(tuple(self.coefficient(i) + other.coefficient(i) for i in range(n)))

    def __sub__(self, other: DensePoly) -> DensePoly:
        return self + (-other)

    def __neg__(self) -> DensePoly:
        return DensePoly(tuple(-c for c in self.coeffs))

    def __mul__(self, other: DensePoly) -> DensePoly:
        if self.is_zero() or other.is_zero():
            return DensePoly(())
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return DensePoly(tuple(out))

    def __pow__(self, k: int) -> DensePoly:
        result = DensePoly.constant(1)
        for _ in range(k):
            result *= self
        return result

    def scale(self, c: RationalLike) -> DensePoly:
        factor = to_rational(c)
        return DensePoly(tuple(factor * a for a in self.coeffs))

    def derivative(self) -> DensePoly:
        return DensePoly(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def __call__(self, x: RationalLike) -> Fraction:
        value = to_rational(x)
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = [
            f"{format_rational(c)}" + ("" if i == 0 else "*x" if i == 1 else f"*x^{i}")
            for i, c in enumerate(self.coeffs)
            if c
        ]
        return " + ".join(reversed(terms))


X_POLY = DensePoly.of(0, 1)
CUBIC = DensePoly.of(0, 0, 1, -1)
"""f(x) = x^2 - x^3, the right-hand side studied in depth."""


@dataclass(frozen=True, slots=True)
class FactoredPoly:
    """lead * prod (x - root)**mult with pairwise distinct rational roots."""

    lead: Fraction
    roots: tuple[tuple[Fraction, int], ...]

    def __post_init__(self) -> None:
        if self.lead == 0:
            msg = "Leading coefficient of a factored polynomial must be nonzero"
            raise InputValidationError(msg)
        seen: set[Fraction] = set()
        for root, mult in self.roots:
            if mult < 1:
                msg = f"Root {format_rational(root)} has non-positive multiplicity {mult}"
                raise InputValidationError(msg)
            if root in seen:
                msg = f"Root {format_rational(root)} listed twice"
                raise InputValidationError(msg)
            seen.add(root)

    @classmethod
    def of(cls, lead: RationalLike, roots: Sequence[tuple[RationalLike, int]]) -> FactoredPoly:
        return cls(to_rational(lead), tuple((to_rational(r), int(m)) for r, m in roots))

    @property
    def root_values(self) -> tuple[Fraction, ...]:
        return tuple(r for r, _ in self.roots)

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.roots)


def expand(f: FactoredPoly) -> DensePoly:
    result = DensePoly.constant(f.lead)
    for root, mult in f.roots:
        result *= DensePoly.of(-root, 1) ** mult
    return result


def as_dense(f: DensePoly | FactoredPoly) -> DensePoly:
    return f if isinstance(f, DensePoly) else expand(f)


def poly_derivative(p: DensePoly) -> DensePoly:
    return p.derivative()


def critical_set(f: FactoredPoly) -> frozenset[Fraction]:
    """The nonzero values of f' at the roots of f."""
    df = expand(f).derivative()
    return frozenset(v for v in (df(r) for r in f.root_values) if v != 0)


def divided_difference(f: DensePoly | FactoredPoly, alpha: RationalLike, beta: RationalLike) -> Fraction:
    """f[alpha, beta]: the difference quotient, or f'(alpha) when alpha == beta."""
    p = as_dense(f)
    a, b = to_rational(alpha), to_rational(beta)
    if a == b:
        return p.derivative()(a)
    return (p(a) - p(b)) / (a - b)


def poly_eval_matrix(p: DensePoly | FactoredPoly, x: RatMatrix) -> RatMatrix:
    """Horner evaluation of p at the square matrix x."""
    if not x.is_square:
        msg = f"Cannot evaluate a polynomial at a non-square {x.rows}x{x.cols} matrix"
        raise DimensionMismatchError(msg)
    coeffs = as_dense(p).coeffs
    n = x.rows
    result = RatMatrix.zeros(n, n)
    identity = RatMatrix.identity(n)
    for c in reversed(coeffs):
        result = result @ x + identity.scale(c)
    return result
