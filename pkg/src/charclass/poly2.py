"""Exact polynomial arithmetic over GF(2).

Variables are written ``x1, x2, ...`` (indices start at 1).  A monomial is a
product of variable powers; a polynomial is a set of monomials, because over
GF(2) every coefficient is 0 or 1 and addition toggles membership.  All
arithmetic here is exact -- there are no floats and no tolerances anywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

__all__ = [
    "Monomial",
    "Poly",
    "canonical_key",
    "format_monomial",
    "format_poly",
    "parse_poly",
]


@dataclass(frozen=True, slots=True)
class Monomial:
    """A product of variable powers, e.g. ``x1^2*x3``.

    ``factors`` is a tuple of ``(variable, exponent)`` pairs with strictly
    increasing variable indices (>= 1) and exponents >= 1.  The empty tuple
    is the constant monomial 1.
    """

    factors: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        prev = 0
        for var, exp in self.factors:
            if var <= prev:
                raise ValueError(f"variables must be strictly increasing: {self.factors}")
            if exp < 1:
                raise ValueError(f"exponents must be >= 1: {self.factors}")
            prev = var

    # -- constructors -------------------------------------------------------

    @classmethod
    def one(cls) -> "Monomial":
        return cls(())

    @classmethod
    def var(cls, i: int, exp: int = 1) -> "Monomial":
        return cls(((i, exp),))

    @classmethod
    def from_exponents(cls, exponents: dict[int, int]) -> "Monomial":
        return cls(tuple(sorted((v, e) for v, e in exponents.items() if e)))

    @classmethod
    def from_mask(cls, mask: int) -> "Monomial":
        """Squarefree monomial whose variable set is the bitmask (bit i-1 <-> x_i)."""
        factors = []
        i = 1
        while mask:
            if mask & 1:
                factors.append((i, 1))
            mask >>= 1
            i += 1
        return cls(tuple(factors))

    # -- queries ------------------------------------------------------------

    def degree(self) -> int:
        return sum(e for _, e in self.factors)

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    def mask(self) -> int:
        """Bitmask of the variable set; only defined for squarefree monomials."""
        if not self.is_squarefree():
            raise ValueError(f"mask() requires a squarefree monomial, got {self}")
        m = 0
        for var, _ in self.factors:
            m |= 1 << (var - 1)
        return m

    def variables(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.factors)

    def exponent(self, var: int) -> int:
        for v, e in self.factors:
            if v == var:
                return e
        return 0

    def exponents(self) -> dict[int, int]:
        return dict(self.factors)

    # -- arithmetic ----------------------------------------------------------

    def __mul__(self, other: "Monomial") -> "Monomial":
        if not isinstance(other, Monomial):
            return NotImplemented
        merged: dict[int, int] = dict(self.factors)
        for var, exp in other.factors:
            merged[var] = merged.get(var, 0) + exp
        return Monomial(tuple(sorted(merged.items())))

    def __pow__(self, e: int) -> "Monomial":
        if e < 0:
            raise ValueError("negative exponent")
        if e == 0:
            return Monomial.one()
        return Monomial(tuple((v, k * e) for v, k in self.factors))

    def __str__(self) -> str:
        return format_monomial(self)


def canonical_key(m: Monomial) -> tuple[int, tuple[tuple[int, int], ...]]:
    """Sort key for the canonical monomial order: by degree, then factor tuple."""
    return (m.degree(), m.factors)


@dataclass(frozen=True, slots=True)
class Poly:
    """A polynomial over GF(2): a finite set of monomials.

    Addition is symmetric difference (coefficients live in GF(2)); the zero
    polynomial is the empty set.
    """

    terms: frozenset[Monomial] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        for t in self.terms:
            if not isinstance(t, Monomial):
                raise TypeError(f"Poly terms must be Monomial, got {type(t).__name__}")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly":
        return cls(frozenset())

    @classmethod
    def one(cls) -> "Poly":
        return cls(frozenset({Monomial.one()}))

    @classmethod
    def var(cls, i: int, exp: int = 1) -> "Poly":
        return cls(frozenset({Monomial.var(i, exp)}))

    @classmethod
    def of(cls, monomials: Iterable[Monomial]) -> "Poly":
        """Sum the monomials over GF(2) (repeats cancel in pairs)."""
        acc: set[Monomial] = set()
        for m in monomials:
            acc.symmetric_difference_update({m})
        return cls(frozenset(acc))

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.terms)

    def monomials(self) -> list[Monomial]:
        """Terms in the canonical order (degree, then factor tuple)."""
        return sorted(self.terms, key=canonical_key)

    def degree(self) -> int:
        """Largest term degree; -1 for the zero polynomial."""
        return max((m.degree() for m in self.terms), default=-1)

    def is_homogeneous(self, degree: int) -> bool:
        return all(m.degree() == degree for m in self.terms)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        return Poly(self.terms ^ other.terms)

    def __mul__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        acc: set[Monomial] = set()
        for a in self.terms:
            for b in other.terms:
                acc.symmetric_difference_update({a * b})
        return Poly(frozenset(acc))

    def __pow__(self, e: int) -> "Poly":
        """Exact power over GF(2).

        Uses the binary expansion of ``e``: squaring is term-wise
        (``(a + b)^2 = a^2 + b^2`` because cross terms appear twice), so
        ``p^(2^k)`` just raises every monomial to the ``2^k``-th power, and a
        general power is the product of those pieces.
        """
        if e < 0:
            raise ValueError("negative exponent")
        result = Poly.one()
        k = 0
        while e:
            if e & 1:
                piece = Poly(frozenset(m ** (1 << k) for m in self.terms))
                result = result * piece
            e >>= 1
            k += 1
        return result

    def __str__(self) -> str:
        return format_poly(self)


# -- text grammar ------------------------------------------------------------
#
#   poly     := "0" | term (" + " term)*
#   term     := "1" | factor ("*" factor)*
#   factor   := "x" INT ("^" INT)?
#
# Rendering uses the canonical monomial order and no whitespace inside terms;
# parsing is whitespace-tolerant around "+" and "*".

_FACTOR_RE = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def format_monomial(m: Monomial) -> str:
    if not m.factors:
        return "1"
    parts = []
    for var, exp in m.factors:
        parts.append(f"x{var}" if exp == 1 else f"x{var}^{exp}")
    return "*".join(parts)


def format_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    return " + ".join(format_monomial(m) for m in p.monomials())


def parse_poly(text: str) -> Poly:
    """Parse the text grammar above; inverse of :func:`format_poly`."""
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial text")
    if s == "0":
        return Poly.zero()
    acc: set[Monomial] = set()
    for term_text in s.split("+"):
        term_text = term_text.strip()
        if not term_text:
            raise ValueError(f"empty term in {text!r}")
        if term_text == "1":
            acc.symmetric_difference_update({Monomial.one()})
            continue
        mono = Monomial.one()
        for factor_text in term_text.split("*"):
            factor_text = factor_text.strip()
            match = _FACTOR_RE.match(factor_text)
            if not match:
                raise ValueError(f"bad factor {factor_text!r} in {text!r}")
            var = int(match.group(1))
            exp = int(match.group(2)) if match.group(2) else 1
            if var < 1:
                raise ValueError(f"variable index must be >= 1 in {text!r}")
            if exp < 1:
                raise ValueError(f"exponent must be >= 1 in {text!r}")
            mono = mono * Monomial.var(var, exp)
        acc.symmetric_difference_update({mono})
    return Poly(frozenset(acc))
