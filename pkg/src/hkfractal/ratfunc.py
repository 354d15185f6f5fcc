"""Exact rational arithmetic: Q scalars, dense univariate polynomials over Q,
cyclotomic polynomials, and canonical rational generating functions.

Everything here is exact. Rationals are `fractions.Fraction`; a polynomial is a
tuple of Fractions indexed by degree with no trailing zeros; a RationalGF is a
coprime num/den pair with monic denominator, so equal series compare equal
structurally.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DomainError, ParseError

__all__ = [
    "Rat",
    "rat_from_str",
    "rat_to_str",
    "UniPoly",
    "poly_gcd",
    "cyclotomic",
    "RationalGF",
    "partial_fractions",
    "residue_limit",
]

Rat = Fraction

_RAT_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


def rat_from_str(text: str) -> Fraction:
    """Parse "num" or "num/den" (den positive) into a Fraction."""
    s = text.strip()
    if not _RAT_RE.match(s):
        raise ParseError(f"not a rational literal: {text!r}")
    return Fraction(s)


def rat_to_str(r: Fraction) -> str:
    """Render a Fraction as "num" or "num/den" with positive denominator."""
    return str(r)


class UniPoly:
    """Dense univariate polynomial over Q.

    coeffs[i] is the coefficient of z^i; the tuple carries no trailing zeros,
    so the zero polynomial is the empty tuple and has degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Fraction | int | str] = ()):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise DomainError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: UniPoly) -> UniPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self[i] + other[i] for i in range(n))

    def __sub__(self, other: UniPoly) -> UniPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self[i] - other[i] for i in range(n))

    def __neg__(self) -> UniPoly:
        return UniPoly(-c for c in self.coeffs)

    def __mul__(self, other: UniPoly) -> UniPoly:
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    def scale(self, c: Fraction | int) -> UniPoly:
        c = Fraction(c)
        return UniPoly(a * c for a in self.coeffs)

    def shift(self, k: int) -> UniPoly:
        """Multiply by z^k."""
        if self.is_zero():
            return self
        return UniPoly((Fraction(0),) * k + self.coeffs)

    def divrem(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        if other.is_zero():
            raise DomainError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly(), self
        quo = [Fraction(0)] * (dq + 1)
        lead = other.leading()
        for k in range(dq, -1, -1):
            top = rem[k + other.degree]
            if top:
                q = top / lead
                quo[k] = q
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= q * b
        return UniPoly(quo), UniPoly(rem)

    def derivative(self) -> UniPoly:
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def monic(self) -> UniPoly:
        if self.is_zero():
            return self
        return self.scale(1 / self.leading())

    def __call__(self, x: Fraction | int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_strings(self) -> list[str]:
        """Constant-first coefficient list as rational strings."""
        return [rat_to_str(c) for c in self.coeffs]

    @staticmethod
    def from_strings(items: Sequence[str]) -> UniPoly:
        return UniPoly(rat_from_str(s) for s in items)

    def __repr__(self) -> str:
        if self.is_zero():
            return "UniPoly(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*z" if c != 1 else "z")
            else:
                parts.append(f"{c}*z^{i}" if c != 1 else f"z^{i}")
        return "UniPoly(" + " + ".join(parts) + ")"


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd via the Euclidean algorithm (monic remainders keep the
    Fraction sizes in check)."""
    a, b = a.monic() if not a.is_zero() else a, b.monic() if not b.is_zero() else b
    while not b.is_zero():
        _, r = a.divrem(b)
        a, b = b, r.monic() if not r.is_zero() else r
    return a


def _divisors(m: int) -> list[int]:
    out = [d for d in range(1, m + 1) if m % d == 0]
    return out


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> UniPoly:
    """The m-th cyclotomic polynomial, by exact division of z^m - 1 by the
    cyclotomic polynomials of the proper divisors of m."""
    if m < 1:
        raise DomainError(f"cyclotomic index must be >= 1, got {m}")
    num = UniPoly([-1] + [0] * (m - 1) + [1])
    for d in _divisors(m):
        if d == m:
            continue
        q, r = num.divrem(cyclotomic(d))
        assert r.is_zero()
        num = q
    return num


class RationalGF:
    """Rational generating function num(z)/den(z) in canonical form:
    num and den coprime, den monic (hence nonzero at the constant term side
    whenever the series exists)."""

    __slots__ = ("num", "den")

    def __init__(self, num: UniPoly, den: UniPoly):
        if den.is_zero():
            raise DomainError("zero denominator")
        if num.is_zero():
            self.num = UniPoly()
            self.den = UniPoly([1])
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, _ = num.divrem(g)
            den, _ = den.divrem(g)
        lead = den.leading()
        self.num = num.scale(1 / lead)
        self.den = den.scale(1 / lead)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, RationalGF)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __add__(self, other: RationalGF) -> RationalGF:
        return RationalGF(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __neg__(self) -> RationalGF:
        return RationalGF(-self.num, self.den)

    def __sub__(self, other: RationalGF) -> RationalGF:
        return self + (-other)

    def __mul__(self, other: RationalGF) -> RationalGF:
        return RationalGF(self.num * other.num, self.den * other.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def expand(self, count: int) -> list[Fraction]:
        """First `count` Taylor coefficients at z = 0. Requires den(0) != 0."""
        d0 = self.den[0]
        if d0 == 0:
            raise DomainError("denominator vanishes at z = 0; no power series")
        out: list[Fraction] = []
        for k in range(count):
            acc = self.num[k]
            for j in range(1, min(k, self.den.degree) + 1):
                acc -= self.den[j] * out[k - j]
            out.append(acc / d0)
        return out

    def to_json_dict(self) -> dict:
        return {"num": self.num.to_strings(), "den": self.den.to_strings()}

    @staticmethod
    def from_json_dict(obj: dict) -> RationalGF:
        try:
            num = UniPoly.from_strings(obj["num"])
            den = UniPoly.from_strings(obj["den"])
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed rational function object: {exc}") from exc
        return RationalGF(num, den)

    def __repr__(self) -> str:
        return f"RationalGF({self.num!r} / {self.den!r})"


def _int_clear(p: UniPoly) -> list[int]:
    """Scale to integer coefficients with content 1."""
    from math import gcd, lcm

    den = lcm(*(c.denominator for c in p.coeffs)) if p.coeffs else 1
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return [v // g for v in ints] if g else ints


def _divisors_of(n: int) -> list[int]:
    """All positive divisors of |n| (n != 0), via factorization."""
    from sympy import factorint  # heavyweight import kept local

    divs = [1]
    for prime, mult in factorint(abs(n)).items():
        divs = [d * prime**k for d in divs for k in range(mult + 1)]
    return sorted(divs)


def _rational_roots(p: UniPoly) -> list[Fraction]:
    ints = _int_clear(p)
    roots = []
    for q in _divisors_of(ints[-1]):
        for r in _divisors_of(ints[0]):
            for cand in (Fraction(r, q), Fraction(-r, q)):
                if p(cand) == 0 and cand not in roots:
                    roots.append(cand)
    return roots


def partial_fractions(g: RationalGF) -> list[tuple[Fraction, Fraction]]:
    """Decompose g = sum c_i / (1 - delta_i z), requiring deg num < deg den and
    a denominator that splits over Q into distinct linear factors with nonzero
    roots. Returns (c_i, delta_i) pairs ordered by increasing delta_i."""
    if g.num.degree >= g.den.degree:
        raise DomainError("numerator degree must be below denominator degree")
    if g.den[0] == 0:
        raise DomainError("denominator vanishes at z = 0")
    if g.is_zero():
        return []
    roots = _rational_roots(g.den)
    check = UniPoly([1])
    for r in roots:
        check = check * UniPoly([-r, 1])
    quo, rem = g.den.divrem(check)
    if not rem.is_zero() or quo.degree != 0:
        raise DomainError(
            "denominator does not split into distinct linear factors over Q"
        )
    dprime = g.den.derivative()
    out = []
    for r in roots:
        c = -g.num(r) / (r * dprime(r))
        out.append((c, 1 / r))
    out.sort(key=lambda pair: pair[1])
    return out


def residue_limit(g: RationalGF, d: int, p: int) -> Fraction:
    """lim_{z -> 1/p^d} (1 - p^d z) * g(z), for g with at most a simple pole
    there. Zero when g is regular at the point."""
    r = Fraction(1, p**d)
    if g.den(r) != 0:
        return Fraction(0)
    den2, rem = g.den.divrem(UniPoly([-r, 1]))
    assert rem.is_zero()
    if den2(r) == 0:
        raise DomainError(f"pole at 1/{p}^{d} is not simple")
    return -(p**d) * g.num(r) / den2(r)
