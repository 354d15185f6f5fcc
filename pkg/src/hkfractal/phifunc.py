"""A small lab for functions on the p-power-denominator points of [0, 1].

A PhiFunction maps points a/p^n to rationals. The central example is the
normalized colength function of a hypersurface f,

    phi_f(a/p^n) = p^{-sn} * colength(f, a, n),

which is well defined on reduced fractions because colength scales by p^s
when (a, n) moves to (pa, n+1). Around it live the closure operators that
preserve rationality of the associated e-sequences: sums, scalar multiples,
products, the reflection phi(1-t), and the rescaled translates

    (T_{p^n|b} phi)(a/p^m) = phi((a + b p^m) / p^{m+n}).

Hilbert-Kunz and F-signature values are thin wrappers over colength:
HK_f(n) = colength(f, 1, n) and FS_f(n) = p^{sn} - colength(f, p^n - 1, n).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .colength import DEFAULT_DIM_BUDGET, colength
from .errors import DomainError, ParseError
from .fppoly import FpPoly
from .ratfunc import rat_from_str

__all__ = [
    "DyadicPoint",
    "PhiFunction",
    "hypersurface_phi",
    "phi_eval",
    "reflect",
    "shift",
    "e_sequence",
    "hk_function",
    "fs_function",
    "product_phi",
]


@dataclass(frozen=True)
class DyadicPoint:
    """A point a/p^n of [0, 1] in lowest terms (p does not divide a unless
    n = 0)."""

    a: int
    n: int
    p: int

    @staticmethod
    def make(a: int, n: int, p: int) -> DyadicPoint:
        if p < 2:
            raise DomainError(f"p must be at least 2, got {p}")
        if n < 0 or not 0 <= a <= p**n:
            raise DomainError(f"{a}/{p}^{n} is not a point of [0, 1]")
        while n > 0 and a % p == 0:
            a //= p
            n -= 1
        return DyadicPoint(a, n, p)

    @staticmethod
    def parse(text: str, p: int) -> DyadicPoint:
        value = rat_from_str(text)
        if not 0 <= value <= 1:
            raise DomainError(f"point {text} lies outside [0, 1]")
        den = value.denominator
        n = 0
        while den > 1:
            if den % p:
                raise ParseError(f"denominator of {text} is not a power of {p}")
            den //= p
            n += 1
        return DyadicPoint(value.numerator, n, p)

    def value(self) -> Fraction:
        return Fraction(self.a, self.p**self.n)

    def __str__(self) -> str:
        return str(self.value())


class PhiFunction:
    """Base node of an evaluator tree. Values are cached per reduced point."""

    __slots__ = ("p", "_cache")

    def __init__(self, p: int):
        self.p = p
        self._cache: dict[tuple[int, int], Fraction] = {}

    def _point(self, t) -> DyadicPoint:
        if isinstance(t, DyadicPoint):
            if t.p != self.p:
                raise DomainError(f"point has p={t.p}, function has p={self.p}")
            return DyadicPoint.make(t.a, t.n, self.p)
        if isinstance(t, str):
            return DyadicPoint.parse(t, self.p)
        if isinstance(t, tuple):
            return DyadicPoint.make(t[0], t[1], self.p)
        if isinstance(t, (int, Fraction)):
            value = Fraction(t)
            if not 0 <= value <= 1:
                raise DomainError(f"point {t} lies outside [0, 1]")
            den = value.denominator
            n = 0
            while den > 1:
                if den % self.p:
                    raise DomainError(f"denominator of {t} is not a power of {self.p}")
                den //= self.p
                n += 1
            return DyadicPoint(value.numerator, n, self.p)
        raise DomainError(f"cannot interpret {t!r} as a point")

    def value(self, t) -> Fraction:
        pt = self._point(t)
        key = (pt.a, pt.n)
        got = self._cache.get(key)
        if got is None:
            got = self._value_at(pt.a, pt.n)
            self._cache[key] = got
        return got

    def _value_at(self, a: int, n: int) -> Fraction:
        raise NotImplementedError

    # combinators

    def __add__(self, other: PhiFunction) -> PhiFunction:
        return _Sum(self, self._coerce(other))

    def __sub__(self, other: PhiFunction) -> PhiFunction:
        return _Sum(self, _Scale(Fraction(-1), self._coerce(other)))

    def __mul__(self, other) -> PhiFunction:
        if isinstance(other, PhiFunction):
            return _Product(self, other)
        return _Scale(Fraction(other), self)

    def __rmul__(self, other) -> PhiFunction:
        return _Scale(Fraction(other), self)

    def _coerce(self, other) -> PhiFunction:
        if isinstance(other, PhiFunction):
            if other.p != self.p:
                raise DomainError("functions live over different primes")
            return other
        return PhiFunction.constant(Fraction(other), self.p)

    def reflect(self) -> PhiFunction:
        return _Reflect(self)

    def shift(self, n: int, b: int) -> PhiFunction:
        return _Shift(self, n, b)

    @staticmethod
    def constant(c, p: int) -> PhiFunction:
        return _Constant(Fraction(c), p)

    @staticmethod
    def from_callable(fn: Callable[[int, int], Fraction], p: int) -> PhiFunction:
        """Wrap fn(a, n) -> value, with (a, n) always in lowest terms."""
        return _Callable(fn, p)


class _Hypersurface(PhiFunction):
    __slots__ = ("f", "budget")

    def __init__(self, f: FpPoly, budget: int):
        if f.is_zero() or f.constant_term():
            raise DomainError("f must be nonzero with zero constant term")
        super().__init__(f.p)
        self.f = f
        self.budget = budget

    def _value_at(self, a: int, n: int) -> Fraction:
        return Fraction(
            colength(self.f, a, n, budget=self.budget), self.p ** (self.f.s * n)
        )


class _Constant(PhiFunction):
    __slots__ = ("c",)

    def __init__(self, c: Fraction, p: int):
        super().__init__(p)
        self.c = c

    def _value_at(self, a: int, n: int) -> Fraction:
        return self.c


class _Callable(PhiFunction):
    __slots__ = ("fn",)

    def __init__(self, fn: Callable[[int, int], Fraction], p: int):
        super().__init__(p)
        self.fn = fn

    def _value_at(self, a: int, n: int) -> Fraction:
        return Fraction(self.fn(a, n))


class _Sum(PhiFunction):
    __slots__ = ("left", "right")

    def __init__(self, left: PhiFunction, right: PhiFunction):
        if left.p != right.p:
            raise DomainError("functions live over different primes")
        super().__init__(left.p)
        self.left = left
        self.right = right

    def _value_at(self, a: int, n: int) -> Fraction:
        pt = DyadicPoint(a, n, self.p)
        return self.left.value(pt) + self.right.value(pt)


class _Product(PhiFunction):
    __slots__ = ("left", "right")

    def __init__(self, left: PhiFunction, right: PhiFunction):
        if left.p != right.p:
            raise DomainError("functions live over different primes")
        super().__init__(left.p)
        self.left = left
        self.right = right

    def _value_at(self, a: int, n: int) -> Fraction:
        pt = DyadicPoint(a, n, self.p)
        return self.left.value(pt) * self.right.value(pt)


class _Scale(PhiFunction):
    __slots__ = ("c", "child")

    def __init__(self, c: Fraction, child: PhiFunction):
        super().__init__(child.p)
        self.c = c
        self.child = child

    def _value_at(self, a: int, n: int) -> Fraction:
        return self.c * self.child.value(DyadicPoint(a, n, self.p))


class _Reflect(PhiFunction):
    __slots__ = ("child",)

    def __init__(self, child: PhiFunction):
        super().__init__(child.p)
        self.child = child

    def _value_at(self, a: int, n: int) -> Fraction:
        return self.child.value(DyadicPoint.make(self.p**n - a, n, self.p))


class _Shift(PhiFunction):
    """(T_{p^n|b} phi)(a/p^m) = phi((a + b p^m) / p^{m+n})."""

    __slots__ = ("child", "level", "b")

    def __init__(self, child: PhiFunction, n: int, b: int):
        if n < 0 or not 0 <= b < child.p**n:
            raise DomainError(f"shift needs 0 <= b < p^n, got b={b}, n={n}")
        super().__init__(child.p)
        self.child = child
        self.level = n
        self.b = b

    def _value_at(self, a: int, m: int) -> Fraction:
        target = DyadicPoint.make(
            a + self.b * self.p**m, m + self.level, self.p
        )
        return self.child.value(target)


def hypersurface_phi(f: FpPoly, budget: int = DEFAULT_DIM_BUDGET) -> PhiFunction:
    """phi_f(a/p^n) = p^{-sn} colength(f, a, n)."""
    return _Hypersurface(f, budget)


def phi_eval(phi: PhiFunction, t) -> Fraction:
    return phi.value(t)


def reflect(phi: PhiFunction) -> PhiFunction:
    """The function t -> phi(1 - t)."""
    return phi.reflect()


def shift(phi: PhiFunction, n: int, b: int) -> PhiFunction:
    """The rescaled translate T_{p^n|b} phi."""
    return phi.shift(n, b)


def e_sequence(phi: PhiFunction, s: int, nmax: int) -> list[Fraction]:
    """[p^{ns} phi(1/p^n) for n = 0..nmax]."""
    if nmax < 0:
        raise DomainError(f"nmax must be >= 0, got {nmax}")
    p = phi.p
    return [p ** (n * s) * phi.value(DyadicPoint.make(1, n, p)) for n in range(nmax + 1)]


def hk_function(f: FpPoly, n: int, budget: int = DEFAULT_DIM_BUDGET) -> int:
    """Hilbert-Kunz function: the colength of (m^[p^n], f)."""
    return colength(f, 1, n, budget=budget)


def fs_function(f: FpPoly, n: int, budget: int = DEFAULT_DIM_BUDGET) -> int:
    """F-signature function: the free rank of A/f over its Frobenius image,
    p^{sn} - colength(f, p^n - 1, n)."""
    return f.p ** (f.s * n) - colength(f, f.p**n - 1, n, budget=budget)


def product_phi(phi: PhiFunction, psi: PhiFunction) -> PhiFunction:
    """phi_{fg} for hypersurfaces on disjoint variables: phi + psi - phi*psi."""
    return phi + psi - phi * psi
