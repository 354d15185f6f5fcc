"""Sparse multivariate polynomials over a prime field F_p.

Terms live in a dict mapping exponent tuples to nonzero coefficients in
[1, p). The only arithmetic the rest of the package needs is multiplication
(optionally truncated modulo the Frobenius power m^[q]) and the base-p
decomposition trick for f^a mod m^[q]: if a = sum a_i p^i then
f^a = prod (f^{a_i})^{p^i}, and raising to the p^i-th power just scales every
exponent by p^i because coefficients are fixed by Frobenius.
"""

from __future__ import annotations

import re

from .errors import DomainError, ParseError

__all__ = [
    "FpPoly",
    "is_prime",
    "parse_poly",
    "truncate",
    "power_mod",
    "joined_product",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class FpPoly:
    """Polynomial in s variables over F_p. Immutable by convention."""

    __slots__ = ("p", "s", "terms")

    def __init__(self, p: int, s: int, terms: dict[tuple[int, ...], int]):
        if not is_prime(p):
            raise DomainError(f"p must be prime, got {p}")
        if s < 1:
            raise DomainError(f"need at least one variable, got s={s}")
        clean: dict[tuple[int, ...], int] = {}
        for mono, coeff in terms.items():
            mono = tuple(mono)
            if len(mono) != s or any(e < 0 for e in mono):
                raise DomainError(f"bad exponent tuple {mono} for s={s}")
            c = coeff % p
            if c:
                clean[mono] = c
        self.p = p
        self.s = s
        self.terms = clean

    @staticmethod
    def zero(p: int, s: int) -> FpPoly:
        return FpPoly(p, s, {})

    @staticmethod
    def one(p: int, s: int) -> FpPoly:
        return FpPoly(p, s, {(0,) * s: 1})

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.s, 0)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FpPoly)
            and self.p == other.p
            and self.s == other.s
            and self.terms == other.terms
        )

    def __len__(self) -> int:
        return len(self.terms)

    def _check_ring(self, other: FpPoly) -> None:
        if self.p != other.p or self.s != other.s:
            raise DomainError("polynomials live in different rings")

    def __add__(self, other: FpPoly) -> FpPoly:
        self._check_ring(other)
        acc = dict(self.terms)
        for mono, c in other.terms.items():
            acc[mono] = (acc.get(mono, 0) + c) % self.p
        return FpPoly(self.p, self.s, acc)

    def mul(self, other: FpPoly, q: int | None = None) -> FpPoly:
        """Product, dropping any term with an exponent >= q when q is given.

        Dropping early is sound: exponents only grow under multiplication, so
        a term outside the box [0, q)^s can never contribute inside it.
        """
        self._check_ring(other)
        p = self.p
        acc: dict[tuple[int, ...], int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                if q is not None and any(e >= q for e in mono):
                    continue
                v = (acc.get(mono, 0) + c1 * c2) % p
                if v:
                    acc[mono] = v
                else:
                    acc.pop(mono, None)
        return FpPoly(p, self.s, acc)

    def __mul__(self, other: FpPoly) -> FpPoly:
        return self.mul(other)

    def frobenius_scale(self, factor: int) -> FpPoly:
        """f(x) -> f(x^factor); equals f^factor when factor is a power of p."""
        return FpPoly(
            self.p,
            self.s,
            {tuple(e * factor for e in mono): c for mono, c in self.terms.items()},
        )

    def extend(self, s_new: int, offset: int) -> FpPoly:
        """View in a larger ring with s_new variables, shifting ours by offset."""
        if offset < 0 or offset + self.s > s_new:
            raise DomainError("variables do not fit in the target ring")
        pad_left = (0,) * offset
        pad_right = (0,) * (s_new - offset - self.s)
        return FpPoly(
            self.p,
            s_new,
            {pad_left + mono + pad_right: c for mono, c in self.terms.items()},
        )

    def __repr__(self) -> str:
        if not self.terms:
            return f"FpPoly(0 over F_{self.p})"
        parts = []
        for mono in sorted(self.terms, key=lambda m: (sum(m), m)):
            c = self.terms[mono]
            factors = []
            if c != 1 or not any(mono):
                factors.append(str(c))
            for k, e in enumerate(mono):
                if e == 1:
                    factors.append(f"x{k + 1}")
                elif e > 1:
                    factors.append(f"x{k + 1}^{e}")
            parts.append("*".join(factors))
        return f"FpPoly({' + '.join(parts)} over F_{self.p})"


_ALIASES = {"x": "x1", "y": "x2", "z": "x3", "w": "x4"}
_VAR_RE = re.compile(r"^([a-zA-Z]\w*)(?:\^(\d+))?$")
_INT_RE = re.compile(r"^[+-]?\d+$")


def _canonical_var(name: str) -> str:
    name = _ALIASES.get(name, name)
    if not re.match(r"^x[1-9]\d*$", name):
        raise ParseError(f"unknown variable {name!r} (use x,y,z,w or x1,x2,...)")
    return name


def parse_poly(
    text: str, p: int, var_names: list[str] | None = None
) -> tuple[FpPoly, list[str]]:
    """Parse sums of terms like "3*x^2*y - x3" over F_p.

    Variables x,y,z,w alias x1..x4; any xk is accepted. Returns the polynomial
    and the ordered variable names it uses. When var_names is given it fixes
    both the ring's variable set and its order; otherwise the distinct
    variables appearing in the text are used, ordered by index.
    """
    if not is_prime(p):
        raise DomainError(f"p must be prime, got {p}")
    stripped = text.replace(" ", "").replace("\t", "")
    if not stripped:
        raise ParseError("empty polynomial text")
    if stripped[0] not in "+-":
        stripped = "+" + stripped
    raw_terms = re.findall(r"[+-][^+-]+", stripped)
    if sum(len(t) for t in raw_terms) != len(stripped):
        raise ParseError(f"cannot tokenize polynomial text {text!r}")

    # first pass: (coefficient, {canonical var: exponent}) per term
    parsed: list[tuple[int, dict[str, int]]] = []
    seen: set[str] = set()
    spelling: dict[str, str] = {}
    for raw in raw_terms:
        sign, body = raw[0], raw[1:]
        if not body:
            raise ParseError(f"dangling sign in {text!r}")
        coeff = -1 if sign == "-" else 1
        exps: dict[str, int] = {}
        saw_coeff = False
        for factor in body.split("*"):
            if _INT_RE.match(factor):
                if saw_coeff:
                    raise ParseError(f"two numeric factors in term {raw!r}")
                saw_coeff = True
                coeff *= int(factor)
                continue
            m = _VAR_RE.match(factor)
            if not m:
                raise ParseError(f"bad factor {factor!r} in term {raw!r}")
            var = _canonical_var(m.group(1))
            spelling.setdefault(var, m.group(1))
            exps[var] = exps.get(var, 0) + (int(m.group(2)) if m.group(2) else 1)
        parsed.append((coeff, exps))
        seen.update(exps)

    if var_names is not None:
        order = [_canonical_var(v.strip()) for v in var_names]
        if len(set(order)) != len(order):
            raise ParseError(f"duplicate variable in {var_names!r}")
        extra = seen - set(order)
        if extra:
            raise ParseError(f"variables {sorted(extra)!r} not in {var_names!r}")
        display = [v.strip() for v in var_names]
    else:
        order = sorted(seen, key=lambda v: int(v[1:]))
        display = [spelling[v] for v in order]
    if not order:
        raise ParseError("polynomial uses no variables and none were declared")

    index = {v: k for k, v in enumerate(order)}
    s = len(order)
    terms: dict[tuple[int, ...], int] = {}
    for coeff, exps in parsed:
        mono = [0] * s
        for var, e in exps.items():
            mono[index[var]] = e
        key = tuple(mono)
        terms[key] = terms.get(key, 0) + coeff
    return FpPoly(p, s, terms), display


def _power_of(q: int, p: int) -> int:
    """Return n with q = p^n, or raise."""
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    n = 0
    while q > 1:
        if q % p:
            raise DomainError(f"q={q} is not a power of p={p}")
        q //= p
        n += 1
    return n


def truncate(f: FpPoly, q: int) -> FpPoly:
    """Reduce modulo m^[q] = (x_1^q, ..., x_s^q): drop terms with an exponent
    >= q. Requires q to be a power of f.p."""
    _power_of(q, f.p)
    kept = {m: c for m, c in f.terms.items() if all(e < q for e in m)}
    return FpPoly(f.p, f.s, kept)


def power_mod(f: FpPoly, a: int, q: int) -> FpPoly:
    """f^a modulo m^[q], via the base-p digits of a.

    Each digit power f^{a_i} is computed with truncated multiplications, then
    Frobenius-scaled by p^i; intermediate truncation is sound because dropped
    exponents stay >= q under both scaling and multiplication.
    """
    if a < 0:
        raise DomainError(f"exponent must be >= 0, got {a}")
    p = f.p
    _power_of(q, p)
    acc = truncate(FpPoly.one(p, f.s), q)
    if a == 0:
        return acc
    base = truncate(f, q)
    scale = 1
    while a:
        digit = a % p
        if digit:
            h = base
            for _ in range(digit - 1):
                h = h.mul(base, q)
            acc = acc.mul(truncate(h.frobenius_scale(scale), q), q)
        a //= p
        scale *= p
    return acc


def joined_product(f: FpPoly, g: FpPoly) -> FpPoly:
    """f*g in the joined ring on disjoint variable sets (f's variables first)."""
    if f.p != g.p:
        raise DomainError("polynomials live over different primes")
    s = f.s + g.s
    return f.extend(s, 0) * g.extend(s, f.s)
