"""Quasi-polynomials in p^n, their rational generating series, and exact
linear-recurrence certificates.

A quasi-polynomial here is e_n = sum_j a_j(n) p^{jn} with each a_j periodic of
period M_j. Its generating series sum e_n z^n is rational with denominator
dividing prod_j (1 - p^{j M_j} z^{M_j}); conversely a series of that shape is
decoded by per-residue polynomial interpolation at the nodes p^{jM}.

Rationality of a prefix is certified by exhibiting a linear recurrence
e_k = sum_{j=1}^m c_j e_{k-j} valid for all start+m <= k < len(prefix); the
search is exact (Gaussian elimination over Q on the full overdetermined
system) and deterministic, returning the smallest order, then the smallest
start, with free parameters pinned to zero. A certificate converts to the
canonical rational function P(z) / (1 - sum c_j z^j) whose expansion
reproduces the prefix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .fppoly import is_prime
from .phifunc import PhiFunction, e_sequence
from .ratfunc import RationalGF, UniPoly, rat_from_str, rat_to_str, residue_limit

__all__ = [
    "QuasiPolynomial",
    "qp_eval",
    "series_of_qp",
    "qp_of_series",
    "fit_quasi_polynomial",
    "fit_series",
    "RecurrenceCertificate",
    "detect_recurrence",
    "gf_of_certified",
    "PFractalReport",
    "weak_pfractal_report",
    "multiplicity_from_series",
    "rnc_hk",
]


def _minimal_period(table: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    n = len(table)
    for m in range(1, n + 1):
        if n % m == 0 and all(table[i] == table[i % m] for i in range(n)):
            return table[:m]
    return table


class QuasiPolynomial:
    """e_n = sum_j tables[j][n mod len(tables[j])] * p^{jn}.

    Construction normalizes: every table is cut to its minimal period and
    identically-zero leading tables are dropped, so tables[-1] is nonzero
    unless the whole function is zero (then a single [0] table remains).
    """

    __slots__ = ("p", "tables")

    def __init__(self, p: int, tables):
        if not is_prime(p):
            raise DomainError(f"p must be prime, got {p}")
        tabs = [tuple(Fraction(c) for c in t) for t in tables]
        if not tabs or any(not t for t in tabs):
            raise DomainError("tables must be nonempty")
        while len(tabs) > 1 and all(c == 0 for c in tabs[-1]):
            tabs.pop()
        self.p = p
        self.tables = tuple(_minimal_period(t) for t in tabs)

    @property
    def degree(self) -> int:
        return len(self.tables) - 1

    @property
    def periods(self) -> tuple[int, ...]:
        return tuple(len(t) for t in self.tables)

    def eval(self, n: int) -> Fraction:
        if n < 0:
            raise DomainError(f"index must be >= 0, got {n}")
        return sum(
            (t[n % len(t)] * self.p ** (j * n) for j, t in enumerate(self.tables)),
            Fraction(0),
        )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, QuasiPolynomial)
            and self.p == other.p
            and self.tables == other.tables
        )

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "d": self.degree,
            "tables": [[rat_to_str(c) for c in t] for t in self.tables],
        }

    @staticmethod
    def from_json_dict(obj: dict) -> QuasiPolynomial:
        from .errors import ParseError

        try:
            p = int(obj["p"])
            tables = [[rat_from_str(c) for c in t] for t in obj["tables"]]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed quasi-polynomial object: {exc}") from exc
        return QuasiPolynomial(p, tables)

    def __repr__(self) -> str:
        return f"QuasiPolynomial(p={self.p}, tables={self.tables})"


def qp_eval(qp: QuasiPolynomial, n: int) -> Fraction:
    return qp.eval(n)


def series_of_qp(qp: QuasiPolynomial) -> RationalGF:
    """sum_n e_n z^n as a canonical rational function. Each nonzero table
    contributes sum_i a_j(i) p^{ji} z^i / (1 - p^{jM} z^M)."""
    p = qp.p
    total = RationalGF(UniPoly(), UniPoly([1]))
    for j, table in enumerate(qp.tables):
        if all(c == 0 for c in table):
            continue
        m = len(table)
        num = UniPoly([table[i] * p ** (j * i) for i in range(m)])
        den = UniPoly([1] + [0] * (m - 1) + [-(p ** (j * m))])
        total = total + RationalGF(num, den)
    return total


def _interpolate(points: list[tuple[Fraction, Fraction]]) -> UniPoly:
    """Lagrange interpolation through distinct nodes."""
    result = UniPoly()
    for i, (xi, yi) in enumerate(points):
        if yi == 0:
            continue
        basis = UniPoly([yi])
        for k, (xk, _) in enumerate(points):
            if k == i:
                continue
            basis = basis * UniPoly([-xk / (xi - xk), 1 / (xi - xk)])
        result = result + basis
    return result


def _structured_denominator(d: int, m: int, p: int) -> UniPoly:
    den = UniPoly([1])
    for j in range(d + 1):
        den = den * UniPoly([1] + [0] * (m - 1) + [-(p ** (j * m))])
    return den


def _tables_from_values(values: list[Fraction], d: int, m: int, p: int):
    """Per-residue interpolation: P_i(p^{Mt}) = e_{tM+i} for t = 0..d; table
    entry a_j(i) is the degree-j coefficient of P_i divided by p^{ji}."""
    tables = [[Fraction(0)] * m for _ in range(d + 1)]
    for i in range(m):
        pts = [
            (Fraction(p ** (m * t)), Fraction(values[t * m + i])) for t in range(d + 1)
        ]
        poly = _interpolate(pts)
        if poly.degree > d:
            raise DomainError("interpolation exceeded the promised degree")
        for j in range(d + 1):
            tables[j][i] = poly[j] / p ** (j * i)
    return tables


def qp_of_series(g: RationalGF, d: int, m: int, p: int) -> QuasiPolynomial:
    """Invert series_of_qp for a series promised to have degree <= d and
    period dividing m: g must equal P/Q with Q = prod_j (1 - p^{jm} z^m) and
    deg P < deg Q."""
    if d < 0 or m < 1:
        raise DomainError(f"need d >= 0 and M >= 1, got d={d}, M={m}")
    if not is_prime(p):
        raise DomainError(f"p must be prime, got {p}")
    q = _structured_denominator(d, m, p)
    num, rem = (g.num * q).divrem(g.den)
    if not rem.is_zero():
        raise DomainError(
            f"series is not P/Q with Q = prod(1 - p^(j*{m}) z^{m}), j <= {d}"
        )
    if num.degree >= q.degree:
        raise DomainError("series has a polynomial part; not a quasi-polynomial")
    count = m * (d + 1)
    values = g.expand(count)
    return QuasiPolynomial(p, _tables_from_values(values, d, m, p))


def fit_quasi_polynomial(
    prefix: list[Fraction | int], d: int, m: int, p: int
) -> QuasiPolynomial:
    """Interpolate a quasi-polynomial of degree d and period m through the
    first m(d+1) terms and insist it reproduces the whole prefix."""
    if d < 0 or m < 1:
        raise DomainError(f"need d >= 0 and M >= 1, got d={d}, M={m}")
    need = m * (d + 1)
    if len(prefix) < need:
        raise DomainError(f"need at least {need} terms, got {len(prefix)}")
    values = [Fraction(v) for v in prefix]
    qp = QuasiPolynomial(p, _tables_from_values(values[:need], d, m, p))
    for n, v in enumerate(values):
        if qp.eval(n) != v:
            raise DomainError(
                f"prefix is not a (d={d}, M={m}) quasi-polynomial: "
                f"mismatch at n={n}"
            )
    return qp


def fit_series(
    prefix: list[Fraction | int], d: int, m: int, p: int
) -> tuple[RationalGF, int]:
    """Fit P(z)/prod_j(1 - p^{jm} z^m) to the prefix, tolerating an initial
    transient: multiply the prefix by the structured denominator and require
    the computable tail of the product to vanish. Returns the canonical fit
    and the number of vanished tail coefficients (the verification margin)."""
    if d < 0 or m < 1:
        raise DomainError(f"need d >= 0 and M >= 1, got d={d}, M={m}")
    if not is_prime(p):
        raise DomainError(f"p must be prime, got {p}")
    values = [Fraction(v) for v in prefix]
    den = _structured_denominator(d, m, p)
    prod = [
        sum(
            (den[j] * values[k - j] for j in range(min(k, den.degree) + 1)),
            Fraction(0),
        )
        for k in range(len(values))
    ]
    last = max((k for k, c in enumerate(prod) if c != 0), default=-1)
    margin = len(values) - 1 - last
    if margin < 1:
        raise DomainError(
            f"prefix of length {len(values)} does not support a "
            f"(d={d}, M={m}) fit: no tail coefficient vanishes"
        )
    return RationalGF(UniPoly(prod[: last + 1]), den), margin


@dataclass(frozen=True)
class RecurrenceCertificate:
    """Asserts e_k = sum_{j=1}^order coeffs[j-1] * e_{k-j} for every k with
    start + order <= k < verified_len."""

    order: int
    coeffs: tuple[Fraction, ...]
    start: int
    verified_len: int

    def check(self, prefix: list[Fraction | int]) -> bool:
        values = [Fraction(v) for v in prefix]
        upto = min(len(values), self.verified_len)
        for k in range(self.start + self.order, upto):
            if values[k] != sum(
                (self.coeffs[j] * values[k - 1 - j] for j in range(self.order)),
                Fraction(0),
            ):
                return False
        return True

    def to_json_dict(self) -> dict:
        return {
            "order": self.order,
            "coeffs": [rat_to_str(c) for c in self.coeffs],
            "start": self.start,
            "verified_len": self.verified_len,
        }


def _solve_recurrence(values: list[Fraction], m: int, start: int):
    """Exact least-order solve of the full system for (order m, start): rows
    are e_k = sum c_j e_{k-j}, start+m <= k < len. Returns coefficients or
    None if inconsistent. Free variables are pinned to zero."""
    pivots: dict[int, list[Fraction]] = {}
    for k in range(start + m, len(values)):
        row = [values[k - j] for j in range(1, m + 1)] + [values[k]]
        for col in sorted(pivots):
            c = row[col]
            if c:
                prow = pivots[col]
                row = [a - c * b for a, b in zip(row, prow)]
        lead = next((i for i in range(m) if row[i]), None)
        if lead is None:
            if row[m]:
                return None
            continue
        inv = 1 / row[lead]
        row = [a * inv for a in row]
        for col, prow in pivots.items():
            c = prow[lead]
            if c:
                pivots[col] = [a - c * b for a, b in zip(prow, row)]
        pivots[lead] = row
    coeffs = [Fraction(0)] * m
    for col, prow in pivots.items():
        coeffs[col] = prow[m]
    return tuple(coeffs)


def detect_recurrence(
    prefix: list[Fraction | int], max_order: int, max_start: int = 0
):
    """Search for the smallest-order (then smallest-start) linear recurrence
    satisfied by the prefix from index start+order on. Requires enough terms
    that even the largest search window is overdetermined."""
    if max_order < 1 or max_start < 0:
        raise DomainError(
            f"need max_order >= 1 and max_start >= 0, got {max_order}, {max_start}"
        )
    if len(prefix) < 2 * max_order + max_start + 1:
        raise DomainError(
            f"prefix of length {len(prefix)} is too short for max_order="
            f"{max_order}, max_start={max_start} "
            f"(need {2 * max_order + max_start + 1})"
        )
    values = [Fraction(v) for v in prefix]
    for m in range(1, max_order + 1):
        for start in range(0, max_start + 1):
            coeffs = _solve_recurrence(values, m, start)
            if coeffs is not None:
                return RecurrenceCertificate(m, coeffs, start, len(values))
    return None


def gf_of_certified(
    prefix: list[Fraction | int], cert: RecurrenceCertificate
) -> RationalGF:
    """Canonical P(z)/B(z) with B = 1 - sum c_j z^j and P the truncation of
    B * (prefix series) below degree start+order. Expanding it reproduces the
    prefix exactly."""
    values = [Fraction(v) for v in prefix]
    if len(values) < cert.start + cert.order:
        raise DomainError("prefix shorter than the certificate's transient")
    full = RecurrenceCertificate(cert.order, cert.coeffs, cert.start, len(values))
    if not full.check(values):
        raise DomainError("certificate does not hold on the given prefix")
    bpoly = UniPoly([Fraction(1)] + [-c for c in cert.coeffs])
    head = [
        sum(
            (bpoly[j] * values[k - j] for j in range(min(k, cert.order) + 1)),
            Fraction(0),
        )
        for k in range(cert.start + cert.order)
    ]
    return RationalGF(UniPoly(head), bpoly)


@dataclass(frozen=True)
class PFractalReport:
    """Outcome of the finite rationality search for an e-sequence.

    verdict is "certified-rational" when a recurrence was found; otherwise
    "no-recurrence-found", a statement about the searched bounds only, never
    a proof of irrationality.
    """

    p: int
    s: int
    terms: tuple[Fraction, ...]
    max_order: int
    max_start: int
    certificate: RecurrenceCertificate | None
    gf: RationalGF | None
    verdict: str

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "s": self.s,
            "prefix_len": len(self.terms),
            "terms": [rat_to_str(t) for t in self.terms],
            "max_order": self.max_order,
            "max_start": self.max_start,
            "verdict": self.verdict,
            "certificate": self.certificate.to_json_dict()
            if self.certificate
            else None,
            "gf": self.gf.to_json_dict() if self.gf else None,
        }


def weak_pfractal_report(
    phi: PhiFunction, s: int, nmax: int, max_order: int
) -> PFractalReport:
    """Compute e_{s,n}(phi) for n = 0..nmax and search for a recurrence with
    the given order bound; the start bound is the largest the prefix length
    supports."""
    terms = e_sequence(phi, s, nmax)
    max_start = len(terms) - 2 * max_order - 1
    if max_start < 0:
        raise DomainError(
            f"nmax={nmax} is too small for max_order={max_order}; "
            f"need nmax >= {2 * max_order}"
        )
    cert = detect_recurrence(terms, max_order, max_start)
    gf = gf_of_certified(terms, cert) if cert else None
    verdict = "certified-rational" if cert else "no-recurrence-found"
    return PFractalReport(
        p=phi.p,
        s=s,
        terms=tuple(terms),
        max_order=max_order,
        max_start=max_start,
        certificate=cert,
        gf=gf,
        verdict=verdict,
    )


def multiplicity_from_series(g: RationalGF, d: int, p: int) -> Fraction:
    """The Hilbert-Kunz multiplicity as the residue-style limit
    lim_{z -> 1/p^d} (1 - p^d z) g(z)."""
    return residue_limit(g, d, p)


def rnc_hk(g: int, p: int, n: int) -> int:
    """Hilbert-Kunz function of the degree-g rational normal cone:
    ((g+1)/2) p^{2n} + (-v^2 + v g - g + 1)/2 with v = (p^n - 1) mod g."""
    if g < 1:
        raise DomainError(f"cone degree must be >= 1, got {g}")
    if not is_prime(p):
        raise DomainError(f"p must be prime, got {p}")
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    v = (p**n - 1) % g
    value = Fraction(g + 1, 2) * p ** (2 * n) + Fraction(-v * v + v * g - g + 1, 2)
    assert value.denominator == 1
    return int(value)
