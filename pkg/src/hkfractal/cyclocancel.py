"""Cancellation analysis for the generating function of e_n = a_d p^{dn} + a_0(n)
with a_0 periodic of period M.

Writing the series over the product denominator Q = (1 - p^d z)(1 - z^M), the
numerator is the explicit polynomial

    P(z) = (a_d + a_0(0)) + sum_{i=1}^{M-1} (a_0(i) - p^d a_0(i-1)) z^i
           + (-a_d - p^d a_0(M-1)) z^M.

Telescoping gives P(1/p^d) = a_d (1 - p^{-dM}), so the geometric factor never
cancels; which cyclotomic factors of 1 - z^M cancel is controlled by a linear
system over Q. Requiring the primitive M-th roots of unity to kill P is, in
the power basis of Q(zeta_M), a phi(M) x M integer system whose column i is
the coefficient vector of z^i - p^d z^{(i+1) mod M} reduced modulo the M-th
cyclotomic polynomial. The system always has full rank phi(M), so its kernel
has dimension M - phi(M). Vectors periodic of period a proper divisor of M
lie in the kernel; whether they span it is checked numerically here for any
M, though a proof is only known when M has at most two distinct prime
factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, HKFractalError
from .fppoly import is_prime
from .ratfunc import RationalGF, UniPoly, cyclotomic, rat_to_str

__all__ = [
    "CancellationInput",
    "SMSystem",
    "QuestionReport",
    "CancellationReport",
    "build_pq",
    "check_pd_not_root",
    "sm_system",
    "sm_dimension",
    "vl_basis",
    "vl_sum_dimension",
    "question_check",
    "cancellation_analyze",
    "rational_rank",
]


@dataclass(frozen=True)
class CancellationInput:
    """The data of e_n = a_d p^{dn} + a_0(n mod M): a positive leading
    multiplicity a_d, degree d >= 1, prime p, and the period table of a_0."""

    a_d: Fraction
    d: int
    p: int
    a0: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "a_d", Fraction(self.a_d))
        object.__setattr__(self, "a0", tuple(Fraction(c) for c in self.a0))
        if self.a_d <= 0:
            raise DomainError(f"leading multiplicity must be positive, got {self.a_d}")
        if self.d < 1:
            raise DomainError(f"degree must be >= 1, got {self.d}")
        if not is_prime(self.p):
            raise DomainError(f"p must be prime, got {self.p}")
        if not self.a0:
            raise DomainError("a_0 table must be nonempty")

    @property
    def m(self) -> int:
        return len(self.a0)

    def eval(self, n: int) -> Fraction:
        return self.a_d * self.p ** (self.d * n) + self.a0[n % self.m]


def build_pq(ci: CancellationInput) -> tuple[UniPoly, UniPoly]:
    """The explicit numerator P and denominator Q = (1-p^d z)(1-z^M)."""
    t = ci.p**ci.d
    m = ci.m
    coeffs = [ci.a_d + ci.a0[0]]
    coeffs += [ci.a0[i] - t * ci.a0[i - 1] for i in range(1, m)]
    coeffs += [-ci.a_d - t * ci.a0[m - 1]]
    p_poly = UniPoly(coeffs)
    q_poly = UniPoly([1, -t]) * UniPoly([1] + [0] * (m - 1) + [-1])
    return p_poly, q_poly


def check_pd_not_root(ci: CancellationInput) -> bool:
    """P(1/p^d) = a_d (1 - p^{-dM}) != 0: the geometric factor survives."""
    p_poly, _ = build_pq(ci)
    return p_poly(Fraction(1, ci.p**ci.d)) != 0


def _reduced_power(i: int, m: int) -> UniPoly:
    phi = cyclotomic(m)
    _, rem = UniPoly([0] * i + [1]).divrem(phi)
    return rem


@dataclass(frozen=True)
class SMSystem:
    """The phi(M) x M system expressing "zeta_M is a root of P" in the power
    basis of Q(zeta_M); unknowns are the period table (a_0(0),...,a_0(M-1))."""

    m: int
    p: int
    d: int
    rows: tuple[tuple[int, ...], ...]

    def rank(self) -> int:
        return rational_rank([list(map(Fraction, r)) for r in self.rows])

    def apply(self, vector) -> list[Fraction]:
        if len(vector) != self.m:
            raise DomainError(f"vector length {len(vector)} != M = {self.m}")
        return [
            sum((Fraction(row[i]) * Fraction(vector[i]) for i in range(self.m)),
                Fraction(0))
            for row in self.rows
        ]

    def to_json_dict(self) -> dict:
        return {
            "M": self.m,
            "p": self.p,
            "d": self.d,
            "rows": [list(r) for r in self.rows],
            "rank": self.rank(),
            "kernel_dim": self.m - self.rank(),
        }


def rational_rank(rows: list[list[Fraction]]) -> int:
    """Exact rank over Q by Gaussian elimination."""
    work = [list(r) for r in rows]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(work)) if work[r][col]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = 1 / work[rank][col]
        work[rank] = [v * inv for v in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col]:
                c = work[r][col]
                work[r] = [a - c * b for a, b in zip(work[r], work[rank])]
        rank += 1
        if rank == len(work):
            break
    return rank


def sm_system(m: int, p: int, d: int) -> SMSystem:
    if m < 1:
        raise DomainError(f"M must be >= 1, got {m}")
    if d < 1:
        raise DomainError(f"degree must be >= 1, got {d}")
    if not is_prime(p):
        raise DomainError(f"p must be prime, got {p}")
    t = p**d
    phi_deg = cyclotomic(m).degree
    reduced = [_reduced_power(i, m) for i in range(m)]
    cols = []
    for i in range(m):
        col = reduced[i] - reduced[(i + 1) % m].scale(t)
        cols.append([col[r] for r in range(phi_deg)])
    rows = tuple(
        tuple(int(cols[i][r]) for i in range(m)) for r in range(phi_deg)
    )
    return SMSystem(m=m, p=p, d=d, rows=rows)


def sm_dimension(m: int, p: int, d: int) -> int:
    """Dimension of the solution space: M - rank = M - phi(M)."""
    sys = sm_system(m, p, d)
    return m - sys.rank()


def vl_basis(m: int, l: int) -> list[tuple[int, ...]]:
    """Basis of the l-periodic vectors in Q^M: the indicator vectors of the
    residue classes mod l. Requires l a proper divisor of M."""
    if l < 1 or l >= m or m % l:
        raise DomainError(f"l={l} must be a proper divisor of M={m}")
    return [tuple(1 if i % l == r else 0 for i in range(m)) for r in range(l)]


def vl_sum_dimension(m: int) -> int:
    """dim of the sum of all V_l over proper divisors l of M; 0 for M = 1,
    which has no proper divisors."""
    if m < 1:
        raise DomainError(f"M must be >= 1, got {m}")
    rows: list[list[Fraction]] = []
    for l in range(1, m):
        if m % l == 0:
            rows.extend([list(map(Fraction, v)) for v in vl_basis(m, l)])
    return rational_rank(rows)


def _distinct_prime_factors(m: int) -> int:
    count = 0
    d = 2
    while d * d <= m:
        if m % d == 0:
            count += 1
            while m % d == 0:
                m //= d
        d += 1
    return count + (1 if m > 1 else 0)


@dataclass(frozen=True)
class QuestionReport:
    """Numerical evidence on whether the kernel of the system is spanned by
    the periodic subspaces. `equal` is an observation, not a theorem, when M
    has three or more distinct prime factors."""

    m: int
    p: int
    d: int
    sm_dim: int
    vl_dim: int
    containment_ok: bool
    equal: bool
    distinct_prime_factors: int

    def to_json_dict(self) -> dict:
        return {
            "M": self.m,
            "p": self.p,
            "d": self.d,
            "sm_dim": self.sm_dim,
            "vl_dim": self.vl_dim,
            "containment_ok": self.containment_ok,
            "equal": self.equal,
            "distinct_prime_factors": self.distinct_prime_factors,
        }


def question_check(m: int, p: int, d: int) -> QuestionReport:
    """Compare dim(solution space) with dim(sum of periodic subspaces) and
    verify every periodic basis vector actually solves the system."""
    if m < 2:
        raise DomainError(f"M must be >= 2, got {m}")
    sys = sm_system(m, p, d)
    smd = m - sys.rank()
    vld = vl_sum_dimension(m)
    for l in range(1, m):
        if m % l == 0:
            for vec in vl_basis(m, l):
                if any(v != 0 for v in sys.apply(vec)):
                    raise HKFractalError(
                        f"period-{l} vector {vec} is not in the solution "
                        f"space for M={m}; this contradicts a proved "
                        f"containment and indicates an implementation bug"
                    )
    return QuestionReport(
        m=m,
        p=p,
        d=d,
        sm_dim=smd,
        vl_dim=vld,
        containment_ok=True,
        equal=smd == vld,
        distinct_prime_factors=_distinct_prime_factors(m),
    )


@dataclass(frozen=True)
class CancellationReport:
    """P, Q, which cyclotomic factors of 1 - z^M divide P, and the canonical
    simplified form of P/Q."""

    input: CancellationInput
    p_poly: UniPoly
    q_poly: UniPoly
    dividing_cyclotomics: tuple[int, ...]
    simplified: RationalGF

    def to_json_dict(self) -> dict:
        return {
            "a_d": rat_to_str(self.input.a_d),
            "d": self.input.d,
            "p": self.input.p,
            "a0": [rat_to_str(c) for c in self.input.a0],
            "M": self.input.m,
            "P": self.p_poly.to_strings(),
            "Q": self.q_poly.to_strings(),
            "dividing_cyclotomics": list(self.dividing_cyclotomics),
            "geometric_factor_cancels": False,
            "simplified": self.simplified.to_json_dict(),
        }


def cancellation_analyze(ci: CancellationInput) -> CancellationReport:
    """Build P/Q, test each Phi_k (k | M) for divisibility into P, confirm the
    geometric factor survives, and return the canonical simplified series."""
    p_poly, q_poly = build_pq(ci)
    if not check_pd_not_root(ci):
        raise HKFractalError(
            "the geometric factor cancelled; this contradicts "
            "P(1/p^d) = a_d (1 - p^{-dM}) != 0 and indicates a bug"
        )
    dividing = []
    for k in range(1, ci.m + 1):
        if ci.m % k == 0:
            _, rem = p_poly.divrem(cyclotomic(k))
            if rem.is_zero():
                dividing.append(k)
    return CancellationReport(
        input=ci,
        p_poly=p_poly,
        q_poly=q_poly,
        dividing_cyclotomics=tuple(dividing),
        simplified=RationalGF(p_poly, q_poly),
    )
