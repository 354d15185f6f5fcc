"""Colengths of Frobenius-power ideals in truncated polynomial rings.

The workhorse identity: in B = k[x_1..x_s]/(x_1^q, ..., x_s^q) with q = p^n,
the ideal generated by g has k-dimension equal to the rank of the
multiplication-by-g map on B, so

    colength(f, a, n) = dim_k A/(m^[q], f^a) = q^s - rank(mult by f^a mod m^[q]).

The multiplication matrix is huge but very sparse and structured: entry
(beta, alpha) is the coefficient of t in g where beta = alpha + t, and exists
only when beta stays inside the box [0, q)^s. Construction is vectorized per
term of g; the rank kernel (gflinalg) does the heavy lifting.
"""

from __future__ import annotations

import numpy as np

from . import gflinalg
from .errors import BudgetError, DomainError
from .fppoly import FpPoly, is_prime, power_mod

__all__ = [
    "DEFAULT_DIM_BUDGET",
    "TruncatedAlgebra",
    "mult_rank",
    "multiplication_matrix",
    "colength",
]

DEFAULT_DIM_BUDGET = 1 << 16


class TruncatedAlgebra:
    """B = k[x_1..x_s]/(x_1^{p^n}, ..., x_s^{p^n}) with its monomial basis.

    The basis order is fixed (ascending total degree, ties by ascending
    exponent tuple) so exported matrices are reproducible. Internally ranks
    are computed in plain mixed-radix order, a permutation of the same basis,
    which changes nothing about the rank.
    """

    __slots__ = ("p", "s", "n", "q", "dim", "_basis")

    def __init__(self, p: int, s: int, n: int, budget: int = DEFAULT_DIM_BUDGET):
        if not is_prime(p):
            raise DomainError(f"p must be prime, got {p}")
        if s < 1:
            raise DomainError(f"need at least one variable, got s={s}")
        if n < 0:
            raise DomainError(f"Frobenius level must be >= 0, got n={n}")
        self.p = p
        self.s = s
        self.n = n
        self.q = p**n
        self.dim = self.q**s
        if self.dim > budget:
            raise BudgetError(
                f"truncated algebra dimension p^(s*n) = {self.dim} exceeds "
                f"budget {budget}"
            )
        self._basis: list[tuple[int, ...]] | None = None

    def basis(self) -> list[tuple[int, ...]]:
        """Monomial exponent tuples in graded order. Materialized on demand."""
        if self._basis is None:
            from itertools import product

            monos = list(product(range(self.q), repeat=self.s))
            monos.sort(key=lambda m: (sum(m), m))
            self._basis = monos
        return self._basis

    def __repr__(self) -> str:
        return f"TruncatedAlgebra(p={self.p}, s={self.s}, n={self.n}, dim={self.dim})"


def _check_compatible(g: FpPoly, alg: TruncatedAlgebra) -> None:
    if g.p != alg.p or g.s != alg.s:
        raise DomainError("polynomial does not live in the algebra's ring")
    for mono in g.terms:
        if any(e >= alg.q for e in mono):
            raise DomainError(f"term {mono} is not reduced modulo m^[{alg.q}]")


def _radix_offsets(alg: TruncatedAlgebra) -> tuple[np.ndarray, list[np.ndarray]]:
    """Mixed-radix codes of all basis monomials plus per-variable exponents."""
    codes = np.arange(alg.dim, dtype=np.int64)
    place = [alg.q ** (alg.s - 1 - k) for k in range(alg.s)]
    exps = [(codes // pl) % alg.q for pl in place]
    return codes, exps


def _term_scatter(alg, codes, exps, mono):
    """Column codes that survive multiplication by x^mono, and the row shift."""
    mask = np.ones(alg.dim, dtype=bool)
    offset = 0
    for k, e in enumerate(mono):
        if e:
            mask &= exps[k] < alg.q - e
        offset += e * alg.q ** (alg.s - 1 - k)
    # mask uses alpha_k <= q-1-e, i.e. alpha + mono stays inside the box
    return codes[mask], offset


def mult_rank(g: FpPoly, alg: TruncatedAlgebra) -> int:
    """Rank of the multiplication-by-g endomorphism of B.

    g must already be reduced modulo m^[q]. GF(2) uses bit-packed rows; odd p
    uses byte rows (memory is dim^2 bytes, so odd-p instances should stay a
    good deal below the dimension budget).
    """
    _check_compatible(g, alg)
    if g.is_zero():
        return 0
    codes, exps = _radix_offsets(alg)
    if alg.p == 2:
        nwords = (alg.dim + 63) // 64
        packed = np.zeros((alg.dim, nwords), dtype=np.uint64)
        one = np.uint64(1)
        for mono in g.terms:
            cols, offset = _term_scatter(alg, codes, exps, mono)
            rows = cols + offset
            # per term the row codes are distinct, so plain fancy-index OR works
            packed[rows, cols >> 6] |= one << (cols & 63).astype(np.uint64)
        return int(gflinalg.gf2_rank(packed, alg.dim))
    mat = np.zeros((alg.dim, alg.dim), dtype=np.uint8)
    for mono, coeff in g.terms.items():
        cols, offset = _term_scatter(alg, codes, exps, mono)
        mat[cols + offset, cols] = coeff
    return int(gflinalg.gfp_rank(mat, alg.p))


def multiplication_matrix(g: FpPoly, alg: TruncatedAlgebra) -> np.ndarray:
    """Dense multiplication matrix in the graded basis order (column alpha
    maps to g * x^alpha). Meant for inspection and small-instance oracles."""
    _check_compatible(g, alg)
    basis = alg.basis()
    index = {mono: i for i, mono in enumerate(basis)}
    mat = np.zeros((alg.dim, alg.dim), dtype=np.uint8)
    for col, alpha in enumerate(basis):
        for mono, coeff in g.terms.items():
            beta = tuple(a + e for a, e in zip(alpha, mono))
            if all(e < alg.q for e in beta):
                mat[index[beta], col] = coeff
    return mat


def colength(
    f: FpPoly, a: int, n: int, budget: int = DEFAULT_DIM_BUDGET
) -> int:
    """dim_k A/(x_1^{p^n}, ..., x_s^{p^n}, f^a) for f in the maximal ideal.

    a = 0 gives 0 (the unit ideal); otherwise p^{sn} minus the rank of
    multiplication by f^a mod m^[p^n].
    """
    if f.is_zero():
        raise DomainError("f must be nonzero")
    if f.constant_term():
        raise DomainError("f must lie in the maximal ideal (no constant term)")
    if a < 0:
        raise DomainError(f"exponent must be >= 0, got {a}")
    if a == 0:
        return 0
    alg = TruncatedAlgebra(f.p, f.s, n, budget=budget)
    g = power_mod(f, a, alg.q)
    if g.is_zero():
        return alg.dim
    return alg.dim - mult_rank(g, alg)
