from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from hkfractal import (
    DomainError,
    QuasiPolynomial,
    RationalGF,
    RecurrenceCertificate,
    UniPoly,
    detect_recurrence,
    e_sequence,
    fit_quasi_polynomial,
    fit_series,
    gf_of_certified,
    hypersurface_phi,
    multiplicity_from_series,
    parse_poly,
    PhiFunction,
    qp_eval,
    qp_of_series,
    rnc_hk,
    series_of_qp,
    weak_pfractal_report,
)


def F(a, b=1):
    return Fraction(a, b)


def rand_qp(rng: random.Random, p: int, maxdeg: int = 3, maxper: int = 6):
    d = rng.randint(0, maxdeg)
    tables = []
    for j in range(d + 1):
        per = rng.randint(1, maxper)
        tables.append(
            [Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(per)]
        )
    while all(c == 0 for c in tables[-1]):
        tables[-1] = [Fraction(rng.randint(-6, 6)) for _ in range(len(tables[-1]))]
    return QuasiPolynomial(p, tables)


# ---------------------------------------------------------------------------
# quasi-polynomials
# ---------------------------------------------------------------------------


def test_qp_normalization():
    qp = QuasiPolynomial(2, [[1, 1], [2, 3, 2, 3]])
    assert qp.periods == (1, 2)  # repeated patterns collapse
    assert qp.degree == 1
    trimmed = QuasiPolynomial(2, [[5], [0, 0]])
    assert trimmed.degree == 0  # zero leading table dropped
    zero = QuasiPolynomial(2, [[0]])
    assert zero.degree == 0 and zero.eval(17) == 0
    with pytest.raises(DomainError):
        QuasiPolynomial(4, [[1]])
    with pytest.raises(DomainError):
        QuasiPolynomial(2, [])


def test_qp_eval_matches_definition():
    rng = random.Random(42)
    for _ in range(20):
        p = rng.choice([2, 3, 5])
        d = rng.randint(0, 3)
        tables = [
            [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(rng.randint(1, 6))]
            for _ in range(d + 1)
        ]
        qp = QuasiPolynomial(p, tables)
        for n in range(0, 25, 3):
            want = sum(
                tables[j][n % len(tables[j])] * p ** (j * n) for j in range(d + 1)
            )
            assert qp.eval(n) == want
            assert qp_eval(qp, n) == want


def test_qp_json_round_trip():
    qp = QuasiPolynomial(2, [[-2, 0, 1, 1], [0], [3]])
    back = QuasiPolynomial.from_json_dict(qp.to_json_dict())
    assert back == qp


# ---------------------------------------------------------------------------
# series <-> quasi-polynomial
# ---------------------------------------------------------------------------


def test_series_of_qp_known():
    ones = QuasiPolynomial(2, [[1]])
    assert series_of_qp(ones) == RationalGF(UniPoly([1]), UniPoly([1, -1]))
    powers = QuasiPolynomial(3, [[0], [1]])  # e_n = 3^n
    assert series_of_qp(powers) == RationalGF(UniPoly([1]), UniPoly([1, -3]))


def test_series_of_qp_expansion_matches_eval():
    rng = random.Random(99)
    for _ in range(15):
        p = rng.choice([2, 3, 5])
        qp = rand_qp(rng, p)
        series = series_of_qp(qp)
        count = 2 * math.lcm(*qp.periods) * (qp.degree + 2)
        assert series.expand(count) == [qp.eval(n) for n in range(count)]


def test_series_denominator_divides_structured_product():
    from hkfractal.qpseries import _structured_denominator

    rng = random.Random(4)
    for _ in range(10):
        p = rng.choice([2, 3])
        qp = rand_qp(rng, p)
        series = series_of_qp(qp)
        m = math.lcm(*qp.periods)
        q = _structured_denominator(qp.degree, m, p)
        _, rem = q.divrem(series.den)
        assert rem.is_zero()


def test_qp_of_series_round_trip():
    rng = random.Random(123)
    for _ in range(25):
        p = rng.choice([2, 3, 5])
        qp = rand_qp(rng, p)
        m = math.lcm(*qp.periods)
        back = qp_of_series(series_of_qp(qp), qp.degree, m, p)
        assert back == qp
        # a larger promised period or degree must also work
        again = qp_of_series(series_of_qp(qp), qp.degree + 1, 2 * m, p)
        assert again == qp


def test_qp_of_series_rejects():
    g = RationalGF(UniPoly([1]), UniPoly([1, -3]))  # 1/(1-3z)
    with pytest.raises(DomainError):
        qp_of_series(g, 1, 1, 2)  # denominator is not built from p = 2
    improper = RationalGF(UniPoly([1, 0, 0, 5]), UniPoly([1, -1]))
    with pytest.raises(DomainError):
        qp_of_series(improper, 0, 1, 2)
    with pytest.raises(DomainError):
        qp_of_series(g, -1, 1, 3)


# ---------------------------------------------------------------------------
# fitting
# ---------------------------------------------------------------------------


def test_fit_series_with_transient():
    # HK of x^2 y^2 over F_2 starts [1, 4, 12, 28, 60]
    gf, margin = fit_series([1, 4, 12, 28, 60], 1, 1, 2)
    assert gf == RationalGF(UniPoly([1, 1, 2]), UniPoly([1, -3, 2]))
    assert margin == 2
    assert gf.expand(5) == [1, 4, 12, 28, 60]
    assert multiplicity_from_series(gf, 1, 2) == 4


def test_fit_series_needs_a_vanishing_tail():
    # exactly M(d+1) terms leave no room for verification
    terms = [rnc_hk(5, 2, n) for n in range(12)]
    with pytest.raises(DomainError):
        fit_series(terms, 2, 4, 2)
    # one more term gives margin 1
    gf, margin = fit_series([rnc_hk(5, 2, n) for n in range(13)], 2, 4, 2)
    assert margin == 1
    assert gf.expand(13) == [rnc_hk(5, 2, n) for n in range(13)]


def test_fit_quasi_polynomial_strict():
    terms = [rnc_hk(5, 2, n) for n in range(12)]
    qp = fit_quasi_polynomial(terms, 2, 4, 2)
    assert qp == QuasiPolynomial(2, [[-2, 0, 1, 1], [0], [3]])
    # the same sequence as a rational function, in its published shape
    display = RationalGF(
        UniPoly([1, 9, 10, 7]),
        UniPoly([1, -4]) * UniPoly([1, 0, 1]) * UniPoly([1, 1]),
    )
    assert series_of_qp(qp) == display
    # a transient breaks strict interpolation
    with pytest.raises(DomainError):
        fit_quasi_polynomial([1, 4, 12, 28, 60], 1, 1, 2)
    with pytest.raises(DomainError):
        fit_quasi_polynomial([1, 4, 12], 2, 2, 2)  # needs 6 terms, got 3


# ---------------------------------------------------------------------------
# recurrence detection and certification
# ---------------------------------------------------------------------------


def test_detect_geometric():
    cert = detect_recurrence([1, 2, 4, 8, 16, 32], 2)
    assert cert is not None
    assert (cert.order, cert.coeffs, cert.start) == (1, (F(2),), 0)
    assert cert.verified_len == 6


def test_detect_fibonacci():
    fib = [1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
    cert = detect_recurrence(fib, 3)
    assert (cert.order, cert.coeffs, cert.start) == (2, (F(1), F(1)), 0)


def test_detect_order_minimal_then_start_minimal():
    seq = [5, 1, 1, 1, 1, 1, 1, 1]
    # without start slack the smallest fit is an order-2 rule
    c0 = detect_recurrence(seq, 2, max_start=0)
    assert (c0.order, c0.coeffs, c0.start) == (2, (F(1), F(0)), 0)
    # allowing a transient finds the order-1 rule from index 1 instead
    c1 = detect_recurrence(seq, 2, max_start=2)
    assert (c1.order, c1.coeffs, c1.start) == (1, (F(1),), 1)


def test_detect_rnc_degree_three():
    terms = [rnc_hk(3, 2, n) for n in range(12)]
    assert terms[:4] == [1, 8, 31, 128]
    cert = detect_recurrence(terms, 5)
    assert (cert.order, cert.coeffs, cert.start) == (3, (F(4), F(1), F(-4)), 0)
    gf = gf_of_certified(terms, cert)
    assert gf == RationalGF(
        UniPoly([1, 4, -2]), UniPoly([1, -4]) * UniPoly([1, 0, -1])
    )
    assert gf.expand(12) == terms


def test_detect_square_indicator_has_no_short_recurrence():
    squares = {i * i for i in range(10)}
    seq = [1 if n in squares else 0 for n in range(40)]
    assert detect_recurrence(seq, 4, max_start=8) is None


def test_detect_preconditions():
    with pytest.raises(DomainError):
        detect_recurrence([1, 2, 3], 2)  # needs 2*2+0+1 = 5 terms
    with pytest.raises(DomainError):
        detect_recurrence([1, 2, 3, 4, 5], 0)


def test_certificate_check_and_clamp():
    cert = RecurrenceCertificate(1, (F(2),), 0, 5)
    assert cert.check([1, 2, 4, 8, 16])
    assert cert.check([1, 2, 4, 8, 16, 999])  # beyond verified_len: ignored
    assert not cert.check([1, 2, 5])
    d = cert.to_json_dict()
    assert d == {"order": 1, "coeffs": ["2"], "start": 0, "verified_len": 5}


def test_gf_of_certified_rejects_nonmatching_prefix():
    cert = RecurrenceCertificate(1, (F(2),), 0, 4)
    with pytest.raises(DomainError):
        gf_of_certified([1, 2, 5, 10], cert)
    good = gf_of_certified([1, 2, 4, 8], cert)
    assert good == RationalGF(UniPoly([1]), UniPoly([1, -2]))


def test_gf_of_certified_with_transient():
    seq = [7, 1, 2, 4, 8, 16]
    cert = detect_recurrence(seq, 2, max_start=1)
    assert (cert.order, cert.start) == (1, 1)
    gf = gf_of_certified(seq, cert)
    assert gf.expand(6) == seq


# ---------------------------------------------------------------------------
# end-to-end reports
# ---------------------------------------------------------------------------


def test_weak_pfractal_certified():
    phi = hypersurface_phi(parse_poly("x", 2)[0])
    report = weak_pfractal_report(phi, 2, 10, 2)
    assert report.verdict == "certified-rational"
    assert report.terms == tuple(2**n for n in range(11))
    assert report.certificate.order == 1
    assert report.gf == RationalGF(UniPoly([1]), UniPoly([1, -2]))
    payload = report.to_json_dict()
    assert payload["verdict"] == "certified-rational"
    assert RationalGF.from_json_dict(payload["gf"]) == report.gf


def test_weak_pfractal_negative():
    # nmax is chosen so the last perfect square (36) sits inside every
    # constrained window: otherwise an all-zero tail admits a degenerate rule
    squares = {i * i for i in range(10)}

    def fn(a: int, n: int) -> Fraction:
        # indicator of perfect-square level, scaled to make e_n the indicator
        return Fraction(int(n in squares), 2**n)

    phi = PhiFunction.from_callable(fn, 2)
    report = weak_pfractal_report(phi, 1, 38, 3)
    assert report.verdict == "no-recurrence-found"
    assert report.certificate is None and report.gf is None
    assert report.max_start == 39 - 7


def test_weak_pfractal_needs_enough_terms():
    phi = hypersurface_phi(parse_poly("x", 2)[0])
    with pytest.raises(DomainError):
        weak_pfractal_report(phi, 1, 3, 2)


# ---------------------------------------------------------------------------
# the degree-g cone family
# ---------------------------------------------------------------------------


def test_rnc_hk_known_values():
    assert rnc_hk(3, 2, 2) == 31
    assert rnc_hk(7, 2, 1) == 16
    assert rnc_hk(5, 5, 1) == 75


def test_rnc_hk_level_zero_is_one():
    for g in range(1, 10):
        for p in [2, 3, 5, 7]:
            assert rnc_hk(g, p, 0) == 1


def test_rnc_hk_integrality_sweep():
    for g in range(1, 10):
        for p in [2, 3, 5, 7]:
            for n in range(0, 6):
                v = rnc_hk(g, p, n)
                assert isinstance(v, int)
                # leading behaviour: e_n / p^2n approaches (g+1)/2
                if n >= 2:
                    assert abs(Fraction(v, p ** (2 * n)) - Fraction(g + 1, 2)) < 1


def test_rnc_hk_validation():
    with pytest.raises(DomainError):
        rnc_hk(0, 2, 1)
    with pytest.raises(DomainError):
        rnc_hk(3, 4, 1)
    with pytest.raises(DomainError):
        rnc_hk(3, 2, -1)


def test_rnc_fits_its_own_shape():
    # every member with gcd(p, g) = 1 fits d = 2 strictly, with period equal
    # to the multiplicative order of p modulo g
    for g, p in [(3, 2), (5, 2), (4, 3), (7, 2)]:
        m = 1
        while (p**m - 1) % g:
            m += 1
        terms = [rnc_hk(g, p, n) for n in range(m * 3 + 2)]
        qp = fit_quasi_polynomial(terms, 2, m, p)
        assert qp.eval(40) == rnc_hk(g, p, 40)
        series = series_of_qp(qp)
        assert series.expand(len(terms)) == terms
        assert multiplicity_from_series(series, 2, p) == Fraction(g + 1, 2)
