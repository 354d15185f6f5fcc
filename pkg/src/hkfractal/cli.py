"""Command-line interface.

Subcommands mirror the library layers: hk / fs / phi for hypersurface
colengths, series for sequence-level fits and certificates, cancel for the
numerator analysis, product-check for the two-route product identity, rnc for
the rational-normal-cone closed form.

Exit codes: 0 success, 1 usage or input-format errors, 2 violated
mathematical preconditions, 3 dimension budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .colength import DEFAULT_DIM_BUDGET, colength
from .cyclocancel import (
    CancellationInput,
    cancellation_analyze,
    question_check,
    sm_system,
)
from .errors import BudgetError, DomainError, HKFractalError, ParseError
from .fppoly import joined_product, parse_poly
from .phifunc import hypersurface_phi, product_phi, reflect
from .qpseries import (
    QuasiPolynomial,
    detect_recurrence,
    fit_quasi_polynomial,
    fit_series,
    gf_of_certified,
    multiplicity_from_series,
    rnc_hk,
    series_of_qp,
    weak_pfractal_report,
)
from .ratfunc import RationalGF, UniPoly, rat_from_str, rat_to_str

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; this package reserves 2 for domain
    # errors, so remap
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _poly_str(poly: UniPoly, var: str = "z") -> str:
    if poly.is_zero():
        return "0"
    parts: list[str] = []
    for i, c in enumerate(poly.coeffs):
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        elif i == 1:
            body = var if mag == 1 else f"{mag}*{var}"
        else:
            body = f"{var}^{i}" if mag == 1 else f"{mag}*{var}^{i}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def _gf_str(gf: RationalGF) -> str:
    return f"({_poly_str(gf.num)}) / ({_poly_str(gf.den)})"


def _emit(args, obj: dict, text_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(obj, indent=2))
    else:
        for line in text_lines:
            print(line)


def _split_csv(text: str, label: str) -> list[str]:
    items = [part.strip() for part in text.split(",")]
    if not all(items):
        raise ParseError(f"empty entry in {label}: {text!r}")
    return items


def _parse_f(args, flag="f"):
    text = getattr(args, flag)
    var_names = _split_csv(args.vars, "--vars") if getattr(args, "vars", None) else None
    return parse_poly(text, args.p, var_names)


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: expected a JSON object")
    return obj


def _load_sequence(path: str) -> tuple[int, list[Fraction]]:
    obj = _load_json(path)
    try:
        p = int(obj["p"])
        terms = [rat_from_str(str(t)) for t in obj["terms"]]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{path}: malformed sequence file: {exc}") from exc
    return p, terms


def _load_gf(path: str) -> RationalGF:
    return RationalGF.from_json_dict(_load_json(path))


def _report_payload(report, mult_degree: int | None):
    payload = report.to_json_dict()
    lines = [f"verdict\t{report.verdict}"]
    if report.certificate:
        cert = report.certificate
        lines.append(
            f"certificate\torder={cert.order} start={cert.start} "
            f"coeffs={','.join(rat_to_str(c) for c in cert.coeffs)}"
        )
        lines.append(f"gf\t{_gf_str(report.gf)}")
        if mult_degree is not None:
            mult = multiplicity_from_series(report.gf, mult_degree, report.p)
            payload["multiplicity"] = rat_to_str(mult)
            lines.append(f"multiplicity\t{rat_to_str(mult)}")
    else:
        lines.append(
            f"searched\torder<={report.max_order} start<={report.max_start} "
            f"prefix={len(report.terms)}"
        )
    return payload, lines


def _cmd_hk(args) -> int:
    f, names = _parse_f(args)
    values = [colength(f, 1, n, budget=args.budget) for n in range(args.nmax + 1)]
    obj = {
        "command": "hk",
        "f": args.f,
        "p": args.p,
        "vars": names,
        "values": [str(v) for v in values],
    }
    lines = [f"{n}\t{v}" for n, v in enumerate(values)]
    if args.report:
        phi = hypersurface_phi(f, budget=args.budget)
        max_order = args.max_order or max(1, args.nmax // 2)
        report = weak_pfractal_report(phi, f.s, args.nmax, max_order)
        payload, rep_lines = _report_payload(report, mult_degree=f.s - 1)
        obj["report"] = payload
        lines += rep_lines
    _emit(args, obj, lines)
    return 0


def _cmd_fs(args) -> int:
    f, names = _parse_f(args)
    p = args.p
    values = [
        p ** (f.s * n) - colength(f, p**n - 1, n, budget=args.budget)
        for n in range(args.nmax + 1)
    ]
    obj = {
        "command": "fs",
        "f": args.f,
        "p": p,
        "vars": names,
        "values": [str(v) for v in values],
    }
    lines = [f"{n}\t{v}" for n, v in enumerate(values)]
    if args.report:
        phi_bar = reflect(hypersurface_phi(f, budget=args.budget))
        max_order = args.max_order or max(1, args.nmax // 2)
        report = weak_pfractal_report(phi_bar, f.s, args.nmax, max_order)
        payload, rep_lines = _report_payload(report, mult_degree=None)
        if report.gf is not None:
            # FS(n) = p^{sn} - e_{s,n}(reflected phi), so the F-signature
            # series is the geometric series minus the certified one
            geom = RationalGF(UniPoly([1]), UniPoly([1, -(p**f.s)]))
            fss = geom - report.gf
            payload["fss"] = fss.to_json_dict()
            rep_lines.append(f"fss\t{_gf_str(fss)}")
        obj["report"] = payload
        lines += rep_lines
    _emit(args, obj, lines)
    return 0


def _cmd_phi(args) -> int:
    f, names = _parse_f(args)
    phi = hypersurface_phi(f, budget=args.budget)
    if args.reflect:
        phi = reflect(phi)
    points = _split_csv(args.points, "--points")
    rows = [(t, phi.value(t)) for t in points]
    obj = {
        "command": "phi",
        "f": args.f,
        "p": args.p,
        "vars": names,
        "reflected": bool(args.reflect),
        "points": [{"t": t, "value": rat_to_str(v)} for t, v in rows],
    }
    _emit(args, obj, [f"{t}\t{rat_to_str(v)}" for t, v in rows])
    return 0


def _cmd_series_fit(args) -> int:
    p, terms = _load_sequence(args.file)
    # exact quasi-polynomial interpolation first; the structured-denominator
    # fit (which tolerates an initial transient but needs a vanishing tail
    # coefficient) as fallback
    qp = None
    try:
        qp = fit_quasi_polynomial(terms, args.d, args.M, p)
    except DomainError:
        pass
    if qp is not None:
        gf = series_of_qp(qp)
        margin = len(terms) - args.M * (args.d + 1)
    else:
        gf, margin = fit_series(terms, args.d, args.M, p)
    obj = {
        "command": "series fit",
        "p": p,
        "d": args.d,
        "M": args.M,
        "gf": gf.to_json_dict(),
        "margin": margin,
        "qp": qp.to_json_dict() if qp else None,
    }
    lines = [f"gf\t{_gf_str(gf)}", f"margin\t{margin}"]
    if qp is None:
        lines.append("qp\tnone (prefix has a transient)")
    else:
        for j, table in enumerate(qp.tables):
            lines.append(f"qp a_{j}\t{','.join(rat_to_str(c) for c in table)}")
    _emit(args, obj, lines)
    return 0


def _cmd_series_detect(args) -> int:
    _, terms = _load_sequence(args.file)
    max_start = args.max_start
    if max_start is None:
        max_start = max(0, len(terms) - 2 * args.max_order - 1)
    cert = detect_recurrence(terms, args.max_order, max_start)
    obj = {
        "command": "series detect",
        "prefix_len": len(terms),
        "max_order": args.max_order,
        "max_start": max_start,
        "certificate": cert.to_json_dict() if cert else None,
        "gf": gf_of_certified(terms, cert).to_json_dict() if cert else None,
    }
    if cert:
        lines = [
            f"certificate\torder={cert.order} start={cert.start} "
            f"coeffs={','.join(rat_to_str(c) for c in cert.coeffs)}",
            f"gf\t{_gf_str(gf_of_certified(terms, cert))}",
        ]
    else:
        lines = [
            f"no recurrence found\torder<={args.max_order} "
            f"start<={max_start} prefix={len(terms)}"
        ]
    _emit(args, obj, lines)
    return 0


def _cmd_series_multiplicity(args) -> int:
    if args.qp_file:
        qp = QuasiPolynomial.from_json_dict(_load_json(args.qp_file))
        gf = series_of_qp(qp)
        p = qp.p
    else:
        if not args.file or args.p is None:
            raise ParseError("need --file with --p, or --qp-file")
        gf = _load_gf(args.file)
        p = args.p
    value = multiplicity_from_series(gf, args.d, p)
    obj = {
        "command": "series multiplicity",
        "d": args.d,
        "p": p,
        "value": rat_to_str(value),
    }
    _emit(args, obj, [rat_to_str(value)])
    return 0


def _cmd_series_expand(args) -> int:
    if args.qp_file:
        gf = series_of_qp(QuasiPolynomial.from_json_dict(_load_json(args.qp_file)))
    else:
        if not args.file:
            raise ParseError("need --file or --qp-file")
        gf = _load_gf(args.file)
    values = gf.expand(args.count)
    obj = {"command": "series expand", "values": [rat_to_str(v) for v in values]}
    _emit(args, obj, [f"{n}\t{rat_to_str(v)}" for n, v in enumerate(values)])
    return 0


def _cmd_cancel_analyze(args) -> int:
    a0 = tuple(rat_from_str(c) for c in _split_csv(args.a0, "--a0"))
    ci = CancellationInput(rat_from_str(args.ad), args.d, args.p, a0)
    report = cancellation_analyze(ci)
    obj = {"command": "cancel analyze", **report.to_json_dict()}
    lines = [
        f"P\t{_poly_str(report.p_poly)}",
        f"Q\t{_poly_str(report.q_poly)}",
        f"dividing_cyclotomics\t{','.join(map(str, report.dividing_cyclotomics)) or '-'}",
        "geometric_factor_cancels\tno",
        f"simplified\t{_gf_str(report.simplified)}",
    ]
    _emit(args, obj, lines)
    return 0


def _cmd_cancel_sm(args) -> int:
    sys_ = sm_system(args.M, args.p, args.d)
    obj = {"command": "cancel sm", **sys_.to_json_dict()}
    lines = [f"row\t{' '.join(str(v) for v in row)}" for row in sys_.rows]
    lines.append(f"rank\t{sys_.rank()}")
    lines.append(f"kernel_dim\t{args.M - sys_.rank()}")
    _emit(args, obj, lines)
    return 0


def _cmd_cancel_question(args) -> int:
    report = question_check(args.M, args.p, args.d)
    obj = {"command": "cancel question", **report.to_json_dict()}
    status = "equal" if report.equal else "NOT equal"
    note = (
        " (observation only: three or more prime factors)"
        if report.distinct_prime_factors >= 3
        else ""
    )
    lines = [
        f"sm_dim\t{report.sm_dim}",
        f"vl_dim\t{report.vl_dim}",
        f"containment_ok\t{report.containment_ok}",
        f"verdict\t{status}{note}",
    ]
    _emit(args, obj, lines)
    return 0


def _cmd_product_check(args) -> int:
    var_names = _split_csv(args.vars, "--vars") if args.vars else None
    gvar_names = _split_csv(args.gvars, "--gvars") if args.gvars else None
    f, _ = parse_poly(args.f, args.p, var_names)
    g, _ = parse_poly(args.g, args.p, gvar_names)
    fg = joined_product(f, g)
    combined = product_phi(
        hypersurface_phi(f, budget=args.budget),
        hypersurface_phi(g, budget=args.budget),
    )
    direct = hypersurface_phi(fg, budget=args.budget)
    rows = []
    all_ok = True
    for t in _split_csv(args.points, "--points"):
        lhs = combined.value(t)
        rhs = direct.value(t)
        ok = lhs == rhs
        all_ok = all_ok and ok
        rows.append((t, lhs, rhs, ok))
    obj = {
        "command": "product-check",
        "f": args.f,
        "g": args.g,
        "p": args.p,
        "points": [
            {
                "t": t,
                "combined": rat_to_str(lhs),
                "direct": rat_to_str(rhs),
                "ok": ok,
            }
            for t, lhs, rhs, ok in rows
        ],
        "all_ok": all_ok,
    }
    lines = [
        f"{t}\t{rat_to_str(lhs)}\t{rat_to_str(rhs)}\t{'ok' if ok else 'MISMATCH'}"
        for t, lhs, rhs, ok in rows
    ]
    lines.append(f"all_ok\t{all_ok}")
    _emit(args, obj, lines)
    return 0 if all_ok else 2


def _cmd_rnc(args) -> int:
    values = [rnc_hk(args.g, args.p, n) for n in range(args.nmax + 1)]
    obj = {
        "command": "rnc",
        "g": args.g,
        "p": args.p,
        "values": [str(v) for v in values],
    }
    _emit(args, obj, [f"{n}\t{v}" for n, v in enumerate(values)])
    return 0


def _add_common(sub, budget=False):
    sub.add_argument("--json", action="store_true", help="emit a JSON document")
    if budget:
        sub.add_argument(
            "--budget",
            type=int,
            default=DEFAULT_DIM_BUDGET,
            help="truncated-algebra dimension cap (default %(default)s)",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hkfractal")
    commands = parser.add_subparsers(dest="command", required=True)

    hk = commands.add_parser("hk", help="Hilbert-Kunz function values")
    hk.add_argument("--f", required=True, help="hypersurface polynomial text")
    hk.add_argument("--p", type=int, required=True)
    hk.add_argument("--nmax", type=int, required=True)
    hk.add_argument("--vars", help="comma-separated variable order override")
    hk.add_argument("--report", action="store_true", help="recurrence search")
    hk.add_argument("--max-order", type=int, default=0)
    _add_common(hk, budget=True)
    hk.set_defaults(func=_cmd_hk)

    fs = commands.add_parser("fs", help="F-signature function values")
    fs.add_argument("--f", required=True)
    fs.add_argument("--p", type=int, required=True)
    fs.add_argument("--nmax", type=int, required=True)
    fs.add_argument("--vars")
    fs.add_argument("--report", action="store_true")
    fs.add_argument("--max-order", type=int, default=0)
    _add_common(fs, budget=True)
    fs.set_defaults(func=_cmd_fs)

    phi = commands.add_parser("phi", help="evaluate the normalized colength")
    phi.add_argument("--f", required=True)
    phi.add_argument("--p", type=int, required=True)
    phi.add_argument("--points", required=True, help='e.g. "1/2,3/4"')
    phi.add_argument("--reflect", action="store_true", help="evaluate phi(1-t)")
    phi.add_argument("--vars")
    _add_common(phi, budget=True)
    phi.set_defaults(func=_cmd_phi)

    series = commands.add_parser("series", help="sequence-level operations")
    series_sub = series.add_subparsers(dest="series_command", required=True)

    fit = series_sub.add_parser("fit", help="fit a rational generating function")
    fit.add_argument("--file", required=True, help="sequence JSON file")
    fit.add_argument("--d", type=int, required=True)
    fit.add_argument("--M", type=int, required=True)
    _add_common(fit)
    fit.set_defaults(func=_cmd_series_fit)

    detect = series_sub.add_parser("detect", help="linear-recurrence search")
    detect.add_argument("--file", required=True)
    detect.add_argument("--max-order", type=int, required=True)
    detect.add_argument("--max-start", type=int, default=None)
    _add_common(detect)
    detect.set_defaults(func=_cmd_series_detect)

    mult = series_sub.add_parser("multiplicity", help="leading multiplicity")
    mult.add_argument("--file", help="rational function JSON file")
    mult.add_argument("--qp-file", help="quasi-polynomial JSON file")
    mult.add_argument("--d", type=int, required=True)
    mult.add_argument("--p", type=int)
    _add_common(mult)
    mult.set_defaults(func=_cmd_series_multiplicity)

    expand = series_sub.add_parser("expand", help="Taylor coefficients")
    expand.add_argument("--file")
    expand.add_argument("--qp-file")
    expand.add_argument("--count", type=int, required=True)
    _add_common(expand)
    expand.set_defaults(func=_cmd_series_expand)

    cancel = commands.add_parser("cancel", help="numerator cancellation analysis")
    cancel_sub = cancel.add_subparsers(dest="cancel_command", required=True)

    analyze = cancel_sub.add_parser("analyze")
    analyze.add_argument("--ad", required=True, help="leading multiplicity")
    analyze.add_argument("--d", type=int, required=True)
    analyze.add_argument("--p", type=int, required=True)
    analyze.add_argument("--a0", required=True, help="comma-separated period table")
    _add_common(analyze)
    analyze.set_defaults(func=_cmd_cancel_analyze)

    sm = cancel_sub.add_parser("sm")
    sm.add_argument("--M", type=int, required=True)
    sm.add_argument("--p", type=int, required=True)
    sm.add_argument("--d", type=int, required=True)
    _add_common(sm)
    sm.set_defaults(func=_cmd_cancel_sm)

    question = cancel_sub.add_parser("question")
    question.add_argument("--M", type=int, required=True)
    question.add_argument("--p", type=int, required=True)
    question.add_argument("--d", type=int, required=True)
    _add_common(question)
    question.set_defaults(func=_cmd_cancel_question)

    pc = commands.add_parser("product-check", help="product identity, two routes")
    pc.add_argument("--f", required=True)
    pc.add_argument("--g", required=True)
    pc.add_argument("--p", type=int, required=True)
    pc.add_argument("--points", required=True)
    pc.add_argument("--vars", help="variables of f")
    pc.add_argument("--gvars", help="variables of g")
    _add_common(pc, budget=True)
    pc.set_defaults(func=_cmd_product_check)

    rnc = commands.add_parser("rnc", help="rational normal cone closed form")
    rnc.add_argument("--g", type=int, required=True)
    rnc.add_argument("--p", type=int, required=True)
    rnc.add_argument("--nmax", type=int, required=True)
    _add_common(rnc)
    rnc.set_defaults(func=_cmd_rnc)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"hkfractal: {exc}", file=sys.stderr)
        return 1
    except BudgetError as exc:
        print(f"hkfractal: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"hkfractal: {exc}", file=sys.stderr)
        return 2
    except HKFractalError as exc:
        print(f"hkfractal: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
