"""Command-line interface.

Subcommands: moment, verify, conjectures, pslq, hyper, fourier, zudilin3d.
Every numeric field is printed with (digits - 10) significant digits so
guard noise never reaches the output; identical invocations produce
byte-identical numeric output.

Exit codes: 0 success; 1 theorem verification failure (or no relation found
by pslq); 2 usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from mpmath import mp

from . import __version__
from .hyper import HypSpec, pfq
from .fourier import fourier_coeff, fourier_integral
from .identities import (
    default_catalog_path,
    load_catalog,
    reports_to_json,
    suite_exit_code,
    verify_suite,
)
from .moments import (
    MomentSpec,
    Pi3Rational,
    Zeta3Linear,
    conjecture2_sum_form,
    moment_closed_form,
    moment_quadrature,
    odd_moment_exact,
    parse_product,
)
from .mpcore import DomainError, PrecisionContext, PrecisionError, constant, workdps
from .quadrature import integrate3d, integrate_unit
from .relations import RelationQuery, min_precision, pslq as run_pslq
from .elliptic import ke_pair_mpf

ZUDILIN_PRESETS = {
    # kernel -> (h0..h5, product string whose n=0 moment is triple/8)
    "kc2": (("1/2",) * 6, "Kc^2"),
    "eckc": (("3/2", "1/2", "1/2", "3/2", "1/2", "3/2"), "Kc Ec"),
}


def _fmt(v, digits):
    shown = max(15, digits - 10)
    return v.digits_str(shown)


def _print_rows(rows, fmt, stream=None):
    stream = stream or sys.stdout
    if fmt == "json":
        json.dump(rows, stream, indent=2)
        stream.write("\n")
        return
    if fmt == "csv":
        if rows:
            writer = csv.DictWriter(stream, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            writer.writerows(rows)
        return
    for row in rows:
        stream.write("  ".join(f"{k}={v}" for k, v in row.items()) + "\n")


def _frac_list(text):
    return tuple(Fraction(tok.strip()) for tok in text.split(",") if tok.strip())


def cmd_moment(args) -> int:
    ctx = PrecisionContext(args.digits)
    base = parse_product(args.product)
    spec = MomentSpec(base.aK, base.aE, base.aKc, base.aEc,
                      n=Fraction(args.n), m=Fraction(args.xprime_power))
    closed = moment_closed_form(spec, ctx)
    quad = moment_quadrature(spec, ctx)
    row = {
        "product": str(spec),
        "n": str(spec.n),
        "m": str(spec.m),
        "closed_form": None if closed is None else _fmt(closed, args.digits),
        "quadrature": _fmt(quad.value, args.digits),
        "absdiff": None,
        "exact": None,
    }
    if closed is not None:
        with ctx.workprec():
            row["absdiff"] = ctx.bigreal(abs(closed.value - quad.value.value)).digits_str(5)
    if spec.m == 0 and spec.product_key() and spec.n.denominator == 1 and int(spec.n) % 2 == 1 and spec.n >= 1:
        exact = odd_moment_exact(spec, int(spec.n))
        row["exact"] = str(exact)
    _print_rows([row], args.format)
    return 0


def cmd_verify(args) -> int:
    ctx = PrecisionContext(args.digits)
    reports = verify_suite(
        args.suite, ctx, catalog_path=args.catalog, threads=args.threads
    )
    if args.format == "json":
        print(reports_to_json(reports))
    else:
        rows = []
        for r in reports:
            rows.append(
                {
                    "id": r.id,
                    "status": r.status,
                    "passed": r.passed,
                    "absdiff": "" if r.absdiff is None else r.absdiff.digits_str(5),
                    "seconds": f"{r.seconds:.2f}",
                    "error": r.error or "",
                }
            )
        _print_rows(rows, args.format)
        npass = sum(1 for r in reports if r.passed)
        print(f"# {npass}/{len(reports)} passed", file=sys.stderr)
    return suite_exit_code(reports)


def cmd_conjectures(args) -> int:
    ctx = PrecisionContext(args.digits)
    catalog = load_catalog(args.catalog)
    rows = []
    for r in verify_suite("conjecture", ctx, catalog=catalog):
        rows.append(
            {
                "id": r.id,
                "status": r.status,
                "lhs": _fmt(r.lhs, args.digits),
                "rhs": _fmt(r.rhs, args.digits),
                "absdiff": r.absdiff.digits_str(5),
            }
        )
    sum_val, sum_conj = conjecture2_sum_form(ctx)
    with ctx.workprec():
        diff = ctx.bigreal(abs(sum_val.value - sum_conj.value))
    rows.append(
        {
            "id": "conj2-sum-form",
            "status": "conjecture",
            "lhs": _fmt(sum_val, args.digits),
            "rhs": _fmt(sum_conj, args.digits),
            "absdiff": diff.digits_str(5),
        }
    )
    _print_rows(rows, args.format)
    return 0


def cmd_pslq(args) -> int:
    with open(args.values_file, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh]
    values = []
    with workdps(args.digits + 10):
        for ln in lines:
            if not ln or ln.startswith("#"):
                continue
            values.append(mp.mpf(ln))
    query = RelationQuery(values, max_coeff_bits=args.max_coeff_bits, precision=args.digits)
    result = run_pslq(query)
    if result is None:
        print("no relation found", file=sys.stderr)
        return 1
    row = {
        "coefficients": result.coefficients,
        "residual": result.residual.digits_str(5),
        "confidence": round(result.confidence, 2),
        "verified_digits": result.verified_digits,
    }
    _print_rows([row], args.format)
    return 0


def cmd_hyper(args) -> int:
    ctx = PrecisionContext(args.digits)
    spec = HypSpec(_frac_list(args.upper), _frac_list(args.lower), Fraction(args.z))
    value = pfq(spec, ctx)
    _print_rows(
        [
            {
                "upper": ",".join(str(u) for u in spec.upper),
                "lower": ",".join(str(l) for l in spec.lower),
                "z": str(args.z),
                "value": _fmt(value, args.digits),
            }
        ],
        args.format,
    )
    return 0


def cmd_fourier(args) -> int:
    ctx = PrecisionContext(args.digits)
    n = args.n
    rows = []
    if args.kind == "K":
        coeff = fourier_coeff("K", n, ctx)
        num = fourier_integral("K", 4 * n + 1, ctx)
        with ctx.workprec():
            d = ctx.bigreal(abs(coeff.value - num.value))
        rows.append(
            {
                "kind": "K",
                "harmonic": 4 * n + 1,
                "closed_form": _fmt(coeff, args.digits),
                "integral": _fmt(num, args.digits),
                "absdiff": d.digits_str(5),
            }
        )
    else:
        c1, c3 = fourier_coeff("E", n, ctx)
        for coeff, m in ((c1, 4 * n + 1), (c3, 4 * n + 3)):
            num = fourier_integral("E", m, ctx)
            with ctx.workprec():
                d = ctx.bigreal(abs(coeff.value - num.value))
            rows.append(
                {
                    "kind": "E",
                    "harmonic": m,
                    "closed_form": _fmt(coeff, args.digits),
                    "integral": _fmt(num, args.digits),
                    "absdiff": d.digits_str(5),
                }
            )
    _print_rows(rows, args.format)
    return 0


def cmd_zudilin3d(args) -> int:
    if args.kernel:
        h_params, product = ZUDILIN_PRESETS[args.kernel]
    else:
        h_params, product = _frac_list(args.params), None
    res = integrate3d([Fraction(h) for h in h_params], target=args.target)
    row = {
        "h": ",".join(str(Fraction(h)) for h in h_params),
        "triple_integral": res.value.digits_str(12),
        "error_estimate": res.error_estimate.digits_str(3),
        "levels": res.levels_used,
        "evaluations": res.evaluations,
    }
    if product is not None:
        ctx = PrecisionContext(25)
        oracle = moment_quadrature(parse_product(product), ctx)
        with ctx.workprec():
            diff = abs(res.value.value / 8 - oracle.value.value)
            row["oracle_1d"] = oracle.value.digits_str(12)
            row["absdiff_vs_8x"] = ctx.bigreal(diff).digits_str(3)
    _print_rows([row], args.format)
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="ellmom",
        description="Moments of products of complete elliptic integrals: "
        "closed forms, quadrature oracle, identity verification.",
    )
    top.add_argument("--version", action="version", version=f"ellmom {__version__}")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, digits=50):
        p.add_argument("--digits", type=int, default=digits, help="output precision (>= 15)")
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")

    p = sub.add_parser("moment", help="closed form + quadrature of one product moment")
    p.add_argument("--product", required=True, help='e.g. "K Kc", "Kc^2", "E^2"')
    p.add_argument("-n", type=str, default="0", help="power of x (rational)")
    p.add_argument("--xprime-power", type=str, default="0",
                   help="power of x' (single-factor moments)")
    common(p)
    p.set_defaults(func=cmd_moment)

    p = sub.add_parser("verify", help="run the identity catalog")
    p.add_argument("--suite", default="all", help="suite tag, identity id, or 'all'")
    p.add_argument("--catalog", default=None, help="catalog path (or ELLMOM_CATALOG)")
    p.add_argument("--threads", type=int, default=1)
    common(p, digits=50)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("conjectures", help="numeric probes of the two conjectures")
    p.add_argument("--catalog", default=None)
    common(p, digits=60)
    p.set_defaults(func=cmd_conjectures)

    p = sub.add_parser("pslq", help="integer relation search on a file of values")
    p.add_argument("values_file")
    p.add_argument("--max-coeff-bits", type=int, default=20)
    common(p)
    p.set_defaults(func=cmd_pslq)

    p = sub.add_parser("hyper", help="evaluate a pFq series")
    p.add_argument("--upper", required=True, help='comma list, e.g. "1/2,1/2,1/2,1/2"')
    p.add_argument("--lower", required=True, help='comma list, e.g. "1,1,1"')
    p.add_argument("--z", default="1", help="rational argument")
    common(p)
    p.set_defaults(func=cmd_hyper)

    p = sub.add_parser("fourier", help="sine-series coefficients of K(sin t), E(sin t)")
    p.add_argument("--kind", choices=("K", "E"), required=True)
    p.add_argument("-n", type=int, required=True, help="coefficient index (>= 0)")
    common(p)
    p.set_defaults(func=cmd_fourier)

    p = sub.add_parser("zudilin3d", help="triple-integral check of the 7F6 kernels")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--kernel", choices=sorted(ZUDILIN_PRESETS))
    g.add_argument("--params", help='six rationals "h0,h1,h2,h3,h4,h5"')
    p.add_argument("--target", type=float, default=1e-7)
    common(p, digits=15)
    p.set_defaults(func=cmd_zudilin3d)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.digits < 15:
        parser.error("--digits must be >= 15")
    try:
        return args.func(args)
    except (DomainError, PrecisionError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2 if isinstance(exc, (PrecisionError, FileNotFoundError)) else 1


if __name__ == "__main__":
    sys.exit(main())
