"""Command-line front end.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or input error,
3 a numerical sum could not reach the requested precision.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__, hypergeom, maass, qdsl, theta
from .errors import (CatalogError, InsufficientPrecisionError, PrecisionError, QMaassError)
from .qseries import serialize

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3
SCHEMA = "v1"

CSV_HELP = """\
CSV columns:
  series output (expand, dsl-eval, theta-expand): exponent,coefficient
  verify / verify-all: case,order,status,first_mismatch
  negparts: relation,partner,order,status,first_mismatch,constant_factor
  coeffs: n,coefficient
  checks: check,case,tau_x,tau_y,residual,bound,status,detail
  maass-eval: case,tau_x,tau_y,re,im,term_count,error_bound
  orbit: a1,a2,b1,b2
The default eps for numerical commands comes from QMAASS_EPS (else 1e-12).
"""


class UsageError(Exception):
    pass


def parse_tau(text: str) -> complex:
    """Parse "x+yi", "yi", "i", "i/sqrt2" (and "x+i/sqrt2")."""
    s = text.replace(" ", "")
    scale = 1.0
    if s.endswith("/sqrt2"):
        s = s[:-len("/sqrt2")]
        scale = 1 / math.sqrt(2)
    if not s.endswith("i"):
        raise UsageError(f"bad tau {text!r}: expected x+yi, i or i/sqrt2")
    s = s[:-1]
    m = re.fullmatch(r"([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?([+-])?((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?", s)
    if not m:
        raise UsageError(f"bad tau {text!r}")
    re_part, sign, im_part = m.groups()
    if re_part is not None and sign is None and im_part is None:
        # "2i": the whole number is the imaginary part
        re_part, im_part, sign = None, re_part, "+"
    y = float(im_part) if im_part else 1.0
    if sign == "-":
        y = -y
    x = float(re_part) if re_part else 0.0
    y *= scale
    if not y > 0:
        raise UsageError(f"tau {text!r} is not in the upper half-plane")
    return complex(x, y)


def parse_order(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad order {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("order must be nonnegative")
    return v


# --------------------------------------------------------------------------
# output helpers

class Out:
    def __init__(self, fmt: str):
        self.fmt = fmt
        self.buf = io.StringIO()

    def text(self, line: str = ""):
        self.buf.write(line + "\n")

    def table(self, header, rows):
        w = csv.writer(self.buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)

    def json(self, obj):
        obj = {"schema": SCHEMA, **obj}
        self.buf.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")

    def getvalue(self) -> str:
        return self.buf.getvalue()


def _series_rows(f):
    return [[str(e), str(c)] for e, c in f.items()]


def _emit_series(out: Out, f, label: dict):
    if out.fmt == "csv":
        out.table(["exponent", "coefficient"], _series_rows(f))
    elif out.fmt == "json":
        out.json({**label, "order": str(f.order),
                  "terms": [{"exponent": str(e), "coefficient": [str(x) for x in c.coords]}
                            for e, c in f.items()]})
    else:
        out.buf.write(serialize(f))


def _emit_checks(out: Out, results):
    if out.fmt == "csv":
        out.table(["check", "case", "tau_x", "tau_y", "residual", "bound", "status", "detail"],
                  [[r.name, r.case, repr(r.tau.real), repr(r.tau.imag), f"{r.residual:.6e}",
                    f"{r.bound:.1e}", "PASS" if r.passed else "FAIL", r.detail] for r in results])
    elif out.fmt == "json":
        out.json({"results": [r.to_dict() for r in results]})
    else:
        for r in results:
            out.text(r.line() + (f"  [{r.detail}]" if r.detail else ""))
    return EXIT_PASS if all(r.passed for r in results) else EXIT_FAIL


# --------------------------------------------------------------------------
# commands

def _cases(args):
    return theta.load_catalog(args.catalog) if args.catalog else theta.catalog()


def _case(args):
    try:
        return theta.get_case(args.case, _cases(args))
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def cmd_expand(args, out):
    f = hypergeom.expand_named(hypergeom.series_name(args.name), args.order)
    _emit_series(out, f, {"name": args.name})
    return EXIT_PASS


def cmd_dsl_eval(args, out):
    text = args.expr if args.expr not in (None, "-") else sys.stdin.read()
    try:
        e = qdsl.parse(text)
    except qdsl.ParseError as exc:
        snippet = text.splitlines()[0] if text else ""
        raise UsageError(f"{exc}\n  {snippet}\n  {' ' * min(exc.position, len(snippet))}^") from None
    if args.bound:
        out.text(f"degree bound: {qdsl.min_degree_bound(e).text()}")
    f = qdsl.eval_expr(e, args.order)
    _emit_series(out, f, {"expression": qdsl.to_text(e)})
    return EXIT_PASS


def cmd_theta_expand(args, out):
    case = _case(args)
    if args.perp:
        f = theta.theta_perp_expansion(case, args.order)
    else:
        f = theta.theta_expansion(case, args.order)
    _emit_series(out, f, {"case": case.name, "part": "perp" if args.perp else "positive"})
    return EXIT_PASS


def _verify_one(payload):
    name, order, catalog_path = payload
    cases = theta.load_catalog(catalog_path) if catalog_path else theta.catalog()
    rep = theta.verify_identity(cases[name], order)
    return name, rep.passed, rep.line(), rep.comparison.exponent


def _emit_reports(out: Out, order, results):
    if out.fmt == "csv":
        out.table(["case", "order", "status", "first_mismatch"],
                  [[n, str(order), "PASS" if ok else "FAIL", "" if ex is None else str(ex)]
                   for n, ok, _, ex in results])
    elif out.fmt == "json":
        out.json({"order": str(order), "results": [
            {"case": n, "pass": ok, "first_mismatch": None if ex is None else str(ex)}
            for n, ok, _, ex in results]})
    else:
        for _, _, line, _ in results:
            out.text(line)
    return EXIT_PASS if all(ok for _, ok, _, _ in results) else EXIT_FAIL


def cmd_verify(args, out):
    case = _case(args)
    return _emit_reports(out, args.order, [_verify_one((case.name, args.order, args.catalog))])


def cmd_verify_all(args, out):
    names = list(_cases(args))
    payloads = [(n, args.order, args.catalog) for n in names]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_verify_one, payloads))
    else:
        results = [_verify_one(p) for p in payloads]
    return _emit_reports(out, args.order, results)


def cmd_negparts(args, out):
    rels = [args.relation] if args.relation else list(theta.NEGATIVE_RELATIONS)
    cases = _cases(args)
    reps = [theta.negative_part_check(r, args.order, cases) for r in rels]
    if out.fmt == "csv":
        out.table(["relation", "partner", "order", "status", "first_mismatch", "constant_factor"],
                  [[r.relation, r.partner, r.order, "PASS" if r.passed else "FAIL",
                    "" if r.comparison.exponent is None else str(r.comparison.exponent),
                    "" if r.ratio is None else str(r.ratio)] for r in reps])
    elif out.fmt == "json":
        out.json({"experimental": True, "results": [
            {"relation": r.relation, "partner": r.partner, "order": r.order, "pass": r.passed,
             "first_mismatch": None if r.comparison.exponent is None else str(r.comparison.exponent),
             "constant_factor": None if r.ratio is None else str(r.ratio)} for r in reps]})
    else:
        for r in reps:
            out.text(r.line())
    return EXIT_PASS if all(r.passed for r in reps) else EXIT_FAIL


def cmd_coeffs(args, out):
    S, T = hypergeom.coefficient_tables(int(args.order))
    table = S if args.table == "S" else T
    if out.fmt == "json":
        out.json({"table": args.table, "source": table.source,
                  "entries": [[n, c] for n, c in sorted(table.entries.items())]})
    else:
        out.buf.write(table.to_csv())
    return EXIT_PASS


def _eps(args):
    return args.eps if args.eps is not None else maass.DEFAULT_EPS


def cmd_maass_eval(args, out):
    tau = parse_tau(args.tau)
    if args.case == "u":
        v = maass.cohen_u_eval(tau, args.cutoff)
    else:
        case = _case(args)
        fn = maass.phi_hat if args.hat else maass.phi
        v = fn(case, tau, _eps(args))
    if out.fmt == "csv":
        out.table(["case", "tau_x", "tau_y", "re", "im", "term_count", "error_bound"],
                  [[args.case, repr(tau.real), repr(tau.imag), repr(v.value.real), repr(v.value.imag),
                    v.termCount, f"{v.errorBound:.3e}"]])
    elif out.fmt == "json":
        out.json({"case": args.case, "tau": [tau.real, tau.imag], "value": [v.value.real, v.value.imag],
                  "term_count": v.termCount, "error_bound": v.errorBound,
                  "truncation_q": str(v.truncationQ)})
    else:
        out.text(f"{args.case} tau={tau.real:g}+{tau.imag:g}i value={v.value.real:.15g}"
                 f"{v.value.imag:+.15g}i terms={v.termCount} error_bound={v.errorBound:.3e}")
    return EXIT_PASS


def cmd_check_T(args, out):
    return _emit_checks(out, [maass.check_T(_case(args), parse_tau(args.tau), _eps(args))])


def cmd_check_S(args, out):
    return _emit_checks(out, [maass.check_S(_case(args), parse_tau(args.tau), _eps(args))])


def cmd_check_zlem(args, out):
    return _emit_checks(out, maass.check_zlem(_case(args), parse_tau(args.tau), _eps(args)))


def cmd_check_completion(args, out):
    return _emit_checks(out, [maass.check_completion(_case(args), parse_tau(args.tau), _eps(args))])


def cmd_check_laplacian(args, out):
    return _emit_checks(out, [maass.check_laplacian(_case(args), parse_tau(args.tau), args.h)])


def cmd_check_cohen(args, out):
    return _emit_checks(out, maass.check_cohen(args.cutoff))


def cmd_orbit(args, out):
    case = _case(args)
    comps = maass.orbit(case.form, [(s.a, case.b) for s in case.shifts])
    rows = [[str(a[0]), str(a[1]), str(b[0]), str(b[1])] for a, b in comps]
    if out.fmt == "csv":
        out.table(["a1", "a2", "b1", "b2"], rows)
    elif out.fmt == "json":
        out.json({"case": case.name, "components": [{"a": r[:2], "b": r[2:]} for r in rows]})
    else:
        out.text(f"{case.name}: {len(comps)} components (bound 4|det A|^2 = {4 * case.form.det ** 2})")
        for r in rows:
            out.text(f"a=({r[0]}, {r[1]}) b=({r[2]}, {r[3]})")
    return EXIT_PASS


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qmaass", description=__doc__.splitlines()[0],
                                epilog=CSV_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"qmaass {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv", help="CSV output")
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json",
                     help=f"JSON output (schema {SCHEMA})")
    common.add_argument("--catalog", help="theta catalog JSON file (default: bundled)")
    common.set_defaults(fmt="text")

    sub = p.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def add(name, fn, help_, case=False, order=False, tau=False, eps=False):
        sp = sub.add_parser(name, parents=[common], help=help_, description=help_,
                            epilog=CSV_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
        if case:
            sp.add_argument("--case", required=True, help="catalog case, e.g. f1")
        if order:
            sp.add_argument("--order", type=parse_order, required=True, help="truncation order N")
        if tau:
            sp.add_argument("--tau", default="i", help='point x+yi, "i" or "i/sqrt2" (default i)')
        if eps:
            sp.add_argument("--eps", type=float, default=None, help="target accuracy")
        sp.set_defaults(func=fn)
        return sp

    sp = add("expand", cmd_expand, "expand a named series", order=True)
    sp.add_argument("--name", required=True, choices=[s.value for s in hypergeom.SeriesName])
    sp = add("dsl-eval", cmd_dsl_eval, "evaluate a sum expression (argument or stdin)", order=True)
    sp.add_argument("expr", nargs="?", help="expression text; '-' or omitted reads stdin")
    sp.add_argument("--bound", action="store_true", help="also print the summand degree bound")
    sp = add("theta-expand", cmd_theta_expand, "exact theta expansion of a case", case=True, order=True)
    sp.add_argument("--perp", action="store_true", help="perpendicular-cone part instead")
    add("verify", cmd_verify, "check one series identity exactly", case=True, order=True)
    sp = add("verify-all", cmd_verify_all, "check every catalog identity", order=True)
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    sp = add("negparts", cmd_negparts, "experimental negative-part relations", order=True)
    sp.add_argument("--relation", choices=list(theta.NEGATIVE_RELATIONS))
    sp = add("coeffs", cmd_coeffs, "coefficient tables S(n) and T(n)", order=True)
    sp.add_argument("--table", choices=["S", "T"], default="S")
    sp = add("maass-eval", cmd_maass_eval, "evaluate a waveform component (case 'u' for Cohen's u)",
             tau=True, eps=True)
    sp.add_argument("--case", required=True)
    sp.add_argument("--hat", action="store_true", help="include the completion terms")
    sp.add_argument("--cutoff", type=int, default=1200, help="cutoff for u")
    add("check-T", cmd_check_T, "T-transformation residual", case=True, tau=True, eps=True)
    add("check-S", cmd_check_S, "S-transformation residual", case=True, tau=True, eps=True)
    add("check-zlem", cmd_check_zlem, "completion-term symmetry residuals", case=True, tau=True, eps=True)
    sp = add("check-laplacian", cmd_check_laplacian, "finite-difference eigenvalue residual",
             case=True, tau=True)
    sp.add_argument("--h", type=float, default=1e-3, help="stencil spacing")
    add("check-completion", cmd_check_completion, "completion-term cancellation", case=True,
        tau=True, eps=True)
    sp = add("check-cohen", cmd_check_cohen, "transformation checks for Cohen's u")
    sp.add_argument("--cutoff", type=int, default=1200)
    add("orbit", cmd_orbit, "components of the vector-valued form", case=True)
    return p


def run(argv=None) -> tuple[int, str]:
    """Run a command; returns (exit code, standard output text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_USAGE if exc.code else EXIT_PASS), ""
    out = Out(args.fmt)
    try:
        code = args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"qmaass: {exc}\n")
        return EXIT_USAGE, out.getvalue()
    except (PrecisionError, InsufficientPrecisionError) as exc:
        sys.stderr.write(f"qmaass: precision error: {exc}\n")
        return EXIT_PRECISION, out.getvalue()
    except (CatalogError, QMaassError, ValueError, KeyError) as exc:
        sys.stderr.write(f"qmaass: {exc}\n")
        return EXIT_USAGE, out.getvalue()
    return code, out.getvalue()


def main(argv=None) -> int:
    code, text = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
