"""Command line front end.

    fracvel velocity --f "sqrt(x)" --x 0 --alpha 0.5 --dir plus
    fracvel covar --f "sqrt(x)" --g "sqrt(x)" --x 0 --beta 1
    fracvel quadratic --f "sqrt(x)" --x 0
    fracvel check --rule product --f "x^0.4*1" --g "x^0.6" --x 0 --beta 1 --dir minus
    fracvel holder-scan --f "abs(x-0.5)^0.4" --lo 0 --hi 1 --points 101

Exit status: 0 on success, 1 when a rule check fails, 2 on usage or input
errors.  ``FRACVEL_LADDER="eps0,ratio,count"`` overrides the default ladder.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import calculus, holder
from ._validation import check_order
from .covar import covariation
from .exceptions import FracvelError, ParseError
from .exprparse import parse
from .functions import SampledSignal
from .limits import FIT_TOL, SLOPE_TOL, EpsLadder
from .scalar import is_real
from .velocity import velocity

RULES = ("product", "square", "quotient", "reciprocal", "leibniz", "lemma")


class UsageError(Exception):
    def __init__(self, flag, message):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


def _add_function(p, slot="f", required=True):
    group = p.add_mutually_exclusive_group(required=required)
    group.add_argument(f"--{slot}", metavar="EXPR", help=f"expression for {slot}(x)")
    group.add_argument(f"--{slot}-input" if slot != "f" else "--input", metavar="CSV",
                       dest=f"{slot}_input", help=f"CSV file with samples of {slot}")


def _add_common(p):
    p.add_argument("--origin", type=float, help="abscissa of the first sample (y-only CSV)")
    p.add_argument("--step", type=float, help="sample spacing (y-only CSV)")
    p.add_argument("--eps0", type=float)
    p.add_argument("--ratio", type=float)
    p.add_argument("--count", type=int)
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--output", "-o", metavar="PATH", help="write the report here instead of stdout")


def _add_point(p, dirs=("plus", "minus", "both")):
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--dir", choices=dirs, default="plus")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracvel", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("velocity", help="fractional velocity of f at x")
    _add_function(p)
    _add_point(p)
    p.add_argument("--alpha", type=float, required=True)
    _add_common(p)

    for name, helptext in (("covar", "fractional co-variation [f, g] at x"),
                           ("quadratic", "quadratic variation [f, f] (order 1)")):
        p = sub.add_parser(name, help=helptext)
        _add_function(p)
        if name == "covar":
            _add_function(p, "g")
            p.add_argument("--beta", type=float, default=1.0)
        _add_point(p)
        _add_common(p)

    p = sub.add_parser("check", help="verify a product-rule identity")
    p.add_argument("--rule", choices=RULES)
    p.add_argument("--batch", metavar="JSON", help="JSON array of check cases")
    _add_function(p, required=False)
    _add_function(p, "g", required=False)
    p.add_argument("--x", type=float)
    p.add_argument("--dir", choices=("plus", "minus", "both"), default="plus")
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--eps", type=float, help="eps for --rule lemma (default: eps0)")
    _add_common(p)

    p = sub.add_parser("holder-scan", help="pointwise Hölder exponents over [lo, hi]")
    _add_function(p)
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    _add_common(p)
    return parser


def _ladder(args, environ) -> EpsLadder:
    try:
        base = EpsLadder.from_env(environ)
    except FracvelError as exc:
        raise UsageError("FRACVEL_LADDER", str(exc)) from None
    vals = {
        "eps0": base.eps0 if args.eps0 is None else args.eps0,
        "ratio": base.ratio if args.ratio is None else args.ratio,
        "count": base.count if args.count is None else args.count,
    }
    try:
        return EpsLadder(**vals)
    except FracvelError as exc:
        flag = next((f"--{k}" for k in vals if getattr(args, k) is not None), "--eps0")
        raise UsageError(flag, str(exc)) from None


def _function(args, slot="f", text=None, path=None):
    text = getattr(args, slot, None) if text is None else text
    path = getattr(args, f"{slot}_input", None) if path is None else path
    flag = f"--{slot}"
    if text is not None:
        try:
            return parse(text), text
        except ParseError as exc:
            raise UsageError(flag, f"{exc}\n  {text}\n  {' ' * exc.position}^") from None
    if path is not None:
        try:
            return SampledSignal.from_csv(path, origin=args.origin, step=args.step), path
        except OSError as exc:
            raise UsageError(f"--{slot}-input" if slot != "f" else "--input", str(exc)) from None
    raise UsageError(flag, "required")


def _config(ladder, **extra):
    cfg = {
        "ladder": ladder.to_dict(), "slope_tol": SLOPE_TOL, "fit_tol": FIT_TOL,
        "value_rtol": calculus.VALUE_RTOL, "value_atol": calculus.VALUE_ATOL,
        "lemma_tol": calculus.LEMMA_TOL,
    }
    cfg.update(extra)
    return cfg


def _order(args, name):
    try:
        return check_order(getattr(args, name), name)
    except FracvelError as exc:
        raise UsageError(f"--{name}", str(exc)) from None


def _dirs(value):
    return ("plus", "minus") if value == "both" else (value,)


def _estimate_csv(estimates) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    real = all(is_real([q for _, q in est.samples]) for _, est in estimates)
    header = ["eps", "re"] + ([] if real else ["im"])
    if len(estimates) > 1:
        header.insert(0, "direction")
    w.writerow(header)
    for d, est in estimates:
        for e, q in est.samples:
            q = complex(q)
            row = [repr(float(e)), repr(q.real + 0.0)] + ([] if real else [repr(q.imag + 0.0)])
            if len(estimates) > 1:
                row.insert(0, d)
            w.writerow(row)
    return out.getvalue()


def _estimate_report(args, estimates, header) -> str:
    if args.format == "csv":
        return _estimate_csv(estimates)
    if len(estimates) == 1:
        d, est = estimates[0]
        body = {**header, "direction": d, **est.to_dict()}
    else:
        body = {**header, **{d: est.to_dict() for d, est in estimates}}
    return json.dumps(body, indent=2) + "\n"


def _cmd_velocity(args, ladder):
    _order(args, "alpha")
    f, fsrc = _function(args)
    ests = [(d, velocity(f, args.x, args.alpha, d, ladder)) for d in _dirs(args.dir)]
    header = {"command": "velocity", "f": fsrc, "x": args.x, "alpha": args.alpha,
              "config": _config(ladder)}
    return _estimate_report(args, ests, header), 0


def _cmd_covar(args, ladder):
    f, fsrc = _function(args)
    if args.command == "quadratic":
        g, gsrc, beta = f, fsrc, 1.0
    else:
        g, gsrc = _function(args, "g")
        beta = _order(args, "beta")
    ests = [(d, covariation(f, g, args.x, beta, d, ladder)) for d in _dirs(args.dir)]
    header = {"command": args.command, "f": fsrc, "g": gsrc, "x": args.x, "beta": beta,
              "config": _config(ladder)}
    return _estimate_report(args, ests, header), 0


def _run_rule(rule, f, g, x, beta, direction, ladder, eps):
    if rule in ("product", "quotient", "reciprocal", "leibniz") and g is None:
        raise UsageError("--g", f"rule {rule} needs g")
    if rule == "lemma":
        return [calculus.check_product_lemma(f, g if g is not None else f, x,
                                             eps if eps is not None else ladder.eps0, d)
                for d in _dirs(direction)]
    if rule == "leibniz":
        return [calculus.leibniz_limit_check(f, g, x, ladder)]
    if rule == "square":
        return [calculus.check_square_rule(f, x, beta, d, ladder) for d in _dirs(direction)]
    fn = {"product": calculus.check_product_rule,
          "quotient": calculus.check_quotient_rule,
          "reciprocal": calculus.reciprocal_identities}[rule]
    return [fn(f, g, x, beta, d, ladder) for d in _dirs(direction)]


def _report_csv(reports) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["rule", "direction", "passed", "residual", "tolerance"])
    for r in reports:
        w.writerow([r.rule, r.direction or "", str(r.passed).lower(),
                    repr(float(r.residual)), repr(float(r.tolerance))])
    return out.getvalue()


def _cmd_check(args, ladder):
    if args.batch:
        return _cmd_batch(args, ladder)
    if args.rule is None:
        raise UsageError("--rule", f"required (one of {', '.join(RULES)})")
    if args.x is None:
        raise UsageError("--x", "required")
    _order(args, "beta")
    f, fsrc = _function(args)
    g = gsrc = None
    if args.g is not None or args.g_input is not None:
        g, gsrc = _function(args, "g")
    reports = _run_rule(args.rule, f, g, args.x, args.beta, args.dir, ladder, args.eps)
    ok = all(r.passed for r in reports)
    if args.format == "csv":
        return _report_csv(reports), 0 if ok else 1
    header = {"command": "check", "rule": args.rule, "f": fsrc, "g": gsrc, "x": args.x,
              "beta": args.beta, "config": _config(ladder)}
    if len(reports) == 1:
        body = {**header, **reports[0].to_dict()}
    else:
        body = {**header, "passed": ok, **{r.direction: r.to_dict() for r in reports}}
    return json.dumps(body, indent=2) + "\n", 0 if ok else 1


def _cmd_batch(args, ladder):
    try:
        with open(args.batch) as fh:
            cases = json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError("--batch", str(exc)) from None
    if not isinstance(cases, list):
        raise UsageError("--batch", "expected a JSON array of cases")
    results = []
    for i, case in enumerate(cases):
        try:
            rule = case["rule"]
            if rule not in RULES:
                raise UsageError("--batch", f"case {i}: unknown rule {rule!r}")
            f, _ = _function(args, text=case["f"], path=None)
            g = _function(args, "g", text=case["g"], path=None)[0] if case.get("g") else None
            reports = _run_rule(rule, f, g, float(case["x"]), float(case.get("beta", 1.0)),
                                case.get("dir", "plus"), ladder, case.get("eps"))
        except (KeyError, TypeError) as exc:
            raise UsageError("--batch", f"case {i}: missing or invalid field {exc}") from None
        for r in reports:
            results.append({"case": i, "f": case["f"], "g": case.get("g"), "x": case["x"],
                            **r.to_dict()})
    passed = sum(r["passed"] for r in results)
    failed = len(results) - passed
    text = json.dumps(results, indent=2) + "\n"
    text += f"{'PASS' if failed == 0 else 'FAIL'}: {passed} passed, {failed} failed\n"
    return text, 0 if failed == 0 else 1


def _cmd_scan(args, ladder):
    f, fsrc = _function(args)
    rows = holder.scan(f, args.lo, args.hi, args.points, ladder)
    if args.format == "json":
        body = {
            "command": "holder-scan", "f": fsrc, "lo": args.lo, "hi": args.hi,
            "points": args.points,
            "config": _config(ladder, label_margin=holder.LABEL_MARGIN),
            "rows": [_row_dict(r) for r in rows],
        }
        return json.dumps(body, indent=2) + "\n", 0
    return holder.scan_to_csv(rows), 0


def _row_dict(r):
    def est(e):
        if e is None:
            return None
        return {"alpha_hat": e.alpha_hat, "slope": e.slope, "intercept": e.intercept,
                "r_squared": e.r_squared}
    out = {"x": r.x, "plus": est(r.alpha_plus), "minus": est(r.alpha_minus), "label": r.label}
    if r.error:
        out["error"] = r.error
    return out


COMMANDS = {
    "velocity": _cmd_velocity,
    "covar": _cmd_covar,
    "quadratic": _cmd_covar,
    "check": _cmd_check,
    "holder-scan": _cmd_scan,
}


def run(argv=None, stdout=None, stderr=None, environ=None) -> int:
    """Execute one command; returns the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        ladder = _ladder(args, environ)
        text, status = COMMANDS[args.command](args, ladder)
    except UsageError as exc:
        parser.print_usage(stderr)
        print(f"fracvel: error: {exc}", file=stderr)
        return 2
    except FracvelError as exc:
        print(f"fracvel: error: {exc}", file=stderr)
        return 2
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
