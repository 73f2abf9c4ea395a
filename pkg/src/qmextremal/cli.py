"""Command line: ``qmextremal compute | audit | verify``.

Exit status: 0 when every check passes, 1 when at least one fails (reports are
still written), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .audit import audit_sweep, compute_form, report_document
from .depth1 import ROUTES
from .series import SeriesError
from .suites import run_suite
from .qm_space import QmSpaceError
from .depth1 import ExtremalError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render_form(f, fmt: str) -> str:
    if fmt == "json":
        doc = {
            "weight": f.weight,
            "depth": f.depth,
            "order": f.order,
            "route": f.route,
            "normalized": f.normalized,
            "depth_degenerate": f.depth_degenerate,
            "series": f.series.to_json(),
        }
        return json.dumps(doc, indent=2) + "\n"
    coeffs = f.coefficients()
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "numerator", "denominator"])
        for n, c in enumerate(coeffs):
            w.writerow([n, c.numerator, c.denominator])
        return buf.getvalue()
    lines = [f"# normalized extremal form: depth {f.depth}, weight {f.weight}, route {f.route}, "
             f"coefficients of q^0 .. q^{f.order - 1}"]
    if f.depth_degenerate:
        lines.append("# depth-degenerate: " + "; ".join(f.notes))
    lines += [f"{n}\t{c}" for n, c in enumerate(coeffs)]
    return "\n".join(lines) + "\n"


def cmd_compute(args) -> int:
    f = compute_form(args.weight, args.depth, args.order, args.route)
    _emit(_render_form(f, args.format), args.out)
    return EXIT_OK


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def cmd_audit(args) -> int:
    reports = audit_sweep(args.depths, args.weight_max, args.order, args.route)
    doc = report_document(reports)
    text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        _emit(text, args.out)
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        line = (f"[{status}] depth {r.depth} weight {r.weight}: primes {r.denominator_primes} "
                f"< {r.bound} ({r.bound_kind}) {'ok' if r.prime_bound_pass else 'VIOLATED'}")
        if r.positivity_pass is False:
            line += f"; FINDING: non-positive coefficient at q^{r.first_nonpositive_index}"
        print(line, file=sys.stderr if not args.out else sys.stdout)
    if not args.out:
        sys.stdout.write(text)
    s = doc["summary"]
    print(f"{s['passed']}/{s['forms']} forms pass", file=sys.stderr)
    return EXIT_OK if s["passed"] == s["forms"] else EXIT_FAIL


def cmd_verify(args) -> int:
    verdicts = run_suite(args.suite, args.k_max, args.order, args.weight_max)
    for v in verdicts:
        if args.verbose or not v.passed:
            print(v.line())
    failed = sum(not v.passed for v in verdicts)
    print(f"{len(verdicts) - failed}/{len(verdicts)} checks pass")
    if args.out:
        _emit(json.dumps([v.to_json() for v in verdicts], indent=2) + "\n", args.out)
    return EXIT_OK if not failed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qmextremal", description="Normalized extremal quasimodular forms.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="q-expansion of a normalized extremal form")
    c.add_argument("--weight", type=int, required=True)
    c.add_argument("--depth", type=int, default=1)
    c.add_argument("--order", type=int, default=20, help="number of coefficients q^0..q^(N-1)")
    c.add_argument("--route", choices=ROUTES, default=None)
    c.add_argument("--format", choices=("json", "csv", "text"), default="text")
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_compute)

    a = sub.add_parser("audit", help="denominator-prime and positivity audit")
    a.add_argument("--depths", type=_int_list, default=[1, 2, 3, 4])
    a.add_argument("--weight-max", type=int, required=True)
    a.add_argument("--order", type=int, default=None,
                   help="coefficients per form (default: normalizing index + 51)")
    a.add_argument("--route", choices=ROUTES, default=None)
    a.add_argument("--out", default=None)
    a.set_defaults(func=cmd_audit)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=("ramanujan", "ode", "prop41", "operators", "routes", "all"), default="all")
    v.add_argument("--k-max", type=int, default=8)
    v.add_argument("--order", type=int, default=30)
    v.add_argument("--weight-max", type=int, default=None)
    v.add_argument("--out", default=None, help="write the JSON verification report here")
    v.add_argument("-v", "--verbose", action="store_true")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (QmSpaceError, ExtremalError, SeriesError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
