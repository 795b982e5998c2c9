"""Command-line front end.

Exit codes: 0 success, 1 property failure, 2 parse error (including bad
expressions and misapplied operations), 3 axiom violation, 4 I/O failure.
``--format records`` prints strictly ``key=value`` space-separated lines.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import representation, rewriting, verify
from .algebra import AlgebraElement, element_test_points, evaluate, i_norm, sup_norm
from .errors import (
    AxiomError,
    GroupoidParseError,
    InfiniteFiber,
    ModelMismatch,
    SupportViolation,
)
from .expressions import evaluate_expression
from .formats import load_elements, load_groupoid, parse_point, serialize_element
from .scalars import QC
from .verify import SUITES

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_PARSE = 2
EXIT_AXIOM = 3
EXIT_IO = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steinalg",
        description="Exact Steinberg-algebra computations on ample groupoid models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("human", "records"), default="human")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
        p.add_argument("--tolerance", type=float, default=1e-10, help="numeric tolerance")

    p = sub.add_parser("validate", help="validate a groupoid file")
    p.add_argument("path")
    common(p)

    p = sub.add_parser("compute", help="evaluate an expression over an element file")
    p.add_argument("path")
    p.add_argument("expression")
    common(p)

    p = sub.add_parser("eval", help="evaluate an expression at a point")
    p.add_argument("path")
    p.add_argument("expression")
    p.add_argument("point", help="arrow name, unit:<word>, base, or head:<k>")
    common(p)

    p = sub.add_parser("norm", help="norms of a declared element")
    p.add_argument("path")
    p.add_argument("element")
    p.add_argument("--kind", choices=("sup", "inorm", "reduced", "symbol", "sandwich"), default="sandwich")
    common(p)

    p = sub.add_parser("rewrite", help="confine an element's terms inside a region")
    p.add_argument("path")
    p.add_argument("element")
    p.add_argument("--within", nargs="+", required=True, metavar="BISECTION")
    common(p)

    p = sub.add_parser("restrict", help="restrict an element to a bisection")
    p.add_argument("path")
    p.add_argument("element")
    p.add_argument("--to", required=True, metavar="BISECTION")
    p.add_argument("--within", required=True, metavar="BISECTION")
    common(p)

    p = sub.add_parser("decompose", help="split an element along a cover with a sup-norm budget")
    p.add_argument("path")
    p.add_argument("element")
    p.add_argument("--cover", nargs="+", required=True, metavar="BISECTION")
    p.add_argument("--epsilon", required=True, help="exact positive decimal")
    common(p)

    p = sub.add_parser("verify", help="run the property suites")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--groupoid", help="also check this groupoid file's axioms")
    common(p)

    return parser


def _named_element(bundle, name: str) -> AlgebraElement:
    if name not in bundle.elements:
        raise GroupoidParseError(f"unknown element {name!r}")
    return bundle.elements[name]


def _named_bisection(bundle, name: str):
    if name not in bundle.bisections:
        raise GroupoidParseError(f"unknown bisection {name!r}")
    return bundle.bisections[name]


def _print_element(bundle, element, args, label="result"):
    if args.format == "records":
        print(f"nterms={len(element.terms)}")
        for p in element_test_points(element):
            print(f"point={p} value={evaluate(element, p)}")
        return
    print(f"groupoid: {bundle.groupoid_path}")
    print(serialize_element(element, label))
    print("# values on test points:")
    for p in element_test_points(element):
        print(f"#   {p} -> {evaluate(element, p)}")


def cmd_validate(args) -> int:
    load_groupoid(args.path)
    print("valid" if args.format == "human" else "status=valid")
    return EXIT_OK


def cmd_compute(args) -> int:
    bundle = load_elements(args.path)
    value = evaluate_expression(args.expression, bundle)
    if isinstance(value, QC):
        print(f"scalar={value}" if args.format == "records" else f"scalar {value}")
        return EXIT_OK
    _print_element(bundle, value, args)
    return EXIT_OK


def cmd_eval(args) -> int:
    bundle = load_elements(args.path)
    value = evaluate_expression(args.expression, bundle)
    if isinstance(value, QC):
        raise GroupoidParseError("eval needs an element expression, not a scalar")
    point = parse_point(args.point, bundle.model)
    result = evaluate(value, point)
    if args.format == "records":
        print(f"point={point} value={result}")
    else:
        print(f"{point} -> {result}")
    return EXIT_OK


def cmd_norm(args) -> int:
    bundle = load_elements(args.path)
    f = _named_element(bundle, args.element)
    kind = args.kind
    records = args.format == "records"
    if kind == "sup":
        v = sup_norm(f)
        print(f"sup={float(v)!r}" if records else f"sup norm: {v} = {float(v)!r}")
    elif kind == "inorm":
        v = i_norm(f)
        print(f"inorm={float(v)!r}" if records else f"I-norm: {v} = {float(v)!r}")
    elif kind == "reduced":
        try:
            v = representation.reduced_norm(f, args.tolerance)
        except InfiniteFiber as exc:
            raise ModelMismatch(
                "reduced norm needs finite fibers; use --kind symbol on the integer-headed snake"
            ) from exc
        if records:
            print(f"reduced={v!r} reduced_tol={args.tolerance!r}")
        else:
            print(f"reduced norm: {v!r} (tolerance {args.tolerance!r})")
    elif kind == "symbol":
        sn = representation.symbol_norm(f)
        if records:
            print(f"symbol={sn.value!r} symbol_tol={sn.error!r}")
        else:
            print(f"symbol norm: {sn.value!r} (grid error bound {sn.error!r})")
    else:
        report = representation.norm_sandwich(f, args.tolerance)
        if records:
            print(report.records_line())
        else:
            print(f"sup norm:      {float(report.sup_norm)!r}")
            print(f"I-norm:        {float(report.i_norm)!r}")
            print(f"reduced norm:  {report.reduced_norm!r} (tolerance {report.reduced_tol!r})")
            print(f"M_f bound:     {float(report.trivial_bound)!r}")
            print(f"single-bisection support: {report.bisection_bound}")
            print(
                "full norm (not computed, bracketed): "
                f"[{report.full_norm_lower()!r}, {report.full_norm_upper()!r}]"
            )
    return EXIT_OK


def cmd_rewrite(args) -> int:
    bundle = load_elements(args.path)
    f = _named_element(bundle, args.element)
    region = [_named_bisection(bundle, n) for n in args.within]
    result = rewriting.rewrite_within(f, region)
    _print_element(bundle, result, args, label=f"{args.element}_rewritten")
    return EXIT_OK


def cmd_restrict(args) -> int:
    bundle = load_elements(args.path)
    f = _named_element(bundle, args.element)
    target = _named_bisection(bundle, args.to)
    ambient = _named_bisection(bundle, args.within)
    result = rewriting.restrict(f, target, within=ambient)
    _print_element(bundle, result, args, label=f"{args.element}_restricted")
    return EXIT_OK


def cmd_decompose(args) -> int:
    bundle = load_elements(args.path)
    f = _named_element(bundle, args.element)
    cover = [_named_bisection(bundle, n) for n in args.cover]
    try:
        eps = Fraction(args.epsilon)
    except ValueError as exc:
        raise GroupoidParseError(f"bad epsilon {args.epsilon!r}") from exc
    dec = rewriting.bounded_summands(f, cover, eps)
    if args.format == "records":
        print(f"parts={len(dec.parts)} epsilon={args.epsilon} repair_rounds={dec.repair_iterations}")
    else:
        print(f"# {len(dec.parts)} parts, epsilon {args.epsilon}, repair rounds {dec.repair_iterations}")
    for idx, ((part, assigned), name) in enumerate(zip(dec.parts, args.cover)):
        if args.format == "records":
            print(f"part={idx} cover={name} nterms={len(part.terms)} sup={float(sup_norm(part))!r}")
        else:
            print(f"# part {idx} (supported in {name}):")
            print(serialize_element(part, f"{args.element}_part{idx}"))
    return EXIT_OK


def cmd_verify(args) -> int:
    suites = SUITES if args.suite == "all" else (args.suite,)
    extra = None
    if args.groupoid:
        extra = load_groupoid(args.groupoid, validate=False)
    outcomes = verify.run_verify(
        suites=suites,
        trials=args.trials,
        seed=args.seed,
        tolerance=args.tolerance,
        extra_groupoid=extra,
    )
    failed = [o for o in outcomes if not o.passed]
    if args.format == "records":
        for o in outcomes:
            print(o.records_line())
    else:
        for o in outcomes:
            mark = "ok " if o.passed else "FAIL"
            print(f"[{mark}] {o.suite}/{o.name}: {o.cases} cases, {o.failures} failures")
            if o.detail and not o.passed:
                print(f"       {o.detail}")
        print(
            f"{len(outcomes)} properties, {sum(o.cases for o in outcomes)} cases, "
            f"{len(failed)} failing"
        )
    return EXIT_OK if not failed else EXIT_PROPERTY


_COMMANDS = {
    "validate": cmd_validate,
    "compute": cmd_compute,
    "eval": cmd_eval,
    "norm": cmd_norm,
    "rewrite": cmd_rewrite,
    "restrict": cmd_restrict,
    "decompose": cmd_decompose,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except GroupoidParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except AxiomError as exc:
        print(f"axiom violation: {exc}", file=sys.stderr)
        return EXIT_AXIOM
    except (ModelMismatch, SupportViolation, InfiniteFiber, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
