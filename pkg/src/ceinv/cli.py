"""Command-line front door for the symbol calculus.

Every subcommand wraps one library operation, prints a canonical text
form (or a JSON document with the same content under ``--format json``)
and exits 0 on success, 1 when a check finds violations, and 2 on usage
or parse errors.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys

from .symbols import parse_symbol, parse_tuple
from .group_l1 import expand_to_y, format_l1, g_u1, parse_l1
from .series_kernel import SeriesM, zeta_order
from .universal_series import (
    FPrimeInput,
    check_lowest_term,
    f_on_l1,
    f_prime,
    f_un_evaluate,
    g_un,
)
from .classification import (
    check_delta_relations,
    check_en,
    collapse_check,
    default_context_pool,
    extend,
    parse_assignment_table,
    y_pool,
)

SUBSET_GUARD = 20

_PROP_BASES = ["0", "b", "c", "b + c", "t2[0]", "t2[0] + b"]
_PROP_DELTAS = ["t2[0]", "-t2[0]", "t3[1]", "-t3[1]", "b", "c"]


def _env_default_n() -> int | None:
    raw = os.environ.get("INVARIANT_DEFAULT_N")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"bad INVARIANT_DEFAULT_N value {raw!r}") from None


def _resolve_n(explicit: int | None, fallback: int | None) -> int:
    if explicit is not None:
        return explicit
    env = _env_default_n()
    if env is not None:
        return env
    if fallback is not None:
        return fallback
    raise ValueError("no truncation given: pass --N or set INVARIANT_DEFAULT_N")


def _series_doc(x: SeriesM) -> dict:
    terms = []
    for z in sorted(x.terms, key=lambda z: z.cls.sort_key):
        terms.append({
            "coeff": x.terms[z],
            "monomial": z.cls.text(),
            "zeta": z.cls.repetition > 0,
            "degree": z.degree,
            "order": zeta_order(z),
        })
    return {"kind": "series", "truncation": x.truncation,
            "text": x.text(), "terms": terms}


def _l1_doc(l) -> dict:
    a_terms = [{"var": v.text(), "coeff": l.a_coeffs[v]}
               for v in sorted(l.a_coeffs, key=lambda v: v.sort_key)]
    return {"kind": "l1", "text": format_l1(l),
            "a_terms": a_terms, "b": l.b_bit, "c": l.c_bit}


def _vector_doc(v) -> dict:
    return {"kind": "vector", "orders": list(v.group.orders),
            "coords": list(v.coords), "text": v.text()}


def _emit(args, text: str, doc: dict) -> None:
    if args.format == "json":
        print(json.dumps(doc, sort_keys=True))
    else:
        print(text)


def _parse_deltas(raw: str) -> list:
    raw = raw.strip()
    if not raw:
        return []
    return [parse_l1(part) for part in raw.split(";")]


def _guard_subsets(count: int, force: bool) -> None:
    if count > SUBSET_GUARD and not force:
        raise ValueError(
            f"{count} increments would enumerate 2^{count} subsets; "
            f"pass --force to override")


def cmd_expand(args) -> int:
    comb = expand_to_y(parse_symbol(args.symbol))
    doc = {"kind": "ycombination", "text": comb.text(),
           "terms": [{"symbol": s.text(), "coeff": c} for s, c in comb.terms.items()]}
    _emit(args, comb.text(), doc)
    return 0


def cmd_g1(args) -> int:
    l = g_u1(parse_symbol(args.symbol))
    _emit(args, format_l1(l), _l1_doc(l))
    return 0


def cmd_gn(args) -> int:
    z = parse_tuple(args.tuple)
    s = g_un(z)
    _emit(args, s.text(), _series_doc(s))
    return 0


def cmd_series_f(args) -> int:
    l = parse_l1(args.l)
    n = _resolve_n(args.N, None)
    s = f_on_l1(l, n)
    _emit(args, s.text(), _series_doc(s))
    return 0


def cmd_fprime(args) -> int:
    base = parse_l1(args.base)
    deltas = _parse_deltas(args.deltas)
    _guard_subsets(len(deltas), args.force)
    n = _resolve_n(args.N, len(deltas) + 1)
    result = f_prime(FPrimeInput(base, tuple(deltas), n))
    _emit(args, result.text(), _series_doc(result))
    return 0


def cmd_fun_eval(args) -> int:
    base = parse_l1(args.base)
    z = parse_tuple(args.tuple)
    _guard_subsets(z.n, args.force)
    truncation = _resolve_n(args.N, args.n + 1)
    result = f_un_evaluate(base, z, args.n, truncation)
    _emit(args, result.text(), _series_doc(result))
    return 0


def _provider_for(args):
    if args.provider == "gun":
        if args.n is None:
            raise ValueError("--n is required with the universal provider")
        return (lambda z: g_un(z)), args.n
    if not args.table:
        raise ValueError("--table FILE is required with the table provider")
    with open(args.table, encoding="utf-8") as fh:
        table = parse_assignment_table(fh.read())
    if args.n is not None and args.n != table.n:
        raise ValueError(f"--n {args.n} conflicts with table arity {table.n}")
    return (lambda z: extend(table, z)), table.n


def cmd_check_delta(args) -> int:
    provider, n = _provider_for(args)
    span = args.m_span
    report = check_delta_relations(
        provider, n,
        m_values=range(-span, span + 1),
        context_pool=default_context_pool(args.context_levels))
    violations = report.sorted_violations()
    doc = {"kind": "delta-report", "ok": report.ok, "checked": report.checked,
           "violations": [{"relation": v.relation, "m": v.m,
                           "context": v.context.text()} for v in violations]}
    if args.format == "json":
        print(json.dumps(doc, sort_keys=True))
    elif report.ok:
        print("OK")
    else:
        for v in violations:
            print(f"violation: {v.text()}")
    return 0 if report.ok else 1


def cmd_check_en(args) -> int:
    provider, n = _provider_for(args)
    report = check_en(provider, n, pool=y_pool(args.levels))
    violations = report.sorted_violations()
    doc = {"kind": "en-report", "ok": report.ok, "checked": report.checked,
           "violations": [{"restriction": v.restriction,
                           "witness": v.witness.text(),
                           "detail": v.detail} for v in violations]}
    if args.format == "json":
        print(json.dumps(doc, sort_keys=True))
    elif report.ok:
        print("OK")
    else:
        for v in violations:
            print(f"violation: {v.text()}")
    return 0 if report.ok else 1


def cmd_check_prop(args) -> int:
    bases = [parse_l1(t) for t in (args.bases.split(";") if args.bases else _PROP_BASES)]
    pool = [parse_l1(t) for t in _PROP_DELTAS]
    failures = []
    checked = 0
    for n in range(1, args.max_n + 1):
        for base in bases:
            for deltas in itertools.product(pool, repeat=n):
                report = check_lowest_term(base, list(deltas), n + 1)
                checked += 1
                if not report.ok:
                    failures.append((base, deltas))
    doc = {"kind": "prop-report", "ok": not failures, "checked": checked,
           "failures": [{"base": format_l1(b),
                         "deltas": [format_l1(d) for d in ds]}
                        for b, ds in failures]}
    if args.format == "json":
        print(json.dumps(doc, sort_keys=True))
    elif not failures:
        print("OK")
    else:
        for base, deltas in failures:
            print("failure: base " + format_l1(base) + ", increments "
                  + "; ".join(format_l1(d) for d in deltas))
    return 0 if not failures else 1


def cmd_extend(args) -> int:
    with open(args.table, encoding="utf-8") as fh:
        table = parse_assignment_table(fh.read())
    value = extend(table, parse_tuple(args.query))
    _emit(args, value.text(), _vector_doc(value))
    return 0


def cmd_collapse(args) -> int:
    base = parse_l1(args.base)
    z = parse_tuple(args.tuple)
    _guard_subsets(z.n, args.force)
    truncation = _resolve_n(args.N, z.n)
    report = collapse_check(base, z, truncation)
    doc = {"kind": "collapse-report", "ok": report.ok,
           "repetition": report.repetition,
           "full": _series_doc(report.full),
           "reduced_scaled": _series_doc(report.reduced_scaled)}
    if args.format == "json":
        print(json.dumps(doc, sort_keys=True))
    else:
        print(f"full:    {report.full.text()}")
        print(f"reduced: {report.reduced_scaled.text()} (factor 2^{report.repetition})")
        print("OK" if report.ok else "MISMATCH")
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ceinv",
        description="Exact calculus for finite-order invariants of surface immersions.")
    sub = parser.add_subparsers(dest="command", required=True)

    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("expand", parents=[fmt],
                       help="expand a symbol over the spanning set Y")
    p.add_argument("symbol")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("g1", parents=[fmt],
                       help="universal degree-1 value of a symbol")
    p.add_argument("symbol")
    p.set_defaults(func=cmd_g1)

    p = sub.add_parser("gn", parents=[fmt],
                       help="universal degree-n value of a tuple")
    p.add_argument("tuple")
    p.set_defaults(func=cmd_gn)

    p = sub.add_parser("series-f", parents=[fmt],
                       help="universal series of a degree-1 element")
    p.add_argument("--l", required=True)
    p.add_argument("--N", type=int)
    p.set_defaults(func=cmd_series_f)

    p = sub.add_parser("fprime", parents=[fmt],
                       help="finite-difference sum over increment subsets")
    p.add_argument("--base", default="0")
    p.add_argument("--deltas", default="")
    p.add_argument("--N", type=int)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_fprime)

    p = sub.add_parser("fun-eval", parents=[fmt],
                       help="order-n invariant value on a tuple")
    p.add_argument("--base", default="0")
    p.add_argument("--tuple", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N", type=int)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_fun_eval)

    p = sub.add_parser("check-delta", parents=[fmt],
                       help="probe the defining relation families")
    p.add_argument("--n", type=int)
    p.add_argument("--provider", choices=("gun", "table"), default="gun")
    p.add_argument("--table")
    p.add_argument("--m-span", type=int, default=3)
    p.add_argument("--context-levels", type=int, default=2)
    p.set_defaults(func=cmd_check_delta)

    p = sub.add_parser("check-en", parents=[fmt],
                       help="check the two membership restrictions")
    p.add_argument("--n", type=int)
    p.add_argument("--provider", choices=("gun", "table"), default="gun")
    p.add_argument("--table")
    p.add_argument("--levels", type=int, default=2)
    p.set_defaults(func=cmd_check_en)

    p = sub.add_parser("check-prop", parents=[fmt],
                       help="lowest-term check for the finite-difference sum")
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--bases")
    p.set_defaults(func=cmd_check_prop)

    p = sub.add_parser("extend", parents=[fmt],
                       help="extend a seed table to an arbitrary tuple")
    p.add_argument("--table", required=True)
    p.add_argument("--query", required=True)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("collapse", parents=[fmt],
                       help="repetition collapse identity for one tuple")
    p.add_argument("--base", default="0")
    p.add_argument("--tuple", required=True)
    p.add_argument("--N", type=int)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_collapse)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"ceinv: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
