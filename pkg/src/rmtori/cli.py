"""Command-line frontend: ``rmtori <command> ...``.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input.
JSON output never contains floats; rationals are strings ``"p/q"`` and
field elements are ``{"x": ..., "y": ...}`` over ``sqrt(d)``.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from fractions import Fraction

from .classgrp import ClassGroup, class_group, fundamental_unit, narrow_class_group
from .field import CFExpansion, FieldContext, FieldError, QuadElem, cf_expand, format_elem, is_squarefree
from .forms import form_class_count
from .ideal import FractionalIdeal, IdealError, ideal_from_gens
from .lattice import Lattice, LatticeError, as_lattice, hom_module, is_homothetic, multiplier_ring, normal_basis
from .parse import ParseError, parse_elements
from .tori import act, enumerate_qt, galois_table, transporter, verify_simply_transitive

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

INPUT_ERRORS = (FieldError, ParseError, LatticeError, IdealError)


class InputError(ValueError):
    pass


# -- JSON encoding ------------------------------------------------------------------

def j_rat(x) -> str:
    return str(Fraction(x))


def j_elem(a: QuadElem) -> dict:
    return {"x": j_rat(a.x), "y": j_rat(a.y), "text": format_elem(a)}


def j_lattice(L: Lattice) -> dict:
    e1, e2 = L.basis()
    return {
        "q": L.q,
        "a": L.a,
        "b": L.b,
        "c": L.c,
        "basis": [j_elem(e1), j_elem(e2)],
        "index": j_rat(L.index()),
    }


def j_ideal(A: FractionalIdeal) -> dict:
    out = j_lattice(A.hnf)
    out["norm"] = out.pop("index")
    out["gens"] = str(A)
    return out


def j_field(ctx: FieldContext) -> dict:
    return {"d": ctx.d, "D": ctx.D, "omega": j_elem(ctx.omega)}


def j_cf(e: CFExpansion) -> dict:
    return {"preperiod": list(e.preperiod), "period": list(e.period)}


def j_group(G: ClassGroup) -> dict:
    return {
        "h": G.h,
        "structure": list(G.structure),
        "narrow": G.narrow,
        "reps": [j_ideal(A) for A in G.reps],
        "generators": [str(g) for g in G.generators],
        "table": [list(r) for r in G.table],
    }


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)


# -- commands -----------------------------------------------------------------------

def _ctx(d: int) -> FieldContext:
    return FieldContext(d)


def cmd_field(args) -> dict:
    ctx = _ctx(args.d)
    u = fundamental_unit(ctx)
    payload = {
        "epsilon": j_elem(u.epsilon),
        "unit_norm": u.unit_norm,
        "tp_index": u.tp_index,
        "cf_omega": j_cf(cf_expand(ctx.omega)),
    }
    return _report(args, ctx, payload, [])


def cmd_classgroup(args) -> dict:
    ctx = _ctx(args.d)
    wide = class_group(ctx)
    narrow = narrow_class_group(ctx)
    G = narrow.group if args.narrow else wide
    payload = j_group(G)
    payload["formula"] = {
        "h": wide.h,
        "tp_index": narrow.unit.tp_index,
        "h_narrow_formula": j_rat(narrow.formula_h),
        "h_narrow_direct": narrow.group.h,
        "faithful": narrow.faithful,
    }
    checks = [("narrow_index_formula", narrow.formula_check)]
    return _report(args, ctx, payload, checks)


def cmd_tori(args) -> dict:
    ctx = _ctx(args.d)
    tori = enumerate_qt(ctx)
    payload = {
        "h": len(tori),
        "tori": [
            {"index": i, "lattice": j_lattice(Z.rep.hnf), "text": str(Z), "conductor": Z.end.conductor}
            for i, Z in enumerate(tori)
        ],
    }
    return _report(args, ctx, payload, [])


def cmd_act(args) -> dict:
    ctx = _ctx(args.d)
    A = ideal_from_gens(ctx, parse_elements(ctx, args.ideal))
    tori = enumerate_qt(ctx)
    if not 0 <= args.torus < len(tori):
        raise InputError(f"torus index must be in 0..{len(tori) - 1}")
    Z = tori[args.torus]
    W = act(A, Z)
    G = class_group(ctx)
    cls = G.class_of(A)
    payload = {
        "ideal": j_ideal(A),
        "class_index": G.index(cls),
        "class": str(cls),
        "torus": args.torus,
        "result": tori.index(W),
        "result_text": str(W),
    }
    checks = [("transporter_consistent", transporter(Z, W) == cls)]
    return _report(args, ctx, payload, checks)


def _lattice_arg(ctx: FieldContext, text: str):
    gens = parse_elements(ctx, text)
    if len(gens) == 2:
        return normal_basis(*gens)
    return Lattice.from_gens(ctx, gens)


def cmd_hom(args) -> dict:
    ctx = _ctx(args.d)
    L = _lattice_arg(ctx, args.l1)
    M = _lattice_arg(ctx, args.l2)
    H = hom_module(L, M)
    beta = is_homothetic(L, M)
    payload = {
        "l1": j_lattice(as_lattice(L)),
        "l2": j_lattice(as_lattice(M)),
        "hom_module": j_lattice(H),
        "conductor_l1": multiplier_ring(L).conductor,
        "conductor_l2": multiplier_ring(M).conductor,
        "homothetic": beta is not None,
        "witness": None if beta is None else j_elem(beta),
    }
    checks = []
    if beta is not None:
        checks.append(("witness_verified", as_lattice(L).scale(beta) == as_lattice(M) and beta.sign() > 0))
    return _report(args, ctx, payload, checks)


def verify_field(ctx: FieldContext, samples: int) -> tuple[dict, list[tuple[str, bool]], dict | None]:
    rep = verify_simply_transitive(ctx, samples=samples)
    checks = [(c.name, c.passed) for c in rep.checks]
    narrow = narrow_class_group(ctx)
    forms = form_class_count(ctx.D)
    h = class_group(ctx).h
    checks.append(("narrow_index_formula", narrow.formula_check))
    checks.append(("form_oracle", forms == narrow.group.h))
    checks.append(("torus_count_vs_forms", forms * narrow.unit.tp_index == 4 * len(enumerate_qt(ctx))))
    table = galois_table(ctx)
    checks.append(("galois_group_law", [list(r) for r in table.composition] == [list(r) for r in class_group(ctx).table]))
    payload = {
        "h": h,
        "h_narrow": narrow.group.h,
        "form_count": forms,
        "tp_index": narrow.unit.tp_index,
        "galois": [
            {"label": row.label.label, "permutation": list(row.permutation)} for row in table.rows
        ],
    }
    counter = rep.counterexample
    if counter is None and not all(ok for _, ok in checks):
        counter = {"check": next(n for n, ok in checks if not ok)}
    return payload, checks, counter


def _parse_range(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*", text)
    if not m:
        raise InputError(f"range must look like a..b, got {text!r}")
    a, b = int(m.group(1)), int(m.group(2))
    if a > b:
        raise InputError(f"empty range {text!r}")
    return a, b


def _report(args, ctx: FieldContext, payload: dict, checks) -> dict:
    # payload keys sit beside the fixed ones, e.g. {"h": 2, "structure": [2], ...}
    report = {"command": args.command_echo, "field": j_field(ctx), **payload}
    report["checks"] = [{"name": n, "pass": bool(ok)} for n, ok in checks]
    return report


# -- rendering ----------------------------------------------------------------------

_RESERVED = {"command", "field", "checks", "counterexample", "timing"}


def render_human(report: dict) -> str:
    f = report["field"]
    lines = [f"Q(sqrt({f['d']}))  D = {f['D']}  omega = {f['omega']['text']}"]
    payload = {k: v for k, v in report.items() if k not in _RESERVED}
    _render_value(payload, lines, "  ")
    if report["checks"]:
        lines.append("  checks:")
        for c in report["checks"]:
            lines.append(f"    [{'PASS' if c['pass'] else 'FAIL'}] {c['name']}")
    if report.get("counterexample"):
        lines.append(f"  counterexample: {report['counterexample']}")
    if "timing" in report:
        lines.append(f"  time: {report['timing']['elapsed_ms']} ms")
    return "\n".join(lines)


def _lattice_line(v: dict) -> str:
    e1, e2 = (e["text"] for e in v["basis"])
    size = f"norm {v['norm']}" if "norm" in v else f"index {v['index']}"
    return f"Z*({e1}) + Z*({e2})  [q={v['q']} a={v['a']} b={v['b']} c={v['c']}, {size}]"


def _render_value(value, lines, indent):
    for k, v in value.items():
        if isinstance(v, dict) and set(v) >= {"x", "y", "text"}:
            lines.append(f"{indent}{k}: {v['text']}")
        elif isinstance(v, dict) and "basis" in v:
            lines.append(f"{indent}{k}: {_lattice_line(v)}")
        elif k == "table":
            lines.append(f"{indent}{k}:")
            for row in v:
                lines.append(f"{indent}  " + " ".join(f"{x:>3}" for x in row))
        elif isinstance(v, dict):
            lines.append(f"{indent}{k}:")
            _render_value(v, lines, indent + "  ")
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{indent}{k}:")
            for item in v:
                if "gens" in item:
                    lines.append(f"{indent}  {item['gens']}  (norm {item['norm']})")
                elif "basis" in item:
                    lines.append(f"{indent}  {_lattice_line(item)}")
                elif "text" in item and "index" in item:
                    lines.append(f"{indent}  [{item['index']}] {item['text']}  (conductor {item['conductor']})")
                elif "label" in item:
                    lines.append(f"{indent}  {item['label']}: {item['permutation']}")
                else:
                    lines.append(f"{indent}  {item.get('text', item)}")
        else:
            lines.append(f"{indent}{k}: {v}")


# -- entry points -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rmtori",
        description=(
            "Quantum tori with real multiplication over Q(sqrt(d)). Lattice generators must lie "
            "in the field; lattices with End = Z are not representable."
        ),
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--timing", action="store_true", help="include elapsed time in JSON too")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", parents=[common], help="field data and fundamental unit")
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("classgroup", parents=[common], help="class group or narrow class group")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--narrow", action="store_true")
    p.set_defaults(func=cmd_classgroup)

    p = sub.add_parser("tori", parents=[common], help="list QT(O_F)")
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_tori)

    p = sub.add_parser("act", parents=[common], help="act by an ideal on a torus")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--ideal", required=True, help='generators, e.g. "2, sqrt(10)"')
    p.add_argument("--torus", type=int, required=True, help="index into the tori listing")
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("hom", parents=[common], help="colon module and homothety of two lattices")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--l1", required=True)
    p.add_argument("--l2", required=True)
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("verify", parents=[common], help="full invariant suite")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--d", type=int)
    g.add_argument("--range", dest="range_", metavar="A..B")
    p.add_argument("--samples", type=int, default=100, help="random rescalings per field")
    p.set_defaults(func=None)
    return parser


def _emit(report: dict, args, started: float, out) -> None:
    if args.json:
        if args.timing:
            report["timing"] = {"elapsed_ms": int((time.perf_counter() - started) * 1000)}
        out.write(dumps(report) + "\n")
    else:
        report["timing"] = {"elapsed_ms": int((time.perf_counter() - started) * 1000)}
        out.write(render_human(report) + "\n")


def _verify_one(args, d: int, out) -> int:
    started = time.perf_counter()
    ctx = _ctx(d)
    payload, checks, counter = verify_field(ctx, args.samples)
    report = _report(args, ctx, payload, checks)
    ok = all(ok for _, ok in checks)
    if not ok:
        report["counterexample"] = counter
    _emit(report, args, started, out)
    return EXIT_OK if ok else EXIT_FAIL


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    args.command_echo = ["rmtori", *argv]
    try:
        if args.command == "verify":
            if args.samples < 0:
                raise InputError("--samples must be non-negative")
            if args.d is not None:
                return _verify_one(args, args.d, out)
            a, b = _parse_range(args.range_)
            code = EXIT_OK
            for d in range(max(a, 2), b + 1):
                if is_squarefree(d):
                    code = max(code, _verify_one(args, d, out))
            return code
        started = time.perf_counter()
        report = args.func(args)
        _emit(report, args, started, out)
        return EXIT_OK if all(c["pass"] for c in report["checks"]) else EXIT_FAIL
    except (*INPUT_ERRORS, InputError) as exc:
        sys.stderr.write(f"rmtori: error: {exc}\n")
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())
