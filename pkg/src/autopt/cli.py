"""Command-line front end.

Subcommands
-----------
aut       automorphism group order and a generating set
classes   automorphisms and distinct logical actions per conjugacy class
orbit     number of distinct equivalent codes and the orbit-stabiliser check
optimize  cheapest circuit for one class
table     cheapest circuit for every non-identity class of a code
verify    re-check a JSON report emitted by ``optimize`` or ``table``
report    class groupings as CSV or DOT

Codes are given by builtin name (see ``autopt list``) or a path to a file in
the text format. Exit status is 0 on success, 1 on bad input and 2 when a
search budget is exceeded. ``AUTOPT_THREADS`` sets the default worker count.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from collections import Counter, defaultdict

import numpy as np

from . import autgroup
from .autgroup import BudgetExceeded, automorphism_group, code_orbit, generating_set
from .codes import FIXTURES, CodeError, StabCode, builtin, load_code, parse_code, serialize_code
from .gf4 import format_bits
from .logical import NotAnAutomorphism, basis_change, conjugate_automorphism, logical_action, \
    logical_matrix, transform_code
from .monomial import MonomialOp, OpError, hamming_order
from .optimizer import Metric, OptimizeError, OptResult, classify_automorphisms, full_table, \
    optimize
from .symplectic import GroupError

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2


class InputError(Exception):
    pass


def load(spec: str) -> StabCode:
    if spec in FIXTURES:
        return builtin(spec)
    if os.path.exists(spec):
        return load_code(spec)
    raise InputError(f"unknown builtin code or missing file: {spec!r}")


def _metric(args) -> Metric:
    return Metric.number(args.metric, args.swap_weight)


def _workers(args) -> int:
    return args.workers if args.workers else autgroup.default_workers()


def _aut(args, code: StabCode):
    return automorphism_group(code, node_limit=args.node_limit, workers=_workers(args),
                              partial=getattr(args, "allow_partial", False))


# -- emission ------------------------------------------------------------------


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _md_table(header: list[str], rows: list[list]) -> str:
    out = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    for r in rows:
        out.append("| " + " | ".join(str(c) for c in r) + " |")
    return "\n".join(out) + "\n"


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def result_row(res: OptResult) -> dict:
    return {
        "class": res.cls,
        "cost": res.cost,
        "circuit": res.circuit.to_dict(),
        "tau": res.tau.to_dict(),
        "A": format_bits(res.A),
        "generator_basis": serialize_code(res.code_out).splitlines(),
        "L": format_bits(res.realized.L),
        "exhaustive": bool(res.exhaustive),
        "upper_bound": bool(res.upper_bound),
    }


def results_doc(code_name: str, code: StabCode, metric: Metric, rows: list[OptResult]) -> dict:
    return {
        "code": code_name,
        "n": code.n,
        "k": code.k,
        "metric": metric.to_dict(),
        "rows": [result_row(r) for r in rows],
    }


def _render_results(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return _dumps(doc)
    label = f"[[{doc['n']},{doc['k']}]]"
    header = ["Code", "Class", "Physical Circuit", "Generator-Basis Matrix", "Logical Operation",
              "Metric cost"]
    rows = []
    for r in doc["rows"]:
        circ = str(MonomialOp.from_dict(r["circuit"]))
        gb = r["generator_basis"]
        L = r["L"]
        if fmt == "md":
            gb = "<br>".join(x if x else "--" for x in gb[1:])
            L = "<br>".join(L)
        else:
            gb = "/".join(gb[1:])
            L = "/".join(L)
        cost = f"{r['cost']}{' (upper bound)' if r['upper_bound'] else ''}"
        rows.append([label, r["class"], circ, gb, L, cost])
    if fmt == "md":
        return _md_table(header, rows)
    return _csv(header, rows)


# -- subcommands ---------------------------------------------------------------


def cmd_aut(args, out):
    code = load(args.code)
    aut = _aut(args, code)
    gens = generating_set(aut) if aut.order <= 10 ** 5 else []
    doc = {
        "code": args.code,
        "n": code.n,
        "k": code.k,
        "order": aut.order,
        "complete": aut.complete,
        "search_nodes": aut.nodes,
        "generators": [g.to_dict() for g in gens],
    }
    if args.format == "json":
        out.write(_dumps(doc))
    else:
        rows = [[i + 1, str(g)] for i, g in enumerate(gens)]
        text = (_md_table if args.format == "md" else _csv)(["generator", "circuit"], rows)
        if args.format == "md":
            text = f"{code.label} automorphism group order: {aut.order}\n\n" + text
        out.write(text)
    return EXIT_OK if aut.complete else EXIT_BUDGET


def cmd_classes(args, out):
    code = load(args.code)
    aut = _aut(args, code)
    groups = classify_automorphisms(code, aut)
    rows = []
    for cls, ops in groups.items():
        distinct = {logical_matrix(op, code, check=False).tobytes() for op in ops}
        rows.append({"class": cls, "automorphisms": len(ops), "distinct_L": len(distinct)})
    doc = {"code": args.code, "n": code.n, "k": code.k, "order": aut.order,
           "distinct_L": sum(r["distinct_L"] for r in rows), "classes": rows}
    if args.format == "json":
        out.write(_dumps(doc))
    else:
        table = [[r["class"], r["automorphisms"], r["distinct_L"]] for r in rows]
        out.write((_md_table if args.format == "md" else _csv)(
            ["class", "automorphisms", "distinct_L"], table))
    return EXIT_OK


def cmd_orbit(args, out):
    code = load(args.code)
    aut = _aut(args, code)
    orb = code_orbit(code, entry_limit=args.entry_limit, strict=False)
    total = hamming_order(code.n)
    doc = {
        "code": args.code,
        "n": code.n,
        "k": code.k,
        "orbit_size": len(orb),
        "complete": orb.complete,
        "aut_order": aut.order,
        "hamming_order": total,
        "identity_holds": orb.complete and len(orb) * aut.order == total,
    }
    if args.list:
        doc["witnesses"] = [w.to_dict() for w in orb]
    if args.format == "json":
        out.write(_dumps(doc))
    else:
        keys = ["orbit_size", "aut_order", "hamming_order", "identity_holds"]
        out.write((_md_table if args.format == "md" else _csv)(
            keys, [[doc[k] for k in keys]]))
    if not orb.complete:
        print(f"orbit truncated at {args.entry_limit} entries", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def _target(args, k):
    if args.target is None:
        return None
    rows = [r for r in args.target.replace(";", ",").split(",") if r]
    M = np.array([[int(c) for c in r] for r in rows], dtype=np.uint8)
    if M.shape != (2 * k, 2 * k):
        raise InputError(f"target must be {2 * k}x{2 * k}")
    return M


def cmd_optimize(args, out):
    code = load(args.code)
    metric = _metric(args)
    aut = _aut(args, code)
    res = optimize(code, args.cls, metric, level=args.level, target=_target(args, code.k),
                   aut=aut, cross_check=_cross_check(args, code))
    doc = results_doc(args.code, code, metric, [res])
    out.write(_render_results(doc, args.format))
    return EXIT_BUDGET if res.upper_bound else EXIT_OK


def _cross_check(args, code):
    if args.no_cross_check:
        return False
    return None  # optimizer default: brute oracle for n <= 5


def cmd_table(args, out):
    code = load(args.code)
    metric = _metric(args)
    aut = _aut(args, code)
    rows = full_table(code, metric, include_identity=args.include_identity, aut=aut,
                      cross_check=_cross_check(args, code))
    doc = results_doc(args.code, code, metric, rows)
    out.write(_render_results(doc, args.format))
    return EXIT_BUDGET if any(r.upper_bound for r in rows) else EXIT_OK


def verify_doc(doc: dict) -> list[str]:
    """Problems found when re-checking an emitted report; empty when it verifies."""
    problems = []
    try:
        source = load(doc["code"])
    except InputError:
        source = None
    metric = Metric(doc["metric"]["kind"], int(doc["metric"]["swap_weight"]))
    for i, row in enumerate(doc["rows"]):
        tag = f"row {i + 1} (class {row['class']})"
        code = parse_code("\n".join(row["generator_basis"]) + "\n")
        circuit = MonomialOp.from_dict(row["circuit"])
        tau = MonomialOp.from_dict(row["tau"])
        A = np.array([[int(c) for c in r] for r in row["A"]], dtype=np.uint8)
        try:
            la = logical_action(circuit, code)
        except NotAnAutomorphism:
            problems.append(f"{tag}: circuit is not an automorphism of the emitted code")
            continue
        if format_bits(la.L) != row["L"]:
            problems.append(f"{tag}: logical action differs from the reported L")
        if la.cls != row["class"]:
            problems.append(f"{tag}: realised class {la.cls} differs")
        if metric.cost(circuit) != row["cost"]:
            problems.append(f"{tag}: circuit cost {metric.cost(circuit)} differs")
        if source is not None:
            expect = transform_code(basis_change(source, A), tau)
            if expect != code:
                problems.append(f"{tag}: emitted code is not tau(A B) of the source code")
    return problems


def cmd_verify(args, out):
    with open(args.report, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"not a JSON report: {exc}") from None
    docs = doc if isinstance(doc, list) else [doc]
    problems = []
    for d in docs:
        problems += verify_doc(d)
    for p in problems:
        out.write(p + "\n")
    nrows = sum(len(d["rows"]) for d in docs)
    out.write(f"verified {nrows} rows, {len(problems)} problems\n")
    return EXIT_OK if not problems else EXIT_INPUT


def cmd_report(args, out):
    code = load(args.code)
    aut = _aut(args, code)
    groups = classify_automorphisms(code, aut)
    records = []
    for cls, ops in groups.items():
        for op in ops:
            L = "/".join(format_bits(logical_matrix(op, code, check=False)))
            records.append((cls, L, op))
    if args.orbit:
        return _report_orbit(args, code, aut, out)
    if args.format == "dot":
        out.write(_dot(code, records))
    else:
        rows = [[i + 1, str(op), cls, L] for i, (cls, L, op) in enumerate(records)]
        out.write(_csv(["index", "circuit", "class", "L"], rows))
    return EXIT_OK


def _dot(code: StabCode, records) -> str:
    lines = [f'graph "{code.label}" {{', "  node [shape=point];"]
    by_class = defaultdict(lambda: defaultdict(list))
    for cls, L, op in records:
        by_class[cls][L].append(op)
    idx = 0
    for cls, Ls in by_class.items():
        lines.append(f"  subgraph cluster_class{cls} {{")
        lines.append(f'    label="class {cls}";')
        for j, (L, ops) in enumerate(Ls.items()):
            lnode = f"L{cls}_{j}"
            lines.append(f'    {lnode} [shape=box, label="{L}"];')
            for op in ops:
                idx += 1
                lines.append(f'    a{idx} [tooltip="{op}"];')
                lines.append(f"    {lnode} -- a{idx};")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _report_orbit(args, code, aut, out):
    """Class histogram of the automorphism group of every equivalent code."""
    orb = code_orbit(code, entry_limit=args.entry_limit)
    groups = classify_automorphisms(code, aut)
    rows = []
    for i, tau in enumerate(orb):
        other = transform_code(code, tau)
        counts = Counter()
        for cls, ops in groups.items():
            for op in ops:
                counts[logical_action(conjugate_automorphism(tau, op), other).cls] += 1
        rows.append([i + 1, str(tau)] + [counts.get(c, 0) for c in groups])
    out.write(_csv(["index", "tau"] + [f"class{c}" for c in groups], rows))
    return EXIT_OK


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="autopt", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats=("json", "md", "csv"), default="json"):
        sp.add_argument("--code", required=True, help="builtin name or path to a code file")
        sp.add_argument("--format", choices=formats, default=default)
        sp.add_argument("--node-limit", type=int, default=autgroup.NODE_LIMIT)
        sp.add_argument("--entry-limit", type=int, default=autgroup.ENTRY_LIMIT)
        sp.add_argument("--workers", type=int, default=0,
                        help="worker processes (default: AUTOPT_THREADS or 1)")
        sp.add_argument("--allow-partial", action="store_true",
                        help="report an upper bound instead of failing on a node budget overrun")
        sp.add_argument("-o", "--output", help="write to this file instead of stdout")

    def metric(sp):
        sp.add_argument("--metric", type=int, choices=(1, 2), default=1)
        sp.add_argument("--swap-weight", type=int, default=None,
                        help="SWAP coefficient (default 7 for metric 1, 0 for metric 2)")
        sp.add_argument("--no-cross-check", action="store_true",
                        help="skip the brute-force oracle for n <= 5")

    common(sub.add_parser("aut", help="automorphism group"))
    common(sub.add_parser("classes", help="automorphisms per conjugacy class"))
    sp = sub.add_parser("orbit", help="equivalent codes and the orbit-stabiliser identity")
    common(sp)
    sp.add_argument("--list", action="store_true", help="include every witness tau")
    sp = sub.add_parser("optimize", help="cheapest circuit for one class")
    common(sp)
    metric(sp)
    sp.add_argument("--class", dest="cls", type=int, required=True)
    sp.add_argument("--level", choices=("fixed", "basis", "full"), default="full",
                    help="fixed: no basis change or equivalence; basis: basis change only")
    sp.add_argument("--target", help="target L as rows of bits, e.g. 1100,0100,0110,1111")
    sp = sub.add_parser("table", help="cheapest circuit for every class")
    common(sp)
    metric(sp)
    sp.add_argument("--include-identity", action="store_true")
    sp = sub.add_parser("verify", help="re-check an emitted JSON report")
    sp.add_argument("report")
    sp.add_argument("-o", "--output")
    sp = sub.add_parser("report", help="class groupings as CSV or DOT")
    common(sp, formats=("csv", "dot"), default="csv")
    sp.add_argument("--orbit", action="store_true",
                    help="class counts for every equivalent code instead")
    sub.add_parser("list", help="list builtin codes")
    return p


COMMANDS = {
    "aut": cmd_aut,
    "classes": cmd_classes,
    "orbit": cmd_orbit,
    "optimize": cmd_optimize,
    "table": cmd_table,
    "verify": cmd_verify,
    "report": cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        for name in FIXTURES:
            c = builtin(name)
            print(f"{name}\t{c.label}")
        return EXIT_OK
    out = io.StringIO()
    try:
        status = COMMANDS[args.command](args, out)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, CodeError, OpError, OptimizeError, GroupError, NotAnAutomorphism,
            KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = out.getvalue()
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
