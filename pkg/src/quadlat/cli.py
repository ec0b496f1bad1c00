"""Command line front end.

    quadlat family --max 200
    quadlat construct --target e8 --k 0 --format json
    quadlat verify --target d4 --q-max 100

Exit codes: 0 success, 1 domain failure (or a verdict that does not match
the requested target), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import constructions as C
from .exactnum import InvalidQ
from .latanalysis import SearchExhausted
from .report import (ReportDocument, admissible_to_json, approx_fields,
                     basis_to_json, matrix_to_json, report_to_json, to_csv)
from .zmodule import gram

EXIT_OK, EXIT_DOMAIN = 0, 1

FAMILY_COLUMNS = ["q", "j", "factorization"]
CONSTRUCT_COLUMNS = ["target", "q", "j", "k", "degree", "gram", "normalized_gram", "basis"]
VERIFY_COLUMNS = ["target", "q", "j", "k", "verdict", "index", "disc", "min_norm",
                  "center_density", "determinant", "kissing", "gram", "witness"]


def _nonneg_int(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {s}")
    return v


def _q_arg(s: str) -> int:
    v = int(s)
    if v < 3:
        raise argparse.ArgumentTypeError(f"q must be at least 3, got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quadlat",
                                description="D4, D8 and E8 lattices from biquadratic "
                                            "and triquadratic fields, with exact certificates.")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "plain"], default="plain")
    common.add_argument("--approx", action="store_true",
                        help="add floating-point density and embedding columns")

    f = sub.add_parser("family", parents=[common], help="list admissible q with their j")
    f.add_argument("--max", dest="q_max", type=_nonneg_int, required=True, metavar="Q")

    for name in ("construct", "verify"):
        s = sub.add_parser(name, parents=[common],
                           help="build a basis and its Gram matrix" if name == "construct"
                           else "construct and certify")
        s.add_argument("--target", choices=sorted(C.TARGET_ALIASES), required=True)
        g = s.add_mutually_exclusive_group(required=True)
        g.add_argument("--q", type=_q_arg)
        g.add_argument("--k", type=_nonneg_int)
        if name == "verify":
            g.add_argument("--q-max", type=_nonneg_int)
            s.add_argument("--jobs", type=int, default=1, help="worker processes for --q-max")
            s.add_argument("--max-nodes", type=int, default=2_000_000,
                           help="node budget for the isometry search")
        s.add_argument("--search-u", action="store_true",
                       help="find U by isometry search for d8/e8 outside the explicit family")
    return p


def _inputs(args) -> dict:
    keys = ("q_max", "target", "q", "k", "search_u", "approx")
    vals = {k: getattr(args, k, None) for k in keys}
    return {k: v for k, v in vals.items() if v is not None and v is not False}


def _run_family(args) -> tuple[list[dict], bool]:
    rows = [admissible_to_json(aq) for aq in C.family_scan(args.q_max)]
    return rows, True


def _run_construct(args) -> tuple[list[dict], bool]:
    basis, aq, member = C.construct(args.target, q=args.q, k=args.k, search_u=args.search_u)
    target = C.TARGET_ALIASES[args.target]
    G = gram(basis)
    row = {
        "target": target,
        "q": aq.q,
        "j": aq.j,
        "k": member.k if member else None,
        "degree": basis.degree,
        "basis": basis_to_json(basis),
        "gram": matrix_to_json(G),
        "normalized_gram": matrix_to_json(C.normalized_gram(basis))
        if target in ("D8", "E8") else None,
    }
    if args.approx:
        row.update(approx_fields(basis))
    return [row], True


def _run_verify(args) -> tuple[list[dict], bool]:
    if args.q_max is not None:
        reports = C.verify_many(args.target, args.q_max, search_u=args.search_u,
                                jobs=args.jobs, max_nodes=args.max_nodes)
    else:
        reports = [C.verify(args.target, q=args.q, k=args.k, search_u=args.search_u,
                            max_nodes=args.max_nodes)]
    rows = [report_to_json(r, approx=args.approx) for r in reports]
    return rows, all(r.ok for r in reports)


def _plain(command: str, rows: list[dict]) -> str:
    out = []
    if command == "family":
        for r in rows:
            fac = " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in r["factorization"])
            out.append(f"q={r['q']:<6} j={r['j']:<6} factors={fac}")
        if not rows:
            out.append("(no admissible q)")
    elif command == "construct":
        for r in rows:
            out.append(f"{r['target']}  q={r['q']} j={r['j']}"
                       + (f" k={r['k']}" if r["k"] is not None else ""))
            out.append("basis (coordinates over 1, √2, √q, √2q, i, i√2, i√q, i√2q):")
            for e in r["basis"]["elements"]:
                out.append("  [" + ", ".join(e) + "]")
            out.append("Gram matrix:")
            out.extend("  " + " ".join(f"{v:>6}" for v in row) for row in r["gram"])
            if r["normalized_gram"]:
                out.append("Gram matrix / 2q:")
                out.extend("  " + " ".join(f"{v:>4}" for v in row) for row in r["normalized_gram"])
    else:
        for r in rows:
            fields = [f"target={r['target']}", f"q={r['q']}", f"j={r['j']}"]
            if r["k"] is not None:
                fields.append(f"k={r['k']}")
            fields += [f"verdict={r['verdict']}", f"min_tr={r['min_norm']}"]
            if r["index"] is not None:
                fields += [f"index={r['index']}", f"disc={r['disc']}"]
            fields += [f"density={r['center_density']['value']}", f"kissing={r['kissing']}"]
            if r["witness"]:
                fields.append(f"scale={r['witness']['scale']}")
            if "approx_center_density" in r:
                fields.append(f"approx_density={r['approx_center_density']:.6g}")
            out.append(" ".join(fields))
            out.extend(f"  note: {n}" for n in r["notes"])
    return "\n".join(out) + "\n"


def _emit(doc: ReportDocument, fmt: str, stream=None):
    stream = stream or sys.stdout
    if fmt == "json":
        stream.write(doc.to_json())
    elif fmt == "csv":
        cols = {"family": FAMILY_COLUMNS, "construct": CONSTRUCT_COLUMNS,
                "verify": VERIFY_COLUMNS}[doc.command]
        if doc.results and "approx_center_density" in doc.results[0]:
            cols = cols + ["approx_center_density"]
        stream.write(to_csv(doc.results, cols))
    else:
        stream.write(_plain(doc.command, doc.results))


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    doc = ReportDocument(command=args.command, inputs=_inputs(args))
    run = {"family": _run_family, "construct": _run_construct, "verify": _run_verify}
    try:
        doc.results, ok = run[args.command](args)
    except C.UsageError as e:
        parser.error(str(e))
    except (InvalidQ, C.ScaleMismatch, SearchExhausted, ValueError) as e:
        doc.error = {"type": type(e).__name__, "message": str(e)}
        if isinstance(e, InvalidQ):
            doc.error["reason"] = e.reason
            doc.error["q"] = e.q
        if args.format == "json":
            sys.stdout.write(doc.to_json())
        else:
            sys.stderr.write("error: " + json.dumps(doc.error, sort_keys=True) + "\n")
        return EXIT_DOMAIN
    _emit(doc, args.format)
    return EXIT_OK if ok else EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
