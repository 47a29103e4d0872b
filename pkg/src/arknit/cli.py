"""Command line: ``arknit analyze``, ``arknit mesh`` and ``arknit hom``.

Exit codes: 0 success, 1 input error, 2 knitting budget exhausted (partial
output still written), 3 a requested check or verification failed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .ar import classify, knit, verify_graph
from .documents import build_report, load_algebra, parse_complex, to_dot
from .homotopy import hom_space
from .mesh import CertificateNotFound, check_identities, dynkin_tree, format_value, positivity_certificate, propagate

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_BUDGET = 2
EXIT_CHECK = 3

# every parse and validation error in the package derives from ValueError
INPUT_ERRORS = (ValueError, OSError)


def _fail(msg: str) -> int:
    print(f"error: {' '.join(str(msg).split())}", file=sys.stderr)
    return EXIT_INPUT


def parse_window(text: str) -> tuple[int, int]:
    parts = [p for p in text.split(",") if p.strip()]
    try:
        vals = [int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad window {text!r}") from None
    if len(vals) == 1 and vals[0] >= 0:
        return -vals[0], vals[0]
    if len(vals) == 2 and vals[0] <= vals[1]:
        return vals[0], vals[1]
    raise argparse.ArgumentTypeError(f"bad window {text!r}; use W or LO,HI")


def cmd_analyze(args: argparse.Namespace) -> int:
    try:
        A = load_algebra(args.algebra)
    except INPUT_ERRORS as exc:
        return _fail(exc)
    g = knit(A, budget=args.budget, window=args.window)
    verdict = classify(g, A)
    reports = None if args.no_verify else verify_graph(g)
    doc = build_report(g, verdict, reports, args.budget)

    emits = args.emit or ["json"]
    out = Path(args.out) if args.out else None
    for kind in emits:
        text = to_dot(g) if kind == "dot" else doc.to_json() + "\n"
        if out is None:
            sys.stdout.write(text)
            continue
        target = out if len(emits) == 1 else out.with_suffix("." + kind)
        target.write_text(text)
        print(f"wrote {target}", file=sys.stderr)

    print(f"verdict: {verdict.label()}", file=sys.stderr)
    if verdict.note:
        print(f"note: {verdict.note}", file=sys.stderr)
    if not g.complete:
        print(f"budget of {args.budget} steps exhausted; partial results written", file=sys.stderr)
        return EXIT_BUDGET
    if reports is not None and not all(r.ok for r in reports.values()):
        bad = sorted(r for r, rep in reports.items() if not rep.ok)
        print(f"verification failed for representatives {bad}", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def _parse_init(text: str, n: int) -> Optional[list[int]]:
    if text == "symbolic":
        return None
    try:
        vals = [int(x) for x in text.split(",")]
    except ValueError:
        raise ValueError(f"initial row {text!r} is not a comma separated list of integers") from None
    if len(vals) != n:
        raise ValueError(f"initial row has {len(vals)} entries, the tree has {n} vertices")
    return vals


def cmd_mesh(args: argparse.Namespace) -> int:
    try:
        tree = dynkin_tree(args.tree)
        init = _parse_init(args.init, tree.n)
    except ValueError as exc:
        return _fail(exc)
    if args.rows < 1:
        return _fail("--rows must be at least 1")
    if args.certify_positivity and init is None:
        return _fail("--certify-positivity needs an integer initial row (--init a,b,...)")

    mode = "symbolic" if init is None else "integer"
    win = propagate(tree, init, steps=args.rows - 1, mode=mode)
    print(f"{tree.name}, {mode} mode")
    for note in tree.notes:
        print(f"note: {note}")
    if not tree.arrows:
        print("single vertex: no meshes")
    print(win.format())

    ok = True
    if args.check_identities:
        report = check_identities(tree)
        if not report.results:
            print("no identities recorded for this tree")
        for res in report.results:
            tag = "cited" if res.identity.cited else "extra"
            status = "PASS" if res.holds else "FAIL"
            print(f"{status} [{tag}] {res.text}   computed: {res.computed}")
            ok &= res.holds
    if args.certify_positivity:
        if any(v <= 0 for v in init):
            return _fail("positivity certificates need a positive initial row")
        try:
            col, vertex, value = positivity_certificate(tree, init, budget=args.budget)
        except CertificateNotFound as exc:
            print(f"no certificate: {exc}")
            ok = False
        else:
            row = propagate(tree, init, steps=col, mode="integer").columns[col]
            print(f"witness: column j+{col}, vertex {vertex}, value {value}")
            print(f"column j+{col}: " + ", ".join(format_value(v, False) for v in row))
    return EXIT_OK if ok else EXIT_CHECK


def cmd_hom(args: argparse.Namespace) -> int:
    try:
        A = load_algebra(args.algebra)
        X = parse_complex(A, args.x)
        Y = parse_complex(A, args.y)
    except INPUT_ERRORS as exc:
        return _fail(exc)
    H = hom_space(X, Y)
    print(f"chain maps: {H.chain_dim}")
    print(f"null-homotopic: {H.null_dim}")
    print(f"Hom_K: {H.dim}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="arknit", description="AR quivers of derived categories of bound quiver algebras over F_p")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="knit the AR quiver of an algebra and classify it")
    a.add_argument("algebra", help="algebra JSON document")
    a.add_argument("--budget", type=int, default=200, help="maximum number of AR triangles to construct")
    a.add_argument("--window", type=parse_window, default=(-4, 4), help="shift window: W or LO,HI (default 4)")
    a.add_argument("--emit", action="append", choices=["dot", "json"], help="output format, may be repeated")
    a.add_argument("--out", help="output file; with several --emit values the suffix is replaced per format")
    a.add_argument("--no-verify", action="store_true", help="skip the per-triangle axiom verification")
    a.set_defaults(func=cmd_analyze)

    m = sub.add_parser("mesh", help="propagate additive functions on Z[T]")
    m.add_argument("--tree", required=True, help="A<n>, D<n>, E6, E7 or E8")
    m.add_argument("--rows", type=int, default=8, help="number of columns to print")
    m.add_argument("--init", default="symbolic", help="'symbolic' or a comma separated integer row")
    m.add_argument("--check-identities", action="store_true")
    m.add_argument("--certify-positivity", action="store_true")
    m.add_argument("--budget", type=int, default=200, help="column budget for the positivity search")
    m.set_defaults(func=cmd_mesh)

    h = sub.add_parser("hom", help="dimensions of chain maps, null-homotopic maps and Hom in K^b(proj)")
    h.add_argument("algebra")
    h.add_argument("x", help="complex document for the source")
    h.add_argument("y", help="complex document for the target")
    h.set_defaults(func=cmd_hom)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
