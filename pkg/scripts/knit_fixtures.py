"""Knit every bundled fixture algebra and print a one-line summary per algebra."""

import argparse
import time

from arknit import fixtures
from arknit.ar import classify, knit, serre_check, subadditivity_check, verify_graph


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--budget", type=int, default=200)
    ap.add_argument("--window", type=int, default=4)
    ap.add_argument("--dual-budget", type=int, default=8, help="budget for k[x]/x^2, which never closes")
    ap.add_argument("--verify", action="store_true", help="also run the axiom, Serre and subadditivity checks")
    args = ap.parse_args()

    algebras = [
        ("F5", fixtures.field(5), args.budget),
        ("kA2", fixtures.linear_a(2), args.budget),
        ("kA3", fixtures.linear_a(3), args.budget),
        ("kD4", fixtures.d4(), args.budget),
        ("k[x]/x^2 over F3", fixtures.dual_numbers(3), args.dual_budget),
    ]
    for name, A, budget in algebras:
        t0 = time.perf_counter()
        g = knit(A, budget=budget, window=(-args.window, args.window))
        v = classify(g, A)
        line = f"{name:18s} reps={len(g.reps):3d} complete={g.complete!s:5s} verdict={v.label()}"
        line += f" sup l_p={v.sup_l_p} periodicity={sorted(set(g.periodicity.values()))}"
        if args.verify:
            bad = sum(not r.ok for r in verify_graph(g).values())
            serre = len(serre_check(g)) if g.complete else "skipped"
            sub = sum(m > s for _, m, s, _ in subadditivity_check(g))
            line += f" verify_failures={bad} serre_violations={serre} subadditivity_violations={sub}"
        print(f"{line} ({time.perf_counter() - t0:.2f}s)")


if __name__ == "__main__":
    main()
