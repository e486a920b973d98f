"""Certified constructions next to the exhaustive optimum where the search finishes."""
import argparse

from distpart.construct import build_delta, build_m2_2_chain
from distpart.errors import BudgetExceeded
from distpart.oracle import max_n2


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--budget", type=int, default=200_000)
    args = ap.parse_args()
    rows = [("m2-2 chain", m1, 3, 2, build_m2_2_chain) for m1 in (5, 6)]
    rows += [("delta", m1, 2, 1, build_delta) for m1 in (6, 7, 8)]
    print(f"{'family':<11} {'m1':>3} {'n1':>3} {'m2':>3} {'built':>6} {'optimum':>8}")
    for name, m1, n1, m2, build in rows:
        rep = build(m1) if build is build_m2_2_chain else build(m1, n1, m2)
        try:
            best = max_n2(m1, n1, m2, budget=args.budget).n2
        except BudgetExceeded:
            best = "?"
        print(f"{name:<11} {m1:>3} {n1:>3} {m2:>3} {str(rep.n2):>6} {str(best):>8}")


if __name__ == "__main__":
    main()
