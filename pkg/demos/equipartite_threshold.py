"""Smallest number of parts m for which K_{m(n)} has a distinguishing partition."""
import argparse

from distpart.oracle import ellingham_schroeder_f, exists_distinguishing
from distpart.partition import MultipartiteShape, format_partition


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-vertices", type=int, default=12)
    args = ap.parse_args()
    for n in range(2, args.max_vertices // 2 + 1):
        first = None
        for m in range(1, args.max_vertices // n + 1):
            res = exists_distinguishing(MultipartiteShape((n,) * m), args.max_vertices)
            if res.exists:
                first = (m, res)
                break
        if first is None:
            print(f"n={n}: none up to {args.max_vertices} vertices (f={ellingham_schroeder_f(n)})")
            continue
        m, res = first
        print(f"n={n}: first m={m}, f={ellingham_schroeder_f(n)}, nodes={res.nodes}")
        print("  " + format_partition(res.witness).strip().replace("\n", "\n  "))


if __name__ == "__main__":
    main()
