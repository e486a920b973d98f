"""Identity-tree counts and the fitted growth constant."""
import argparse

from distpart.trees import count_asymmetric_trees, estimate_growth


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-edges", type=int, default=40)
    args = ap.parse_args()
    table = count_asymmetric_trees(args.max_edges, limit=args.max_edges)
    for i, c in enumerate(table.series("unrooted")):
        print(i, c)
    fit = estimate_growth(table)
    print(f"beta_hat={fit.beta_hat:.4f} window={fit.window} monotone={fit.ratios_monotone}")


if __name__ == "__main__":
    main()
