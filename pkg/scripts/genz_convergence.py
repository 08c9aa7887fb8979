"""Mean Genz errors of every method on a degree ladder.

    python scripts/genz_convergence.py [--dim 5] [--runs 100] [--degrees 3 5 7 9]

Writes results/genz_convergence.csv (one row per family, method and degree).
"""

import argparse
from pathlib import Path

from nestquad import genz
from nestquad.experiments import METHODS, ladder
from nestquad.io import table_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=5)
    ap.add_argument("--runs", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--degrees", type=int, nargs="+", default=[3, 5, 7, 9])
    args = ap.parse_args()
    rules = list(ladder(METHODS, args.dim, args.degrees))
    rows = []
    for fam in genz.FAMILIES:
        for row in genz.convergence_study(rules, fam, args.dim, args.runs, args.seed):
            method, K = row["rule"].rsplit("_K", 1)
            rows.append({"family": fam, "name": genz.NAMES[fam], "method": method, "degree": int(K),
                         "N_nodes": row["nodes"], "mean_error": row["mean_error"]})
            print(f"f{fam} {method:16s} K={K:>2s} N={row['nodes']:5d} err={row['mean_error']:.3e}")
    out = Path(__file__).resolve().parents[1] / "results" / "genz_convergence.csv"
    out.parent.mkdir(exist_ok=True)
    out.write_text(table_csv(rows, vars(args)))
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
