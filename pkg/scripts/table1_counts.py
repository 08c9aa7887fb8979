"""Node counts of the d=5,7,10 rules next to the published table.

    python scripts/table1_counts.py [--quick] [--odd-start]

Writes results/table1_counts.csv.  The full run (d=10, K=7 negative)
takes a few minutes; ``--quick`` stops at d=5.
"""

import argparse
from pathlib import Path

from nestquad.experiments import count_row
from nestquad.io import table_csv
from nestquad.reduce1d import PRIOR, ReductionCriterion

PUBLISHED = {  # (d, K): (smolyak, positive, negative)
    (5, 5): (61, 113, 43), (5, 7): (241, 544, 384), (5, 9): (805, 689, 325),
    (5, 11): (2473, None, 2016), (5, 13): (7245, None, 1607),
    (7, 5): (None, None, 99), (7, 7): (None, None, 325), (7, 9): (None, None, 901),
    (10, 5): (None, None, 201), (10, 7): (None, None, 1361),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--odd-start", action="store_true", help="round Gauss starts up to odd sizes")
    ap.add_argument("--branch2", action="store_true", help="explicit second Caratheodory branch")
    args = ap.parse_args()
    crit = ReductionCriterion("explicit_choice", branch=2) if args.branch2 else PRIOR
    rows = []
    for (d, K), pub in PUBLISHED.items():
        if args.quick and d > 5:
            continue
        modes = ["negative"]
        if d == 5:
            modes = ["smolyak", "negative"] + (["positive"] if K <= 9 else [])
        row = count_row(d, K, modes, odd_start=args.odd_start, criterion=crit)
        row.update(pub_smolyak=pub[0], pub_positive=pub[1], pub_negative=pub[2])
        rows.append(row)
        print(row, flush=True)
    out = Path(__file__).resolve().parents[1] / "results" / "table1_counts.csv"
    out.parent.mkdir(exist_ok=True)
    out.write_text(table_csv(rows, {"odd_start": args.odd_start, "branch2": args.branch2}))
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
