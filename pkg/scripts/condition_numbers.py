"""Condition numbers of the 5-dimensional rules with negative weights.

    python scripts/condition_numbers.py [--degrees 1 3 ... 15]

Covers CC-Smolyak, Smolyak on the reduced CC family (prior and weight
criteria) and the negative reduced rule.  Writes results/condition_numbers.csv.
"""

import argparse
from pathlib import Path

from nestquad.cubature import condition_number
from nestquad.experiments import UNIT, build_rule, reduced_cc_family, smolyak_level
from nestquad.io import table_csv
from nestquad.quadrature import clenshaw_curtis_rule
from nestquad.reduce1d import WEIGHT, nested_family
from nestquad.smolyak import smolyak_rule


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--degrees", type=int, nargs="+", default=list(range(1, 16, 2)))
    ap.add_argument("--negative-max", type=int, default=9, help="largest degree for the negative rule")
    args = ap.parse_args()
    d = 5
    # degree 15 needs level-8 (129-node) members
    prior_family = reduced_cc_family(UNIT, 129)
    weight_family = nested_family(clenshaw_curtis_rule(UNIT, 129), WEIGHT)
    rows = []
    for K in args.degrees:
        rules = {"smolyak_cc": build_rule("smolyak_cc", d, K),
                 "smolyak_reduced_prior": smolyak_rule(prior_family, smolyak_level(K, d), d),
                 "smolyak_reduced_weight": smolyak_rule(weight_family, smolyak_level(K, d), d)}
        if K <= args.negative_max:
            rules["negative"] = build_rule("negative", d, K)
        for name, r in rules.items():
            rows.append({"method": name, "degree": K, "nodes": len(r), "kappa": condition_number(r)})
            print(f"{name:24s} K={K:2d} N={len(r):6d} kappa={rows[-1]['kappa']:.4g}")
    out = Path(__file__).resolve().parents[1] / "results" / "condition_numbers.csv"
    out.parent.mkdir(exist_ok=True)
    out.write_text(table_csv(rows, {"dimension": d}))
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
