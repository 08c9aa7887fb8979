"""Reduce the 9x9 Clenshaw-Curtis grid to degree 9 with all three variants.

    python scripts/figure3_rules.py

Writes one JSON and one CSV rule file per variant under results/figure3/
and prints node counts, audited degree and condition number.
"""

from pathlib import Path

from nestquad.cubature import (condition_number, reduce_step_general, reduce_step_negative,
                               reduce_step_symmetric, tensor_rule, verify_degree)
from nestquad.distributions import uniform
from nestquad.io import RuleFile
from nestquad.quadrature import clenshaw_curtis_rule


def main():
    out = Path(__file__).resolve().parents[1] / "results" / "figure3"
    out.mkdir(parents=True, exist_ok=True)
    start = tensor_rule([clenshaw_curtis_rule(uniform(), 9)] * 2)
    variants = {"general": reduce_step_general, "symmetric": reduce_step_symmetric,
                "negative": reduce_step_negative}
    for name, step in variants.items():
        rule = step(start, 9)
        meta = {"start": "cc9 x cc9", "variant": name}
        RuleFile(rule, meta).save(out / f"{name}.json")
        RuleFile(rule, meta).save(out / f"{name}.csv")
        print(f"{name:10s} nodes={len(rule):3d} degree={verify_degree(rule, 11)} "
              f"kappa={condition_number(rule):.3f}")


if __name__ == "__main__":
    main()
