"""Rule ladders and count tables used by the CLI and the scripts."""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

from .cubature import (condition_number, dim_poly, negative_bound, reduce_step_negative,
                       reduce_step_symmetric, tensor_rule)
from .distributions import Distribution, uniform
from .quadrature import clenshaw_curtis_rule, gauss_rule
from .reduce1d import PRIOR, NestedFamily, ReductionCriterion, ReductionError, nested_family
from .smolyak import level_source, smolyak_rule

METHODS = ("tensor", "smolyak_cc", "smolyak_reduced", "positive", "negative")
UNIT = uniform(0.0, 1.0)
REDUCED_START = 65


@lru_cache(maxsize=None)
def reduced_cc_family(dist: Distribution = UNIT, n: int = REDUCED_START) -> NestedFamily:
    """Symmetric nested family reduced from an ``n``-node Clenshaw-Curtis rule."""
    return nested_family(clenshaw_curtis_rule(dist, n))


def gauss_start(K: int, odd: bool = False) -> int:
    """Gauss nodes per axis for a degree-K tensor start (optionally rounded up to odd)."""
    m = (K + 2) // 2
    if odd and m % 2 == 0:
        m += 1
    return m


def smolyak_level(K: int, d: int) -> int:
    """Smallest Smolyak parameter whose guaranteed degree reaches K."""
    return d + max(K, 0) // 2


def build_rule(method: str, d: int, K: int, dist: Distribution = UNIT,
               criterion: ReductionCriterion = PRIOR, odd_start: bool = False):
    """A degree-K rule of the named method on ``d`` copies of ``dist``."""
    if method == "tensor":
        return tensor_rule([gauss_rule(dist, gauss_start(K))] * d)
    if method == "smolyak_cc":
        return smolyak_rule(level_source("cc", dist), smolyak_level(K, d), d)
    if method == "smolyak_reduced":
        return smolyak_rule(reduced_cc_family(dist), smolyak_level(K, d), d)
    start = tensor_rule([gauss_rule(dist, gauss_start(K, odd_start))] * d)
    if method == "positive":
        try:
            return reduce_step_symmetric(start, K, criterion)
        except ReductionError:
            # nothing removable: the tensor start is already minimal at this degree
            return start
    if method == "negative":
        return reduce_step_negative(start, K)
    raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")


def ladder(methods: Iterable[str], d: int, degrees: Sequence[int], dist: Distribution = UNIT):
    """``(name, rule)`` pairs, one per method and degree."""
    for m in methods:
        for K in degrees:
            yield f"{m}_K{K}", build_rule(m, d, K, dist)


def count_row(d: int, K: int, modes: Sequence[str] = ("smolyak", "positive", "negative"),
              odd_start: bool = False, criterion: ReductionCriterion = PRIOR) -> dict:
    """One Table-1 style row: dimension, degree, dim P(K, d) and node counts."""
    row = {"d": d, "K": K, "dim_P": dim_poly(K, d)}
    if "smolyak" in modes:
        row["N_smolyak"] = len(build_rule("smolyak_cc", d, K))
    if "positive" in modes:
        row["N_positive"] = len(build_rule("positive", d, K, criterion=criterion, odd_start=odd_start))
    if "negative" in modes:
        row["N_negative"] = len(build_rule("negative", d, K, odd_start=odd_start))
        row["negative_bound"] = negative_bound(K, d)
    return row


def condition_series(d: int, degrees: Sequence[int], method: str = "smolyak_cc") -> list[dict]:
    rows = []
    for K in degrees:
        r = build_rule(method, d, K)
        rows.append({"method": method, "d": d, "K": K, "nodes": len(r), "kappa": condition_number(r)})
    return rows
