"""Smolyak sparse-grid cubature from 1D rule sequences."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial
from itertools import product
from typing import Callable, Sequence, Union

import numpy as np
from scipy.spatial import cKDTree

from .cubature import CubatureRule, condition_number, tensor_rule, verify_degree
from .distributions import Distribution
from .quadrature import QuadratureRule, clenshaw_curtis_rule, gauss_rule
from .reduce1d import NestedFamily

__all__ = ["CubatureRule", "LevelSequence", "smolyak_rule", "smolyak_degree_check",
           "condition_number", "level_source", "MERGE_TOL", "ZERO_WEIGHT"]

MERGE_TOL = 1e-12
ZERO_WEIGHT = 1e-14


@dataclass(frozen=True)
class LevelSequence:
    """Rule sizes ``N_1 = 1`` and ``N_k = 2^(k-1) + 1``."""

    def size(self, k: int) -> int:
        if k < 1:
            raise ValueError("levels start at 1")
        return 1 if k == 1 else 2 ** (k - 1) + 1

    def sizes(self, kmax: int) -> list[int]:
        return [self.size(k) for k in range(1, kmax + 1)]


LEVELS = LevelSequence()

Source = Union[NestedFamily, Callable[[int], QuadratureRule]]


def level_source(kind: str, dist: Distribution) -> Callable[[int], QuadratureRule]:
    """``'cc'`` or ``'gauss'`` rule generator for one axis."""
    if kind == "cc":
        return partial(clenshaw_curtis_rule, dist)
    if kind == "gauss":
        return partial(gauss_rule, dist)
    raise ValueError(f"unknown rule kind {kind!r}")


def _level_rule(src: Source, k: int) -> QuadratureRule:
    n = LEVELS.size(k)
    if isinstance(src, NestedFamily):
        try:
            return src.by_size(n)
        except KeyError:
            raise ValueError(f"family {src.sizes} lacks a {n}-node member needed at level {k}") from None
    return src(n)


def _is_nested(rules: list) -> bool:
    return all(np.all(np.isin(a.std_nodes, b.std_nodes)) for a, b in zip(rules, rules[1:]))


def _merge(nodes: np.ndarray, weights: np.ndarray, exact: bool):
    uniq, inv = np.unique(nodes, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    w = np.bincount(inv, weights=weights, minlength=uniq.shape[0])
    if not exact and uniq.shape[0] > 1:
        pairs = cKDTree(uniq).query_pairs(MERGE_TOL, output_type="ndarray")
        if pairs.size:
            parent = np.arange(uniq.shape[0])

            def find(i):
                while parent[i] != i:
                    parent[i] = parent[parent[i]]
                    i = parent[i]
                return i

            for i, j in pairs:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
            roots = np.array([find(i) for i in range(uniq.shape[0])])
            keep, group = np.unique(roots, return_inverse=True)
            w = np.bincount(group, weights=w, minlength=keep.size)
            uniq = uniq[keep]
    return uniq, w


def smolyak_rule(sources: Union[Source, Sequence[Source]], K: int, d: int) -> CubatureRule:
    """Smolyak combination of tensor rules with ``K-d+1 <= |alpha| <= K``.

    ``sources`` is one source for all axes or a list of ``d``: a
    :class:`NestedFamily` (members looked up by size) or a callable returning
    the ``n``-node rule.  Coincident nodes are merged; merged nodes with
    vanishing weight are dropped and counted in ``meta['dropped']``.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if K < d:
        raise ValueError(f"Smolyak level K={K} must be at least d={d}")
    if isinstance(sources, (list, tuple)):
        if len(sources) != d:
            raise ValueError("need one source per axis")
        srcs = list(sources)
    else:
        srcs = [sources] * d
    top = K - d + 1
    axis_rules = [[_level_rule(s, k) for k in range(1, top + 1)] for s in srcs]
    exact = all(_is_nested(r) for r in axis_rules)

    chunks_u, chunks_w = [], []
    terms = 0
    for alpha in product(range(1, top + 1), repeat=d):
        s = sum(alpha)
        if s < K - d + 1 or s > K:
            continue
        coef = (-1) ** (K - s) * math.comb(d - 1, K - s)
        t = tensor_rule([axis_rules[i][a - 1] for i, a in enumerate(alpha)])
        chunks_u.append(t.std_nodes)
        chunks_w.append(coef * t.weights)
        terms += 1
    nodes, w = _merge(np.vstack(chunks_u), np.concatenate(chunks_w), exact)
    small = np.abs(w) <= ZERO_WEIGHT
    dists = tuple(r[0].distribution for r in axis_rules)
    meta = {"K": K, "terms": terms, "dropped": int(small.sum()), "merge": "exact" if exact else "tolerance"}
    declared = _declared_degree(axis_rules, K, d)
    rule = CubatureRule(nodes[~small], w[~small], declared, dists, "smolyak", meta)
    if declared < 0:
        rule = CubatureRule(rule.std_nodes, rule.weights, max(verify_degree(rule, 2 * (K - d) + 3), 0),
                            dists, "smolyak", meta)
    return rule


def _declared_degree(axis_rules, K, d) -> int:
    # each level-k rule of degree >= 2k-1 gives exactness 2(K-d)+1
    ok = all(r.degree >= 2 * k - 1 for rules in axis_rules for k, r in enumerate(rules, start=1))
    return 2 * (K - d) + 1 if ok else -1


def smolyak_degree_check(rule: CubatureRule, K: int, d: int) -> bool:
    target = 2 * (K - d) + 1
    return verify_degree(rule, target) >= target
