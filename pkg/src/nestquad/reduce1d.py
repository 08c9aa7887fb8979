"""Caratheodory node removal for 1D rules and nested positive families."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial import chebyshev as C

from .distributions import pdf, symmetry_center
from .linalg import KernelError, one_null_vector
from .quadrature import QuadratureRule, is_mirror_symmetric

log = logging.getLogger(__name__)

ZERO_SNAP = 1e-14
CRITERIA = ("prior", "weight", "explicit_choice")


class ReductionError(RuntimeError):
    """A reduction step could not remove the required number of nodes."""


@dataclass(frozen=True)
class ReductionCriterion:
    """How to pick between the two Caratheodory branches.

    ``prior`` removes the node with lower density, ``weight`` keeps the branch
    whose surviving weights have the smallest spread, ``explicit_choice``
    always takes ``branch`` (1 or 2).  Ties are broken by removing the node
    farther from the distribution center, then by branch 1.
    """

    kind: str = "prior"
    tie_break: str = "farthest_from_center"
    branch: int = 1

    def __post_init__(self):
        if self.kind not in CRITERIA:
            raise ValueError(f"unknown criterion {self.kind!r}")
        if self.branch not in (1, 2):
            raise ValueError("branch must be 1 or 2")


PRIOR = ReductionCriterion("prior")
WEIGHT = ReductionCriterion("weight")


@dataclass(frozen=True, eq=False)
class NestedFamily:
    """Rules ordered largest to smallest; each node set contains the next."""

    rules: tuple

    def __post_init__(self):
        sizes = [len(r) for r in self.rules]
        if any(b >= a for a, b in zip(sizes, sizes[1:])):
            raise ValueError("family sizes must strictly decrease")
        dists = {r.distribution for r in self.rules}
        if len(dists) > 1:
            raise ValueError("family members must share one distribution")

    @property
    def distribution(self):
        return self.rules[0].distribution

    @property
    def sizes(self) -> list[int]:
        return [len(r) for r in self.rules]

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def __getitem__(self, i):
        return self.rules[i]

    def by_size(self, n: int) -> QuadratureRule:
        for r in self.rules:
            if len(r) == n:
                return r
        raise KeyError(n)

    def is_nested(self) -> bool:
        for big, small in zip(self.rules, self.rules[1:]):
            if not np.all(np.isin(small.std_nodes, big.std_nodes)):
                return False
        return True


# -- null vectors -----------------------------------------------------------------

def _unit_interval(u: np.ndarray) -> np.ndarray:
    lo, hi = u.min(), u.max()
    if hi == lo:
        return np.zeros_like(u)
    return (2.0 * u - (lo + hi)) / (hi - lo)


def null_vector_asymmetric(nodes: Sequence[float]) -> np.ndarray:
    """Null vector of the Vandermonde matrix with its last row removed.

    The kernel is computed in a Chebyshev basis on the nodes' own range; it
    spans the same polynomial space as the monomial rows, so the vector is
    the same up to scaling.  Returned with unit 2-norm.
    """
    u = np.asarray(nodes, dtype=float).reshape(-1)
    n = u.size
    if n < 2:
        raise ValueError("need at least two nodes")
    if np.unique(u).size != n:
        raise ValueError("nodes must be distinct")
    A = C.chebvander(_unit_interval(u), n - 2).T
    c = one_null_vector(A)
    return _orient(c)


def symmetric_half_matrix(nodes: Sequence[float], center: float = 0.0) -> np.ndarray:
    """The collapsed matrix whose kernel mirrors into a symmetric null vector.

    Rows are the even-order basis polynomials up to order N-3; each column
    sums a mirrored node pair (and the middle node for odd N contributes its
    own column).  Uses monomials of the centered nodes, i.e. the textbook form.
    """
    h, has_mid = _half_nodes(nodes, center)
    n = 2 * h.size + has_mid
    powers = np.arange(0, n - 2, 2)
    cols = [2.0 * h[k] ** powers for k in range(h.size)]
    if has_mid:
        cols.append((powers == 0).astype(float))
    return np.column_stack(cols) if cols else np.zeros((powers.size, 0))


def _half_nodes(nodes, center):
    u = np.sort(np.asarray(nodes, dtype=float).reshape(-1)) - center
    n = u.size
    width = max(u[-1] - u[0], 1e-300)
    if np.max(np.abs(u + u[::-1])) > 1e-12 * width:
        raise ValueError("node set is not mirror-symmetric about the center")
    half = -u[: n // 2]
    return half, n % 2 == 1


def null_vector_symmetric(nodes: Sequence[float], center: float = 0.0) -> np.ndarray:
    """Mirror-symmetric null vector of the Vandermonde matrix minus its last two rows.

    A kernel vector of the collapsed half matrix is computed (Chebyshev basis,
    nodes scaled to [-1, 1]) and mirrored, so ``c[k] == c[N-1-k]`` holds
    exactly.  Entries follow the ascending node order.
    """
    h, has_mid = _half_nodes(nodes, center)
    n = 2 * h.size + has_mid
    if n < 2:
        raise ValueError("need at least two nodes")
    r = h.max() if h.size else 1.0
    v = h / r
    orders = np.arange(0, n - 2, 2)
    if orders.size:
        T = C.chebvander(v, max(orders[-1], 0))[:, orders].T
        cols = [2.0 * T]
        if has_mid:
            cols.append(C.chebvander(np.zeros(1), max(orders[-1], 0))[:, orders].T)
        A = np.hstack(cols)
    else:
        A = np.zeros((0, h.size + has_mid))
    try:
        half = one_null_vector(A)
    except KernelError as exc:
        raise KernelError(f"symmetric kernel empty for N={n}: {exc}") from exc
    half = _orient(half)
    c = np.empty(n)
    m = h.size
    c[:m] = half[:m]
    c[n - m:] = half[:m][::-1]
    if has_mid:
        c[m] = half[m]
    return c


def _orient(c: np.ndarray) -> np.ndarray:
    # deterministic sign: largest-magnitude entry positive
    k = int(np.argmax(np.abs(c)))
    return c if c[k] > 0 else -c


# -- the reduction step ---------------------------------------------------------------

def caratheodory_branches(w: np.ndarray, c: np.ndarray):
    """Both Caratheodory updates of ``w`` along ``c`` and ``-c``.

    Returns ``(w1, zeros1), (w2, zeros2)`` where ``zeros`` are the indices
    driven to zero.  A branch is ``None`` when ``c`` has no entry of the
    required sign.
    """
    out = []
    for sgn in (1.0, -1.0):
        cs = sgn * c
        pos = cs > 0
        if not np.any(pos):
            out.append(None)
            continue
        ratios = np.full(w.shape, np.inf)
        ratios[pos] = w[pos] / cs[pos]
        alpha = ratios.min()
        wn = w - alpha * cs
        # relative to each entry's own weight: tiny tail weights (Hermite) are not noise
        snap = np.abs(wn) <= ZERO_SNAP * np.abs(w)
        snap |= ratios <= alpha * (1 + 1e-12)
        wn[snap] = 0.0
        out.append((wn, np.flatnonzero(snap)))
    return out[0], out[1]


def select_branch(b1, b2, criterion: ReductionCriterion, rule) -> int:
    """Return 1 or 2.  ``b1``/``b2`` are ``(weights, removed_indices)`` pairs.

    ``rule`` supplies node positions and the distribution (a QuadratureRule,
    or anything with ``removal_pdf`` and ``removal_distance`` methods).
    """
    if b2 is None:
        return 1
    if b1 is None:
        return 2
    if criterion.kind == "explicit_choice":
        return criterion.branch
    if criterion.kind == "weight":
        s1 = _spread(b1[0])
        s2 = _spread(b2[0])
        if abs(s1 - s2) > 1e-12 * max(s1, s2, 1e-300):
            return 1 if s1 < s2 else 2
        return 1
    p1, p2 = _removal_pdf(rule, b1[1]), _removal_pdf(rule, b2[1])
    if abs(p1 - p2) > 1e-12 * max(p1, p2, 1e-300):
        return 1 if p1 < p2 else 2
    d1, d2 = _removal_distance(rule, b1[1]), _removal_distance(rule, b2[1])
    if d1 != d2:
        return 1 if d1 > d2 else 2
    return 1


def _spread(w):
    alive = w[w != 0]
    return float(alive.max() - alive.min()) if alive.size else 0.0


def _removal_pdf(rule, idx):
    if hasattr(rule, "removal_pdf"):
        return rule.removal_pdf(idx)
    return float(np.min(pdf(rule.distribution, rule.nodes[idx])))


def _removal_distance(rule, idx):
    if hasattr(rule, "removal_distance"):
        return rule.removal_distance(idx)
    return float(np.max(np.abs(rule.std_nodes[idx] - _center_std(rule))))


def _center_std(rule):
    dist = rule.distribution
    if symmetry_center(dist) is not None:
        return 0.0
    # skewed shapes: distance from the mean
    from .distributions import standard_moments
    return float(standard_moments(dist, 1)[1])


def reduction_step(rule: QuadratureRule, criterion: ReductionCriterion = PRIOR,
                   symmetric: Optional[bool] = None) -> QuadratureRule:
    """Remove one node (or a mirrored pair) keeping all weights nonnegative.

    ``symmetric=None`` detects symmetry; ``False`` forces the one-node path.
    """
    w = np.array(rule.weights, dtype=float)
    n = w.size
    if np.any(w <= 0):
        raise ReductionError("reduction needs strictly positive weights")
    sym = is_mirror_symmetric(rule) if symmetric is None else symmetric
    if sym and not is_mirror_symmetric(rule):
        raise ReductionError("symmetric path requested for an asymmetric rule")
    if sym and n < 3:
        sym = False
    if n < 2:
        raise ReductionError("a single-node rule cannot be reduced")

    if sym:
        c = null_vector_symmetric(rule.std_nodes)
        need = 2
    else:
        c = null_vector_asymmetric(rule.std_nodes)
        need = 1
    b1, b2 = caratheodory_branches(w, c)
    z1 = b1[1].size if b1 else 0
    z2 = b2[1].size if b2 else 0
    if z1 == need and z2 != need:
        pick = 1
    elif z2 == need and z1 != need:
        pick = 2
    elif z1 < need and z2 < need:
        raise ReductionError(f"degenerate null vector: branches zero {z1} and {z2} weights, need {need}")
    else:
        pick = select_branch(b1, b2, criterion, rule)
    wn, removed = (b1, b2)[pick - 1]
    keep = wn != 0.0
    if sym:
        # mirrored entries come from identical arithmetic; enforce bitwise equality anyway
        wn = 0.5 * (wn + wn[::-1])
    degree = n - need - 1
    if sym and degree % 2 == 0:
        # the next (odd) moment vanishes by symmetry
        degree += 1
    new = QuadratureRule(rule.std_nodes[keep], wn[keep], degree, rule.distribution,
                         "reduced", {"removed": rule.nodes[removed].tolist()})
    log.debug("reduced %d -> %d nodes, removed %s", n, len(new), rule.nodes[removed])
    return new


def nested_family(rule: QuadratureRule, criterion: ReductionCriterion = PRIOR,
                  symmetric: Optional[bool] = None, min_size: int = 1) -> NestedFamily:
    """Reduce repeatedly down to ``min_size`` nodes.

    A symmetric rule of even length ends with a one-node step from the last
    mirrored pair, which gives up symmetry only for the final member.
    """
    rules = [rule]
    cur = rule
    while len(cur) > min_size:
        cur = reduction_step(cur, criterion, symmetric)
        rules.append(cur)
    return NestedFamily(tuple(rules))
