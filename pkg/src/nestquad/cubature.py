"""Multi-dimensional Caratheodory reduction of cubature rules.

Rules live in standardized per-axis coordinates (see
:mod:`nestquad.distributions`).  Kernels of the generalized Vandermonde
matrix are computed in a tensor Chebyshev basis after scaling the nodes to
``[-1, 1]``; that basis spans the same polynomial space as the monomials, so
the kernels coincide.

Three variants are provided:

* :func:`reduce_step_general` -- one node per null vector, weights kept
  nonnegative, no symmetry.
* :func:`reduce_step_symmetric` -- whole symmetry orbits removed with
  orbit-constant null vectors, weights kept nonnegative.
* :func:`reduce_step_negative` -- the largest orbit in each null vector's
  support is removed regardless of sign, leaving as many small boundary
  orbits as possible.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial import chebyshev as C

from .distributions import pdf, standard_moments
from .linalg import null_space, rank
from .quadrature import DEGREE_ATOL, DEGREE_RTOL, QuadratureRule
from .reduce1d import (PRIOR, ZERO_SNAP, ReductionCriterion, ReductionError, caratheodory_branches,
                       select_branch)

log = logging.getLogger(__name__)

PROVENANCES = ("tensor", "smolyak", "reduced", "symmetric_reduced", "negative_symmetric_reduced")
AUDIT_LIMIT = 20000
AUDIT_SEED = 20140101
SUPPORT_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class CubatureRule:
    """Nodes ``(N, d)`` in standardized coordinates plus weights."""

    std_nodes: np.ndarray
    weights: np.ndarray
    degree: int
    distributions: tuple
    provenance: str = "tensor"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        u = np.atleast_2d(np.asarray(self.std_nodes, dtype=float))
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if u.shape[0] != w.size:
            raise ValueError("nodes and weights differ in length")
        dists = tuple(self.distributions)
        if len(dists) != u.shape[1]:
            raise ValueError("one distribution per axis required")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        u.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "std_nodes", u)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "distributions", dists)

    @property
    def d(self) -> int:
        return self.std_nodes.shape[1]

    @property
    def nodes(self) -> np.ndarray:
        cols = [dist.to_physical(self.std_nodes[:, i]) for i, dist in enumerate(self.distributions)]
        return np.column_stack(cols)

    def __len__(self) -> int:
        return self.weights.size

    @property
    def positive(self) -> bool:
        return bool(np.all(self.weights > 0))

    def integrate(self, f) -> float:
        """Apply the rule to ``f`` taking an ``(N, d)`` array of physical nodes."""
        return float(np.dot(self.weights, f(self.nodes)))

    def node_pdf(self, idx=None) -> np.ndarray:
        x = self.nodes if idx is None else self.nodes[idx]
        out = np.ones(x.shape[0])
        for i, dist in enumerate(self.distributions):
            out *= pdf(dist, x[:, i])
        return out

    def __repr__(self) -> str:
        return f"CubatureRule(N={len(self)}, d={self.d}, degree={self.degree}, {self.provenance})"


# -- combinatorics ---------------------------------------------------------------------

def dim_poly(K: int, d: int) -> int:
    """Dimension of the space of d-variate polynomials of total degree <= K."""
    if K < 0 or d < 0:
        raise ValueError("K and d must be nonnegative")
    return math.comb(K + d, d)


@lru_cache(maxsize=None)
def restricted_partition_count(l: int, d: int) -> int:
    """Partitions of ``l`` into at most ``d`` parts (equivalently parts of size <= d)."""
    if l < 0 or d < 0:
        raise ValueError("arguments must be nonnegative")
    if l == 0:
        return 1
    if d == 0:
        return 0
    total = restricted_partition_count(l, d - 1)
    if l >= d:
        total += restricted_partition_count(l - d, d)
    return total


def cumulative_bound(B: int, d: int) -> int:
    """Number of weakly increasing nonnegative d-tuples with sum <= B."""
    return 1 + sum(restricted_partition_count(l, d) for l in range(1, B + 1))


def _compositions(t: int, d: int):
    # lex-descending: (t,0,..), (t-1,1,..), ...
    if d == 1:
        yield (t,)
        return
    for first in range(t, -1, -1):
        for rest in _compositions(t - first, d - 1):
            yield (first,) + rest


@dataclass(frozen=True, eq=False)
class MultiIndexSet:
    """Exponent vectors of total degree <= K in graded lexicographic order.

    Within a total degree, indices are ordered lexicographically with the first
    coordinate most significant and larger exponents first.
    """

    d: int
    K: int
    indices: np.ndarray = None

    def __post_init__(self):
        if self.indices is None:
            rows = [a for t in range(self.K + 1) for a in _compositions(t, self.d)] if self.d else [()]
            arr = np.array(rows, dtype=int).reshape(len(rows), self.d)
            arr.setflags(write=False)
            object.__setattr__(self, "indices", arr)

    def __len__(self) -> int:
        return self.indices.shape[0]

    def __iter__(self):
        return (tuple(r) for r in self.indices)


def sorted_indices(K: int, d: int, even: bool = False) -> np.ndarray:
    """Weakly increasing exponent vectors of total degree <= K (all entries even if asked)."""
    rows = []
    step = 2 if even else 1
    top = K // step
    for combo in itertools.combinations_with_replacement(range(top + 1), d):
        if sum(combo) <= top:
            rows.append(tuple(step * c for c in combo))
    rows.sort(key=lambda a: (sum(a), tuple(-x for x in reversed(a))))
    return np.array(rows, dtype=int).reshape(len(rows), d)


def even_indices(K: int, d: int) -> np.ndarray:
    """All exponent vectors with even entries and total degree <= K (graded order)."""
    half = MultiIndexSet(d, K // 2).indices
    return 2 * half


# -- basis evaluation -----------------------------------------------------------------

def basis_matrix(v: np.ndarray, indices: np.ndarray, basis: str = "chebyshev") -> np.ndarray:
    """Rows: basis polynomials ``prod_i p_{a_i}(v_i)``; columns: points ``v`` (N, d)."""
    v = np.atleast_2d(v)
    indices = np.atleast_2d(indices)
    top = int(indices.max()) if indices.size else 0
    out = np.ones((indices.shape[0], v.shape[0]))
    for i in range(v.shape[1]):
        if basis == "chebyshev":
            tab = C.chebvander(v[:, i], top)
        else:
            tab = np.vander(v[:, i], top + 1, increasing=True)
        out *= tab[:, indices[:, i]].T
    return out


def generalized_vandermonde(rule: CubatureRule, K: int, basis: str = "monomial") -> np.ndarray:
    """``G[j, k] = m_j(u_k)`` for the graded monomials of degree <= K."""
    return basis_matrix(rule.std_nodes, MultiIndexSet(rule.d, K).indices, basis)


def _scaled_nodes(u: np.ndarray, common: bool) -> np.ndarray:
    if common:
        r = np.max(np.abs(u))
        return u / r if r > 0 else u
    lo, hi = u.min(axis=0), u.max(axis=0)
    span = np.where(hi > lo, hi - lo, 2.0)
    mid = np.where(hi > lo, 0.5 * (lo + hi), lo)
    return 2.0 * (u - mid) / span


# -- tensor rules ---------------------------------------------------------------------

def tensor_rule(rules: Sequence[QuadratureRule]) -> CubatureRule:
    """Product rule; the declared degree is the minimum axis degree."""
    rules = list(rules)
    grids = np.meshgrid(*[r.std_nodes for r in rules], indexing="ij")
    nodes = np.column_stack([g.reshape(-1) for g in grids])
    wg = np.meshgrid(*[r.weights for r in rules], indexing="ij")
    w = np.ones(nodes.shape[0])
    for g in wg:
        w = w * g.reshape(-1)
    return CubatureRule(nodes, w, min(r.degree for r in rules),
                        tuple(r.distribution for r in rules), "tensor")


# -- orbits -------------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class OrbitPartition:
    """Grouping of nodes under sign flips (type 1) and, optionally, permutations (type 2).

    ``reps`` are canonical representatives (absolute values, sorted when
    permutations are included), ``orbit_id[k]`` maps node ``k`` to its orbit
    and ``sizes`` holds the full orbit sizes implied by each representative.
    """

    reps: np.ndarray
    orbit_id: np.ndarray
    sizes: np.ndarray
    counts: np.ndarray
    on_type1_plane: np.ndarray
    on_type2_plane: np.ndarray
    permutations: bool = True

    def __len__(self) -> int:
        return self.reps.shape[0]

    @property
    def complete(self) -> bool:
        return bool(np.all(self.sizes == self.counts))


def orbit_size(rep, permutations: bool = True) -> int:
    rep = np.abs(np.asarray(rep, dtype=float))
    nnz = int(np.count_nonzero(rep))
    size = 2**nnz
    if permutations:
        _, mult = np.unique(rep, return_counts=True)
        size *= math.factorial(rep.size) // math.prod(math.factorial(int(m)) for m in mult)
    return size


def orbit_partition(nodes: np.ndarray, permutations: bool = True) -> OrbitPartition:
    """Canonical grouping decided on exact stored values."""
    u = np.atleast_2d(np.asarray(nodes, dtype=float))
    key = np.abs(u) + 0.0  # folds -0.0 into 0.0
    if permutations:
        key = np.sort(key, axis=1)
    reps, first, inv, counts = np.unique(key, axis=0, return_index=True, return_inverse=True,
                                         return_counts=True)
    # order orbits by first appearance for reproducibility
    order = np.argsort(first, kind="stable")
    remap = np.empty_like(order)
    remap[order] = np.arange(order.size)
    reps = reps[order]
    counts = counts[order]
    inv = remap[inv.reshape(-1)]
    sizes = np.array([orbit_size(r, permutations) for r in reps], dtype=int)
    t1 = np.any(reps == 0.0, axis=1)
    if reps.shape[1] > 1:
        s = np.sort(reps, axis=1)
        t2 = np.any(np.diff(s, axis=1) == 0.0, axis=1)
    else:
        t2 = np.zeros(reps.shape[0], dtype=bool)
    return OrbitPartition(reps, inv, sizes, counts, t1, t2, permutations)


def _distinct_permutations(values: tuple) -> np.ndarray:
    values = tuple(values)
    uniq = sorted(set(values))
    counts = [values.count(x) for x in uniq]
    d = len(values)
    out = []
    cur = [0.0] * d

    def rec(pos):
        if pos == d:
            out.append(tuple(cur))
            return
        for j, x in enumerate(uniq):
            if counts[j]:
                counts[j] -= 1
                cur[pos] = x
                rec(pos + 1)
                counts[j] += 1

    rec(0)
    return np.array(out, dtype=float).reshape(len(out), d)


def collapsed_matrix_type1(reps: np.ndarray, K: int, basis: str = "monomial",
                           average: bool = False) -> np.ndarray:
    """Collapsed matrix for sign-flip symmetry.

    Rows are the even-exponent monomials of degree <= K (there are
    ``binom(K//2 + d, d)`` of them); column ``j`` is the monomial evaluated at
    ``|rep_j|`` times the orbit multiplicity ``2^nnz`` (or without that factor
    when ``average``).  A kernel vector expands to a sign-symmetric kernel
    vector of the full matrix.
    """
    reps = np.abs(np.atleast_2d(reps))
    idx = even_indices(K, reps.shape[1])
    G = basis_matrix(reps, idx, basis)
    if not average:
        G = G * (2.0 ** np.count_nonzero(reps, axis=1))[None, :]
    return G


def collapsed_matrix_type12(reps: np.ndarray, K: int, basis: str = "monomial",
                            average: bool = False, even: bool = True) -> np.ndarray:
    """Collapsed matrix for sign-flip plus permutation symmetry.

    Rows are the weakly increasing (even, unless ``even=False``) exponent
    vectors of degree <= K; column ``j`` sums the monomial over every member
    of orbit ``j`` (divided by the orbit size when ``average``).
    """
    reps = np.abs(np.atleast_2d(reps))
    d = reps.shape[1]
    idx = sorted_indices(K, d, even=even)
    G = np.empty((idx.shape[0], reps.shape[0]))
    for j, rep in enumerate(reps):
        perms = _distinct_permutations(tuple(rep))
        vals = basis_matrix(perms, idx, basis)  # rows x perms
        if even:
            col = vals.sum(axis=1) * 2.0 ** np.count_nonzero(rep)
        else:
            col = _signed_orbit_sum(perms, idx, basis)
        G[:, j] = col / orbit_size(rep) if average else col
    return G


def _signed_orbit_sum(perms, idx, basis):
    d = perms.shape[1]
    total = np.zeros(idx.shape[0])
    for signs in itertools.product((1.0, -1.0), repeat=d):
        pts = np.unique(perms * np.array(signs), axis=0)
        total += basis_matrix(pts, idx, basis).sum(axis=1)
    # each signed point was visited 2^(#zeros) times
    return total / 2.0 ** np.count_nonzero(perms[0] == 0)


# -- symmetry audit -------------------------------------------------------------------------

def symmetry_type(rule: CubatureRule) -> Optional[str]:
    """``'type12'``, ``'type1'`` or ``None`` from distributions, node orbits and weights."""
    if not all(dist.symmetric for dist in rule.distributions):
        return None
    same = len(set(rule.distributions)) == 1
    for perms, label in ((True, "type12"), (False, "type1")):
        if perms and not same:
            continue
        part = orbit_partition(rule.std_nodes, permutations=perms)
        if part.complete and _orbit_weights(rule.weights, part) is not None:
            return label
    return None


def _orbit_weights(w, part, rtol=1e-12):
    M = len(part)
    lo = np.full(M, np.inf)
    hi = np.full(M, -np.inf)
    np.minimum.at(lo, part.orbit_id, w)
    np.maximum.at(hi, part.orbit_id, w)
    scale = np.maximum(np.abs(lo), np.abs(hi))
    if np.any(hi - lo > rtol * np.maximum(scale, 1e-300)):
        return None
    s = np.zeros(M)
    np.add.at(s, part.orbit_id, w)
    return s / part.counts


# -- the Caratheodory engine ----------------------------------------------------------------------

@dataclass
class _Columns:
    """Column data for one reduction: a node or a whole orbit per column."""

    A: np.ndarray          # rows x cols, kernel defines admissible updates
    w: np.ndarray          # per-node weight carried by each column
    size: np.ndarray       # nodes represented by each column
    dens: np.ndarray       # density at the column's node(s)
    dist: np.ndarray       # distance from the center

    def removal_pdf(self, idx):
        return float(np.min(self.dens[idx]))

    def removal_distance(self, idx):
        return float(np.max(self.dist[idx]))


def _eliminate(vectors: list, pivot_vec: np.ndarray, k: int) -> None:
    for v in vectors:
        if v[k] != 0.0:
            v -= pivot_vec * (v[k] / pivot_vec[k])
            v[k] = 0.0


def _absorb_extra_zeros(vectors: list, extra) -> list:
    """Remove directions touching additional zeroed columns (one vector per column)."""
    for k in extra:
        mags = [abs(v[k]) for v in vectors]
        if not mags or max(mags) == 0.0:
            continue
        p = int(np.argmax(mags))
        piv = vectors.pop(p)
        _eliminate(vectors, piv, k)
    return vectors


def _kernel_vectors(A: np.ndarray) -> list:
    K = null_space(A)
    return [K[:, i].copy() for i in range(K.shape[1])]


def _positive_engine(cols: _Columns, criterion: ReductionCriterion) -> np.ndarray:
    w = cols.w.copy()
    vectors = _kernel_vectors(cols.A)
    steps = 0
    while vectors:
        c = vectors.pop(0)
        cmax = np.max(np.abs(c))
        if cmax == 0.0:
            continue
        c[np.abs(c) <= SUPPORT_RTOL * cmax] = 0.0
        b1, b2 = caratheodory_branches(w, c)
        pick = select_branch(b1, b2, criterion, cols)
        wn, zeroed = (b1, b2)[pick - 1]
        newly = [k for k in zeroed if w[k] != 0.0]
        if not newly:
            continue
        # pivot: the zeroed column with the largest |c|
        k0 = max(newly, key=lambda k: abs(c[k]))
        w = np.where(wn < 0.0, 0.0, wn)
        _eliminate(vectors, c, k0)
        vectors = _absorb_extra_zeros(vectors, [k for k in newly if k != k0])
        steps += 1
    log.debug("positive engine: %d steps, %d columns alive", steps, int(np.count_nonzero(w)))
    return w


def _negative_engine(cols: _Columns) -> np.ndarray:
    w = cols.w.copy()
    vectors = _kernel_vectors(cols.A)
    while vectors:
        c = vectors.pop(0)
        cmax = np.max(np.abs(c))
        if cmax == 0.0:
            continue
        support = np.flatnonzero((np.abs(c) > SUPPORT_RTOL * cmax) & (w != 0.0))
        if support.size == 0:
            continue
        gamma = cols.size[support].max()
        cand = support[cols.size[support] == gamma]
        # among equally large orbits, the smallest perturbation, then the outermost
        ratio = np.abs(w[cand] / c[cand])
        order = np.lexsort((-cols.dist[cand], ratio))
        k0 = int(cand[order[0]])
        alpha = w[k0] / c[k0]
        wn = w - alpha * c
        wn[k0] = 0.0
        small = np.abs(wn) <= ZERO_SNAP * np.abs(w)
        extra = [k for k in np.flatnonzero(small) if w[k] != 0.0 and k != k0]
        wn[small] = 0.0
        w = wn
        _eliminate(vectors, c, k0)
        vectors = _absorb_extra_zeros(vectors, extra)
    return w


# -- the three variants ----------------------------------------------------------------------

def _check_target(rule: CubatureRule, target_degree: Optional[int]) -> int:
    t = rule.degree if target_degree is None else int(target_degree)
    if t < 0:
        raise ValueError("target degree must be nonnegative")
    if t > rule.degree:
        raise ValueError(f"target degree {t} exceeds the rule's degree {rule.degree}")
    return t


def reduce_step_general(rule: CubatureRule, target_degree: Optional[int] = None,
                        criterion: ReductionCriterion = PRIOR) -> CubatureRule:
    """Remove one node per null vector of the degree-``target`` Vandermonde matrix.

    The result has as many nodes as the matrix rank (``dim_poly(target, d)``
    for unisolvent node sets) and nonnegative weights.
    """
    t = _check_target(rule, target_degree)
    if np.any(rule.weights <= 0):
        raise ReductionError("reduction needs strictly positive weights")
    u = rule.std_nodes
    A = basis_matrix(_scaled_nodes(u, common=False), MultiIndexSet(rule.d, t).indices)
    cols = _Columns(A, rule.weights.copy(), np.ones(len(rule), dtype=int), rule.node_pdf(),
                    np.linalg.norm(u, axis=1))
    if A.shape[1] - rank(A) == 0:
        raise ReductionError(f"reduction exhausted: {len(rule)} nodes, Vandermonde rank {A.shape[1]}")
    w = _positive_engine(cols, criterion)
    keep = w > 0
    return CubatureRule(u[keep], w[keep], t, rule.distributions, "reduced",
                        {"parent_size": len(rule)})


def _symmetric_columns(rule: CubatureRule, t: int, sym: str):
    part = orbit_partition(rule.std_nodes, permutations=(sym == "type12"))
    ow = _orbit_weights(rule.weights, part)
    if ow is None or not part.complete:
        raise ReductionError("rule is not orbit-symmetric")
    v = _scaled_nodes(part.reps, common=True)
    if sym == "type12":
        A = collapsed_matrix_type12(v, t, basis="chebyshev", average=True)
    else:
        A = collapsed_matrix_type1(v, t, basis="chebyshev", average=True)
    # per-node weights are the unknowns, so each column carries its orbit size
    A = A * part.sizes[None, :]
    first = np.zeros(len(part), dtype=int)
    first[part.orbit_id[::-1]] = np.arange(len(rule))[::-1]
    dens = rule.node_pdf(first)
    cols = _Columns(A, ow, part.sizes.copy(), dens, np.linalg.norm(part.reps, axis=1))
    return part, cols


def _expand(rule, part, ow, t, provenance, sym):
    w_nodes = ow[part.orbit_id]
    keep = w_nodes != 0.0
    return CubatureRule(rule.std_nodes[keep], w_nodes[keep], t, rule.distributions, provenance,
                        {"parent_size": len(rule), "symmetry": sym,
                         "orbits": int(np.count_nonzero(ow))})


def _resolve_symmetry(rule, symmetry):
    sym = symmetry_type(rule) if symmetry is None else symmetry
    if sym not in ("type12", "type1"):
        raise ReductionError("rule has neither sign-flip nor permutation symmetry")
    return sym


def reduce_step_symmetric(rule: CubatureRule, target_degree: Optional[int] = None,
                          criterion: ReductionCriterion = PRIOR,
                          symmetry: Optional[str] = None) -> CubatureRule:
    """Remove whole orbits with orbit-constant null vectors; weights stay nonnegative."""
    t = _check_target(rule, target_degree)
    if np.any(rule.weights <= 0):
        raise ReductionError("reduction needs strictly positive weights")
    sym = _resolve_symmetry(rule, symmetry)
    part, cols = _symmetric_columns(rule, t, sym)
    if cols.A.shape[1] - rank(cols.A) == 0:
        raise ReductionError(f"reduction exhausted: {len(part)} orbits, collapsed rank "
                             f"{rank(cols.A)}")
    ow = _positive_engine(cols, criterion)
    return _expand(rule, part, ow, t, "symmetric_reduced", sym)


def reduce_step_negative(rule: CubatureRule, target_degree: Optional[int] = None,
                         symmetry: Optional[str] = None) -> CubatureRule:
    """Remove the largest orbit supported by each orbit-constant null vector.

    Weights may turn negative.  When no null vector exists the rule is
    returned unchanged.
    """
    t = _check_target(rule, target_degree)
    sym = _resolve_symmetry(rule, symmetry)
    part, cols = _symmetric_columns(rule, t, sym)
    ow = _negative_engine(cols)
    return _expand(rule, part, ow, t, "negative_symmetric_reduced", sym)


def reduced_family(rule: CubatureRule, mode: str = "symmetric", target_degree: Optional[int] = None,
                   min_degree: int = 0, criterion: ReductionCriterion = PRIOR) -> list:
    """Nested rules of degree target, target-1, ..., min_degree."""
    step = {"positive": lambda r, t: reduce_step_general(r, t, criterion),
            "symmetric": lambda r, t: reduce_step_symmetric(r, t, criterion),
            "negative": lambda r, t: reduce_step_negative(r, t)}[mode]
    t = _check_target(rule, target_degree)
    out = []
    cur = rule
    for deg in range(t, min_degree - 1, -1):
        try:
            cur = step(cur, deg)
        except ReductionError:
            if not out:
                raise
            cur = CubatureRule(cur.std_nodes, cur.weights, deg, cur.distributions, cur.provenance)
        out.append(cur)
    return out


# -- audits -------------------------------------------------------------------------------------

def condition_number(rule) -> float:
    w = np.asarray(rule.weights, dtype=float)
    s = math.fsum(w)
    if s == 0.0:
        raise ZeroDivisionError("weights sum to zero")
    return math.fsum(np.abs(w)) / s


def _audit_indices(d: int, K: int) -> np.ndarray:
    full = dim_poly(K, d)
    if full <= AUDIT_LIMIT:
        return MultiIndexSet(d, K).indices
    rng = np.random.default_rng(AUDIT_SEED)
    # stratify by total degree so every degree is represented
    rows = []
    per = AUDIT_LIMIT // (K + 1)
    for t in range(K + 1):
        layer = math.comb(t + d - 1, d - 1)
        if layer <= per:
            rows.extend(_compositions(t, d))
        else:
            for _ in range(per):
                # random composition via stars and bars without replacement
                bars = np.sort(rng.choice(t + d - 1, size=d - 1, replace=False))
                parts = np.diff(np.concatenate(([-1], bars, [t + d - 1]))) - 1
                rows.append(tuple(int(p) for p in parts))
    return np.array(rows, dtype=int).reshape(len(rows), d)


def monomial_pass(rule: CubatureRule, indices: np.ndarray, chunk: int = 512) -> np.ndarray:
    """Pass flags for standardized monomials ``u^a`` against exact product moments."""
    top = int(indices.max()) if indices.size else 0
    mus = [standard_moments(dist, top) for dist in rule.distributions]
    pows = [np.vander(rule.std_nodes[:, i], top + 1, increasing=True) for i in range(rule.d)]
    ok = np.empty(indices.shape[0], dtype=bool)
    w = rule.weights
    for s in range(0, indices.shape[0], chunk):
        idx = indices[s:s + chunk]
        vals = np.ones((idx.shape[0], len(rule)))
        exact = np.ones(idx.shape[0])
        for i in range(rule.d):
            vals *= pows[i][:, idx[:, i]].T
            exact *= mus[i][idx[:, i]]
        approx = vals @ w
        err = np.abs(approx - exact)
        small = np.abs(exact) < 1e-2
        ok[s:s + chunk] = np.where(small, err <= DEGREE_ATOL, err <= DEGREE_RTOL * np.abs(exact))
    return ok


def verify_degree(rule: CubatureRule, jmax: Optional[int] = None) -> int:
    """Largest K such that every audited monomial of total degree <= K passes."""
    if jmax is None:
        jmax = max(rule.degree, 0) + 2
    idx = _audit_indices(rule.d, jmax)
    ok = monomial_pass(rule, idx)
    deg = idx.sum(axis=1)
    bad = deg[~ok]
    return int(bad.min()) - 1 if bad.size else jmax


def moment_vector(rule: CubatureRule, K: int) -> np.ndarray:
    """Rule applied to every standardized monomial of degree <= K (graded order)."""
    idx = MultiIndexSet(rule.d, K).indices
    return basis_matrix(rule.std_nodes, idx, "monomial") @ rule.weights


def negative_bound(K: int, d: int) -> int:
    """``2^d (1 + sum_{l=1}^{K-1} p_d(l))``, the node bound without plane sharing."""
    return 2**d * cumulative_bound(max(K - 1, 0), d)
