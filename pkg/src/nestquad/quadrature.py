"""Baseline 1D rules: Gauss (Golub-Welsch), Clenshaw-Curtis and weights from nodes."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from numpy.polynomial import chebyshev as C

from .distributions import Distribution, standard_moments, symmetry_center

PROVENANCES = ("gauss", "clenshaw_curtis", "vandermonde_solve", "reduced")

DEGREE_RTOL = 1e-8
DEGREE_ATOL = 1e-10


class IllConditionedWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """A 1D rule stored in the distribution's standardized coordinates.

    ``std_nodes`` are strictly increasing; physical nodes are available as
    :attr:`nodes`.
    """

    std_nodes: np.ndarray
    weights: np.ndarray
    degree: int
    distribution: Distribution
    provenance: str = "vandermonde_solve"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        u = np.asarray(self.std_nodes, dtype=float).reshape(-1)
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if u.shape != w.shape:
            raise ValueError("nodes and weights differ in length")
        if u.size == 0:
            raise ValueError("empty rule")
        if np.any(np.diff(u) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        u.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "std_nodes", u)
        object.__setattr__(self, "weights", w)

    @property
    def nodes(self) -> np.ndarray:
        return self.distribution.to_physical(self.std_nodes)

    def __len__(self) -> int:
        return self.std_nodes.size

    @property
    def positive(self) -> bool:
        return bool(np.all(self.weights > 0))

    def integrate(self, f) -> float:
        """Apply the rule to a vectorized callable of physical coordinates."""
        return float(np.dot(self.weights, f(self.nodes)))

    def __repr__(self) -> str:
        return (f"QuadratureRule(n={len(self)}, degree={self.degree}, "
                f"{self.distribution}, {self.provenance})")


# -- Gauss ------------------------------------------------------------------

def _recurrence(dist: Distribution, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of the Jacobi matrix in standardized coordinates."""
    k = np.arange(n, dtype=float)
    if dist.kind == "normal":
        return np.zeros(n), np.sqrt(k[1:])
    al, be = dist.b - 1.0, dist.a - 1.0
    ab = al + be
    diag = np.empty(n)
    diag[0] = (be - al) / (ab + 2.0)
    if n > 1:
        kk = k[1:]
        diag[1:] = (be * be - al * al) / ((2 * kk + ab) * (2 * kk + ab + 2.0))
    off = np.empty(max(n - 1, 0))
    if n > 1:
        off[0] = 4.0 * (1 + al) * (1 + be) / ((2.0 + ab) ** 2 * (3.0 + ab))
        if n > 2:
            kk = k[2:]
            off[1:] = (4 * kk * (kk + al) * (kk + be) * (kk + ab)
                       / ((2 * kk + ab) ** 2 * (2 * kk + ab + 1) * (2 * kk + ab - 1)))
        off = np.sqrt(off)
    return diag, off


def _symmetrize(u: np.ndarray, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    u = 0.5 * (u - u[::-1])
    w = 0.5 * (w + w[::-1])
    return u, w


def gauss_rule(dist: Distribution, n: int) -> QuadratureRule:
    """N-node Gauss rule of degree 2N-1 via the symmetric tridiagonal eigenproblem."""
    if n < 1:
        raise ValueError("number of nodes must be >= 1")
    diag, off = _recurrence(dist, n)
    try:
        u, vecs = scipy.linalg.eigh_tridiagonal(diag, off)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise RuntimeError(f"Golub-Welsch eigensolve failed for n={n}: {exc}") from exc
    w = vecs[0] ** 2
    w = w / w.sum()
    order = np.argsort(u)
    u, w = u[order], w[order]
    if dist.symmetric:
        u, w = _symmetrize(u, w)
    return QuadratureRule(u, w, 2 * n - 1, dist, "gauss")


# -- Clenshaw-Curtis -----------------------------------------------------------

def chebyshev_extrema(n: int) -> np.ndarray:
    """Chebyshev extrema on [-1, 1], ascending and exactly mirror-symmetric."""
    if n == 1:
        return np.zeros(1)
    u = -np.cos(np.pi * np.arange(n) / (n - 1))
    u = 0.5 * (u - u[::-1])
    return u


def clenshaw_curtis_rule(dist: Distribution, n: int) -> QuadratureRule:
    """Chebyshev-extrema nodes on the support with weights fitted to ``dist``.

    For non-uniform distributions the weights may be negative.
    """
    if n < 1:
        raise ValueError("number of nodes must be >= 1")
    if not dist.bounded:
        raise ValueError("Clenshaw-Curtis rules need a bounded support")
    u = chebyshev_extrema(n)
    w = _solve_weights(dist, u, max_nodes=None)
    degree = n - 1
    if dist.symmetric:
        w = 0.5 * (w + w[::-1])
        # odd node count: the next odd moment vanishes by symmetry
        degree += n % 2
    return QuadratureRule(u, w, degree, dist, "clenshaw_curtis")


# -- weights from nodes -----------------------------------------------------------

def modified_moments(dist: Distribution, jmax: int) -> np.ndarray:
    """``E[T_j(u)]`` for ``j = 0..jmax`` (Chebyshev polynomials of the standardized variable).

    Evaluated with a Gauss rule that is exact for these degrees, avoiding the
    cancellation of expanding Chebyshev polynomials in monomials.
    """
    return _shifted_chebyshev_moments(dist, 0.0, 1.0, jmax)


def _solve_weights(dist, u, max_nodes=64):
    n = u.size
    if max_nodes is not None and n > max_nodes:
        raise ValueError(f"{n} nodes exceeds the conditioning guard ({max_nodes}); "
                         "pass max_nodes=None to override")
    if np.unique(u).size != n:
        raise np.linalg.LinAlgError("duplicate nodes make the Vandermonde system singular")
    # map to [-1, 1] so the Chebyshev basis is well scaled even for normal dists
    lo, hi = u.min(), u.max()
    if dist.bounded:
        lo, hi = min(lo, -1.0), max(hi, 1.0)
    mid = 0.5 * (lo + hi)
    rad = 0.5 * (hi - lo) if hi > lo else 1.0
    v = (u - mid) / rad
    A = C.chebvander(v, n - 1).T
    rhs = _shifted_chebyshev_moments(dist, mid, rad, n - 1)
    cond = np.linalg.cond(A)
    if cond > 1e12:
        warnings.warn(f"Vandermonde system condition estimate {cond:.2e}", IllConditionedWarning,
                      stacklevel=3)
    w = np.linalg.solve(A, rhs)
    resid = np.max(np.abs(A @ w - rhs))
    if resid > 1e-9:
        warnings.warn(f"Vandermonde residual {resid:.2e}", IllConditionedWarning, stacklevel=3)
    return w


def _shifted_chebyshev_moments(dist, mid, rad, jmax):
    g = gauss_rule(dist, jmax // 2 + 2)
    v = (g.std_nodes - mid) / rad
    return C.chebvander(v, jmax).T @ g.weights


def weights_from_nodes(dist: Distribution, nodes, max_nodes: int | None = 64) -> np.ndarray:
    """Unique weights making the given physical nodes a rule of degree N-1."""
    x = np.asarray(nodes, dtype=float).reshape(-1)
    order = np.argsort(x, kind="stable")
    w_sorted = _solve_weights(dist, dist.to_standard(x[order]), max_nodes=max_nodes)
    w = np.empty_like(w_sorted)
    w[order] = w_sorted
    return w


def rule_from_nodes(dist: Distribution, nodes, max_nodes: int | None = 64) -> QuadratureRule:
    u = np.sort(dist.to_standard(np.asarray(nodes, dtype=float).reshape(-1)))
    w = _solve_weights(dist, u, max_nodes=max_nodes)
    return QuadratureRule(u, w, u.size - 1, dist, "vandermonde_solve")


# -- degree audit ---------------------------------------------------------------

def moment_errors(rule: QuadratureRule, jmax: int) -> np.ndarray:
    """Per-order pass flags for standardized monomials ``u^j``, ``j = 0..jmax``."""
    mu = standard_moments(rule.distribution, jmax)
    u, w = rule.std_nodes, rule.weights
    ok = np.empty(jmax + 1, dtype=bool)
    p = np.ones_like(u)
    for j in range(jmax + 1):
        approx = math.fsum(w * p)
        exact = mu[j]
        if abs(exact) < 1e-2:
            ok[j] = abs(approx - exact) <= DEGREE_ATOL
        else:
            ok[j] = abs(approx - exact) <= DEGREE_RTOL * abs(exact)
        p = p * u
    return ok


def verify_degree(rule: QuadratureRule, jmax: int | None = None) -> int:
    """Largest K with all standardized monomials up to order K integrated exactly.

    Returns -1 when even the constant is wrong.  Monomials are checked up to
    ``declared degree + 2`` unless ``jmax`` is given.
    """
    if jmax is None:
        jmax = max(rule.degree, 0) + 2
    ok = moment_errors(rule, jmax)
    bad = np.flatnonzero(~ok)
    return int(bad[0]) - 1 if bad.size else jmax


def is_mirror_symmetric(rule: QuadratureRule, tol: float = 1e-12) -> bool:
    """Nodes and weights mirror-invariant about the distribution center."""
    if symmetry_center(rule.distribution) is None:
        return False
    u, w = rule.std_nodes, rule.weights
    if np.max(np.abs(u + u[::-1])) > tol:
        return False
    return bool(np.max(np.abs(w - w[::-1])) <= tol * max(1.0, np.max(np.abs(w))))
