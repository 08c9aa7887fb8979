"""Small dense linear-algebra helpers shared by the reduction modules."""

from __future__ import annotations

import numpy as np
import scipy.linalg

RANK_RTOL = 1e-12


class KernelError(RuntimeError):
    """No numerically reliable null vector could be extracted."""


def null_space(A: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal basis of ker(A) as columns, via a full SVD.

    Singular values below ``rtol * smax`` count as zero.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    m, n = A.shape
    if m == 0:
        return np.eye(n)
    _, s, vt = scipy.linalg.svd(A, full_matrices=True, lapack_driver="gesvd")
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > rtol * smax)) if smax > 0 else 0
    return vt[rank:].T.copy()


def rank(A: np.ndarray, rtol: float = RANK_RTOL) -> int:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.size == 0:
        return 0
    s = scipy.linalg.svdvals(A)
    return int(np.sum(s > rtol * s[0])) if s[0] > 0 else 0


def one_null_vector(A: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    """The right singular vector of the smallest singular value of a wide matrix.

    Raises :class:`KernelError` when the matrix has full column rank.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    m, n = A.shape
    if m == 0:
        v = np.zeros(n)
        v[0] = 1.0
        return v
    _, s, vt = scipy.linalg.svd(A, full_matrices=True, lapack_driver="gesvd")
    smax = s[0] if s.size else 0.0
    if n <= m and s[-1] > rtol * smax:
        cond = smax / s[-1] if s[-1] > 0 else np.inf
        raise KernelError(f"matrix {m}x{n} has no kernel (condition estimate {cond:.3e})")
    return vt[-1].copy()
