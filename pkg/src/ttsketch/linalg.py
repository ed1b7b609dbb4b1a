"""Thin wrappers over LAPACK factorizations with fixed sign conventions.

The decompositions themselves are delegated to numpy; what this module
adds is determinism (each factor's sign ambiguity is resolved the same
way everywhere) and the small variants the decomposition sweeps need:
rank-truncated SVD, a row-orthonormal RQ, and a relative-threshold
numerical rank.
"""

import numpy as np


def _fix_svd_signs(u, vt):
    # Largest-magnitude entry of every left singular vector made nonnegative.
    for j in range(u.shape[1]):
        col = u[:, j]
        i = np.argmax(np.abs(col))
        if col[i] < 0:
            u[:, j] = -col
            vt[j, :] = -vt[j, :]
    return u, vt


def svd(a):
    """Thin SVD a = u @ diag(s) @ vt with deterministic signs."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError("svd expects a matrix")
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    u, vt = _fix_svd_signs(u, vt)
    return u, s, vt


def truncated_svd(a, rank):
    """Leading `rank` singular triples (fewer only if the matrix is smaller).

    Also returns the discarded energy, i.e. the sum of the squared
    singular values that were cut off.
    """
    if rank < 1:
        raise ValueError("target rank must be positive")
    u, s, vt = svd(a)
    k = min(int(rank), s.shape[0])
    discarded = float(np.sum(s[k:] ** 2))
    return u[:, :k], s[:k], vt[:k, :], discarded


def qr(a):
    """Thin QR with nonnegative diagonal of r."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError("qr expects a matrix")
    q, r = np.linalg.qr(a)
    neg = np.diag(r) < 0
    if np.any(neg):
        q[:, neg] = -q[:, neg]
        r[neg, :] = -r[neg, :]
    return q, r


def rq_row_orthonormal(a):
    """Factor a = r @ q where q has orthonormal rows.

    Computed through the QR of the transpose; q has min(a.shape) rows.
    """
    qt, rt = qr(np.asarray(a, dtype=np.float64).T)
    return rt.T, qt.T


def numerical_rank(s, rel_tol):
    """Number of singular values above rel_tol times the largest one."""
    s = np.asarray(s)
    if rel_tol < 0:
        raise ValueError("relative tolerance must be nonnegative")
    if s.size == 0 or s[0] <= 0.0:
        return 0
    return int(np.count_nonzero(s > rel_tol * s[0]))
