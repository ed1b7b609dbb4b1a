"""Tensor-train representation and the operations that keep it usable.

A train over shape (n_1, ..., n_d), d >= 2, stores cores
W_1 (n_1 x r_1), W_i (r_{i-1} x n_i x r_i), W_d (r_{d-1} x n_d); the
boundary cores are genuinely order 2, no dummy modes.  Evaluation
contracts neighbouring cores over the rank edges, left to right.

Orthogonality is tracked explicitly: "left" means cores 1..d-1 have
orthonormal columns when unfolded (row modes {1,2}); "right" means cores
2..d have orthonormal rows when unfolded (row mode {1}).  In either state
the whole train's norm is the norm of the single non-orthogonal boundary
core, which is what tt_norm exploits.
"""

import numpy as np

from .linalg import qr, rq_row_orthonormal, truncated_svd
from .tensor import check_dense_size, check_shape, element_count


class TTTensor:
    """Train of cores; `ortho` is None, "left" or "right"."""

    __slots__ = ("cores", "ortho")

    def __init__(self, cores, ortho=None):
        cores = [np.asarray(c, dtype=np.float64) for c in cores]
        if len(cores) < 2:
            raise ValueError("a tensor train needs at least two cores")
        if cores[0].ndim != 2 or cores[-1].ndim != 2:
            raise ValueError("boundary cores must be matrices")
        for c in cores[1:-1]:
            if c.ndim != 3:
                raise ValueError("interior cores must be order 3")
        for i in range(len(cores) - 1):
            left = cores[i].shape[-1]
            right = cores[i + 1].shape[0]
            if left != right:
                raise ValueError(
                    f"rank mismatch between cores {i} and {i + 1}: "
                    f"{left} vs {right}"
                )
        if ortho not in (None, "left", "right"):
            raise ValueError(f"unknown orthogonality state {ortho!r}")
        self.cores = cores
        self.ortho = ortho

    @property
    def order(self):
        return len(self.cores)

    @property
    def shape(self):
        d = self.order
        dims = [self.cores[0].shape[0]]
        dims += [c.shape[1] for c in self.cores[1:-1]]
        dims.append(self.cores[-1].shape[1])
        return tuple(dims)

    @property
    def ranks(self):
        return tuple(c.shape[-1] for c in self.cores[:-1])

    def copy(self):
        return TTTensor([c.copy() for c in self.cores], ortho=self.ortho)

    def __repr__(self):
        return f"TTTensor(shape={self.shape}, ranks={self.ranks}, ortho={self.ortho})"


def clip_ranks(shape, ranks):
    """Clip requested ranks to the dimension products on both sides.

    `ranks` may be a single int, applied to every edge.  Edge i (between
    modes i and i+1, 0-based) can never usefully exceed the element count
    of either side, so r_i = min(request, prod(left), prod(right)).
    """
    shape = check_shape(shape)
    d = len(shape)
    if d < 2:
        raise ValueError("rank clipping needs order >= 2")
    if np.isscalar(ranks):
        ranks = [int(ranks)] * (d - 1)
    else:
        ranks = [int(r) for r in ranks]
    if len(ranks) != d - 1:
        raise ValueError(f"expected {d - 1} ranks, got {len(ranks)}")
    if any(r < 1 for r in ranks):
        raise ValueError("ranks must be positive")
    out = []
    left = 1
    for i in range(d - 1):
        left *= shape[i]
        right = element_count(shape[i + 1:])
        out.append(min(ranks[i], left, right))
    return tuple(out)


def zero_tt(shape):
    """All-zero train with every rank equal to one."""
    shape = check_shape(shape)
    if len(shape) < 2:
        raise ValueError("a tensor train needs order >= 2")
    cores = [np.zeros((shape[0], 1))]
    for n in shape[1:-1]:
        cores.append(np.zeros((1, n, 1)))
    cores.append(np.zeros((1, shape[-1])))
    return TTTensor(cores)


def tt_evaluate(t):
    """Contract all cores into the dense tensor the train represents."""
    shape = t.shape
    check_dense_size(shape)
    out = t.cores[0]
    for core in t.cores[1:-1]:
        r_in, n, r_out = core.shape
        out = out.reshape(-1, r_in) @ core.reshape(r_in, n * r_out)
        out = out.reshape(-1, r_out)
    out = out @ t.cores[-1]
    return out.reshape(shape)


def left_unfold(core):
    """Row modes {1,2}: (r_in*n, r_out) for interior cores, identity for W_1."""
    if core.ndim == 2:
        return core
    r_in, n, r_out = core.shape
    return core.reshape(r_in * n, r_out)


def right_unfold(core):
    """Row mode {1}: (r_in, n*r_out) for interior cores, identity for W_d."""
    if core.ndim == 2:
        return core
    r_in, n, r_out = core.shape
    return core.reshape(r_in, n * r_out)


def _refold_left(mat, core_shape):
    if len(core_shape) == 2:
        return mat
    r_in, n, _ = core_shape
    return mat.reshape(r_in, n, mat.shape[1])


def _refold_right(mat, core_shape):
    if len(core_shape) == 2:
        return mat
    _, n, r_out = core_shape
    return mat.reshape(mat.shape[0], n, r_out)


def orthogonalize_left(t):
    """Equal train whose cores 1..d-1 have orthonormal columns."""
    cores = [c.copy() for c in t.cores]
    d = len(cores)
    for i in range(d - 1):
        mat = left_unfold(cores[i])
        q, r = qr(mat)
        cores[i] = _refold_left(q, cores[i].shape[:-1] + (q.shape[1],))
        nxt = right_unfold(cores[i + 1])
        cores[i + 1] = _refold_right(r @ nxt, (r.shape[0],) + cores[i + 1].shape[1:])
    return TTTensor(cores, ortho="left")


def orthogonalize_right(t):
    """Equal train whose cores 2..d have orthonormal rows."""
    cores = [c.copy() for c in t.cores]
    d = len(cores)
    for i in range(d - 1, 0, -1):
        mat = right_unfold(cores[i])
        r, q = rq_row_orthonormal(mat)
        cores[i] = _refold_right(q, (q.shape[0],) + cores[i].shape[1:])
        prev = left_unfold(cores[i - 1])
        cores[i - 1] = _refold_left(prev @ r, cores[i - 1].shape[:-1] + (r.shape[1],))
    return TTTensor(cores, ortho="right")


def tt_norm(t):
    """Frobenius norm of the represented tensor, computed in TT form."""
    if t.ortho == "left":
        return float(np.linalg.norm(t.cores[-1]))
    if t.ortho == "right":
        return float(np.linalg.norm(t.cores[0]))
    return tt_norm(orthogonalize_right(t))


def tt_round(t, target_ranks):
    """Truncate a train to the target ranks.

    Right-orthogonalizes first, then runs one left-to-right sweep of
    rank-truncated SVDs, so each local cut is taken against an
    orthonormal environment.  The result is left-orthogonal with ranks
    min(target, input rank) per edge.
    """
    target = clip_ranks(t.shape, target_ranks)
    work = orthogonalize_right(t)
    cores = work.cores
    d = len(cores)
    for i in range(d - 1):
        mat = left_unfold(cores[i])
        u, s, vt, _ = truncated_svd(mat, target[i])
        cores[i] = _refold_left(u, cores[i].shape[:-1] + (u.shape[1],))
        carry = s[:, None] * vt
        nxt = right_unfold(cores[i + 1])
        cores[i + 1] = _refold_right(carry @ nxt, (carry.shape[0],) + cores[i + 1].shape[1:])
    return TTTensor(cores, ortho="left")
