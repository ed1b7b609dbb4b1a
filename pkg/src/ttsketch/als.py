"""Alternating least squares for train approximation, half-sweep form.

Starting from randomly drawn, right-orthogonalized cores 2..d, the
left-to-right half sweep solves each core's least-squares problem in
turn while every other core is fixed.  Because the environment of the
active core is kept orthonormal (left neighbours via the QR pushed
ahead of the sweep, right neighbours by the initialization), each local
solve is just a contraction of the target against the fixed cores, and
the objective ||f - x||^2 after an update is ||f||^2 minus the squared
norm of the updated core.

For matrices (d = 2) one half sweep reproduces the sketched range
finder: the first solve multiplies f by the random right core, the QR
of that product fixes the same column space the range finder would
orthonormalize, and the second solve projects f onto it.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import qr, rq_row_orthonormal
from .tensor import check_dense_size, element_count
from .tt import TTTensor, clip_ranks, left_unfold, right_unfold


@dataclass
class AlsConfig:
    """Target ranks and the number of half sweeps to run (default one)."""

    ranks: object
    sweeps: int = 1

    def __post_init__(self):
        if self.sweeps < 1:
            raise ValueError("sweep count must be positive")


def _draw_tail_cores(shape, ranks, rng):
    # Cores 2..d, core j drawn from substream j, then right-orthogonalized
    # among themselves (the leftover triangular factor at core 2 is
    # dropped; only the spanned spaces matter for the sweep).
    d = len(shape)
    cores = [None] * d
    for j in range(2, d):
        cores[j - 1] = rng.substream(j).normals(
            (ranks[j - 2], shape[j - 1], ranks[j - 1])
        )
    cores[d - 1] = rng.substream(d).normals((ranks[d - 2], shape[d - 1]))
    for j in range(d, 2, -1):
        r_, q = rq_row_orthonormal(right_unfold(cores[j - 1]))
        cores[j - 1] = q if j == d else q.reshape(cores[j - 1].shape)
        prev = cores[j - 2]
        cores[j - 2] = (left_unfold(prev) @ r_).reshape(prev.shape)
    _, q = rq_row_orthonormal(right_unfold(cores[1]))
    cores[1] = q if d == 2 else q.reshape(cores[1].shape)
    return cores


def _tail_matrices(shape, cores):
    # tails[j]: the chain of cores j..d as a (prod(n_j..n_d), r_{j-1}) matrix.
    d = len(shape)
    tails = [None] * (d + 1)
    tails[d] = cores[d - 1].T
    for j in range(d - 1, 1, -1):
        w = cores[j - 1]
        folded = np.tensordot(w, tails[j + 1], axes=([2], [1]))
        tails[j] = folded.transpose(1, 2, 0).reshape(-1, w.shape[0])
    return tails


def _sweep_left_to_right(f, tail_cores):
    shape = f.shape
    d = len(shape)
    tails = _tail_matrices(shape, tail_cores)
    f_norm2 = float(np.dot(f.ravel(), f.ravel()))
    objectives = []
    cores = [None] * d
    work = f.reshape(1, -1)
    r_prev = 1
    for i in range(1, d + 1):
        n_i = shape[i - 1]
        if i < d:
            rest = element_count(shape[i:])
            u_mat = work.reshape(r_prev * n_i, rest) @ tails[i + 1]
            objectives.append(max(f_norm2 - float(np.sum(u_mat ** 2)), 0.0))
            q, _ = qr(u_mat)
            cores[i - 1] = q if i == 1 else q.reshape(r_prev, n_i, q.shape[1])
            work = q.T @ work.reshape(r_prev * n_i, rest)
            r_prev = q.shape[1]
        else:
            u_mat = work.reshape(r_prev, n_i)
            objectives.append(max(f_norm2 - float(np.sum(u_mat ** 2)), 0.0))
            cores[i - 1] = u_mat
    return TTTensor(cores, ortho="left"), objectives


def _reverse_cores(cores):
    return [c.T if c.ndim == 2 else c.transpose(2, 1, 0) for c in reversed(cores)]


def als_half_sweep(f, config, rng):
    """Approximate a dense tensor by the configured number of half sweeps.

    Returns the train and the objective values ||f - x||^2 recorded
    after every core update (d per half sweep, non-increasing).  Extra
    sweeps alternate direction by reversing the mode order.  When the
    train rank of f is elementwise at most the target, a single half
    sweep already reaches zero error with probability one.
    """
    f = np.asarray(f, dtype=np.float64)
    shape = f.shape
    if len(shape) < 2:
        raise ValueError("ALS needs order >= 2")
    check_dense_size(shape)
    if not f.any():
        raise ValueError("ALS target must be nonzero")
    ranks = clip_ranks(shape, config.ranks)
    tail_cores = _draw_tail_cores(shape, ranks, rng)
    result, objectives = _sweep_left_to_right(f, tail_cores)
    for _ in range(config.sweeps - 1):
        f = np.ascontiguousarray(np.transpose(f, tuple(range(f.ndim - 1, -1, -1))))
        tail = _reverse_cores(result.cores)[1:]
        result, more = _sweep_left_to_right(f, [None] + tail)
        objectives.extend(more)
    if config.sweeps % 2 == 0:
        result = TTTensor(_reverse_cores(result.cores), ortho="right")
    return result, objectives
