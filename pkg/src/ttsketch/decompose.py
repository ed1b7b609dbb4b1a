"""Train decompositions: deterministic SVD sweeps and the randomized sketch.

The deterministic path repeatedly unfolds the remainder against the
leading mode group, takes an SVD, keeps the left factor as a core and
carries the rest forward; ranks come either from a relative singular
value threshold (exact mode) or from prescribed targets (truncated
mode).  Its error satisfies the usual sqrt(d-1) quasi-optimality factor
against the unfolding tails.

The randomized path never forms the leading unfoldings at full size.
Walking from the last mode down to the second, it sketches the current
remainder b with a Gaussian tensor g over all leading modes, makes the
sketch's rows orthonormal (an RQ factorization), keeps those rows as
the core and projects b onto them; the first core finally holds the
projected weights, so evaluating the train applies an orthogonal
projector to the input.  Every Gaussian entry is a pure function of
(step, position) through the counter-based stream, which is what lets
the sparse fast path materialize only the entries of g that meet stored
data: identical seeds make both paths consume identical random values.

For sparse input with N stored entries the sketch step touches at most
s*N Gaussian entries and the projection keeps at most N prefixes, so
the total cost grows linearly in the tensor order at fixed N and s.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .linalg import numerical_rank, rq_row_orthonormal, svd
from .tensor import SparseTensor, element_count, norm
from .tt import TTTensor, clip_ranks, tt_evaluate, zero_tt

_E = math.e


@dataclass
class OversamplingSpec:
    """Target rank plus oversampling; the sketch uses s = rank + extra rows."""

    rank: int
    oversampling: int = 0

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be positive")
        if self.oversampling < 0:
            raise ValueError("oversampling must be nonnegative")

    @property
    def sketch_size(self):
        return self.rank + self.oversampling


@dataclass
class DecompositionReport:
    """What a decomposition did: achieved ranks, cut energy, wall time."""

    ranks: tuple
    discarded_energy: tuple = ()
    wall_time_s: float = 0.0
    degenerate: bool = False
    range_bound_factor: float = None
    range_bound_probability: float = None

    def __post_init__(self):
        if any(e < 0 for e in self.discarded_energy):
            raise ValueError("discarded energies must be nonnegative")


def compute_eta(rank, oversampling, t=1.0, u=1.0):
    """Quasi-optimality factor of one sketched projection step.

    eta = 1 + t*sqrt(12 r / p) + u*t*e*sqrt(r+p)/(p+1), valid for
    oversampling p >= 4 and t, u >= 1.  A step exceeds eta times the
    best error with probability at most 5 t^-p + 2 exp(-u^2/2).
    """
    r = int(rank)
    p = int(oversampling)
    if r < 1:
        raise ValueError("rank must be positive")
    if p < 4:
        raise ValueError("the bound requires oversampling >= 4")
    if t < 1 or u < 1:
        raise ValueError("t and u must be at least 1")
    return 1.0 + t * math.sqrt(12.0 * r / p) + u * t * _E * math.sqrt(r + p) / (p + 1)


def success_probability(oversampling, t=1.0, u=1.0, steps=1):
    """Lower bound on the chance that all `steps` projections stay within eta."""
    p = int(oversampling)
    single = 1.0 - 5.0 * t ** (-p) - 2.0 * math.exp(-u * u / 2.0)
    return max(0.0, single) ** int(steps)


def spectral_bound_factor(rank, oversampling, min_dim):
    """Coefficient of the top discarded singular value in the spectral bound."""
    return 1.0 + 11.0 * math.sqrt((rank + oversampling) * min_dim)


def spectral_bound_probability(oversampling):
    """Probability floor 1 - 6 p^-p attached to the spectral bound."""
    p = int(oversampling)
    if p < 1:
        raise ValueError("the spectral bound needs oversampling >= 1")
    return 1.0 - 6.0 * p ** (-float(p))


def randomized_range(a, spec, rng):
    """Orthonormal columns approximately spanning the range of a.

    `a` only needs a shape and matrix multiplication, so implicit
    operators qualify.  Draws an (n2, s) Gaussian test matrix from the
    given stream, multiplies, and orthonormalizes the product.
    """
    _, n = a.shape
    g = rng.normals((spec.sketch_size, n)).T
    b = a @ g
    q, _ = np.linalg.qr(np.asarray(b, dtype=np.float64))
    return q


def relative_error(x, t):
    """||x - evaluation of t|| / ||x|| for a dense reference tensor."""
    x = np.asarray(x, dtype=np.float64)
    nx = norm(x)
    if nx == 0.0:
        raise ValueError("relative error is undefined against a zero tensor")
    y = tt_evaluate(t)
    if y.shape != x.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {y.shape}")
    return float(np.linalg.norm((x - y).ravel()) / nx)


# ---------------------------------------------------------------------------
# deterministic sweep

def _svd_sweep(x, pick_rank):
    x = np.asarray(x, dtype=np.float64)
    shape = x.shape
    d = len(shape)
    if d < 2:
        raise ValueError("decomposition needs order >= 2")
    t0 = time.perf_counter()
    if not x.any():
        report = DecompositionReport(
            ranks=(1,) * (d - 1),
            wall_time_s=time.perf_counter() - t0,
            degenerate=True,
        )
        return zero_tt(shape), report
    cores = []
    discarded = []
    cur = x.reshape(shape[0], -1)
    r_prev = 1
    for i in range(d - 1):
        u, s, vt = svd(cur)
        k = max(1, min(pick_rank(s, i), s.shape[0]))
        discarded.append(float(np.sum(s[k:] ** 2)))
        if i == 0:
            cores.append(u[:, :k])
        else:
            cores.append(u[:, :k].reshape(r_prev, shape[i], k))
        rest = s[:k, None] * vt[:k]
        if i < d - 2:
            cur = rest.reshape(k * shape[i + 1], -1)
        else:
            cur = rest
        r_prev = k
    cores.append(cur)
    result = TTTensor(cores, ortho="left")
    report = DecompositionReport(
        ranks=result.ranks,
        discarded_energy=tuple(discarded),
        wall_time_s=time.perf_counter() - t0,
    )
    return result, report


def tt_svd_exact(x, rel_tol=1e-12):
    """Left-orthogonal train reproducing x up to the given relative cut.

    Each step keeps the numerical rank of the unfolding at rel_tol, so
    with the default tolerance the result matches x to working precision
    and the achieved ranks are the numerical unfolding ranks.
    """
    if rel_tol < 0:
        raise ValueError("relative tolerance must be nonnegative")
    return _svd_sweep(x, lambda s, _i: numerical_rank(s, rel_tol))


def tt_svd_truncated(x, target_ranks):
    """Train truncated to the target ranks by the deterministic sweep."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim < 2:
        raise ValueError("decomposition needs order >= 2")
    target = clip_ranks(x.shape, target_ranks)
    return _svd_sweep(x, lambda s, i: target[i])


# ---------------------------------------------------------------------------
# randomized sketch

def _randomized_dense(x, sketch, rng, t0):
    shape = x.shape
    d = len(shape)
    cores = [None] * d
    lead = element_count(shape[:-1])
    b = x.reshape(lead, shape[-1])
    t_dim = 1
    for j in range(d, 1, -1):
        n_j = shape[j - 1]
        s_prev = sketch[j - 2]
        key = rng.substream(j).key
        g = _kernels.standard_normals(key, s_prev * lead).reshape(s_prev, lead)
        a = g @ b
        _, q = rq_row_orthonormal(a)
        # q keeps min(s_prev, n_j * t_dim) rows: a sketch wider than the
        # unfolding clamps to the feasible width near the right boundary.
        t_next = q.shape[0]
        cores[j - 1] = q if j == d else q.reshape(t_next, n_j, t_dim)
        b = b @ q.T
        if j > 2:
            lead //= shape[j - 2]
            b = b.reshape(lead, shape[j - 2] * t_next)
        t_dim = t_next
    cores[0] = b
    result = TTTensor(cores, ortho="right")
    report = DecompositionReport(
        ranks=result.ranks, wall_time_s=time.perf_counter() - t0
    )
    return result, report


def _randomized_sparse(xs, sketch, rng, t0):
    shape = xs.shape
    d = len(shape)
    total = element_count(shape)
    big = total >= 2 ** 62
    if big:
        codes = np.empty(xs.nnz, dtype=object)
        for i in range(xs.nnz):
            pos = 0
            for k in range(d):
                pos = pos * shape[k] + int(xs.idx[i, k])
            codes[i] = pos
    else:
        strides = np.empty(d, dtype=np.int64)
        acc = 1
        for k in range(d - 1, -1, -1):
            strides[k] = acc
            acc *= shape[k]
        codes = xs.idx @ strides
    vals = np.ascontiguousarray(xs.values[:, None])
    cores = [None] * d
    space = total
    t_dim = 1
    # One row per stored entry throughout: entries whose leading positions
    # coincide are kept split (their contributions add linearly at every
    # stage), so the work per step is proportional to the entry count and
    # the whole pass scales linearly in the order.
    rows = np.arange(xs.nnz, dtype=np.int64)
    for j in range(d, 1, -1):
        n_j = shape[j - 1]
        s_prev = sketch[j - 2]
        space //= n_j
        mu = (codes % n_j).astype(np.int64)
        heads = codes // n_j
        key = rng.substream(j).key
        if big:
            heads_u64 = np.array(
                [h % (2 ** 64) for h in heads], dtype=np.uint64
            )
            p_mod = space % (2 ** 64)
        else:
            heads_u64 = heads.astype(np.uint64)
            p_mod = space
        gam = _kernels.gammas_at(
            heads_u64, s_prev, np.uint64(p_mod), np.uint64(key)
        )
        a_by_mode = _kernels.sparse_sketch(mu, rows, vals, gam, n_j)
        a = np.ascontiguousarray(a_by_mode.transpose(1, 0, 2)).reshape(
            s_prev, n_j * t_dim
        )
        _, q = rq_row_orthonormal(a)
        t_next = q.shape[0]  # clamps to n_j * t_dim near the right boundary
        cores[j - 1] = q if j == d else q.reshape(t_next, n_j, t_dim)
        w_by_mode = np.ascontiguousarray(
            q.reshape(t_next, n_j, t_dim).transpose(1, 0, 2)
        )
        vals = _kernels.sparse_update(mu, rows, vals, w_by_mode, xs.nnz)
        codes = heads
        t_dim = t_next
    w1 = np.zeros((shape[0], t_dim))
    np.add.at(w1, codes.astype(np.int64), vals)
    cores[0] = w1
    result = TTTensor(cores, ortho="right")
    report = DecompositionReport(
        ranks=result.ranks, wall_time_s=time.perf_counter() - t0
    )
    return result, report


def _attach_range_bound(report, shape, sketch, oversampling):
    # Informational only: the spectral-form tail coefficient of the worst
    # step and the per-step probability floor that goes with it.
    p = int(oversampling)
    if p < 1:
        return report
    d = len(shape)
    factor = 0.0
    rows = element_count(shape)
    for j in range(d, 1, -1):
        rows //= shape[j - 1]
        t_dim = sketch[j - 1] if j < d else 1
        cols = shape[j - 1] * t_dim
        r_eff = max(1, sketch[j - 2] - p)
        factor = max(factor, spectral_bound_factor(r_eff, p, min(rows, cols)))
    report.range_bound_factor = factor
    report.range_bound_probability = spectral_bound_probability(p)
    return report


def randomized_tt_svd(x, sketch_ranks, rng, oversampling=None):
    """Sketch-based train decomposition of a dense or sparse tensor.

    `sketch_ranks` (an int or one value per edge) fixes the number of
    Gaussian sketch rows per step and thereby the ranks of the result.
    An int is clipped to the dimension products first; an explicit
    per-edge sequence is used exactly as given (widths beyond the
    feasible rank only cost memory, never correctness).  The output is
    right-orthogonal in cores 2..d and evaluating it applies an
    orthogonal projector to x, so the error never exceeds ||x||.  When
    the train rank of x is elementwise at most the sketch ranks, the
    reconstruction is exact with probability one.

    Dense and sparse inputs consume the per-step Gaussian streams
    identically, so both representations of the same tensor under the
    same stream produce the same train up to floating point roundoff
    as long as the widths are feasible (within the clipped ranks).
    Wider sketches pad cores with arbitrary orthonormal directions that
    may differ between the paths; the represented tensor still agrees.

    Passing `oversampling` (the p inside the sketch sizes) adds the
    informational spectral-tail coefficient and its probability floor
    to the report; nothing else changes.
    """
    t0 = time.perf_counter()
    if isinstance(x, SparseTensor):
        shape = x.shape
    else:
        x = np.asarray(x, dtype=np.float64)
        shape = x.shape
    if len(shape) < 2:
        raise ValueError("decomposition needs order >= 2")
    if np.isscalar(sketch_ranks):
        sketch = clip_ranks(shape, sketch_ranks)
    else:
        sketch = tuple(int(r) for r in sketch_ranks)
        if len(sketch) != len(shape) - 1:
            raise ValueError(
                f"expected {len(shape) - 1} sketch ranks, got {len(sketch)}"
            )
        if any(r < 1 for r in sketch):
            raise ValueError("sketch ranks must be positive")
    if isinstance(x, SparseTensor):
        if x.nnz == 0:
            report = DecompositionReport(
                ranks=(1,) * (len(shape) - 1),
                wall_time_s=time.perf_counter() - t0,
                degenerate=True,
            )
            return zero_tt(shape), report
        result, report = _randomized_sparse(x, sketch, rng, t0)
    elif not x.any():
        report = DecompositionReport(
            ranks=(1,) * (len(shape) - 1),
            wall_time_s=time.perf_counter() - t0,
            degenerate=True,
        )
        return zero_tt(shape), report
    else:
        result, report = _randomized_dense(x, sketch, rng, t0)
    if oversampling is not None:
        _attach_range_bound(report, shape, sketch, oversampling)
    return result, report
