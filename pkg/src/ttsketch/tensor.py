"""Dense and sparse tensors plus the mode-wise primitives built on them.

Dense tensors are plain numpy float64 arrays indexed 0-based.  The
canonical linearization of a mode group is row-major (last index varies
fastest), which matches numpy's C order, so matricization is a transpose
followed by a reshape and is exactly invertible.

Sparse tensors store coordinates explicitly and may describe shapes whose
dense element count would not be addressable; every densifying operation
guards against that.
"""

import numpy as np

# Largest dense element count the package will materialize.
MAX_DENSE_ELEMENTS = 2 ** 40


def element_count(shape):
    total = 1
    for n in shape:
        total *= int(n)
    return total


def check_shape(shape):
    shape = tuple(int(n) for n in shape)
    if len(shape) < 1:
        raise ValueError("tensor order must be at least 1")
    if any(n < 1 for n in shape):
        raise ValueError(f"mode sizes must be positive, got {shape}")
    return shape


def check_dense_size(shape):
    total = element_count(shape)
    if total > MAX_DENSE_ELEMENTS:
        raise ValueError(
            f"dense tensor with {total} elements exceeds the addressable "
            f"limit of 2**40; use the sparse representation"
        )
    return total


def _check_modes(modes, d, what="mode set"):
    modes = tuple(int(m) for m in modes)
    if len(modes) == 0:
        raise ValueError(f"{what} must be nonempty")
    if len(set(modes)) != len(modes):
        raise ValueError(f"{what} has repeated modes: {modes}")
    if any(m < 0 or m >= d for m in modes):
        raise ValueError(f"{what} {modes} out of range for order {d}")
    return modes


def matricize(x, row_modes):
    """Unfold a dense tensor into a matrix.

    `row_modes` (0-based, strictly increasing) index the modes mapped to
    rows; the remaining modes, in their original order, map to columns.
    Both groups are linearized row-major.
    """
    x = np.asarray(x)
    d = x.ndim
    row_modes = _check_modes(row_modes, d, "row mode set")
    if any(a >= b for a, b in zip(row_modes, row_modes[1:])):
        raise ValueError(f"row mode set must be strictly increasing, got {row_modes}")
    col_modes = tuple(m for m in range(d) if m not in row_modes)
    rows = element_count(x.shape[m] for m in row_modes)
    cols = element_count(x.shape[m] for m in col_modes)
    return x.transpose(row_modes + col_modes).reshape(rows, cols)


def dematricize(m, shape, row_modes):
    """Inverse of matricize for the given original shape and row modes."""
    m = np.asarray(m)
    shape = check_shape(shape)
    d = len(shape)
    row_modes = _check_modes(row_modes, d, "row mode set")
    if any(a >= b for a, b in zip(row_modes, row_modes[1:])):
        raise ValueError(f"row mode set must be strictly increasing, got {row_modes}")
    col_modes = tuple(k for k in range(d) if k not in row_modes)
    rows = element_count(shape[k] for k in row_modes)
    cols = element_count(shape[k] for k in col_modes)
    if m.shape != (rows, cols):
        raise ValueError(
            f"matrix shape {m.shape} does not match target shape {shape} "
            f"split over row modes {row_modes}"
        )
    perm = row_modes + col_modes
    inv = np.argsort(perm)
    grouped = m.reshape(tuple(shape[k] for k in perm))
    return grouped.transpose(inv)


def contract(x, x_modes, y, y_modes):
    """Contract dense tensors over paired modes.

    Pair k joins mode x_modes[k] of x with mode y_modes[k] of y; the
    result carries the remaining modes of x followed by those of y, each
    group in its original order.
    """
    x = np.asarray(x)
    y = np.asarray(y)
    x_modes = _check_modes(x_modes, x.ndim, "x mode list")
    y_modes = _check_modes(y_modes, y.ndim, "y mode list")
    if len(x_modes) != len(y_modes):
        raise ValueError("paired mode lists must have equal length")
    for a, b in zip(x_modes, y_modes):
        if x.shape[a] != y.shape[b]:
            raise ValueError(
                f"cannot contract mode {a} of shape {x.shape} with mode "
                f"{b} of shape {y.shape}: sizes differ"
            )
    return np.tensordot(x, y, axes=(x_modes, y_modes))


def inner(x, y):
    """Frobenius inner product of two dense tensors of equal shape."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise ValueError(f"shapes {x.shape} and {y.shape} differ")
    return float(np.dot(x.ravel(), y.ravel()))


def norm(x):
    if isinstance(x, SparseTensor):
        return float(np.linalg.norm(x.values))
    return float(np.linalg.norm(np.asarray(x).ravel()))


def linear_index(idx, shape):
    """Row-major linear position of a multi-index (python int, never wraps)."""
    pos = 0
    for i, n in zip(idx, shape):
        pos = pos * int(n) + int(i)
    return pos


class SparseTensor:
    """Coordinate-format tensor: sorted unique multi-indices plus values.

    Entries are kept in canonical (row-major linear) order, duplicates are
    rejected and explicit zeros dropped, so equal tensors have equal
    storage.  Shapes may exceed any dense limit; only the entries exist.
    """

    __slots__ = ("shape", "idx", "values")

    def __init__(self, shape, idx, values):
        self.shape = check_shape(shape)
        d = len(self.shape)
        idx = np.asarray(idx, dtype=np.int64)
        values = np.asarray(values, dtype=np.float64)
        if idx.ndim != 2 or idx.shape[1] != d:
            raise ValueError(f"index array must be (nnz, {d}), got {idx.shape}")
        if values.shape != (idx.shape[0],):
            raise ValueError("values length does not match index rows")
        if not np.all(np.isfinite(values)):
            raise ValueError("sparse values must be finite")
        for k, n in enumerate(self.shape):
            col = idx[:, k]
            if col.size and (col.min() < 0 or col.max() >= n):
                raise ValueError(f"index out of range in mode {k} for size {n}")
        keep = values != 0.0
        idx = idx[keep]
        values = values[keep]
        if idx.shape[0] > 1:
            order = np.lexsort(tuple(idx[:, k] for k in range(d - 1, -1, -1)))
            idx = idx[order]
            values = values[order]
            dup = np.all(idx[1:] == idx[:-1], axis=1)
            if np.any(dup):
                raise ValueError("duplicate multi-indices in sparse tensor")
        self.idx = idx
        self.values = values

    @property
    def nnz(self):
        return self.idx.shape[0]

    @property
    def ndim(self):
        return len(self.shape)

    def to_dense(self):
        check_dense_size(self.shape)
        out = np.zeros(self.shape)
        if self.nnz:
            out[tuple(self.idx.T)] = self.values
        return out


def sparse_to_dense(x):
    return x.to_dense()
