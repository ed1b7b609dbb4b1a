"""Counter-based random streams.

Every stream is identified by a 64-bit key derived from a user seed.
Draw i of a stream is a pure function of (key, i): the i-th normal is
produced by the Box-Muller transform from two 64-bit mixer outputs at
counters 2i and 2i+1.  Substreams are derived by index, so independent
objects (cores, samples, sketch steps) get decorrelated streams without
any shared mutable state.  Repeated calls with the same stream and
arguments return identical values by construction, which is what makes
decompositions and experiments reproducible.
"""

import numpy as np

from . import _kernels


class RngStream:
    """A reproducible stream of draws identified by (seed, substream path)."""

    __slots__ = ("seed", "key")

    def __init__(self, seed, _key=None):
        self.seed = int(seed)
        self.key = _kernels.key_from_seed(seed) if _key is None else int(_key)

    def substream(self, *indices):
        """Derive an independent stream; indices must be nonnegative ints."""
        key = self.key
        for idx in indices:
            key = _kernels.derive_key(key, int(idx))
        return RngStream(self.seed, _key=key)

    def normals(self, shape):
        """Standard normal draws at counters 0..size-1, reshaped C-order."""
        shape = (shape,) if np.isscalar(shape) else tuple(int(n) for n in shape)
        size = 1
        for n in shape:
            size *= n
        out = _kernels.standard_normals(self.key, size)
        return out.reshape(shape)

    def normals_at(self, counters):
        """Normal draws at explicit counters (any uint64-convertible array)."""
        counters = np.asarray(counters, dtype=np.uint64)
        flat = _kernels.normals_at(np.uint64(self.key), counters.ravel())
        return flat.reshape(counters.shape)

    def index_draws(self, count, bounds):
        """Uniform multi-indices: an (count, len(bounds)) int64 array.

        Column k is uniform on [0, bounds[k]).  Entry (i, k) consumes
        counter i*len(bounds)+k, so the draw order is row-major by entry.
        """
        bounds = [int(b) for b in bounds]
        d = len(bounds)
        out = np.empty((count, d), dtype=np.int64)
        base = np.arange(count, dtype=np.uint64) * np.uint64(d)
        for k, b in enumerate(bounds):
            if b <= 0:
                raise ValueError("index bounds must be positive")
            out[:, k] = _kernels.indices_at(np.uint64(self.key), base + np.uint64(k), b)
        return out

    def __repr__(self):
        return f"RngStream(seed={self.seed}, key=0x{self.key:016x})"
