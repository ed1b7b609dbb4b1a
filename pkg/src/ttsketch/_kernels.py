"""Hot numeric kernels with a numba fast path and a vectorized numpy fallback.

The backend is chosen once at import time: numba is used when it is
importable and the environment variable TTSKETCH_NUMBA is not set to
"0"/"false"/"off".  Both backends implement the same integer mixing, so
bit streams agree exactly; float outputs may differ by rounding of the
transcendental functions, which is why nothing in the package compares
random values across backends.
"""

import math
import os

import numpy as np

_MASK = (1 << 64) - 1
_PHI = 0x9E3779B97F4A7C15        # counter increment (splitmix64 gamma)
_GAMMA2 = 0xD1B54A32D192ED03     # substream increment, distinct from _PHI
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB

_U_PHI = np.uint64(_PHI)
_U_GAMMA2 = np.uint64(_GAMMA2)
_U_M1 = np.uint64(_M1)
_U_M2 = np.uint64(_M2)
_U30 = np.uint64(30)
_U27 = np.uint64(27)
_U31 = np.uint64(31)
_U11 = np.uint64(11)
_U53 = np.uint64(53)
_U1 = np.uint64(1)
_TWO53_INV = float(2.0 ** -53)
_TWO_PI = 2.0 * math.pi


def _env_wants_numba():
    flag = os.environ.get("TTSKETCH_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "off", "no")


try:
    import numba
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False

NUMBA_ENABLED = HAS_NUMBA and _env_wants_numba()
BACKEND = "numba" if NUMBA_ENABLED else "numpy"


# ---------------------------------------------------------------------------
# Integer mixing (python ints, used for key derivation; never hot)

def finalize_u64(z):
    """splitmix64 finalizer on a python int, reduced mod 2**64."""
    z &= _MASK
    z ^= z >> 30
    z = (z * _M1) & _MASK
    z ^= z >> 27
    z = (z * _M2) & _MASK
    z ^= z >> 31
    return z


def key_from_seed(seed):
    return finalize_u64((int(seed) & _MASK) + _PHI)


def derive_key(key, index):
    """Key of substream `index` (>= 0) of the stream with key `key`."""
    if index < 0:
        raise ValueError("substream index must be nonnegative")
    return finalize_u64((key + (index + 1) * _GAMMA2) & _MASK)


# ---------------------------------------------------------------------------
# numpy backend

def _values_np(key, counters):
    """Raw 64-bit outputs at the given counters (uint64 array in, uint64 out)."""
    z = (np.uint64(key) + (counters + _U1) * _U_PHI)
    z ^= z >> _U30
    z *= _U_M1
    z ^= z >> _U27
    z *= _U_M2
    z ^= z >> _U31
    return z


def _normals_np(key, counters):
    c2 = counters.astype(np.uint64) * np.uint64(2)
    v1 = _values_np(key, c2)
    v2 = _values_np(key, c2 + _U1)
    u1 = ((v1 >> _U11) + _U1).astype(np.float64) * _TWO53_INV   # (0, 1]
    u2 = (v2 >> _U11).astype(np.float64) * _TWO53_INV           # [0, 1)
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(_TWO_PI * u2)


def _indices_np(key, counters, bound):
    v = _values_np(key, counters.astype(np.uint64))
    return (((v >> _U11) * np.uint64(bound)) >> _U53).astype(np.int64)


def _gammas_np(heads, s_prev, p_mod, key):
    ks = np.arange(s_prev, dtype=np.uint64) * np.uint64(p_mod)
    counters = heads[:, None] + ks[None, :]
    flat = _normals_np(key, counters.ravel())
    return flat.reshape(heads.shape[0], s_prev)


def _sparse_sketch_np(mu, head_idx, vals, gam, n_j):
    m_count, t = vals.shape
    s_prev = gam.shape[1]
    a = np.zeros((n_j, s_prev, t))
    contrib = gam[head_idx][:, :, None] * vals[:, None, :]
    np.add.at(a, mu, contrib)
    return a


def _sparse_update_np(mu, head_idx, vals, w_perm, n_heads):
    out = np.zeros((n_heads, w_perm.shape[1]))
    wv = np.einsum("ikq,iq->ik", w_perm[mu], vals)
    np.add.at(out, head_idx, wv)
    return out


# ---------------------------------------------------------------------------
# numba backend

if NUMBA_ENABLED:

    @njit(cache=True)
    def _value_nb(key, counter):
        z = key + (counter + _U1) * _U_PHI
        z ^= z >> _U30
        z *= _U_M1
        z ^= z >> _U27
        z *= _U_M2
        z ^= z >> _U31
        return z

    @njit(cache=True)
    def _normal_scalar_nb(key, counter):
        c2 = counter * np.uint64(2)
        v1 = _value_nb(key, c2)
        v2 = _value_nb(key, c2 + _U1)
        u1 = np.float64((v1 >> _U11) + _U1) * _TWO53_INV
        u2 = np.float64(v2 >> _U11) * _TWO53_INV
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(_TWO_PI * u2)

    @njit(cache=True)
    def _normals_nb(key, counters):
        n = counters.shape[0]
        out = np.empty(n)
        for i in range(n):
            out[i] = _normal_scalar_nb(key, counters[i])
        return out

    @njit(cache=True)
    def _indices_nb(key, counters, bound):
        n = counters.shape[0]
        out = np.empty(n, dtype=np.int64)
        b = np.uint64(bound)
        for i in range(n):
            v = _value_nb(key, counters[i])
            out[i] = np.int64(((v >> _U11) * b) >> _U53)
        return out

    @njit(cache=True)
    def _gammas_nb(heads, s_prev, p_mod, key):
        u_count = heads.shape[0]
        p = np.uint64(p_mod)
        gam = np.empty((u_count, s_prev))
        for uu in range(u_count):
            base = heads[uu]
            for k in range(s_prev):
                gam[uu, k] = _normal_scalar_nb(key, base + np.uint64(k) * p)
        return gam

    @njit(cache=True)
    def _sparse_sketch_nb(mu, head_idx, vals, gam, n_j):
        m_count, t = vals.shape
        s_prev = gam.shape[1]
        a = np.zeros((n_j, s_prev, t))
        for i in range(m_count):
            u = head_idx[i]
            m = mu[i]
            for k in range(s_prev):
                g = gam[u, k]
                for q in range(t):
                    a[m, k, q] += g * vals[i, q]
        return a

    @njit(cache=True)
    def _sparse_update_nb(mu, head_idx, vals, w_perm, n_heads):
        m_count, t = vals.shape
        s_prev = w_perm.shape[1]
        out = np.zeros((n_heads, s_prev))
        for i in range(m_count):
            m = mu[i]
            u = head_idx[i]
            for k in range(s_prev):
                acc = 0.0
                for q in range(t):
                    acc += w_perm[m, k, q] * vals[i, q]
                out[u, k] += acc
        return out

    normals_at = _normals_nb
    indices_at = _indices_nb
    gammas_at = _gammas_nb
    sparse_sketch = _sparse_sketch_nb
    sparse_update = _sparse_update_nb
else:
    normals_at = _normals_np
    indices_at = _indices_np
    gammas_at = _gammas_np
    sparse_sketch = _sparse_sketch_np
    sparse_update = _sparse_update_np


def standard_normals(key, count):
    """Normals at counters 0..count-1 for the stream with the given key."""
    counters = np.arange(count, dtype=np.uint64)
    return normals_at(np.uint64(key), counters)
