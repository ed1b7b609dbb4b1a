"""Factorization wrappers: sign conventions and oracle agreement."""

import numpy as np
import pytest

import oracles as o
from ttsketch import RngStream
from ttsketch.linalg import numerical_rank, qr, rq_row_orthonormal, svd, truncated_svd


def test_svd_identity():
    u, s, vt = svd(np.eye(3))
    assert np.allclose(s, 1.0)
    assert np.allclose(u @ np.diag(s) @ vt, np.eye(3), atol=1e-14)


def test_svd_diagonal_signed_permutations():
    u, s, vt = svd(np.diag([3.0, 2.0, 1.0]))
    assert np.allclose(s, [3.0, 2.0, 1.0])
    # factors are signed permutations; the sign convention pins them to I
    assert np.allclose(np.abs(u), np.eye(3), atol=1e-14)
    assert np.allclose(np.abs(vt), np.eye(3), atol=1e-14)
    assert np.all(np.diag(u) > 0)


def test_svd_sign_convention_flips_consistently():
    u, s, vt = svd(-np.eye(2))
    assert np.allclose(u @ np.diag(s) @ vt, -np.eye(2), atol=1e-14)
    assert np.all(np.diag(u) > 0)  # signs pushed into vt


def test_svd_against_gram_eigenvalue_oracle():
    a = RngStream(21).normals((5, 3))
    u, s, vt = svd(a)
    assert np.linalg.norm(u @ np.diag(s) @ vt - a) < 1e-12
    want = o.gram_singular_values(a)
    assert np.max(np.abs(s - want)) < 1e-10


def test_svd_deterministic():
    a = RngStream(22).normals((6, 4))
    u1, s1, vt1 = svd(a)
    u2, s2, vt2 = svd(a.copy())
    assert np.array_equal(u1, u2) and np.array_equal(vt1, vt2)


def test_truncated_svd_trivials():
    a = np.outer([1.0, 2.0], [3.0, 4.0])
    u, s, vt, cut = truncated_svd(a, 1)
    assert np.linalg.norm(u @ np.diag(s) @ vt - a) < 1e-13
    assert cut < 1e-26
    u, s, vt, cut = truncated_svd(np.diag([3.0, 2.0, 1.0]), 2)
    assert abs(np.linalg.norm(np.diag([3.0, 2.0, 1.0]) - u @ np.diag(s) @ vt) - 1.0) < 1e-13
    assert abs(cut - 1.0) < 1e-13


def test_truncated_svd_tail_oracle():
    a = RngStream(23).normals((6, 4))
    u, s, vt, cut = truncated_svd(a, 2)
    full_s = np.linalg.svd(a, compute_uv=False)
    want = np.sqrt(np.sum(full_s[2:] ** 2))
    assert abs(np.linalg.norm(a - u @ np.diag(s) @ vt) - want) < 1e-12
    assert abs(cut - want**2) < 1e-12
    with pytest.raises(ValueError):
        truncated_svd(a, 0)


def test_qr_trivials():
    q, r = qr(np.eye(3)[:, ::-1])
    assert np.allclose(np.abs(q), np.eye(3)[:, ::-1], atol=1e-14)
    assert np.allclose(np.abs(np.diag(r)), 1.0)
    v = np.array([[3.0], [4.0]])
    q, r = qr(v)
    assert np.allclose(q, v / 5.0)
    assert np.allclose(r, [[5.0]])


def test_qr_reconstruction():
    a = RngStream(24).normals((8, 3))
    q, r = qr(a)
    assert np.linalg.norm(q.T @ q - np.eye(3)) < 1e-12
    assert np.linalg.norm(q @ r - a) < 1e-12
    assert np.all(np.diag(r) >= 0)


def test_rq_trivials():
    a = np.zeros((1, 5))
    a[0, -1] = 1.0
    r, q = rq_row_orthonormal(a)
    assert np.allclose(q, a)
    assert np.allclose(r, [[1.0]])
    rows = qr(RngStream(25).normals((6, 3)))[0].T  # orthonormal rows
    r, q = rq_row_orthonormal(rows)
    assert np.linalg.norm(r @ r.T - np.eye(3)) < 1e-12


def test_rq_reconstruction():
    a = RngStream(26).normals((3, 10))
    r, q = rq_row_orthonormal(a)
    assert np.linalg.norm(r @ q - a) < 1e-12
    assert np.linalg.norm(q @ q.T - np.eye(3)) < 1e-12


def test_numerical_rank():
    assert numerical_rank(np.array([3.0, 2.0, 1.0]), 1e-12) == 3
    assert numerical_rank(np.array([1.0, 1e-16]), 1e-12) == 1
    assert numerical_rank(np.array([]), 1e-12) == 0
    assert numerical_rank(np.array([0.0, 0.0]), 1e-12) == 0
    rng = RngStream(27)
    a = (np.outer(rng.substream(0).normals(5), rng.substream(1).normals(5))
         + np.outer(rng.substream(2).normals(5), rng.substream(3).normals(5)))
    s = np.linalg.svd(a, compute_uv=False)
    assert numerical_rank(s, 1e-10) == 2
